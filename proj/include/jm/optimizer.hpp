#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "jm/povm.hpp"
#include "jm/wmeasure.hpp"

namespace jm {

// unconstrained coordinates for differential sets: the leading
// (d-1) x (d-1) block of bloch coefficient vectors is free and the
// last row and column follow from the marginal constraints, so every
// parameter vector maps to a feasible set and back
struct ThetaParameterization {
  int d = 2;   // outcomes per measurement
  int dim = 2; // hilbert space dimension
  int free_entries() const { return (d - 1) * (d - 1); }
  int parameter_count() const { return free_entries() * dim * dim; }
  DifferentialSet to_theta(const Eigen::VectorXd& params) const;
  Eigen::VectorXd from_theta(const DifferentialSet& theta) const;
};

struct OptimizerConfig {
  std::uint64_t seed = 0;
  int restarts = 8;
  long max_evaluations = 20000; // per start
  double simplex_tolerance = 1e-9;
  double jm_tolerance = 1e-7; // negativity at or below this counts as compatible
};

struct OptimizationResult {
  double n_min = 0.0;
  DifferentialSet theta_star;
  long evaluations = 0;
  bool converged = false;
  int restarts_used = 0;
};

// global minimization of the negativity over feasible differential
// sets; the objective is convex so restarts guard against simplex
// stalls rather than local minima
OptimizationResult minimize_negativity(const Povm& a, const Povm& b,
                                       const OptimizerConfig& config = {});

struct JointSearchResult {
  bool success = false;
  Povm joint;
  double marginal_residual = 0.0;
  double negativity_floor = 0.0; // residual infeasibility when the search fails
  long evaluations = 0;
};

// direct search for a joint measurement with the given marginals,
// independent of the differential-set route: penalty descent on
// squared hermitian factors followed by alternating projections
// between the marginal subspace and the positive cone
JointSearchResult joint_povm_search(const Povm& a, const Povm& b,
                                    const OptimizerConfig& config = {});

using PairFamily = std::function<std::pair<Povm, Povm>(double, double)>;

struct LandscapeGrid {
  std::vector<double> axis1, axis2;
  Eigen::MatrixXd values; // rows follow axis1, columns axis2
};

// minimized negativity over a parameterized family of pairs; cells are
// seeded individually so results do not depend on the thread count
LandscapeGrid negativity_landscape(const PairFamily& family, const std::vector<double>& axis1,
                                   const std::vector<double>& axis2,
                                   const OptimizerConfig& config = {}, int threads = 0);

} // namespace jm
