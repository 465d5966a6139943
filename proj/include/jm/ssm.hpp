#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "jm/criteria.hpp"
#include "jm/povm.hpp"
#include "jm/wmeasure.hpp"

namespace jm {

struct KrausSet {
  int dim = 0;
  std::vector<ComplexMatrix> operators;
};

// largest absolute entry of sum K^dag K minus the identity
double kraus_completeness_residual(const KrausSet& k);
void require_valid_kraus(const KrausSet& k);

// square-root instrument of a measurement
KrausSet luders_kraus(const Povm& p);

// conjunction obtained by measuring through the instrument first and
// the second measurement afterwards; entry (i, j) sits at i * d + j
Povm sequential_conjunction(const KrausSet& k, const Povm& b);

enum class SequentialOrder { FirstThenSecond, SecondThenFirst };

// the measure built from the sequential conjunction of the pair
WMeasure ssm_wmeasure(const Povm& a, const Povm& b,
                      SequentialOrder order = SequentialOrder::FirstThenSecond);

// compatibility test through the sequential measure: positivity always
// certifies a joint measurement, and for unbiased two-outcome qubit
// pairs the test is exact, otherwise sufficient_only is set
JmVerdict ssm_jm_test(const Povm& a, const Povm& b,
                      SequentialOrder order = SequentialOrder::FirstThenSecond);

struct Quasiprobability {
  int d = 0;
  Eigen::MatrixXd table; // rows follow the first measurement
  enum class Source { State, Statistics } source = Source::State;
};

// joint quasiprobability of a state under the measure
Quasiprobability quasiprob_from_state(const WMeasure& w, const DensityMatrix& rho);

// joint quasiprobability reconstructed from measured distributions
// alone; rows and columns reproduce the marginals by construction
Quasiprobability quasiprob_from_statistics(const Eigen::VectorXd& pa, const Eigen::VectorXd& pb,
                                           const Eigen::MatrixXd& pc);

// smallest quasiprobability any state can produce, reached on the
// worst eigenvector of the measure
double worst_state_quasiprob(const WMeasure& w);

// reproducible pure-state sample for randomized positivity checks
std::vector<DensityMatrix> haar_pure_states(int dim, int count, std::uint64_t seed);

} // namespace jm
