#pragma once

#include <array>
#include <optional>

#include <Eigen/Dense>

#include "jm/povm.hpp"

namespace jm {

// a margin at or below this counts as jointly measurable
inline constexpr double kCriterionTolerance = 1e-9;

struct JmVerdict {
  bool jointly_measurable = false;
  std::optional<double> minimized_negativity;
  double criterion_margin = 0.0;
  bool sufficient_only = false;
};

// closed form for two unbiased two-outcome qubit measurements with
// bloch vectors a and b; the margin is (|a+b| + |a-b|)/2 - 1 and the
// minimal negativity is its positive part
JmVerdict dichotomic_unbiased_verdict(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

// closed form for biased two-outcome qubit measurements; the margin is
// the left side minus the right side of the sharpness inequality, with
// no negativity value attached
JmVerdict dichotomic_biased_verdict(double a0, const Eigen::Vector3d& a, double b0,
                                    const Eigen::Vector3d& b);

// analytic differential set for a pair of planar three-outcome
// measurements, stored row major over the 3x3 outcome grid with
// normalization d^2
struct TrichotomicSolution {
  std::array<double, 9> theta_scalars;
  std::array<Eigen::Vector3d, 9> theta_vectors;
  std::array<Eigen::Vector3d, 9> phi_vectors; // pairwise sums a_i + b_j
};

TrichotomicSolution trichotomic_solution(const BlochPovmSpec& a, const BlochPovmSpec& b);

// closed form for a pair of planar three-outcome measurements; the
// margin is the normalized vector mismatch minus one, minimized over
// outcome relabelings of the second measurement
JmVerdict trichotomic_verdict(const BlochPovmSpec& a, const BlochPovmSpec& b);

// scalar window for diagonal-biased differential sets of an unbiased
// two-outcome pair; nonempty exactly when the pair is not strictly
// compatible, and it collapses to one point on the boundary
struct Theta0Window {
  double lower = 0.0;
  double upper = 0.0;
  bool empty() const { return lower > upper + 1e-12; }
  bool contains(double t) const { return !empty() && t >= lower - 1e-12 && t <= upper + 1e-12; }
};

Theta0Window theta0_feasibility(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

// sharpness threshold for equal-strength planar trine pairs as a
// function of the relative angle, and the matching entropy threshold
double mu_threshold(double phi);
double r_threshold(double phi);

// unsharpness entropies of the symmetric qubit families and their
// inverses on the physical range
double dichotomic_entropy(double mu);
double trichotomic_entropy(double mu);
double dichotomic_mu_for_entropy(double r);
double trichotomic_mu_for_entropy(double r);

} // namespace jm
