#include "jm/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "jm/linalg.hpp"

namespace jm {

namespace {

void require_ball(const Eigen::Vector3d& v, const char* name) {
  if (!(v.norm() <= 1.0 + 1e-12))
    throw ValidationError(std::string(name) + " bloch vector leaves the unit ball");
}

void require_effect_ball(double bias, const Eigen::Vector3d& v, const char* name) {
  if (!(std::abs(bias) + v.norm() <= 1.0 + 1e-12))
    throw ValidationError(std::string(name) + " bias and bloch vector violate positivity");
}

// sharpness of a biased two-outcome measurement, zero only for the
// unbiased sharp case
double sharpness(double bias, double norm) {
  const double plus = std::max(0.0, (1.0 + bias) * (1.0 + bias) - norm * norm);
  const double minus = std::max(0.0, (1.0 - bias) * (1.0 - bias) - norm * norm);
  return 0.5 * (std::sqrt(plus) + std::sqrt(minus));
}

double xlnx(double p) { return p <= 0.0 ? 0.0 : p * std::log(p); }

void require_trichotomic(const BlochPovmSpec& s, const char* name) {
  if (s.outcomes != 3)
    throw ValidationError(std::string(name) + " must describe a three-outcome measurement");
}

// map the grid cell (i, j) to the index of the matched diagonal
// direction, all zero based
int solution_index(int i, int j) {
  int k = (2 * (i + j + 2)) % 3;
  if (k == 0) k = 3;
  return k - 1;
}

double mismatch_sum(const std::array<Eigen::Vector3d, 3>& a,
                    const std::array<Eigen::Vector3d, 3>& b) {
  double total = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int k = solution_index(i, j);
      total += (a[i] + b[j] - (a[k] + b[k])).norm();
    }
  return total;
}

} // namespace

JmVerdict dichotomic_unbiased_verdict(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  require_ball(a, "first");
  require_ball(b, "second");
  JmVerdict v;
  v.criterion_margin = 0.5 * ((a + b).norm() + (a - b).norm()) - 1.0;
  v.minimized_negativity = std::max(v.criterion_margin, 0.0);
  v.jointly_measurable = v.criterion_margin <= kCriterionTolerance;
  return v;
}

JmVerdict dichotomic_biased_verdict(double a0, const Eigen::Vector3d& a, double b0,
                                    const Eigen::Vector3d& b) {
  require_effect_ball(a0, a, "first");
  require_effect_ball(b0, b, "second");
  const double fa = sharpness(a0, a.norm());
  const double fb = sharpness(b0, b.norm());

  auto bias_term = [](double bias, double f) {
    if (f < 1e-12) {
      if (std::abs(bias) > 1e-12)
        throw NumericalError("vanishing sharpness with nonzero bias");
      return 0.0;
    }
    return bias * bias / (f * f);
  };

  const double lhs = (1.0 - fa * fa - fb * fb) * (1.0 - bias_term(a0, fa) - bias_term(b0, fb));
  const double rhs = (a.dot(b) - a0 * b0) * (a.dot(b) - a0 * b0);

  JmVerdict v;
  v.criterion_margin = lhs - rhs;
  v.jointly_measurable = v.criterion_margin <= kCriterionTolerance;
  return v;
}

TrichotomicSolution trichotomic_solution(const BlochPovmSpec& a, const BlochPovmSpec& b) {
  require_trichotomic(a, "first");
  require_trichotomic(b, "second");
  TrichotomicSolution sol;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * 3 + j;
      const int k = solution_index(i, j);
      sol.phi_vectors[idx] = a.vecs[i] + b.vecs[j];
      sol.theta_vectors[idx] = a.vecs[k] + b.vecs[k];
      sol.theta_scalars[idx] = (i == j) ? 2.0 : 0.5;
    }
  return sol;
}

JmVerdict trichotomic_verdict(const BlochPovmSpec& a, const BlochPovmSpec& b) {
  require_trichotomic(a, "first");
  require_trichotomic(b, "second");
  std::array<int, 3> perm = {0, 1, 2};
  double best = std::numeric_limits<double>::infinity();
  do {
    const std::array<Eigen::Vector3d, 3> relabeled = {b.vecs[perm[0]], b.vecs[perm[1]],
                                                      b.vecs[perm[2]]};
    best = std::min(best, mismatch_sum(a.vecs, relabeled));
  } while (std::next_permutation(perm.begin(), perm.end()));

  JmVerdict v;
  v.criterion_margin = best / 9.0 - 1.0;
  v.minimized_negativity = std::max(v.criterion_margin, 0.0);
  v.jointly_measurable = v.criterion_margin <= kCriterionTolerance;
  return v;
}

Theta0Window theta0_feasibility(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  require_ball(a, "first");
  require_ball(b, "second");
  Theta0Window w;
  w.lower = 2.0 - (a + b).norm();
  w.upper = (a - b).norm();
  return w;
}

double mu_threshold(double phi) {
  const double period = 2.0 * M_PI / 3.0;
  double m = std::fmod(phi, period);
  if (m < 0.0) m += period;
  const double value = std::sqrt(3.0) / (2.0 * std::sin(0.5 * m + M_PI / 3.0));
  return std::min(1.0, value);
}

double r_threshold(double phi) { return trichotomic_entropy(mu_threshold(phi)); }

double dichotomic_entropy(double mu) {
  if (!(mu >= -1e-12 && mu <= 1.0 + 1e-12))
    throw ValidationError("sharpness must lie in [0, 1]");
  mu = std::clamp(mu, 0.0, 1.0);
  return -(xlnx(0.5 * (1.0 + mu)) + xlnx(0.5 * (1.0 - mu)));
}

double trichotomic_entropy(double mu) {
  if (!(mu >= -1e-12 && mu <= 1.0 + 1e-12))
    throw ValidationError("sharpness must lie in [0, 1]");
  mu = std::clamp(mu, 0.0, 1.0);
  return -1.5 * (xlnx((1.0 + mu) / 3.0) + xlnx((1.0 - mu) / 3.0));
}

namespace {

// entropy decreases in mu on [0, 1] for both families
double invert_entropy(double target, double (*entropy)(double), double top) {
  if (!(target >= -1e-12 && target <= top + 1e-12))
    throw ValidationError("entropy outside the reachable range");
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-16; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (entropy(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace

double dichotomic_mu_for_entropy(double r) {
  return invert_entropy(r, &dichotomic_entropy, std::log(2.0));
}

double trichotomic_mu_for_entropy(double r) {
  if (r < std::log(1.5) - 1e-12)
    throw ValidationError("entropy outside the reachable range");
  return invert_entropy(r, &trichotomic_entropy, std::log(3.0));
}

} // namespace jm
