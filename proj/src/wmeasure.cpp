#include "jm/wmeasure.hpp"

#include <cmath>

namespace jm {

namespace {

constexpr double kPsdTol = 1e-10;

void require_matching_pair(const Povm& a, const Povm& b) {
  require_valid(a);
  require_valid(b);
  if (a.dim != b.dim) throw ValidationError("w-measure: Hilbert dimensions differ");
  if (a.outcomes() != b.outcomes())
    throw ValidationError("w-measure: outcome counts differ");
}

} // namespace

DifferentialSet uniform_theta(int d, int dim) {
  DifferentialSet t;
  t.d = d;
  t.dim = dim;
  t.grid.assign(static_cast<std::size_t>(d) * d,
                ComplexMatrix::Identity(dim, dim) / static_cast<double>(d * d));
  return t;
}

WMeasure from_conjunction(const Povm& a, const Povm& b, const Povm& c) {
  require_matching_pair(a, b);
  require_valid(c);
  const int d = a.outcomes();
  const int dim = a.dim;
  if (c.dim != dim) throw ValidationError("w-measure: conjunction dimension differs");
  if (c.outcomes() != d * d)
    throw ValidationError("w-measure: conjunction must have d^2 outcomes");

  std::vector<ComplexMatrix> row_sum(d, ComplexMatrix::Zero(dim, dim));
  std::vector<ComplexMatrix> col_sum(d, ComplexMatrix::Zero(dim, dim));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      row_sum[i] += c.effects[static_cast<std::size_t>(i) * d + j];
      col_sum[j] += c.effects[static_cast<std::size_t>(i) * d + j];
    }

  WMeasure w;
  w.d = d;
  w.dim = dim;
  w.marginal_a = a;
  w.marginal_b = b;
  w.provenance = Provenance::FromConjunction;
  w.grid.reserve(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      w.grid.push_back(c.effects[static_cast<std::size_t>(i) * d + j] +
                       (a.effects[i] - row_sum[i]) / d + (b.effects[j] - col_sum[j]) / d);
  return w;
}

WMeasure from_theta(const Povm& a, const Povm& b, const DifferentialSet& theta) {
  require_matching_pair(a, b);
  const int d = a.outcomes();
  const int dim = a.dim;
  if (theta.d != d || theta.dim != dim)
    throw ValidationError("w-measure: differential set shape differs");

  const ComplexMatrix target = ComplexMatrix::Identity(dim, dim) / static_cast<double>(d);
  for (int i = 0; i < d; ++i) {
    ComplexMatrix row = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix col = ComplexMatrix::Zero(dim, dim);
    for (int j = 0; j < d; ++j) {
      row += theta.at(i, j);
      col += theta.at(j, i);
    }
    if ((row - target).cwiseAbs().maxCoeff() > 1e-8 ||
        (col - target).cwiseAbs().maxCoeff() > 1e-8)
      throw ValidationError("w-measure: differential set violates its sum constraints");
  }

  WMeasure w;
  w.d = d;
  w.dim = dim;
  w.marginal_a = a;
  w.marginal_b = b;
  w.provenance = Provenance::FromTheta;
  w.grid.reserve(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      w.grid.push_back((a.effects[i] + b.effects[j]) / d - theta.at(i, j));
  return w;
}

double negativity(const WMeasure& w) {
  double total = 0.0;
  for (const ComplexMatrix& entry : w.grid) total += negative_part_norm(entry);
  return total / w.dim;
}

std::variant<Povm, PositivityFailure> extract_joint(const WMeasure& w) {
  PositivityFailure worst;
  worst.eigenvalue = 0.0;
  bool failed = false;
  for (int i = 0; i < w.d; ++i)
    for (int j = 0; j < w.d; ++j) {
      const double lam = eig_hermitian(w.at(i, j)).values[0];
      if (lam < worst.eigenvalue) {
        worst = PositivityFailure{i, j, lam};
        if (lam < -kPsdTol) failed = true;
      }
    }
  if (failed) return worst;

  Povm joint;
  joint.dim = w.dim;
  joint.effects = w.grid;
  return joint;
}

QubitPair qubit_pair(const Povm& a, const Povm& b) {
  require_matching_pair(a, b);
  if (a.dim != 2) throw ValidationError("qubit_pair: requires Hilbert dimension 2");
  QubitPair qp;
  qp.d = a.outcomes();
  qp.ta.resize(qp.d);
  qp.tb.resize(qp.d);
  qp.va.resize(qp.d);
  qp.vb.resize(qp.d);
  for (int i = 0; i < qp.d; ++i) {
    qubit_components(a.effects[i], qp.ta[i], qp.va[i]);
    qubit_components(b.effects[i], qp.tb[i], qp.vb[i]);
  }
  return qp;
}

std::array<double, 2> qubit_w_eigenvalues(const QubitPair& qp, int i, int j, double theta0,
                                          const Eigen::Vector3d& theta_vec) {
  const double d = qp.d;
  const double scalar = 0.5 * d * (qp.ta[i] + qp.tb[j]) - theta0;
  const double radius = (0.5 * d * (qp.va[i] + qp.vb[j]) - theta_vec).norm();
  const double dd = d * d;
  return {(scalar - radius) / dd, (scalar + radius) / dd};
}

double negativity_qubit_fast(const QubitPair& qp, const std::vector<double>& theta0,
                             const std::vector<Eigen::Vector3d>& theta_vec) {
  double total = 0.0;
  for (int i = 0; i < qp.d; ++i)
    for (int j = 0; j < qp.d; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * qp.d + j;
      const auto lam = qubit_w_eigenvalues(qp, i, j, theta0[k], theta_vec[k]);
      if (lam[0] < 0.0) total -= lam[0];
      if (lam[1] < 0.0) total -= lam[1];
    }
  return total; // 2/dim = 1 at dim 2, so the negative parts sum directly
}

} // namespace jm
