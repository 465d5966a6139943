#include "jm/ssm.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "jm/linalg.hpp"

namespace jm {

double kraus_completeness_residual(const KrausSet& k) {
  if (k.dim < 1 || k.operators.empty()) throw ValidationError("empty kraus set");
  ComplexMatrix total = ComplexMatrix::Zero(k.dim, k.dim);
  for (const auto& op : k.operators) {
    if (op.rows() != k.dim || op.cols() != k.dim)
      throw ValidationError("kraus operator has the wrong shape");
    total += op.adjoint() * op;
  }
  return (total - ComplexMatrix::Identity(k.dim, k.dim)).cwiseAbs().maxCoeff();
}

void require_valid_kraus(const KrausSet& k) {
  if (kraus_completeness_residual(k) > 1e-10)
    throw ValidationError("kraus operators do not resolve the identity");
}

KrausSet luders_kraus(const Povm& p) {
  require_valid(p);
  KrausSet k;
  k.dim = p.dim;
  k.operators.reserve(p.effects.size());
  for (const auto& effect : p.effects) k.operators.push_back(operator_sqrt(effect));
  return k;
}

Povm sequential_conjunction(const KrausSet& k, const Povm& b) {
  require_valid_kraus(k);
  require_valid(b);
  if (k.dim != b.dim) throw ValidationError("kraus set and measurement act on different spaces");
  Povm c;
  c.dim = k.dim;
  c.effects.reserve(k.operators.size() * b.effects.size());
  for (const auto& op : k.operators)
    for (const auto& effect : b.effects)
      c.effects.push_back(hermitize(op.adjoint() * effect * op, 1e-9));
  return c;
}

WMeasure ssm_wmeasure(const Povm& a, const Povm& b, SequentialOrder order) {
  if (order == SequentialOrder::FirstThenSecond)
    return from_conjunction(a, b, sequential_conjunction(luders_kraus(a), b));

  // measure the second one first, then transpose the grid so entry
  // (i, j) still refers to outcome i of the first measurement
  const Povm swapped = sequential_conjunction(luders_kraus(b), a);
  Povm c;
  c.dim = swapped.dim;
  const int d = a.outcomes();
  c.effects.resize(static_cast<std::size_t>(d) * b.outcomes());
  for (int j = 0; j < b.outcomes(); ++j)
    for (int i = 0; i < d; ++i)
      c.effects[static_cast<std::size_t>(i) * b.outcomes() + j] =
          swapped.effects[static_cast<std::size_t>(j) * d + i];
  return from_conjunction(a, b, c);
}

JmVerdict ssm_jm_test(const Povm& a, const Povm& b, SequentialOrder order) {
  const WMeasure w = ssm_wmeasure(a, b, order);
  double min_eig = std::numeric_limits<double>::infinity();
  for (const auto& entry : w.grid) min_eig = std::min(min_eig, eig_hermitian(entry).values[0]);

  JmVerdict v;
  v.criterion_margin = -min_eig;
  v.jointly_measurable = v.criterion_margin <= kCriterionTolerance;

  // positivity of this particular measure decides compatibility only
  // for unbiased two-outcome qubit pairs
  bool exact = a.dim == 2 && a.outcomes() == 2 && b.outcomes() == 2;
  for (const auto& effect : a.effects)
    if (std::abs(std::real(effect.trace()) - 1.0) > 1e-9) exact = false;
  for (const auto& effect : b.effects)
    if (std::abs(std::real(effect.trace()) - 1.0) > 1e-9) exact = false;
  v.sufficient_only = !exact;
  return v;
}

namespace {

void require_state(const DensityMatrix& rho, int dim) {
  if (rho.matrix.rows() != dim || rho.matrix.cols() != dim)
    throw ValidationError("state dimension does not match the measure");
  if ((rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
    throw ValidationError("state is not hermitian");
  if (std::abs(std::real(rho.matrix.trace()) - 1.0) > 1e-9)
    throw ValidationError("state trace is not one");
  if (eig_hermitian(hermitize(rho.matrix, 1e-9)).values[0] < -1e-9)
    throw ValidationError("state has a negative eigenvalue");
}

void require_distribution(const Eigen::VectorXd& p, const char* name) {
  if (p.size() == 0) throw ValidationError(std::string(name) + " distribution is empty");
  if (p.minCoeff() < -1e-9) throw ValidationError(std::string(name) + " has a negative entry");
  if (std::abs(p.sum() - 1.0) > 1e-9)
    throw ValidationError(std::string(name) + " does not sum to one");
}

} // namespace

Quasiprobability quasiprob_from_state(const WMeasure& w, const DensityMatrix& rho) {
  require_state(rho, w.dim);
  Quasiprobability q;
  q.d = w.d;
  q.source = Quasiprobability::Source::State;
  q.table.resize(w.d, w.d);
  for (int i = 0; i < w.d; ++i)
    for (int j = 0; j < w.d; ++j)
      q.table(i, j) = std::real((w.at(i, j) * rho.matrix).trace());
  return q;
}

Quasiprobability quasiprob_from_statistics(const Eigen::VectorXd& pa, const Eigen::VectorXd& pb,
                                           const Eigen::MatrixXd& pc) {
  require_distribution(pa, "first marginal");
  require_distribution(pb, "second marginal");
  const int d = static_cast<int>(pa.size());
  if (pb.size() != d || pc.rows() != d || pc.cols() != d)
    throw ValidationError("distribution shapes do not match");
  if (pc.minCoeff() < -1e-9) throw ValidationError("joint statistics have a negative entry");
  if (std::abs(pc.sum() - 1.0) > 1e-9)
    throw ValidationError("joint statistics do not sum to one");

  const Eigen::VectorXd rows = pc.rowwise().sum();
  const Eigen::VectorXd cols = pc.colwise().sum();
  Quasiprobability q;
  q.d = d;
  q.source = Quasiprobability::Source::Statistics;
  q.table.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      q.table(i, j) = pc(i, j) + (pa[i] - rows[i]) / d + (pb[j] - cols[j]) / d;
  return q;
}

double worst_state_quasiprob(const WMeasure& w) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& entry : w.grid) worst = std::min(worst, eig_hermitian(entry).values[0]);
  return worst;
}

std::vector<DensityMatrix> haar_pure_states(int dim, int count, std::uint64_t seed) {
  if (dim < 1 || count < 0) throw ValidationError("bad sampling request");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<DensityMatrix> states;
  states.reserve(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) {
    Eigen::VectorXcd psi(dim);
    for (int k = 0; k < dim; ++k) psi[k] = std::complex<double>(g(rng), g(rng));
    psi /= psi.norm();
    states.push_back(DensityMatrix{psi * psi.adjoint()});
  }
  return states;
}

} // namespace jm
