#include "jm/povm.hpp"

#include <cmath>
#include <limits>

#include "jm/bloch.hpp"

namespace jm {

namespace {

constexpr double kPsdTol = 1e-10;
constexpr double kPi = 3.14159265358979323846;

ComplexMatrix qubit_op(double scalar, const Eigen::Vector3d& v) {
  const auto& basis = gell_mann_basis(2);
  return scalar * basis[0] + v.x() * basis[1] + v.y() * basis[2] + v.z() * basis[3];
}

} // namespace

ValidationReport validate(const Povm& p) {
  ValidationReport report;
  if (p.dim < 1 || p.effects.empty()) return report;

  double worst = std::numeric_limits<double>::infinity();
  ComplexMatrix sum = ComplexMatrix::Zero(p.dim, p.dim);
  for (const ComplexMatrix& e : p.effects) {
    if (e.rows() != p.dim || e.cols() != p.dim) return report;
    worst = std::min(worst, eig_hermitian(e).values[0]);
    sum += e;
  }
  report.worst_eigenvalue = worst;
  report.completeness_residual =
      (sum - ComplexMatrix::Identity(p.dim, p.dim)).cwiseAbs().maxCoeff();
  report.ok = worst >= -kPsdTol && report.completeness_residual <= kPsdTol;
  return report;
}

void require_valid(const Povm& p) {
  if (!validate(p).ok) throw ValidationError("povm fails positivity or completeness");
}

BlochPovmSpec BlochPovmSpec::dichotomic(double a0, const Eigen::Vector3d& a) {
  BlochPovmSpec s;
  s.outcomes = 2;
  s.bias = a0;
  s.vec = a;
  return s;
}

BlochPovmSpec BlochPovmSpec::trichotomic(double mu, double phi) {
  BlochPovmSpec s;
  s.outcomes = 3;
  for (int i = 0; i < 3; ++i) {
    const double angle = phi + 2.0 * kPi * i / 3.0;
    s.vecs[i] = mu * Eigen::Vector3d(std::cos(angle), std::sin(angle), 0.0);
  }
  const Eigen::Vector3d mean = (s.vecs[0] + s.vecs[1] + s.vecs[2]) / 3.0;
  for (auto& v : s.vecs) v -= mean;
  return s;
}

BlochPovmSpec BlochPovmSpec::trichotomic(const std::array<Eigen::Vector3d, 3>& v) {
  BlochPovmSpec s;
  s.outcomes = 3;
  s.vecs = v;
  if ((v[0] + v[1] + v[2]).norm() > 1e-9)
    throw ValidationError("trichotomic spec: vectors must sum to zero");
  for (const auto& x : v)
    if (x.norm() > 1.0 + 1e-12)
      throw ValidationError("trichotomic spec: vector length exceeds 1");
  return s;
}

Povm to_povm(const BlochPovmSpec& spec) {
  if (spec.outcomes == 2) return dichotomic_from_spec(spec.bias, spec.vec);
  Povm p;
  p.dim = 2;
  for (int i = 0; i < 3; ++i)
    p.effects.push_back(qubit_op(1.0 / 3.0, spec.vecs[i] / 3.0));
  return p;
}

Povm dichotomic_from_spec(double a0, const Eigen::Vector3d& a) {
  if (std::abs(a0) + a.norm() > 1.0 + 1e-12)
    throw ValidationError("dichotomic spec: |a0| + |a| must not exceed 1");
  Povm p;
  p.dim = 2;
  p.effects.push_back(qubit_op(0.5 * (1.0 - a0), -0.5 * a));
  p.effects.push_back(qubit_op(0.5 * (1.0 + a0), 0.5 * a));
  return p;
}

Povm trichotomic_from_spec(double mu, double phi, const Eigen::Vector3d& e1,
                           const Eigen::Vector3d& e2) {
  if (mu < 0.0 || mu > 1.0) throw ValidationError("trichotomic spec: mu must lie in [0, 1]");
  if (std::abs(e1.norm() - 1.0) > 1e-12 || std::abs(e2.norm() - 1.0) > 1e-12 ||
      std::abs(e1.dot(e2)) > 1e-12)
    throw ValidationError("trichotomic spec: plane axes must be orthonormal");

  std::array<Eigen::Vector3d, 3> vecs;
  for (int i = 0; i < 3; ++i) {
    const double angle = phi + 2.0 * kPi * i / 3.0;
    vecs[i] = mu * (std::cos(angle) * e1 + std::sin(angle) * e2);
  }
  const Eigen::Vector3d mean = (vecs[0] + vecs[1] + vecs[2]) / 3.0;

  Povm p;
  p.dim = 2;
  for (int i = 0; i < 3; ++i)
    p.effects.push_back(qubit_op(1.0 / 3.0, (vecs[i] - mean) / 3.0));
  return p;
}

double unsharpness_entropy(const Povm& p) {
  require_valid(p);
  double total = 0.0;
  for (const ComplexMatrix& e : p.effects) {
    const EigResult r = eig_hermitian(e);
    for (int k = 0; k < r.values.size(); ++k) {
      double lam = r.values[k];
      if (lam < 0.0) lam = 0.0; // validated above, so at worst -1e-10
      if (lam > 0.0) total -= lam * std::log(lam);
    }
  }
  return total / p.dim;
}

bool is_pvm(const Povm& p) {
  require_valid(p);
  for (const ComplexMatrix& e : p.effects)
    if ((e * e - e).cwiseAbs().maxCoeff() > 1e-9) return false;
  return true;
}

DensityMatrix density_from_bloch(const Eigen::Vector3d& r) {
  if (r.norm() > 1.0 + 1e-12) throw ValidationError("density: Bloch vector length exceeds 1");
  return DensityMatrix{qubit_op(0.5, 0.5 * r)};
}

void qubit_components(const ComplexMatrix& op, double& t, Eigen::Vector3d& v) {
  if (op.rows() != 2 || op.cols() != 2)
    throw ValidationError("qubit_components: operator must be 2x2");
  const auto& basis = gell_mann_basis(2);
  t = op.trace().real();
  for (int k = 0; k < 3; ++k) v[k] = (basis[k + 1] * op).trace().real();
}

} // namespace jm
