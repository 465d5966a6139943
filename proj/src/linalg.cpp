#include "jm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace jm {

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

} // namespace

ComplexMatrix hermitize(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw ValidationError("hermitize: matrix must be square");
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  const double correction = (m - h).cwiseAbs().maxCoeff();
  if (correction > tol) throw ValidationError("hermitize: input is not Hermitian");
  return h;
}

EigResult eig_hermitian(const ComplexMatrix& m) {
  ComplexMatrix a = hermitize(m);
  const int n = static_cast<int>(a.rows());
  ComplexMatrix v = ComplexMatrix::Identity(n, n);

  if (n == 1) {
    EigResult r;
    r.values = RealVector::Constant(1, a(0, 0).real());
    r.vectors = v;
    return r;
  }

  const double stop = 1e-14 * std::max(1.0, a.norm());
  const int max_sweeps = 100;
  bool converged = false;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= stop) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const std::complex<double> apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        // absorb the pivot's phase, then a real Jacobi rotation zeroes it
        const std::complex<double> phase = apq / r;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // unitary differs from identity only in the (p,q) block:
        //   U(p,p) = c, U(p,q) = s, U(q,p) = -s*conj(phase), U(q,q) = c*conj(phase)
        for (int k = 0; k < n; ++k) { // A <- A U
          const std::complex<double> akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * std::conj(phase) * akq;
          a(k, q) = s * akp + c * std::conj(phase) * akq;
        }
        for (int k = 0; k < n; ++k) { // A <- U† A
          const std::complex<double> apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        for (int k = 0; k < n; ++k) { // V <- V U
          const std::complex<double> vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * std::conj(phase) * vkq;
          v(k, q) = s * vkp + c * std::conj(phase) * vkq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (!converged && off_diagonal_norm(a) > stop)
    throw NumericalError("eig_hermitian: Jacobi sweeps did not converge");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

  EigResult r;
  r.values = RealVector(n);
  r.vectors = ComplexMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    r.values[k] = a(order[k], order[k]).real();
    r.vectors.col(k) = v.col(order[k]);
  }
  return r;
}

double trace_norm(const ComplexMatrix& m) {
  const EigResult e = eig_hermitian(m);
  return e.values.cwiseAbs().sum();
}

double negative_part_norm(const ComplexMatrix& m) {
  const EigResult e = eig_hermitian(m);
  double s = 0.0;
  for (int k = 0; k < e.values.size(); ++k)
    if (e.values[k] < 0.0) s -= e.values[k];
  return 2.0 * s;
}

ComplexMatrix operator_sqrt(const ComplexMatrix& m) {
  EigResult e = eig_hermitian(m);
  for (int k = 0; k < e.values.size(); ++k) {
    if (e.values[k] < -1e-10)
      throw ValidationError("operator_sqrt: matrix is not positive semidefinite");
    if (e.values[k] < 0.0) e.values[k] = 0.0;
  }
  return e.vectors * e.values.cwiseSqrt().asDiagonal() * e.vectors.adjoint();
}

} // namespace jm
