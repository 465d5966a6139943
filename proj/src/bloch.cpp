#include "jm/bloch.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace jm {

namespace {

std::vector<ComplexMatrix> build_basis(int dim) {
  if (dim < 2) throw ValidationError("gell_mann_basis: dimension must be at least 2");
  const std::complex<double> I(0.0, 1.0);
  const double scale = std::sqrt(dim / 2.0);

  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(dim) * dim);
  basis.push_back(ComplexMatrix::Identity(dim, dim));

  for (int l = 1; l < dim; ++l) {
    for (int k = 0; k < l; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(dim, dim);
      sym(k, l) = 1.0;
      sym(l, k) = 1.0;
      basis.push_back(scale * sym);

      ComplexMatrix asym = ComplexMatrix::Zero(dim, dim);
      asym(k, l) = -I;
      asym(l, k) = I;
      basis.push_back(scale * asym);
    }
    ComplexMatrix diag = ComplexMatrix::Zero(dim, dim);
    for (int k = 0; k < l; ++k) diag(k, k) = 1.0;
    diag(l, l) = -static_cast<double>(l);
    basis.push_back(scale * std::sqrt(2.0 / (l * (l + 1.0))) * diag);
  }
  return basis;
}

} // namespace

const std::vector<ComplexMatrix>& gell_mann_basis(int dim) {
  static std::map<int, std::vector<ComplexMatrix>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(dim);
  if (it == cache.end()) it = cache.emplace(dim, build_basis(dim)).first;
  return it->second;
}

RealVector bloch_encode(const ComplexMatrix& op, double norm) {
  const int dim = static_cast<int>(op.rows());
  if (op.cols() != dim) throw ValidationError("bloch_encode: matrix must be square");
  const auto& basis = gell_mann_basis(dim);
  RealVector c(dim * dim);
  for (std::size_t k = 0; k < basis.size(); ++k)
    c[static_cast<int>(k)] = norm / dim * (basis[k] * op).trace().real();
  return c;
}

ComplexMatrix bloch_decode(const RealVector& coeffs, int dim, double norm) {
  const auto& basis = gell_mann_basis(dim);
  if (coeffs.size() != static_cast<int>(basis.size()))
    throw ValidationError("bloch_decode: coefficient count must be dim^2");
  ComplexMatrix op = ComplexMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < basis.size(); ++k)
    op += coeffs[static_cast<int>(k)] * basis[k];
  return op / norm;
}

} // namespace jm
