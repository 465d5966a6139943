#pragma once

#include <vector>

#include "jm/linalg.hpp"

namespace jm {

// identity followed by the traceless generalized Gell-Mann matrices, rescaled so
// Tr(basis[k] basis[l]) = dim * delta_kl; dim 2 yields {1, sigma_x, sigma_y, sigma_z}
const std::vector<ComplexMatrix>& gell_mann_basis(int dim);

// coefficients c with op = (1/norm) * sum_k c[k] basis[k]
RealVector bloch_encode(const ComplexMatrix& op, double norm);
ComplexMatrix bloch_decode(const RealVector& coeffs, int dim, double norm);

} // namespace jm
