#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace jm {

using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// a structural precondition on the input failed (shape, hermiticity, positivity, ...)
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// an iterative routine ran out of budget before reaching its tolerance
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EigResult {
  RealVector values;     // ascending
  ComplexMatrix vectors; // unitary; values[k] pairs with vectors.col(k)
};

// (M + M†)/2; throws if the anti-Hermitian correction exceeds tol (max-abs entry)
ComplexMatrix hermitize(const ComplexMatrix& m, double tol = 1e-10);

// cyclic Jacobi diagonalization of a Hermitian matrix
EigResult eig_hermitian(const ComplexMatrix& m);

double trace_norm(const ComplexMatrix& m);         // sum of |eigenvalue|
double negative_part_norm(const ComplexMatrix& m); // sum of (|eigenvalue| - eigenvalue)

// Hermitian square root; eigenvalues in [-1e-10, 0) count as 0, anything lower throws
ComplexMatrix operator_sqrt(const ComplexMatrix& m);

} // namespace jm
