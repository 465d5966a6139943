#pragma once

#include <variant>
#include <vector>

#include "jm/povm.hpp"

namespace jm {

enum class Provenance { FromConjunction, FromTheta };

// d x d grid of Hermitian operators with fixed marginals: summing a row gives
// one effect of A, summing a column one effect of B, and the whole grid the
// identity; it is a genuine joint measurement exactly when every entry is PSD
struct WMeasure {
  int d = 0;   // outcome count per marginal
  int dim = 0; // Hilbert space dimension
  std::vector<ComplexMatrix> grid; // row-major, entry (i, j) at i*d + j
  Povm marginal_a, marginal_b;     // stored at construction
  Provenance provenance = Provenance::FromConjunction;

  const ComplexMatrix& at(int i, int j) const { return grid[static_cast<std::size_t>(i) * d + j]; }
  ComplexMatrix& at(int i, int j) { return grid[static_cast<std::size_t>(i) * d + j]; }
};

// d x d grid of Hermitian operators whose rows and columns each sum to 1/d;
// parameterizes every W-measure with the given marginals
struct DifferentialSet {
  int d = 0;
  int dim = 0;
  std::vector<ComplexMatrix> grid;

  const ComplexMatrix& at(int i, int j) const { return grid[static_cast<std::size_t>(i) * d + j]; }
  ComplexMatrix& at(int i, int j) { return grid[static_cast<std::size_t>(i) * d + j]; }
};

DifferentialSet uniform_theta(int d, int dim); // every entry 1/d^2

// W_ij = C_ij + (A_i - sum_j C_ij)/d + (B_j - sum_i C_ij)/d
WMeasure from_conjunction(const Povm& a, const Povm& b, const Povm& c);

// W_ij = (A_i + B_j)/d - Theta_ij
WMeasure from_theta(const Povm& a, const Povm& b, const DifferentialSet& theta);

// (1/dim) sum_ij negative_part_norm(W_ij); zero iff every entry is PSD
double negativity(const WMeasure& w);

struct PositivityFailure {
  int i = 0, j = 0;
  double eigenvalue = 0.0; // most negative eigenvalue found
};

// the grid as a d^2-outcome measurement when all entries are PSD (to 1e-10),
// otherwise the most negative entry as a witness
std::variant<Povm, PositivityFailure> extract_joint(const WMeasure& w);

// Bloch data of a pair of qubit measurements with equal outcome count:
// effect = (t 1 + v.sigma)/2
struct QubitPair {
  int d = 0;
  std::vector<double> ta, tb;
  std::vector<Eigen::Vector3d> va, vb;
};

QubitPair qubit_pair(const Povm& a, const Povm& b); // requires dim 2

// closed-form eigenvalues of the (i, j) entry of from_theta for qubit inputs;
// theta entry supplied in Bloch coefficients at normalization d^2
std::array<double, 2> qubit_w_eigenvalues(const QubitPair& qp, int i, int j, double theta0,
                                          const Eigen::Vector3d& theta_vec);

// negativity evaluated entirely through the closed-form qubit eigenvalues;
// theta0[i*d+j] and theta_vec[i*d+j] hold the Bloch view of Theta (norm d^2)
double negativity_qubit_fast(const QubitPair& qp, const std::vector<double>& theta0,
                             const std::vector<Eigen::Vector3d>& theta_vec);

} // namespace jm
