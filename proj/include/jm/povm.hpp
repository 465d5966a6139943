#pragma once

#include <array>
#include <vector>

#include "jm/linalg.hpp"

namespace jm {

struct Povm {
  int dim = 0;                        // Hilbert space dimension
  std::vector<ComplexMatrix> effects; // one PSD operator per outcome
  int outcomes() const { return static_cast<int>(effects.size()); }
};

struct ValidationReport {
  bool ok = false;
  double worst_eigenvalue = 0.0;      // most negative effect eigenvalue
  double completeness_residual = 0.0; // max-abs entry of (sum of effects - 1)
};

ValidationReport validate(const Povm& p);
void require_valid(const Povm& p); // throws ValidationError when validate fails

// Bloch-form qubit measurement families; a measurement is described either by a
// bias and one shared vector (2 outcomes, effect i carries (-1)^i * vec) or by
// three vectors summing to zero (3 outcomes)
struct BlochPovmSpec {
  int outcomes = 2;
  double bias = 0.0;                     // 2-outcome only
  Eigen::Vector3d vec = Eigen::Vector3d::Zero();
  std::array<Eigen::Vector3d, 3> vecs{}; // 3-outcome only

  static BlochPovmSpec dichotomic(double a0, const Eigen::Vector3d& a);
  static BlochPovmSpec trichotomic(double mu, double phi);
  static BlochPovmSpec trichotomic(const std::array<Eigen::Vector3d, 3>& v);
};

Povm to_povm(const BlochPovmSpec& spec);

// effects ((1 + (-1)^i a0) 1 + (-1)^i a.sigma)/2 for outcome i = 1, 2
Povm dichotomic_from_spec(double a0, const Eigen::Vector3d& a);

// effects (1 + a_i.sigma)/3 with Bloch vectors of length mu at angles
// phi + 2 pi (i-1)/3 in the given plane (defaults to the x-y plane)
Povm trichotomic_from_spec(double mu, double phi,
                           const Eigen::Vector3d& e1 = Eigen::Vector3d::UnitX(),
                           const Eigen::Vector3d& e2 = Eigen::Vector3d::UnitY());

// (1/dim) Tr sum_i (-effect_i ln effect_i), in nats; 0 for sharp measurements,
// ln(outcomes) for the purely random one
double unsharpness_entropy(const Povm& p);

bool is_pvm(const Povm& p);

struct DensityMatrix {
  ComplexMatrix matrix;
};

DensityMatrix density_from_bloch(const Eigen::Vector3d& r); // (1 + r.sigma)/2

// scalar and sigma coefficients of a qubit operator: op = (t 1 + v.sigma)/2
void qubit_components(const ComplexMatrix& op, double& t, Eigen::Vector3d& v);

} // namespace jm
