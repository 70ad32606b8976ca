#pragma once

#include <cstddef>
#include <vector>

#include "lipkit/lipfunc.hpp"

namespace lipkit {

// Element of the free space F(E): sum_p coeffs[p] * p-hat. Stored with one
// entry per point; the base entry is identically zero since 0-hat = 0.
class FreeVector {
 public:
  FreeVector(SpacePtr space, std::vector<double> coeffs);
  static FreeVector zero(SpacePtr space);
  static FreeVector point(SpacePtr space, std::size_t x);  // x-hat
  static FreeVector molecule(SpacePtr space, std::size_t x, std::size_t y);  // (x-hat - y-hat) / rho

  const SpacePtr& space_ptr() const { return space_; }
  const FinitePointedMetricSpace& space() const { return *space_; }
  std::size_t size() const { return coeffs_.size(); }
  double operator[](std::size_t i) const { return coeffs_[i]; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  // Indices with |coeff| > tol, base excluded.
  std::vector<std::size_t> support(double tol = 0.0) const;

  FreeVector plus(const FreeVector& other, double a = 1.0) const;  // this + a * other
  FreeVector scaled(double a) const;
  double max_abs_difference(const FreeVector& other) const;

 private:
  SpacePtr space_;
  std::vector<double> coeffs_;
};

// <f, z> = sum_p coeffs[p] f(p).
double pairing(const LipFunctional& f, const FreeVector& z);

struct FreeNormResult {
  double norm = 0.0;
  LipFunctional dual;  // ||dual|| <= 1 and <dual, z> = norm
};

// Dual LP over unit-Lipschitz g on supp(z) and the base, extended to E by McShane.
FreeNormResult free_norm(const FreeVector& z);

struct TransportArc {
  std::size_t x = 0, y = 0;
  double weight = 0.0;
};

struct PrimalResult {
  double norm = 0.0;
  std::vector<TransportArc> transport;  // z = sum weight * (x-hat - y-hat)
};

// min sum |a_i| rho(x_i, y_i) over representations of z, as a flow LP on all
// of E (or only on supp(z) and the base).
PrimalResult free_norm_primal(const FreeVector& z, bool restrict_to_support = false);

struct Molecule {
  std::size_t x = 0, y = 0;
  FreeVector vector;
};

// All ordered molecules, lexicographic in (x, y).
std::vector<Molecule> molecules(const SpacePtr& space);

struct MoleculeWeight {
  std::size_t x = 0, y = 0;
  double weight = 0.0;
};

struct Decomposition {
  std::vector<MoleculeWeight> weights;  // nonzero weights only
  double total = 0.0;
  double residual = 0.0;  // max coordinate error of the reconstruction
};

// Convex weights over molecules reconstructing z. PreconditionError when
// free_norm(z) > 1 + 1e-9.
Decomposition decompose_in_convW(const FreeVector& z);

// Norm-one g with <g, z> = free_norm(z). PreconditionError for z = 0.
LipFunctional supporting_functional(const FreeVector& z);

}  // namespace lipkit
