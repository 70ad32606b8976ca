#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lipkit/metric.hpp"
#include "lipkit/rational.hpp"

namespace lipkit {

// Real-valued function on a finite pointed metric space vanishing at the base.
class LipFunctional {
 public:
  // Throws StructuralError on size mismatch or non-finite values and
  // PreconditionError when the base value is nonzero.
  LipFunctional(SpacePtr space, std::vector<double> values);
  // Exact values; requires a space with exact distances.
  static LipFunctional exact(SpacePtr space, std::vector<Rational> values);
  static LipFunctional zero(SpacePtr space);

  const SpacePtr& space_ptr() const { return space_; }
  const FinitePointedMetricSpace& space() const { return *space_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

  bool is_exact() const { return exact_.has_value(); }
  const std::vector<Rational>& exact_values() const { return *exact_; }

  // Signed difference quotient (f(x) - f(y)) / rho(x, y).
  double quotient(std::size_t x, std::size_t y) const;
  Rational exact_quotient(std::size_t x, std::size_t y) const;

  LipFunctional scaled(double a) const;
  LipFunctional plus(const LipFunctional& other, double a = 1.0) const;  // this + a * other

 private:
  SpacePtr space_;
  std::vector<double> values_;
  std::optional<std::vector<Rational>> exact_;
};

struct NormResult {
  double norm = 0.0;
  std::size_t x = 0, y = 0;
  std::optional<Rational> exact;
};

// Max over ordered pairs of the signed quotient; ties go to the smallest (x, y).
// Exact when the functional carries exact values.
NormResult lip_norm(const LipFunctional& f);

// Same maximum through absolute differences; equals lip_norm.
double lip_norm_abs(const LipFunctional& f);

double lip_distance(const LipFunctional& f, const LipFunctional& g);

enum class AttainmentMode { Strong, Directional, LocalDirectional };
const char* to_string(AttainmentMode mode);

struct CertifiedPair {
  std::size_t x = 0, y = 0;
  double quotient = 0.0;
  int level = 0;  // refinement index for the directional modes
};

struct AttainmentCertificate {
  AttainmentMode mode = AttainmentMode::Strong;
  std::vector<CertifiedPair> pairs;
  std::optional<Vector> direction;
  std::optional<Vector> localization;
  double norm_value = 0.0;
  std::optional<Rational> exact_norm;
};

// All pairs with quotient >= ||f|| - tol (exact comparison on exact
// functionals). Throws DegenerateError when ||f|| = 0.
std::optional<AttainmentCertificate> strongly_attains(const LipFunctional& f, double tol = 1e-12);

enum class McShaneVariant { Inf, Sup, Midpoint };
const char* to_string(McShaneVariant v);

// Extends f_sub to `target`. Points of f_sub's space are matched in target by
// coordinates when both have them, else by label; StructuralError otherwise.
LipFunctional mcshane_extend(const LipFunctional& f_sub, const SpacePtr& target,
                             McShaneVariant variant = McShaneVariant::Midpoint);

// Extension from prescribed values at target indices (must include the base).
// `lip` defaults to the constant of the prescribed values.
LipFunctional mcshane_extend(const SpacePtr& target, const std::vector<std::size_t>& indices,
                             const std::vector<double>& values,
                             McShaneVariant variant = McShaneVariant::Midpoint,
                             std::optional<double> lip = std::nullopt);

// |f(z) - (rho(z,y) f(x) + rho(x,z) f(y)) / rho(x,y)|. PreconditionError when
// the triple's defect exceeds tol.
double interpolation_residual(const LipFunctional& f, const BetweennessTriple& triple,
                              double tol = kBetweennessTolerance);
Rational interpolation_residual_exact(const LipFunctional& f, const BetweennessTriple& triple);

struct Composition {
  LipFunctional h;
  double max_snap_distance = 0.0;  // farthest u-value from a node of g's grid
  double h_norm = 0.0;
  double bound = 0.0;  // ||g|| * ||u||
  bool bound_holds = false;
};

// h = g o u, with g a functional on a 1-D grid covering [0,1] evaluated by
// linear interpolation between its nodes. RangeError for u outside [0,1].
Composition compose_with_retraction(const LipFunctional& g, const LipFunctional& u);

struct LocalityWitness {
  std::size_t t1 = 0, t2 = 0;
  double distance = 0.0;
  double quotient = 0.0;
};

// Pair with rho < eps and quotient > ||f|| - eps of largest quotient, if any.
std::optional<LocalityWitness> locality_witness(const LipFunctional& f, double eps);

}  // namespace lipkit
