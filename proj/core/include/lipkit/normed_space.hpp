#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace lipkit {

using Vector = std::vector<double>;

enum class NormKind { Lp, Polyhedral };

// Finite-dimensional normed space: either l_p^d with 1 < p < inf, or a
// polyhedral norm ||x|| = max_k |phi_k(x)| given by generating functionals.
// l_1 and l_inf are represented as polyhedral norms.
class NormedSpaceModel {
 public:
  static NormedSpaceModel lp(std::size_t dim, double p);
  static NormedSpaceModel linf(std::size_t dim);
  static NormedSpaceModel l1(std::size_t dim);
  static NormedSpaceModel polyhedral(std::vector<Vector> functionals);

  std::size_t dim() const { return dim_; }
  NormKind kind() const { return kind_; }
  // Exponent for Lp; +inf / 1 for the coordinate polyhedral norms, 0 otherwise.
  double p() const { return p_; }
  double q() const;  // conjugate exponent (Lp only)
  const std::vector<Vector>& functionals() const { return functionals_; }
  bool uniformly_convex() const { return kind_ == NormKind::Lp; }

  double norm(std::span<const double> v) const;
  double distance(std::span<const double> a, std::span<const double> b) const;
  double dual_norm(std::span<const double> functional) const;
  Vector normalized(std::span<const double> v) const;

  // Unit supporting functional at a unit vector u (Lp only).
  Vector dual_map(std::span<const double> u) const;

  // Vertices of the unit ball (Polyhedral only).
  std::vector<Vector> unit_ball_vertices() const;

  std::string describe() const;

 private:
  NormedSpaceModel() = default;

  NormKind kind_ = NormKind::Lp;
  std::size_t dim_ = 0;
  double p_ = 2.0;
  std::vector<Vector> functionals_;
};

double dot(std::span<const double> a, std::span<const double> b);
Vector add(std::span<const double> a, std::span<const double> b);
Vector subtract(std::span<const double> a, std::span<const double> b);
Vector scale(std::span<const double> a, double s);

// min over theta in [0,1] of ||p - (theta a + (1-theta) b)||.
double distance_to_segment(const NormedSpaceModel& model, std::span<const double> p,
                           std::span<const double> a, std::span<const double> b);

// Spot-checks homogeneity and the triangle inequality on random triples.
bool spot_check_norm_axioms(const NormedSpaceModel& model, std::size_t trials,
                            unsigned long long seed, double tol = 1e-9);

}  // namespace lipkit
