#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lipkit/lipfunc.hpp"
#include "lipkit/metric.hpp"
#include "lipkit/normed_space.hpp"
#include "lipkit/rational.hpp"

namespace lipkit {

enum class SeminormKind { MaxAbs, OpNorm };
enum class TargetNorm { L2, Linf };

const char* to_string(SeminormKind k);
const char* to_string(TargetNorm t);

// MAXABS: p(x) = max_i |<a_i, x>| with exact rational rows.
// OPNORM: p(x) = ||T x|| in l_2 or l_inf.
class SeminormModel {
 public:
  static SeminormModel max_abs(std::vector<std::vector<Rational>> functionals);
  static SeminormModel max_abs(const std::vector<Vector>& functionals);
  static SeminormModel op_norm(std::vector<Vector> matrix, TargetNorm target);

  SeminormKind kind() const { return kind_; }
  TargetNorm target() const { return target_; }
  std::size_t dim() const { return dim_; }
  const std::vector<Vector>& rows() const { return rows_; }
  const std::vector<std::vector<Rational>>& exact_rows() const { return exact_rows_; }
  bool is_exact() const { return kind_ == SeminormKind::MaxAbs; }

  double operator()(std::span<const double> x) const;
  Rational exact_value(std::span<const Rational> x) const;  // MAXABS only
  std::string describe() const;

 private:
  SeminormKind kind_ = SeminormKind::MaxAbs;
  TargetNorm target_ = TargetNorm::Linf;
  std::size_t dim_ = 0;
  std::vector<Vector> rows_;
  std::vector<std::vector<Rational>> exact_rows_;
};

// Homogeneity and subadditivity on random vectors; false on the first failure.
bool spot_check_seminorm_axioms(const SeminormModel& p, std::uint64_t seed, int trials = 200, double tol = 1e-9);

struct SeminormNorms {
  double sup_norm = 0.0;
  std::optional<Rational> exact_sup;
  Vector witness;  // z in S_X with p(z) = sup_norm
  bool certified = false;  // sup from a closed form or vertex enumeration
  double lip_norm = 0.0;   // over the audit grid
  std::size_t lip_x = 0, lip_y = 0;
  std::size_t grid_points = 0;
  double slack = 0.0;
  bool agree = false;  // |sup - lip| <= slack
};

// sup over S_X: dual norms of the rows for MAXABS and OPNORM-l_inf, largest
// singular value for OPNORM-l_2 on l_2, vertex enumeration on polyhedral
// balls, multi-start ascent otherwise. The Lipschitz norm is taken over
// {0, +-z} plus `grid_samples` seeded points of B_X.
SeminormNorms seminorm_norms(const SeminormModel& p, const NormedSpaceModel& ambient, std::size_t grid_samples = 64,
                             std::uint64_t seed = 7, double slack = 1e-9);

// p evaluated at the coordinates of `space`.
LipFunctional seminorm_functional(const SeminormModel& p, const SpacePtr& space);

struct AttainmentAudit {
  Vector z;
  double value = 0.0;            // p(z)
  double sup_norm = 0.0;
  bool attains = false;          // (i) p(z) = ||p||
  double pair_quotient = 0.0;    // (ii) quotient at (z, 0)
  bool pair_attains = false;
  double operator_norm = 0.0;    // (iv) ||T|| of the factoring operator
  double operator_value = 0.0;   // ||T z||
  bool operator_attains = false;
  bool inconclusive = false;     // numeric sup not certified
  bool agree = false;
};

AttainmentAudit attainment_equivalences(const SeminormModel& p, const NormedSpaceModel& ambient, double tol = 1e-9);

// MAXABS with rows (n / (n + 1)) e_n, n = 1..N, on R^d.
SeminormModel jn_truncated_seminorm(int N, int d);

// sup_{||x||_inf <= 1} |p(x) - q(x)| for MAXABS p, q, by exact rational LPs.
struct UniformDistance {
  Rational value;
  std::vector<Rational> witness;
};
UniformDistance uniform_distance_linf(const SeminormModel& p, const SeminormModel& q);

struct GapReport {
  int n = 0;
  Rational uniform_dist;
  std::vector<Rational> uniform_witness;
  Rational lip_lower_bound;
  std::vector<Rational> pair_a, pair_b;
};

// p_0 = |x_1|, p_n = max(|x_1|, |x_2| / n) on l_inf^2.
GapReport uniform_vs_lip_gap(int n);

struct SeminormBpbResult {
  SeminormModel p;
  Vector x;
  double tau = 0.0;          // sqrt(2 delta)
  std::size_t index = 0;     // row attaining p0(x0)
  Vector ystar;
  double p_at_x = 0.0;
  double p_norm = 0.0;
  double x_distance = 0.0;   // ||x - x0||_inf
  double p_distance = 0.0;   // ||p - p0||_inf
  double functional_distance = 0.0;  // ||y* - a||_1
  bool unchanged = false;
  bool passed = false;
};

// p0 MAXABS on l_inf^d with ||p0|| = 1, ||x0||_inf = 1, p0(x0) > 1 - delta,
// delta <= eps^2 / 4. Returns p = max((1 - tau) p0, |y*|) attaining at x.
SeminormBpbResult seminorm_bpb_construct(const SeminormModel& p0, const Vector& x0, double delta, double eps);

}  // namespace lipkit
