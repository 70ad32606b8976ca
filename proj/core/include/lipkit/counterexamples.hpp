#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lipkit/lipfunc.hpp"
#include "lipkit/rational.hpp"

namespace lipkit {

struct Interval {
  Rational lo, hi;
  Rational length() const { return hi - lo; }
};

struct FatCantorSet {
  int depth = 0;
  std::vector<Interval> kept;  // sorted, pairwise disjoint, closed
  Rational measure;
  std::vector<Interval> removed() const;  // open gaps between kept intervals
};

inline constexpr int kMaxCantorDepth = 20;

// Smith-Volterra-Cantor construction: at step i remove the open middle
// interval of length 4^-i from each of the 2^(i-1) current intervals.
// PreconditionError for depth < 1, RangeError beyond kMaxCantorDepth.
FatCantorSet svc_set(int depth);

// 1 - sum_{i=1..k} 2^(i-1) / 4^i.
Rational svc_measure_formula(int depth);

// Continuous piecewise linear function on [0, 1] with value 0 at 0.
class PiecewiseLinearFn {
 public:
  // breakpoints 0 = b_0 < ... < b_m = 1, one slope per piece.
  PiecewiseLinearFn(std::vector<Rational> breakpoints, std::vector<Rational> slopes);

  const std::vector<Rational>& breakpoints() const { return breaks_; }
  const std::vector<Rational>& slopes() const { return slopes_; }
  std::size_t pieces() const { return slopes_.size(); }
  Interval piece(std::size_t i) const { return {breaks_[i], breaks_[i + 1]}; }

  Rational value(const Rational& t) const;
  Rational slope_at(const Rational& t) const;  // slope of the piece containing t (right-continuous)
  Rational norm() const;                       // max |slope|

 private:
  std::vector<Rational> breaks_;
  std::vector<Rational> slopes_;
  std::vector<Rational> values_;  // at breakpoints
};

// g_k: slope 1 on the kept intervals of svc_set(depth), 0 on the gaps.
PiecewiseLinearFn cantor_primitive(int depth);

// The same function as an exact functional on the space of its breakpoints.
LipFunctional as_line_functional(const PiecewiseLinearFn& f);

enum class SaCase { SmallNorm, GapPiece };
const char* to_string(SaCase c);

struct SaBound {
  Rational distance;  // ||g - f|| = sup |g' - f'|
  Rational bound;     // certified lower bound
  SaCase reason = SaCase::SmallNorm;
  Interval witness;   // kept piece (small norm) or gap overlap (extreme piece)
  Interval extreme_piece;
};

// Exact ||g - f|| for g = cantor_primitive and a strong-attainment candidate
// f, with the case split: ||f|| <= 1/2 gives 1 - ||f|| on a kept piece;
// otherwise an extreme-slope piece of f overlapping a gap of g gives ||f||.
// PreconditionError when no extreme piece of f meets a gap in positive length.
SaBound sa_distance_lower_bound(const FatCantorSet& set, const PiecewiseLinearFn& g, const PiecewiseLinearFn& f);

// Random candidate with at most max_pieces pieces whose extreme-slope piece
// has length >= min_extreme_length; dyadic breakpoints and slopes.
PiecewiseLinearFn random_sa_candidate(std::uint64_t seed, int max_pieces = 16,
                                      const Rational& min_extreme_length = Rational(1, 32));

// 2-D l_2 grid: the segment [0, (1,0)] at mesh 2^-mesh_exponent plus a square
// lattice of the body [-1/2, 3/2] x [-1/2, 1/2] with spacing 1/body_resolution.
SpacePtr mconv_grid(int mesh_exponent = 7, int body_resolution = 16);

// Linear candidate z -> L <e, z> on a coordinate grid.
LipFunctional linear_candidate(const SpacePtr& space, const Vector& e, double L);

// True when f is (numerically) linear in the coordinates, the candidate family.
bool classify_candidate(const LipFunctional& f, double tol = 1e-9);

struct MconvReport {
  LipFunctional u;
  LipFunctional h;
  double h_norm = 0.0;
  double mesh = 0.0;
  double threshold = 0.0;  // 1/2 - 2 mesh
  double snap = 0.0;
  std::vector<double> distances;
  std::vector<bool> in_family;
  double min_distance = 0.0;  // over in-family candidates
  bool passed = false;
};

// u := clamp(McShane extension of the segment identity, 0, 1), h := g_k o u;
// audits ||h - f|| over the candidates. PreconditionError when the grid has
// no isometric sample of [0, 1] from 0 to a unit-distance point.
MconvReport mconv_obstruction(const SpacePtr& grid, int depth, const std::vector<LipFunctional>& candidates);

struct BallSpec {
  std::size_t center = 0;
  double radius = 0.0;
  double eps = 0.0;
  std::size_t witness = 0;
};

struct DensityCertificate {
  LipFunctional g_n;
  double norm = 0.0;
  double expected_norm = 0.0;  // 1 + 2 eps_n
  std::size_t x = 0, y = 0;    // attaining ordered pair
  double quotient = 0.0;
  int sign = 1;                // s_n, with sign(0) = +1
  bool support_inside = false; // g_n = g outside U_n
  double max_deviation = 0.0;  // max |g_n - g|
};

// One strongly attaining g_n per ball with ||g_n|| = 1 + 2 eps_n and g_n = g
// off the ball. PreconditionError for overlapping balls, 0 in a ball, or a
// misplaced witness.
std::vector<DensityCertificate> sa_weak_density_construct(const LipFunctional& g, const std::vector<BallSpec>& balls);

// Line grid on [0, 3] with points k/64 and, for n = 1..count, x_n = 5/2 - 3 * 2^-n
// and y_n = x_n + 4^-n; the balls use r_n = eps_n = 2^-n.
struct DensityFixture {
  SpacePtr space;
  std::vector<BallSpec> balls;
};
DensityFixture density_fixture(int count);

struct C0Report {
  double lhs = 0.0;
  double rhs = 0.0;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool within = false;
  double min_separation = 0.0;
};

// `count` tents max(w - |t - c|, 0) with disjoint supports on a uniform
// line grid, centers and widths on grid nodes, each of norm one.
// PreconditionError when the grid cannot hold them.
std::vector<LipFunctional> separated_bumps(const SpacePtr& line, int count, std::uint64_t seed);

// ||sum a_j f_j|| against max |a_k| for disjointly supported unit functionals;
// tolerance rhs * eta / (1 - eta) + eta with eta = locality_eps.
C0Report c0_estimate_check(const std::vector<LipFunctional>& functionals, const std::vector<double>& coefficients,
                           double locality_eps);

}  // namespace lipkit
