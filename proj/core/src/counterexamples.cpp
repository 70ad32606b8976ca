#include "lipkit/counterexamples.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lipkit/errors.hpp"
#include "lipkit/random.hpp"

namespace lipkit {

std::vector<Interval> FatCantorSet::removed() const {
  std::vector<Interval> gaps;
  for (std::size_t i = 0; i + 1 < kept.size(); ++i) gaps.push_back({kept[i].hi, kept[i + 1].lo});
  return gaps;
}

FatCantorSet svc_set(int depth) {
  if (depth < 1) throw PreconditionError("svc_set needs depth >= 1");
  if (depth > kMaxCantorDepth) throw RangeError("svc_set depth exceeds " + std::to_string(kMaxCantorDepth));
  FatCantorSet set;
  set.depth = depth;
  set.kept = {{Rational(0), Rational(1)}};
  Rational gap(1);
  for (int i = 1; i <= depth; ++i) {
    gap /= 4;
    std::vector<Interval> next;
    next.reserve(set.kept.size() * 2);
    for (const auto& iv : set.kept) {
      const Rational mid = (iv.lo + iv.hi) / 2;
      next.push_back({iv.lo, mid - gap / 2});
      next.push_back({mid + gap / 2, iv.hi});
    }
    set.kept = std::move(next);
  }
  set.measure = 0;
  for (const auto& iv : set.kept) set.measure += iv.length();
  return set;
}

Rational svc_measure_formula(int depth) {
  Rational m(1), num(1), den(4);
  for (int i = 1; i <= depth; ++i) {
    m -= num / den;
    num *= 2;
    den *= 4;
  }
  return m;
}

PiecewiseLinearFn::PiecewiseLinearFn(std::vector<Rational> breakpoints, std::vector<Rational> slopes)
    : breaks_(std::move(breakpoints)), slopes_(std::move(slopes)) {
  if (breaks_.size() < 2 || slopes_.size() + 1 != breaks_.size()) {
    throw StructuralError("piecewise linear function needs one slope per piece");
  }
  if (breaks_.front() != 0 || breaks_.back() != 1) throw StructuralError("breakpoints must run from 0 to 1");
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    if (!(breaks_[i] < breaks_[i + 1])) throw StructuralError("breakpoints must increase strictly");
  }
  values_.assign(breaks_.size(), Rational(0));
  for (std::size_t i = 0; i < slopes_.size(); ++i) values_[i + 1] = values_[i] + slopes_[i] * (breaks_[i + 1] - breaks_[i]);
}

namespace {

std::size_t piece_index(const std::vector<Rational>& breaks, const Rational& t) {
  if (t < 0 || t > 1) throw RangeError("argument outside [0, 1]");
  auto it = std::upper_bound(breaks.begin(), breaks.end(), t);
  std::size_t i = static_cast<std::size_t>(it - breaks.begin());
  if (i == 0) return 0;
  --i;
  return std::min(i, breaks.size() - 2);
}

}  // namespace

Rational PiecewiseLinearFn::value(const Rational& t) const {
  const std::size_t i = piece_index(breaks_, t);
  return values_[i] + slopes_[i] * (t - breaks_[i]);
}

Rational PiecewiseLinearFn::slope_at(const Rational& t) const { return slopes_[piece_index(breaks_, t)]; }

Rational PiecewiseLinearFn::norm() const {
  Rational m(0);
  for (const auto& s : slopes_) m = std::max(m, abs(s));
  return m;
}

PiecewiseLinearFn cantor_primitive(int depth) {
  const FatCantorSet set = svc_set(depth);
  std::vector<Rational> breaks;
  std::vector<Rational> slopes;
  for (std::size_t i = 0; i < set.kept.size(); ++i) {
    if (i == 0) breaks.push_back(set.kept[i].lo);
    else slopes.push_back(Rational(0));
    if (i > 0) breaks.push_back(set.kept[i].lo);
    breaks.push_back(set.kept[i].hi);
    slopes.push_back(Rational(1));
  }
  return PiecewiseLinearFn(std::move(breaks), std::move(slopes));
}

LipFunctional as_line_functional(const PiecewiseLinearFn& f) {
  std::vector<Rational> values;
  for (const auto& b : f.breakpoints()) values.push_back(f.value(b));
  return LipFunctional::exact(exact_line_space(f.breakpoints()), std::move(values));
}

const char* to_string(SaCase c) { return c == SaCase::SmallNorm ? "small-norm" : "gap-piece"; }

SaBound sa_distance_lower_bound(const FatCantorSet& set, const PiecewiseLinearFn& g, const PiecewiseLinearFn& f) {
  std::vector<Rational> merged(g.breakpoints());
  merged.insert(merged.end(), f.breakpoints().begin(), f.breakpoints().end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  SaBound out;
  out.distance = 0;
  for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
    const Rational d = abs(Rational(g.slope_at(merged[i]) - f.slope_at(merged[i])));
    out.distance = std::max(out.distance, d);
  }
  const Rational nf = f.norm();
  if (nf <= Rational(1, 2)) {
    out.reason = SaCase::SmallNorm;
    out.bound = 1 - nf;
    out.witness = set.kept.front();
    for (std::size_t i = 0; i < f.pieces(); ++i) {
      if (abs(f.slopes()[i]) == nf) {
        out.extreme_piece = f.piece(i);
        break;
      }
    }
    return out;
  }
  const auto gaps = set.removed();
  for (std::size_t i = 0; i < f.pieces(); ++i) {
    if (abs(f.slopes()[i]) != nf) continue;
    const Interval p = f.piece(i);
    for (const auto& gap : gaps) {
      const Rational lo = std::max(p.lo, gap.lo), hi = std::min(p.hi, gap.hi);
      if (lo < hi) {
        out.reason = SaCase::GapPiece;
        out.bound = nf;
        out.witness = {lo, hi};
        out.extreme_piece = p;
        return out;
      }
    }
  }
  throw PreconditionError("no extreme-slope piece of the candidate meets a gap of depth " +
                          std::to_string(set.depth));
}

PiecewiseLinearFn random_sa_candidate(std::uint64_t seed, int max_pieces, const Rational& min_extreme_length) {
  Rng rng(seed);
  constexpr int kGrid = 1024;
  for (;;) {
    const int m = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(max_pieces)));
    std::vector<int> cuts;
    while (static_cast<int>(cuts.size()) < m - 1) {
      const int c = 1 + static_cast<int>(rng.index(kGrid - 1));
      if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.insert(cuts.begin(), 0);
    cuts.push_back(kGrid);
    std::size_t longest = 0;
    for (std::size_t i = 1; i + 1 < cuts.size(); ++i)
      if (cuts[i + 1] - cuts[i] > cuts[longest + 1] - cuts[longest]) longest = i;
    if (Rational(cuts[longest + 1] - cuts[longest], kGrid) < min_extreme_length) continue;
    const int top = 1 + static_cast<int>(rng.index(96));  // extreme slope in 64ths
    std::vector<Rational> breaks, slopes;
    for (int c : cuts) breaks.emplace_back(c, kGrid);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (i == longest) slopes.emplace_back(rng.sign() * top, 64);
      else slopes.emplace_back(static_cast<long long>(rng.index(2 * top + 1)) - top, 64);
    }
    return PiecewiseLinearFn(std::move(breaks), std::move(slopes));
  }
}

SpacePtr mconv_grid(int mesh_exponent, int body_resolution) {
  GridBuilder b(NormedSpaceModel::lp(2, 2.0));
  const int n = 1 << mesh_exponent;
  for (int k = 0; k <= n; ++k) b.add("s" + std::to_string(k), Vector{static_cast<double>(k) / n, 0.0});
  const double h = 1.0 / body_resolution;
  for (int i = -body_resolution / 2; i <= 3 * body_resolution / 2; ++i)
    for (int j = -body_resolution / 2; j <= body_resolution / 2; ++j)
      b.add("b" + std::to_string(i) + "_" + std::to_string(j), Vector{i * h, j * h});
  return b.build();
}

LipFunctional linear_candidate(const SpacePtr& space, const Vector& e, double L) {
  std::vector<double> v(space->size());
  const Vector& c0 = space->coord(space->base());
  for (std::size_t p = 0; p < v.size(); ++p) v[p] = L * (dot(e, space->coord(p)) - dot(e, c0));
  v[space->base()] = 0.0;
  return LipFunctional(space, std::move(v));
}

bool classify_candidate(const LipFunctional& f, double tol) {
  const auto& s = f.space();
  if (!s.has_coordinates()) return false;
  const std::size_t n = s.size(), d = s.coord(0).size();
  Eigen::MatrixXd A(n, d);
  Eigen::VectorXd b(n);
  const Vector& c0 = s.coord(s.base());
  double scale = 1.0;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t k = 0; k < d; ++k) A(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(k)) = s.coord(p)[k] - c0[k];
    b(static_cast<Eigen::Index>(p)) = f[p];
    scale = std::max(scale, std::abs(f[p]));
  }
  const Eigen::VectorXd a = A.colPivHouseholderQr().solve(b);
  return (A * a - b).cwiseAbs().maxCoeff() <= tol * scale;
}

MconvReport mconv_obstruction(const SpacePtr& grid, int depth, const std::vector<LipFunctional>& candidates) {
  const auto& s = *grid;
  if (!s.has_coordinates() || s.coord(0).size() != 2) throw PreconditionError("obstruction needs a 2-D coordinate grid");
  const std::size_t base = s.base();
  std::vector<std::pair<double, std::size_t>> seg;
  for (std::size_t p = 0; p < s.size(); ++p) {
    const Vector& c = s.coord(p);
    if (c[1] == 0.0 && c[0] >= 0.0 && c[0] <= 1.0) seg.emplace_back(c[0], p);
  }
  std::sort(seg.begin(), seg.end());
  if (seg.size() < 2 || seg.front().second != base || seg.back().first != 1.0 || s.dist(base, seg.back().second) != 1.0) {
    throw PreconditionError("grid has no isometric sample of [0, 1] from 0 to a unit-distance point");
  }
  double mesh = 0.0;
  for (std::size_t i = 0; i < seg.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(s.dist(seg[i].second, seg[j].second) - (seg[i].first - seg[j].first)) > 1e-12) {
        throw PreconditionError("segment sample is not isometric");
      }
    }
    if (i > 0) mesh = std::max(mesh, seg[i].first - seg[i - 1].first);
  }
  std::vector<std::size_t> idx;
  std::vector<double> vals;
  for (const auto& [t, p] : seg) {
    idx.push_back(p);
    vals.push_back(t);
  }
  const LipFunctional ext = mcshane_extend(grid, idx, vals, McShaneVariant::Midpoint, 1.0);
  std::vector<double> uv(ext.values());
  for (auto& v : uv) v = std::clamp(v, 0.0, 1.0);
  LipFunctional u(grid, std::move(uv));

  const PiecewiseLinearFn gk = cantor_primitive(depth);
  std::vector<double> nodes, gv;
  for (const auto& bp : gk.breakpoints()) {
    nodes.push_back(to_double(bp));
    gv.push_back(to_double(gk.value(bp)));
  }
  const LipFunctional g_line(line_space(nodes), std::move(gv));
  Composition comp = compose_with_retraction(g_line, u);

  MconvReport rep{std::move(u), comp.h, comp.h_norm, mesh, 0.5 - 2.0 * mesh, comp.max_snap_distance, {}, {}, 0.0, false};
  rep.min_distance = std::numeric_limits<double>::infinity();
  std::size_t family = 0;
  for (const auto& f : candidates) {
    const double d = lip_distance(rep.h, f);
    const bool in = classify_candidate(f);
    rep.distances.push_back(d);
    rep.in_family.push_back(in);
    if (in) {
      ++family;
      rep.min_distance = std::min(rep.min_distance, d);
    }
  }
  rep.passed = family > 0 && rep.min_distance >= rep.threshold;
  return rep;
}

std::vector<DensityCertificate> sa_weak_density_construct(const LipFunctional& g, const std::vector<BallSpec>& balls) {
  const auto& s = g.space();
  const std::size_t n = s.size();
  if (std::abs(lip_norm(g).norm - 1.0) > 1e-9) throw PreconditionError("g must have norm one");
  auto inside = [&](const BallSpec& b, std::size_t p) { return s.dist(b.center, p) < b.radius; };
  for (std::size_t k = 0; k < balls.size(); ++k) {
    const auto& b = balls[k];
    if (b.center >= n || b.witness >= n) throw StructuralError("ball index out of range");
    if (!(b.eps > 0.0 && b.eps < 0.5) || !(b.radius > 0.0)) throw PreconditionError("ball needs eps in (0, 1/2) and r > 0");
    if (inside(b, s.base())) throw PreconditionError("the base point lies in ball " + std::to_string(k));
    const double target = b.eps * b.radius;
    if (!inside(b, b.witness) || std::abs(s.dist(b.center, b.witness) - target) > 1e-12) {
      std::ostringstream os;
      os << "ball " << k << ": no witness at distance eps*r = " << target << "; feasible eps*r values:";
      for (std::size_t p = 0; p < n; ++p)
        if (p != b.center && inside(b, p)) os << ' ' << s.dist(b.center, p);
      throw PreconditionError(os.str());
    }
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t p = 0; p < n; ++p)
        if (inside(b, p) && inside(balls[j], p)) {
          throw PreconditionError("balls " + std::to_string(j) + " and " + std::to_string(k) + " overlap");
        }
  }
  std::vector<DensityCertificate> out;
  for (const auto& b : balls) {
    const std::size_t x = b.center, y = b.witness;
    const int sign = g[y] - g[x] >= 0.0 ? 1 : -1;
    std::vector<std::size_t> idx;
    std::vector<double> vals;
    for (std::size_t p = 0; p < n; ++p) {
      if (p == x) continue;
      if (p == y || !inside(b, p)) {
        idx.push_back(p);
        vals.push_back(g[p]);
      }
    }
    idx.push_back(x);
    vals.push_back(g[y] - sign * (1.0 + 2.0 * b.eps) * s.dist(x, y));
    LipFunctional gn = mcshane_extend(g.space_ptr(), idx, vals, McShaneVariant::Midpoint);
    DensityCertificate c{gn, lip_norm(gn).norm, 1.0 + 2.0 * b.eps, sign > 0 ? y : x, sign > 0 ? x : y, 0.0, sign,
                         true, 0.0};
    c.quotient = gn.quotient(c.x, c.y);
    for (std::size_t p = 0; p < n; ++p) {
      c.max_deviation = std::max(c.max_deviation, std::abs(gn[p] - g[p]));
      if (!inside(b, p) && gn[p] != g[p]) c.support_inside = false;
    }
    out.push_back(std::move(c));
  }
  return out;
}

DensityFixture density_fixture(int count) {
  std::vector<double> pts;
  for (int k = 0; k <= 192; ++k) pts.push_back(k / 64.0);
  std::vector<std::pair<double, double>> pairs;
  for (int n = 2; n < 2 + count; ++n) {
    const double xn = 2.5 - 3.0 * std::ldexp(1.0, -n);
    const double yn = xn + std::ldexp(1.0, -2 * n);
    pairs.emplace_back(xn, yn);
    pts.push_back(xn);
    pts.push_back(yn);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  DensityFixture fx{line_space(pts), {}};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double r = std::ldexp(1.0, -static_cast<int>(i) - 2);
    fx.balls.push_back({*fx.space->find_coord(Vector{pairs[i].first}), r, r, *fx.space->find_coord(Vector{pairs[i].second})});
  }
  return fx;
}

std::vector<LipFunctional> separated_bumps(const SpacePtr& line, int count, std::uint64_t seed) {
  const auto& s = *line;
  if (!s.has_coordinates() || s.coord(0).size() != 1) throw PreconditionError("bumps need a 1-D coordinate grid");
  if (count < 1) throw PreconditionError("need at least one bump");
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t p = 0; p < s.size(); ++p) order.emplace_back(s.coord(p)[0], p);
  std::sort(order.begin(), order.end());
  if (order.front().second != s.base()) throw PreconditionError("the base must be the leftmost grid point");
  // Slot k owns nodes [1 + k * width, (k + 1) * width]; a tent needs three nodes.
  const std::size_t n = order.size() - 1;
  const std::size_t width = n / static_cast<std::size_t>(count);
  if (width < 3) throw PreconditionError("grid too small for " + std::to_string(count) + " bumps");
  Rng rng(seed);
  std::vector<LipFunctional> out;
  for (int k = 0; k < count; ++k) {
    const std::size_t lo = 1 + static_cast<std::size_t>(k) * width, hi = lo + width - 1;
    const std::size_t half_max = (hi - lo) / 2;
    const std::size_t half = 1 + rng.index(half_max);
    const std::size_t center = lo + half + rng.index(hi - lo - 2 * half + 1);
    const double c = order[center].first;
    const double w = c - order[center - half].first;
    std::vector<double> v(s.size(), 0.0);
    for (std::size_t i = center - half; i <= center + half; ++i) v[order[i].second] = std::max(0.0, w - std::abs(order[i].first - c));
    out.emplace_back(line, std::move(v));
  }
  return out;
}

C0Report c0_estimate_check(const std::vector<LipFunctional>& functionals, const std::vector<double>& coefficients,
                           double locality_eps) {
  if (functionals.size() != coefficients.size() || functionals.empty()) {
    throw StructuralError("need one coefficient per functional");
  }
  if (!(locality_eps > 0.0 && locality_eps < 1.0)) throw PreconditionError("locality scale must lie in (0, 1)");
  const auto& s = functionals.front().space();
  std::vector<std::vector<std::size_t>> supports;
  for (const auto& f : functionals) {
    if (f.size() != s.size()) throw StructuralError("functionals live on different spaces");
    if (std::abs(lip_norm(f).norm - 1.0) > 1e-9) throw PreconditionError("every functional must have norm one");
    if (!locality_witness(f, locality_eps)) {
      throw PreconditionError("no locality witness at scale " + std::to_string(locality_eps));
    }
    std::vector<std::size_t> supp;
    for (std::size_t p = 0; p < f.size(); ++p)
      if (f[p] != 0.0) supp.push_back(p);
    supports.push_back(std::move(supp));
  }
  C0Report rep;
  rep.min_separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < supports.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      for (std::size_t p : supports[i])
        for (std::size_t q : supports[j]) {
          const double d = p == q ? 0.0 : s.dist(p, q);
          if (d <= 0.0) throw PreconditionError("supports are not separated");
          rep.min_separation = std::min(rep.min_separation, d);
        }
  LipFunctional sum = LipFunctional::zero(functionals.front().space_ptr());
  if (sum.is_exact()) sum = LipFunctional(sum.space_ptr(), std::vector<double>(s.size(), 0.0));
  for (std::size_t j = 0; j < functionals.size(); ++j) {
    sum = sum.plus(functionals[j], coefficients[j]);
    rep.rhs = std::max(rep.rhs, std::abs(coefficients[j]));
  }
  rep.lhs = lip_norm(sum).norm;
  rep.deviation = std::abs(rep.lhs - rep.rhs);
  rep.tolerance = rep.rhs * locality_eps / (1.0 - locality_eps) + locality_eps;
  rep.within = rep.deviation <= rep.tolerance;
  return rep;
}

}  // namespace lipkit
