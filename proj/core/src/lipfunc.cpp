#include "lipkit/lipfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lipkit/errors.hpp"

namespace lipkit {

LipFunctional::LipFunctional(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw StructuralError("functional without a space");
  if (values_.size() != space_->size()) throw StructuralError("value count does not match the space");
  for (double v : values_) {
    if (!std::isfinite(v)) throw StructuralError("non-finite functional value");
  }
  if (values_[space_->base()] != 0.0) throw PreconditionError("functional must vanish at the base point");
}

LipFunctional LipFunctional::exact(SpacePtr space, std::vector<Rational> values) {
  if (!space || !space->has_exact()) throw StructuralError("exact functional needs a space with exact distances");
  if (values.size() != space->size()) throw StructuralError("value count does not match the space");
  std::vector<double> approx(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) approx[i] = to_double(values[i]);
  if (values[space->base()] != 0) throw PreconditionError("functional must vanish at the base point");
  LipFunctional f(std::move(space), std::move(approx));
  f.exact_ = std::move(values);
  return f;
}

LipFunctional LipFunctional::zero(SpacePtr space) {
  const std::size_t n = space->size();
  if (space->has_exact()) return exact(std::move(space), std::vector<Rational>(n));
  return LipFunctional(std::move(space), std::vector<double>(n, 0.0));
}

double LipFunctional::quotient(std::size_t x, std::size_t y) const {
  return (values_[x] - values_[y]) / space_->dist(x, y);
}

Rational LipFunctional::exact_quotient(std::size_t x, std::size_t y) const {
  if (!exact_) throw PreconditionError("functional has no exact values");
  return ((*exact_)[x] - (*exact_)[y]) / space_->exact_dist(x, y);
}

LipFunctional LipFunctional::scaled(double a) const {
  std::vector<double> v(values_);
  for (auto& x : v) x *= a;
  return LipFunctional(space_, std::move(v));
}

LipFunctional LipFunctional::plus(const LipFunctional& other, double a) const {
  if (other.size() != size()) throw StructuralError("functionals live on different spaces");
  std::vector<double> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += a * other.values_[i];
  return LipFunctional(space_, std::move(v));
}

NormResult lip_norm(const LipFunctional& f) {
  const std::size_t n = f.size();
  NormResult r;
  if (f.is_exact()) {
    std::optional<Rational> best;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        if (x == y) continue;
        Rational q = f.exact_quotient(x, y);
        if (!best || q > *best) {
          best = q;
          r.x = x;
          r.y = y;
        }
      }
    r.exact = *best;
    r.norm = to_double(*best);
    return r;
  }
  r.norm = -std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      const double q = f.quotient(x, y);
      if (q > r.norm) {
        r.norm = q;
        r.x = x;
        r.y = y;
      }
    }
  return r;
}

double lip_norm_abs(const LipFunctional& f) {
  double best = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x)
    for (std::size_t y = x + 1; y < f.size(); ++y)
      best = std::max(best, std::abs(f[x] - f[y]) / f.space().dist(x, y));
  return best;
}

double lip_distance(const LipFunctional& f, const LipFunctional& g) {
  return lip_norm(f.plus(g, -1.0)).norm;
}

const char* to_string(AttainmentMode mode) {
  switch (mode) {
    case AttainmentMode::Strong: return "STRONG";
    case AttainmentMode::Directional: return "DIRECTIONAL";
    case AttainmentMode::LocalDirectional: return "LOCAL_DIRECTIONAL";
  }
  return "unknown";
}

std::optional<AttainmentCertificate> strongly_attains(const LipFunctional& f, double tol) {
  const NormResult nr = lip_norm(f);
  AttainmentCertificate cert;
  cert.mode = AttainmentMode::Strong;
  cert.norm_value = nr.norm;
  cert.exact_norm = nr.exact;
  const std::size_t n = f.size();
  if (nr.exact) {
    if (*nr.exact == 0) throw DegenerateError("zero functional has no attainment pairs");
    const Rational threshold = *nr.exact - Rational(tol);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (x != y && f.exact_quotient(x, y) >= threshold) cert.pairs.push_back({x, y, f.quotient(x, y), 0});
  } else {
    if (nr.norm <= 0.0) throw DegenerateError("zero functional has no attainment pairs");
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (x != y && f.quotient(x, y) >= nr.norm - tol) cert.pairs.push_back({x, y, f.quotient(x, y), 0});
  }
  if (cert.pairs.empty()) return std::nullopt;
  const auto& space = f.space();
  if (space.has_coordinates()) {
    const auto& p = cert.pairs.front();
    const Vector diff = subtract(space.coord(p.x), space.coord(p.y));
    if (space.model()) cert.direction = space.model()->normalized(diff);
  }
  return cert;
}

const char* to_string(McShaneVariant v) {
  switch (v) {
    case McShaneVariant::Inf: return "INF";
    case McShaneVariant::Sup: return "SUP";
    case McShaneVariant::Midpoint: return "MIDPOINT";
  }
  return "unknown";
}

LipFunctional mcshane_extend(const SpacePtr& target, const std::vector<std::size_t>& indices,
                             const std::vector<double>& values, McShaneVariant variant,
                             std::optional<double> lip) {
  if (indices.size() != values.size()) throw StructuralError("index and value lists differ in length");
  bool has_base = false;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= target->size()) throw StructuralError("extension index out of range");
    if (indices[k] == target->base()) {
      has_base = true;
      if (values[k] != 0.0) throw PreconditionError("prescribed value at the base must be zero");
    }
  }
  if (!has_base) throw StructuralError("extension subset must contain the base point");
  double L = 0.0;
  if (lip) {
    L = *lip;
  } else {
    for (std::size_t a = 0; a < indices.size(); ++a)
      for (std::size_t b = 0; b < indices.size(); ++b)
        if (indices[a] != indices[b])
          L = std::max(L, (values[a] - values[b]) / target->dist(indices[a], indices[b]));
  }
  const std::size_t n = target->size();
  std::vector<double> out(n);
  for (std::size_t x = 0; x < n; ++x) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const double d = target->dist(x, indices[k]);
      lo = std::min(lo, values[k] + L * d);
      hi = std::max(hi, values[k] - L * d);
    }
    switch (variant) {
      case McShaneVariant::Inf: out[x] = lo; break;
      case McShaneVariant::Sup: out[x] = hi; break;
      case McShaneVariant::Midpoint: out[x] = 0.5 * (lo + hi); break;
    }
  }
  for (std::size_t k = 0; k < indices.size(); ++k) out[indices[k]] = values[k];
  return LipFunctional(target, std::move(out));
}

LipFunctional mcshane_extend(const LipFunctional& f_sub, const SpacePtr& target, McShaneVariant variant) {
  const auto& sub = f_sub.space();
  std::vector<std::size_t> indices;
  const bool by_coord = sub.has_coordinates() && target->has_coordinates();
  for (std::size_t i = 0; i < sub.size(); ++i) {
    std::optional<std::size_t> j =
        by_coord ? target->find_coord(sub.coord(i), kDedupTolerance) : target->find_label(sub.point(i).label);
    if (!j) throw StructuralError("point '" + sub.point(i).label + "' is not in the target space");
    indices.push_back(*j);
  }
  if (indices[sub.base()] != target->base()) throw StructuralError("base points do not correspond");
  return mcshane_extend(target, indices, f_sub.values(), variant, lip_norm(f_sub).norm);
}

namespace {

void check_triple(const FinitePointedMetricSpace& s, const BetweennessTriple& t, double tol) {
  if (t.x >= s.size() || t.y >= s.size() || t.z >= s.size()) throw StructuralError("triple index out of range");
  const double defect = std::abs(s.dist(t.x, t.y) - s.dist(t.x, t.z) - s.dist(t.z, t.y));
  if (defect > tol) throw PreconditionError("triple is not metrically collinear");
}

}  // namespace

double interpolation_residual(const LipFunctional& f, const BetweennessTriple& t, double tol) {
  const auto& s = f.space();
  check_triple(s, t, tol);
  const double interp = (s.dist(t.z, t.y) * f[t.x] + s.dist(t.x, t.z) * f[t.y]) / s.dist(t.x, t.y);
  return std::abs(f[t.z] - interp);
}

Rational interpolation_residual_exact(const LipFunctional& f, const BetweennessTriple& t) {
  const auto& s = f.space();
  if (!f.is_exact()) throw PreconditionError("functional has no exact values");
  if (s.exact_dist(t.x, t.y) != s.exact_dist(t.x, t.z) + s.exact_dist(t.z, t.y)) {
    throw PreconditionError("triple is not metrically collinear");
  }
  const auto& v = f.exact_values();
  const Rational interp =
      (s.exact_dist(t.z, t.y) * v[t.x] + s.exact_dist(t.x, t.z) * v[t.y]) / s.exact_dist(t.x, t.y);
  return abs(Rational(v[t.z] - interp));
}

Composition compose_with_retraction(const LipFunctional& g, const LipFunctional& u) {
  const auto& gs = g.space();
  if (!gs.has_coordinates() || gs.coord(0).size() != 1) throw StructuralError("g must live on a 1-D grid");
  std::vector<std::pair<double, double>> nodes;
  for (std::size_t i = 0; i < gs.size(); ++i) nodes.emplace_back(gs.coord(i)[0], g[i]);
  std::sort(nodes.begin(), nodes.end());
  if (nodes.front().first > 0.0 || nodes.back().first < 1.0) throw StructuralError("g's grid must cover [0,1]");

  std::vector<double> hv(u.size());
  double snap = 0.0;
  for (std::size_t x = 0; x < u.size(); ++x) {
    const double t = u[x];
    if (t < 0.0 || t > 1.0) throw RangeError("retraction value outside [0,1]");
    auto it = std::lower_bound(nodes.begin(), nodes.end(), std::make_pair(t, -std::numeric_limits<double>::infinity()));
    if (it->first == t) {
      hv[x] = it->second;
      continue;
    }
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    snap = std::max(snap, std::min(t - lo.first, hi.first - t));
    const double s = (t - lo.first) / (hi.first - lo.first);
    hv[x] = (1.0 - s) * lo.second + s * hi.second;
  }
  hv[u.space().base()] = 0.0;
  Composition c{LipFunctional(u.space_ptr(), std::move(hv)), snap, 0.0, 0.0, false};
  c.h_norm = lip_norm(c.h).norm;
  c.bound = lip_norm_abs(g) * lip_norm_abs(u);
  c.bound_holds = c.h_norm <= c.bound + 1e-9;
  return c;
}

std::optional<LocalityWitness> locality_witness(const LipFunctional& f, double eps) {
  const double norm = lip_norm(f).norm;
  if (norm <= 0.0) throw DegenerateError("locality needs a nonzero functional");
  std::optional<LocalityWitness> best;
  const auto& s = f.space();
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = 0; b < f.size(); ++b) {
      if (a == b || s.dist(a, b) >= eps) continue;
      const double q = f.quotient(a, b);
      if (q > norm - eps && (!best || q > best->quotient)) best = LocalityWitness{a, b, s.dist(a, b), q};
    }
  return best;
}

}  // namespace lipkit
