#include "lipkit/ucx.hpp"

#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "lipkit/errors.hpp"
#include "lipkit/random.hpp"

namespace lipkit {

namespace {

void require_uniformly_convex(const NormedSpaceModel& model) {
  if (!model.uniformly_convex()) throw PreconditionError("model is not uniformly convex: " + model.describe());
}

struct ModulusProblem {
  const NormedSpaceModel* model;
  double half_eps;
  std::size_t dim;
};

// Largest t with ||t e + d|| <= 1 and ||t e - d|| <= 1, e and d taken from the
// unnormalized parameter vector.
double max_midpoint(const ModulusProblem& mp, const double* v) {
  const std::size_t d = mp.dim;
  Vector e(v, v + d), dir(v + d, v + 2 * d);
  const double ne = mp.model->norm(e), nd = mp.model->norm(dir);
  if (ne < 1e-12 || nd < 1e-12) return 0.0;
  for (auto& c : e) c /= ne;
  for (auto& c : dir) c *= mp.half_eps / nd;
  Vector buf(d);
  auto worst = [&](double t) {
    double m = 0.0;
    for (int sgn : {1, -1}) {
      for (std::size_t i = 0; i < d; ++i) buf[i] = t * e[i] + sgn * dir[i];
      m = std::max(m, mp.model->norm(buf));
    }
    return m;
  };
  if (worst(0.0) > 1.0) return 0.0;
  double lo = 0.0, hi = 2.0;
  for (int it = 0; it < 64; ++it) {
    const double mid = 0.5 * (lo + hi);
    (worst(mid) <= 1.0 ? lo : hi) = mid;
  }
  return lo;
}

double gsl_objective(const gsl_vector* v, void* params) {
  const auto* mp = static_cast<const ModulusProblem*>(params);
  return -max_midpoint(*mp, gsl_vector_const_ptr(v, 0));
}

double nelder_mead(ModulusProblem& mp, std::vector<double>& start, double step) {
  const std::size_t n = start.size();
  gsl_multimin_function fn{&gsl_objective, n, &mp};
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* ss = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x, i, start[i]);
  gsl_vector_set_all(ss, step);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x, ss);
  for (int it = 0; it < 4000; ++it) {
    if (gsl_multimin_fminimizer_iterate(s) != 0) break;
    if (gsl_multimin_fminimizer_size(s) < 1e-11) break;
  }
  for (std::size_t i = 0; i < n; ++i) start[i] = gsl_vector_get(s->x, i);
  const double value = -s->fval;
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(ss);
  gsl_vector_free(x);
  return value;
}

std::mutex cache_mutex;
std::map<std::pair<std::string, double>, double> modulus_cache;

double delta_from_modulus(double eps, double delta_x) {
  return std::min(eps * eps / 2.0, 0.5 * std::pow(delta_x / 2.0, 2)) * (1.0 - 1e-6);
}

Vector exposed_point(const NormedSpaceModel& model, const Vector& fstar) {
  if (model.kind() == NormKind::Lp) {
    const double q = model.q();
    Vector x(fstar.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::copysign(std::pow(std::abs(fstar[i]), q - 1.0), fstar[i]);
    return model.normalized(x);
  }
  Vector best;
  double val = -std::numeric_limits<double>::infinity();
  for (const auto& v : model.unit_ball_vertices()) {
    if (dot(fstar, v) > val) {
      val = dot(fstar, v);
      best = v;
    }
  }
  return best;
}

Vector coord_direction(const FinitePointedMetricSpace& s, std::size_t a, std::size_t b) {
  return s.model()->normalized(subtract(s.coord(a), s.coord(b)));
}

}  // namespace

double modulus_convexity_l2(double eps) { return 1.0 - std::sqrt(1.0 - eps * eps / 4.0); }

ModulusReport modulus_convexity_report(const NormedSpaceModel& model, double eps, int restarts, std::uint64_t seed) {
  require_uniformly_convex(model);
  if (!(eps > 0.0 && eps <= 2.0)) throw PreconditionError("modulus needs eps in (0, 2]");
  ModulusProblem mp{&model, eps / 2.0, model.dim()};
  Rng rng(seed);
  ModulusReport rep;
  double best = -1.0;
  std::vector<double> best_point;
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> start = rng.normal_vector(2 * model.dim());
    double val = nelder_mead(mp, start, 0.3);
    val = std::max(val, nelder_mead(mp, start, 1e-3));
    rep.restarts.push_back(1.0 - val);
    if (val > best) {
      best = val;
      best_point = start;
    }
  }
  best = std::max(best, nelder_mead(mp, best_point, 1e-5));
  rep.delta = 1.0 - best;
  for (double v : rep.restarts)
    if (std::abs(v - rep.delta) <= 1e-6) ++rep.agreeing;
  return rep;
}

double modulus_convexity(const NormedSpaceModel& model, double eps) {
  require_uniformly_convex(model);
  const auto key = std::make_pair(model.describe(), eps);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = modulus_cache.find(key);
    if (it != modulus_cache.end()) return it->second;
  }
  const double d = modulus_convexity_report(model, eps).delta;
  std::lock_guard<std::mutex> lock(cache_mutex);
  modulus_cache.emplace(key, d);
  return d;
}

double delta_for_eps(const NormedSpaceModel& model, double eps) {
  if (!(eps > 0.0 && eps <= 0.5)) throw PreconditionError("delta_for_eps needs eps in (0, 1/2]");
  return delta_from_modulus(eps, modulus_convexity(model, eps));
}

SliceReport slice_diameter_check(const NormedSpaceModel& model, const Vector& fstar, double delta,
                                 std::size_t sample_count, std::uint64_t seed) {
  if (std::abs(model.dual_norm(fstar) - 1.0) > 1e-9) throw PreconditionError("slice functional must have dual norm one");
  if (!(delta > 0.0)) throw PreconditionError("slice depth must be positive");
  const Vector x0 = exposed_point(model, fstar);
  const std::size_t d = model.dim();
  Rng rng(seed);
  std::vector<Vector> pts{x0};
  SliceReport rep;
  const std::size_t cap = 200 * std::max<std::size_t>(sample_count, 1);
  while (pts.size() < sample_count && rep.attempts < cap) {
    ++rep.attempts;
    const double radius = std::ldexp(1.0, -static_cast<int>(rng.index(31)));
    Vector y = rng.normal_vector(d);
    for (std::size_t i = 0; i < d; ++i) y[i] = x0[i] + radius * y[i];
    const double ny = model.norm(y);
    if (ny == 0.0) continue;
    for (auto& c : y) c /= ny;
    const double c = dot(fstar, y);
    if (c <= 1.0 - delta) continue;
    const double lo = std::max(0.0, (1.0 - delta) / c);
    const double s = rng.uniform(lo, 1.0);
    for (auto& v : y) v *= s;
    if (dot(fstar, y) <= 1.0 - delta) continue;
    pts.push_back(std::move(y));
  }
  rep.samples = pts.size();
  if (pts.size() < 2) throw SamplerExhausted("slice sampler accepted fewer than two points");
  Vector buf(d);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      for (std::size_t k = 0; k < d; ++k) buf[k] = pts[i][k] - pts[j][k];
      rep.max_pair_distance = std::max(rep.max_pair_distance, model.norm(buf));
    }
  return rep;
}

Vector duality_map(const NormedSpaceModel& model, const Vector& u) {
  require_uniformly_convex(model);
  const double n = model.norm(u);
  if (n == 0.0) throw PreconditionError("duality map of the zero vector");
  if (std::abs(n - 1.0) > 1e-9) throw PreconditionError("duality map needs a unit vector");
  return model.dual_map(u);
}

TildePair select_tilde_pair(const LipFunctional& f, std::size_t x, std::size_t y, double delta, double eps) {
  const auto& s = f.space();
  if (!s.has_coordinates() || !s.model()) throw StructuralError("tilde pair selection needs a coordinate grid");
  if (!(f.quotient(x, y) > 1.0 - delta)) throw PreconditionError("f-quotient at (x, y) is not above 1 - delta");
  const auto& model = *s.model();
  const Vector& cx = s.coord(x);
  const Vector& cy = s.coord(y);
  const Vector diff = subtract(cx, cy);
  const double diff2 = dot(diff, diff);
  // Parameter t of points y + t (x - y) lying on the segment.
  std::vector<std::pair<double, std::size_t>> seg;
  for (std::size_t p = 0; p < s.size(); ++p) {
    const Vector rel = subtract(s.coord(p), cy);
    const double t = dot(rel, diff) / diff2;
    if (t < -1e-12 || t > 1.0 + 1e-12) continue;
    Vector proj(cy);
    for (std::size_t k = 0; k < proj.size(); ++k) proj[k] += t * diff[k];
    if (model.distance(proj, s.coord(p)) <= 1e-12) seg.emplace_back(t, p);
  }
  std::sort(seg.begin(), seg.end());
  struct Option {
    double sep;
    std::size_t a, b;
  };
  std::vector<Option> options;
  for (std::size_t i = 0; i < seg.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (seg[i].first > seg[j].first) options.push_back({s.dist(seg[i].second, seg[j].second), seg[i].second, seg[j].second});
  std::stable_sort(options.begin(), options.end(), [](const Option& l, const Option& r) { return l.sep > r.sep; });
  const std::size_t base = s.base();
  for (const auto& o : options) {
    const double limit = 0.25 * std::min({eps, s.dist(o.a, base), s.dist(o.b, base)});
    if (!(o.sep < limit)) continue;
    const double q = f.quotient(o.a, o.b);
    if (q > 1.0 - delta) return {o.a, o.b, o.sep, q};
  }
  double scale = std::min({eps, s.dist(x, base), s.dist(y, base)});
  if (scale <= 0.0) scale = eps;
  const int needed = static_cast<int>(std::ceil(8.0 * s.dist(x, y) / scale)) + 1;
  std::ostringstream os;
  os << "no segment pair of " << seg.size() << " grid points meets the tilde constraints; try resolution " << needed;
  throw GridTooCoarseError(os.str(), needed);
}

LipFunctional bump_functional(const SpacePtr& space, std::size_t xt, std::size_t yt) {
  const double r = space->dist(xt, yt);
  if (space->dist(xt, space->base()) < r) throw PreconditionError("the base point lies inside the bump's ball");
  std::vector<double> v(space->size());
  for (std::size_t z = 0; z < v.size(); ++z) v[z] = std::max(r - space->dist(xt, z), 0.0);
  v[space->base()] = 0.0;
  return LipFunctional(space, std::move(v));
}

LipFunctional restrict_to_grid(const AmbientFunctional& f, const SpacePtr& space) {
  std::vector<double> v(space->size());
  const double at_base = f.eval(space->coord(space->base()));
  for (std::size_t p = 0; p < v.size(); ++p) v[p] = f.eval(space->coord(p)) - at_base;
  v[space->base()] = 0.0;
  return LipFunctional(space, std::move(v));
}

AmbientFunctional perturbed_linear(const NormedSpaceModel& model, const Vector& direction, double s,
                                   std::vector<Vector> cone_centers) {
  const Vector xs = model.dual_map(model.normalized(direction));
  std::ostringstream os;
  os << "perturbed_linear(s=" << s << ", cones=" << cone_centers.size() << ")";
  auto eval = [model, xs, s, cones = std::move(cone_centers)](const Vector& z) {
    double cone = 0.0;
    if (!cones.empty()) {
      cone = -std::numeric_limits<double>::infinity();
      for (const auto& c : cones) cone = std::max(cone, -model.distance(z, c));
    }
    return (1.0 - s) * dot(xs, z) + s * cone;
  };
  return {os.str(), eval};
}

bool GridStepReport::passed() const {
  return std::all_of(audits.begin(), audits.end(), [](const AuditEntry& a) { return a.passed(); });
}

GridStepReport lipbpb_on_grid(const LipFunctional& f, std::size_t x, std::size_t y, double eps, int n_max) {
  const auto& s = f.space();
  if (!s.model() || !s.has_coordinates()) throw StructuralError("pipeline needs a coordinate grid");
  const NormedSpaceModel& model = *s.model();
  require_uniformly_convex(model);
  if (!(eps > 0.0 && eps <= 0.5)) throw PreconditionError("pipeline needs eps in (0, 1/2]");
  if (std::abs(lip_norm(f).norm - 1.0) > 1e-9) throw PreconditionError("pipeline needs ||f|| = 1");
  const double delta_x = modulus_convexity(model, eps);
  const double delta = delta_from_modulus(eps, delta_x);
  if (!(f.quotient(x, y) > 1.0 - delta)) {
    std::ostringstream os;
    os << "f-quotient " << f.quotient(x, y) << " at (x, y) is not above 1 - delta = " << 1.0 - delta;
    throw PreconditionError(os.str());
  }
  const TildePair tilde = select_tilde_pair(f, x, y, delta, eps);
  const SpacePtr sp = f.space_ptr();
  LipFunctional bump = bump_functional(sp, tilde.x, tilde.y);
  const Vector xstar = duality_map(model, coord_direction(s, tilde.x, tilde.y));
  std::vector<double> hv(s.size());
  for (std::size_t p = 0; p < hv.size(); ++p) hv[p] = 0.5 * (bump[p] + dot(xstar, s.coord(p)));
  hv[s.base()] = 0.0;
  LipFunctional h(sp, std::move(hv));
  const double h_scale = 1.0 / lip_norm(h).norm;
  h = h.scaled(h_scale);

  LipBpbTrace trace = lip_bpb_preliminary(f, tilde.x, tilde.y, h, delta, n_max);

  const Vector dir0 = coord_direction(s, x, y);
  double worst_dir = 0.0, worst_sep = 0.0, worst_seg = 0.0, worst_support = 0.0;
  double min_slice = std::numeric_limits<double>::infinity();
  for (const auto& e : trace.entries) {
    const Vector dir = coord_direction(s, e.v, e.w);
    worst_dir = std::max(worst_dir, model.distance(dir0, dir));
    worst_sep = std::max(worst_sep, s.dist(e.v, e.w));
    worst_seg = std::max(worst_seg, distance_to_segment(model, s.coord(e.v), s.coord(x), s.coord(y)));
    worst_support = std::max(worst_support, s.dist(e.v, tilde.x));
    min_slice = std::min(min_slice, dot(xstar, dir));
  }
  std::vector<AuditEntry> audits{
      {"norm_distance", trace.correction.dist_f, eps, true},
      {"direction", worst_dir, eps, true},
      {"pair_separation", worst_sep, eps, true},
      {"segment_distance", worst_seg, eps, true},
      {"slice_membership", min_slice, 1.0 - delta_x, false},
      {"bump_support", worst_support, tilde.separation, true},
  };
  return GridStepReport{eps,          delta, delta_x, tilde, tilde.separation, xstar, h_scale, std::move(bump),
                        std::move(h), std::move(trace), std::move(audits)};
}

PipelineReport lipbpb_uniformly_convex(const NormedSpaceModel& model, const AmbientFunctional& f, const Vector& x,
                                       const Vector& y, double eps, const PipelineOptions& options) {
  require_uniformly_convex(model);
  if (!(eps > 0.0 && eps <= 0.5)) throw PreconditionError("pipeline needs eps in (0, 1/2]");
  const double delta = delta_for_eps(model, eps);

  auto base_builder = [&]() {
    GridBuilder b(model);
    b.add("x", x);
    b.add("y", y);
    b.add_segment("seg", y, x, options.segment_points - 1);
    return b;
  };
  auto normalized_on = [&](const SpacePtr& sp, double& scale) {
    LipFunctional g = restrict_to_grid(f, sp);
    const double n = lip_norm(g).norm;
    if (n <= 0.0) throw DegenerateError("ambient functional vanishes on the grid");
    scale = 1.0 / n;
    return g.scaled(scale);
  };

  GridBuilder builder = base_builder();
  SpacePtr sp = builder.build();
  const std::size_t xi = *sp->find_coord(x), yi = *sp->find_coord(y);
  double scale = 1.0;
  LipFunctional fg = normalized_on(sp, scale);
  if (!(fg.quotient(xi, yi) > 1.0 - delta)) throw PreconditionError("f-quotient at (x, y) is not above 1 - delta");
  TildePair tilde = select_tilde_pair(fg, xi, yi, delta, eps);
  for (int attempt = 0; attempt < 3; ++attempt) {
    GridBuilder b = base_builder();
    const std::size_t room = options.max_points > b.size() ? options.max_points - b.size() : 0;
    b.add_neighborhood("nb", sp->coord(tilde.x), 2.0 * tilde.separation, static_cast<int>(room),
                       options.seed + static_cast<std::uint64_t>(attempt));
    sp = b.build();
    fg = normalized_on(sp, scale);
    const TildePair again = select_tilde_pair(fg, xi, yi, delta, eps);
    const bool stable = again.x == tilde.x && again.y == tilde.y;
    tilde = again;
    if (stable) break;
  }
  GridStepReport step = lipbpb_on_grid(fg, xi, yi, eps, options.n_max);
  return PipelineReport{model.describe(), eps, x, y, f.description, sp, xi, yi, scale, std::move(fg), std::move(step)};
}

StepCorrector grid_step_corrector(const NormedSpaceModel& model, int n_max) {
  StepCorrector c;
  c.delta = [model](double e) { return delta_for_eps(model, e); };
  c.step = [model, n_max](const StepInput& in) -> StepOutput {
    if (in.f.quotient(in.x, in.y) >= lip_norm(in.f).norm - 1e-11) return {in.f, in.x, in.y};
    GridStepReport rep = lipbpb_on_grid(in.f, in.x, in.y, in.eps_n, n_max);
    // The next step runs at eps_n / 2 and needs a g-quotient above 1 - delta(eps_n / 2).
    const double target = 1.0 - delta_for_eps(model, 0.5 * in.eps_n);
    const auto& entries = rep.trace.entries;
    const TraceEntry* pick = nullptr;
    for (auto it = entries.rbegin(); it != entries.rend() && !pick; ++it)
      if (it->g_quotient > target) pick = &*it;
    if (!pick)
      pick = &*std::max_element(entries.begin(), entries.end(),
                                [](const TraceEntry& a, const TraceEntry& b) { return a.g_quotient < b.g_quotient; });
    return {rep.trace.correction.g, pick->v, pick->w};
  };
  return c;
}

}  // namespace lipkit
