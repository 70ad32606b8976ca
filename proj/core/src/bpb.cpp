#include "lipkit/bpb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lipkit/errors.hpp"
#include "lipkit/simplex.hpp"

namespace lipkit {

namespace {

constexpr double kUnitTolerance = 1e-9;
constexpr double kFaceTolerance = 1e-10;
constexpr std::size_t kAllMoleculesLimit = 30;
constexpr std::size_t kCandidateCap = 64;
constexpr std::size_t kAlternatingLimit = 12;
constexpr int kAlternatingRounds = 50;
constexpr double kProgress = 1e-10;

struct Candidate {
  PointPair pair;
  double lower_f = 0.0;  // 1 - f-quotient, a lower bound for ||f - g||
  double dist_w = 0.0;
  double key() const { return std::max(lower_f, dist_w); }
};

struct Pairing {
  LipFunctional g;
  FreeVector z;
  double dist_f;
  double dist_w;
  double score() const { return std::max(dist_f, dist_w); }
};

// min ||f - g|| over ||g|| <= 1 with <g, z> = 1.
std::optional<std::pair<LipFunctional, double>> face_nearest_functional(const LipFunctional& f,
                                                                        const FreeVector& z) {
  const auto& s = f.space();
  const std::size_t n = s.size();
  const std::size_t base = s.base();
  std::vector<std::size_t> var(n, n);
  std::size_t k = 0;
  for (std::size_t p = 0; p < n; ++p)
    if (p != base) var[p] = k++;
  const std::size_t t = k;
  lp::Problem<double> prob(k + 1);
  for (std::size_t j = 0; j < k; ++j) prob.set_free(j);
  prob.set_objective(t, -1.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const double rho = s.dist(a, b);
      std::vector<double> row(k + 1, 0.0);
      if (a != base) row[var[a]] += 1.0;
      if (b != base) row[var[b]] -= 1.0;
      prob.add_row(row, lp::Sense::LessEqual, rho);
      // (f - g)(a) - (f - g)(b) <= t rho
      for (auto& c : row) c = -c;
      row[t] = -rho;
      prob.add_row(std::move(row), lp::Sense::LessEqual, -(f[a] - f[b]));
    }
  std::vector<double> eq(k + 1, 0.0);
  for (std::size_t p = 0; p < n; ++p)
    if (p != base) eq[var[p]] = z[p];
  prob.add_row(std::move(eq), lp::Sense::Equal, 1.0);
  const auto sol = lp::solve(prob);
  if (sol.status != lp::Status::Optimal) return std::nullopt;
  std::vector<double> g(n, 0.0);
  for (std::size_t p = 0; p < n; ++p)
    if (p != base) g[p] = sol.x[var[p]];
  LipFunctional gf(f.space_ptr(), std::move(g));
  const double d = lip_distance(f, gf);
  return std::make_pair(std::move(gf), d);
}

std::vector<PointPair> attained_pairs(const LipFunctional& g, double tol) {
  std::vector<PointPair> out;
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = 0; b < g.size(); ++b)
      if (a != b && g.quotient(a, b) >= 1.0 - tol) out.emplace_back(a, b);
  return out;
}

// Rescale a functional whose norm exceeds one by rounding only.
LipFunctional unit_polish(const LipFunctional& g) {
  const double L = lip_norm(g).norm;
  if (L > 1.0) return g.scaled(1.0 / L);
  return g;
}

BpbResult finish(const LipFunctional& f, const FreeVector& w, Pairing best, double bound, int stage,
                 std::size_t candidates) {
  LipFunctional g = unit_polish(best.g);
  BpbResult r{g, best.z, 0.0, 0.0, 0.0, 0.0, 0.0, bound, false, stage, candidates};
  r.pairing = pairing(g, best.z);
  r.g_norm = lip_norm(g).norm;
  r.z_norm = free_norm(best.z).norm;
  r.dist_f = lip_distance(f, g);
  r.dist_w = free_norm(w.plus(best.z, -1.0)).norm;
  r.achieved = std::max(r.dist_f, r.dist_w) <= bound;
  return r;
}

void check_preconditions(const LipFunctional& f, std::size_t x, std::size_t y, double delta) {
  if (!(delta > 0.0 && delta < 2.0)) throw PreconditionError("delta must lie in (0, 2)");
  const double norm = lip_norm(f).norm;
  if (std::abs(norm - 1.0) > kUnitTolerance) throw PreconditionError("bpb_correct needs ||f|| = 1");
  if (x == y || x >= f.size() || y >= f.size()) throw StructuralError("molecule needs two distinct points");
  if (!(f.quotient(x, y) > 1.0 - delta)) {
    std::ostringstream os;
    os << "<f, w> = " << f.quotient(x, y) << " is not above 1 - delta = " << 1.0 - delta;
    throw PreconditionError(os.str());
  }
}

}  // namespace

std::optional<HullProjection> nearest_in_hull(const FreeVector& w, const std::vector<PointPair>& pairs) {
  if (pairs.empty()) return std::nullopt;
  const auto& s = w.space();
  const std::size_t n = s.size();
  const std::size_t base = s.base();
  const std::size_t m = pairs.size();
  std::vector<PointPair> arcs;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b) arcs.emplace_back(a, b);
  // Variables: lambda (m), then flows (arcs). w - sum lambda mol = sum flow (a-hat - b-hat).
  lp::Problem<double> prob(m + arcs.size());
  for (std::size_t e = 0; e < arcs.size(); ++e) prob.set_objective(m + e, -s.dist(arcs[e].first, arcs[e].second));
  for (std::size_t p = 0; p < n; ++p) {
    if (p == base) continue;
    std::vector<double> row(m + arcs.size(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const auto [a, b] = pairs[i];
      const double r = s.dist(a, b);
      if (a == p) row[i] += 1.0 / r;
      if (b == p) row[i] -= 1.0 / r;
    }
    for (std::size_t e = 0; e < arcs.size(); ++e) {
      if (arcs[e].first == p) row[m + e] += 1.0;
      if (arcs[e].second == p) row[m + e] -= 1.0;
    }
    prob.add_row(std::move(row), lp::Sense::Equal, w[p]);
  }
  std::vector<double> sum(m + arcs.size(), 0.0);
  for (std::size_t i = 0; i < m; ++i) sum[i] = 1.0;
  prob.add_row(std::move(sum), lp::Sense::Equal, 1.0);
  const auto sol = lp::solve(prob);
  if (sol.status != lp::Status::Optimal) return std::nullopt;
  std::vector<double> c(n, 0.0);
  std::vector<double> weights(m);
  for (std::size_t i = 0; i < m; ++i) {
    weights[i] = std::max(0.0, sol.x[i]);
    const auto [a, b] = pairs[i];
    const double r = s.dist(a, b);
    c[a] += weights[i] / r;
    c[b] -= weights[i] / r;
  }
  FreeVector z(w.space_ptr(), std::move(c));
  return HullProjection{std::move(z), -sol.objective, std::move(weights)};
}

BpbResult bpb_correct(const LipFunctional& f, std::size_t x, std::size_t y, double delta) {
  check_preconditions(f, x, y, delta);
  const auto& s = f.space();
  const SpacePtr sp = f.space_ptr();
  const std::size_t n = s.size();
  const double bound = std::sqrt(2.0 * delta);
  const FreeVector w = FreeVector::molecule(sp, x, y);

  // Stage 1: z anchored at a single molecule.
  std::vector<Candidate> pool;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const double lower = std::max(0.0, 1.0 - f.quotient(a, b));
      if (lower > bound && !(a == x && b == y)) continue;
      pool.push_back({{a, b}, lower, 0.0});
    }
  if (n > kAllMoleculesLimit) {
    auto closeness = [&](const Candidate& c) { return s.dist(c.pair.first, x) + s.dist(c.pair.second, y); };
    std::stable_sort(pool.begin(), pool.end(),
                     [&](const Candidate& l, const Candidate& r) { return closeness(l) < closeness(r); });
    if (pool.size() > kCandidateCap) pool.resize(kCandidateCap);
  }
  for (auto& c : pool) {
    if (c.pair == PointPair{x, y}) continue;
    c.dist_w = free_norm(w.plus(FreeVector::molecule(sp, c.pair.first, c.pair.second), -1.0)).norm;
  }
  std::stable_sort(pool.begin(), pool.end(), [](const Candidate& l, const Candidate& r) { return l.key() < r.key(); });

  std::optional<Pairing> best;
  std::vector<Pairing> solved;
  std::size_t examined = 0;
  for (const auto& c : pool) {
    if (best && c.key() >= best->score()) break;
    if (c.dist_w > bound && best) break;
    auto fit = nearest_attaining_functional(f, {c.pair});
    ++examined;
    if (!fit) continue;
    Pairing p{fit->g, FreeVector::molecule(sp, c.pair.first, c.pair.second), fit->distance, c.dist_w};
    if (!best || p.score() < best->score()) best = p;
    solved.push_back(std::move(p));
  }
  if (!best) throw NumericalError("no molecule-anchored candidate was solvable");
  if (best->score() <= bound || n > kAlternatingLimit) return finish(f, w, *best, bound, 1, examined);

  // Stage 2: alternate face projections from several starts.
  std::stable_sort(solved.begin(), solved.end(),
                   [](const Pairing& l, const Pairing& r) { return l.score() < r.score(); });
  std::vector<Pairing> starts(solved.begin(), solved.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(8, solved.size())));
  const NormResult top = lip_norm(f);
  const FreeVector mtop = FreeVector::molecule(sp, top.x, top.y);
  if (auto gs = face_nearest_functional(f, mtop)) {
    starts.push_back({gs->first, mtop, gs->second, free_norm(w.plus(mtop, -1.0)).norm});
  }
  Pairing stage1 = *best;
  for (auto current : starts) {
    for (int round = 0; round < kAlternatingRounds; ++round) {
      const double before = current.score();
      auto face = attained_pairs(current.g, kFaceTolerance);
      auto proj = nearest_in_hull(w, face);
      if (!proj) break;
      auto gs = face_nearest_functional(f, proj->z);
      ++examined;
      if (!gs) break;
      Pairing next{gs->first, proj->z, gs->second, proj->distance};
      if (next.score() < current.score()) current = next;
      if (before - current.score() < kProgress) break;
    }
    if (current.score() < best->score()) best = current;
    if (best->score() <= bound) break;
  }
  return finish(f, w, *best, bound, best->score() < stage1.score() ? 2 : 1, examined);
}

BpbResult bpb_correct(const LipFunctional& f, const FreeVector& w, double delta) {
  const auto supp = w.support(1e-15);
  const auto& s = w.space();
  std::optional<PointPair> pair;
  auto matches = [&](std::size_t a, std::size_t b) {
    return FreeVector::molecule(w.space_ptr(), a, b).max_abs_difference(w) <= 1e-12;
  };
  std::vector<std::size_t> cand = supp;
  cand.push_back(s.base());
  for (std::size_t a : cand)
    for (std::size_t b : cand)
      if (a != b && !pair && matches(a, b)) pair = PointPair{a, b};
  if (!pair || supp.size() > 2) throw StructuralError("w is not a molecule");
  return bpb_correct(f, pair->first, pair->second, delta);
}

OracleResult bpb_bruteforce_oracle(const LipFunctional& f, std::size_t x, std::size_t y, double delta) {
  check_preconditions(f, x, y, delta);
  const SpacePtr sp = f.space_ptr();
  const std::size_t n = sp->size();
  if (n > 5) throw StructuralError("brute-force oracle is limited to five points");
  const FreeVector w = FreeVector::molecule(sp, x, y);
  std::vector<PointPair> all;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b) all.emplace_back(a, b);

  OracleResult out;
  out.optimum = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> recurse = [&](std::size_t from) {
    if (!pick.empty()) {
      std::vector<PointPair> set;
      for (auto i : pick) set.push_back(all[i]);
      auto fit = nearest_attaining_functional(f, set);
      ++out.subsets;
      if (!fit) return;  // supersets stay infeasible
      if (fit->distance < out.optimum) {
        auto proj = nearest_in_hull(w, set);
        if (proj) {
          const double val = std::max(fit->distance, proj->distance);
          if (val < out.optimum) {
            out.optimum = val;
            out.face = set;
          }
        }
      }
    }
    if (pick.size() + 1 >= n) return;
    for (std::size_t i = from; i < all.size(); ++i) {
      pick.push_back(i);
      recurse(i + 1);
      pick.pop_back();
    }
  };
  recurse(0);
  out.achievable = out.optimum <= std::sqrt(2.0 * delta);
  return out;
}

LipBpbTrace lip_bpb_preliminary(const LipFunctional& f, std::size_t x, std::size_t y, const LipFunctional& h,
                                double delta, int n_max) {
  if (std::abs(lip_norm(h).norm - 1.0) > kUnitTolerance) throw PreconditionError("h must have norm one");
  if (std::abs(h.quotient(x, y) - 1.0) > kUnitTolerance) throw PreconditionError("h must attain at (x, y)");
  LipBpbTrace trace{bpb_correct(f, x, y, delta), 0.0, delta, {}, {}};
  const auto& c = trace.correction;
  if (!c.achieved) {
    std::ostringstream os;
    os << "corrector missed the bound: max(" << c.dist_f << ", " << c.dist_w << ") > " << c.bound;
    throw NumericalError(os.str());
  }
  trace.nu = c.dist_w + 1e-9;
  trace.decomposition = decompose_in_convW(c.z);
  const double root = std::sqrt(2.0 * delta);
  for (int n = 1; n <= n_max; ++n) {
    const double alpha = 1.0 / (n + 1);
    const double dn = alpha * alpha;
    std::optional<TraceEntry> pick;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& mw : trace.decomposition.weights) {
      const double hq = h.quotient(mw.x, mw.y);
      const double gq = c.g.quotient(mw.x, mw.y);
      const double score = alpha * hq + (1.0 - alpha) * gq;
      if (score > best) {
        best = score;
        pick = TraceEntry{n, alpha, dn, mw.x, mw.y, hq, gq, 1.0 - dn - alpha / (1.0 - alpha) * root};
      }
    }
    if (!pick) throw NumericalError("empty decomposition of the corrected point");
    trace.entries.push_back(*pick);
  }
  return trace;
}

namespace {

bool same_functional(const LipFunctional& a, const LipFunctional& b) { return a.values() == b.values(); }

}  // namespace

RefineResult refine_to_local_attainment(const LipFunctional& f, std::size_t x, std::size_t y, double eps,
                                        const StepCorrector& corrector, int max_iters, double floor) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  if (std::abs(lip_norm(f).norm - 1.0) > kUnitTolerance) throw PreconditionError("f must have norm one");
  const auto& s = f.space();
  const bool coords = s.has_coordinates() && s.model().has_value();
  auto direction = [&](std::size_t a, std::size_t b) { return s.model()->normalized(subtract(s.coord(a), s.coord(b))); };

  RefineResult out{f, x, y, std::nullopt, std::nullopt, {}, {}, 0.0, 0.0, 0.0, false};
  LipFunctional fn = f;
  std::size_t xn = x, yn = y;
  std::vector<CertifiedPair> pairs;
  for (int n = 1; n <= max_iters; ++n) {
    const double en = refine_eps(eps, n);
    const double dn = corrector.delta(en);
    RefineAudit row;
    row.n = n;
    row.eps_n = en;
    row.delta_n = dn;
    row.x = xn;
    row.y = yn;
    row.c = {fn.quotient(xn, yn), 1.0 - dn, true, fn.quotient(xn, yn) > 1.0 - dn};
    if (n >= 2) {
      const double sep = s.dist(xn, yn);
      row.e = {sep, refine_eps(eps, n - 1), true, sep < refine_eps(eps, n - 1)};
    }
    pairs.push_back({xn, yn, fn.quotient(xn, yn), n});
    if (!row.c.holds) {
      out.audit.push_back(row);
      throw ContractViolation('c', "property (c) failed at step " + std::to_string(n));
    }
    if (!row.e.holds) {
      out.audit.push_back(row);
      throw ContractViolation('e', "property (e) failed at step " + std::to_string(n));
    }
    if (s.dist(xn, yn) < floor) {
      out.audit.push_back(row);
      out.converged = true;
      break;
    }
    StepOutput next = corrector.step(StepInput{fn, xn, yn, en, n});
    const bool unchanged = next.x == xn && next.y == yn && same_functional(next.f, fn);
    const double da = lip_distance(fn, next.f);
    row.a = {da, en, true, da < en};
    if (coords) {
      Vector d0 = direction(xn, yn), d1 = direction(next.x, next.y);
      const double drift = s.model()->distance(d0, d1);
      row.b = {drift, en, true, drift < en};
      const double dseg = distance_to_segment(*s.model(), s.coord(next.x), s.coord(xn), s.coord(yn));
      row.d = {dseg, en, true, dseg < en};
    }
    out.audit.push_back(row);
    for (char prop : {'a', 'b', 'd'}) {
      const PropertyCheck& pc = prop == 'a' ? row.a : prop == 'b' ? row.b : row.d;
      if (!pc.holds) {
        std::ostringstream os;
        os << "property (" << prop << ") failed at step " << n << ": " << pc.value << " >= " << pc.bound;
        throw ContractViolation(prop, os.str());
      }
    }
    if (unchanged) {
      out.converged = true;
      break;
    }
    out.eps_sum += en;
    fn = std::move(next.f);
    xn = next.x;
    yn = next.y;
  }
  out.g = fn;
  out.v = xn;
  out.w = yn;
  out.dist_f = lip_distance(f, fn);
  out.certificate.mode = AttainmentMode::LocalDirectional;
  out.certificate.pairs = pairs;
  out.certificate.norm_value = lip_norm(fn).norm;
  if (coords) {
    out.v_coord = s.coord(xn);
    out.u = direction(xn, yn);
    out.dist_to_segment = distance_to_segment(*s.model(), s.coord(xn), s.coord(x), s.coord(y));
    out.certificate.direction = out.u;
    out.certificate.localization = out.v_coord;
  }
  return out;
}

}  // namespace lipkit
