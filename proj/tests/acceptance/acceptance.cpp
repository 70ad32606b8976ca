// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lipkit/app/scenario.hpp"
#include "lipkit/bpb.hpp"
#include "lipkit/counterexamples.hpp"
#include "lipkit/errors.hpp"
#include "lipkit/freespace.hpp"
#include "lipkit/lipfunc.hpp"
#include "lipkit/random.hpp"
#include "lipkit/seminorms.hpp"
#include "lipkit/ucx.hpp"

using namespace lipkit;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok && passed) detail << "first failure: " << what << "; ";
    passed = passed && ok;
  }
};

using Criterion = std::function<void(Outcome&)>;

NormedSpaceModel random_model(Rng& rng, std::size_t dim) {
  switch (rng.index(4)) {
    case 0: return NormedSpaceModel::lp(dim, 2.0);
    case 1: return NormedSpaceModel::lp(dim, 3.0);
    case 2: return NormedSpaceModel::linf(dim);
    default: return NormedSpaceModel::l1(dim);
  }
}

SpacePtr random_space(Rng& rng, std::size_t n) {
  const std::size_t dim = 1 + rng.index(3);
  GridBuilder b(random_model(rng, dim));
  b.add("0", Vector(dim, 0.0));
  while (b.size() < n) {
    Vector p(dim);
    for (auto& c : p) c = rng.uniform(-1.0, 1.0);
    b.add("p" + std::to_string(b.size()), p);
  }
  return b.build();
}

LipFunctional random_unit_functional(Rng& rng, const SpacePtr& s) {
  std::vector<double> v(s->size());
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  v[s->base()] = 0.0;
  LipFunctional f(s, v);
  return f.scaled(1.0 / lip_norm(f).norm);
}

// Brute-force Lipschitz constant of prescribed values.
double lip_of_values(const FinitePointedMetricSpace& s, const std::vector<std::size_t>& idx,
                     const std::vector<double>& vals) {
  double best = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) best = std::max(best, std::abs(vals[i] - vals[j]) / s.dist(idx[i], idx[j]));
  return best;
}

struct BpbInstance {
  LipFunctional f;
  std::size_t x, y;
  double delta;
};

// Unit f on n random points with a pair of quotient in (1 - delta, 1).
BpbInstance bpb_instance(Rng& rng, std::size_t n, double delta) {
  for (;;) {
    const auto s = random_space(rng, n);
    const auto f = random_unit_functional(rng, s);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        if (x == y) continue;
        const double q = f.quotient(x, y);
        if (q > 1.0 - delta && q < 1.0 - 1e-9) return {f, x, y, delta};
      }
  }
}

void criterion_duality(Outcome& o) {
  Rng rng(1001);
  double worst_gap = 0.0, worst_iso = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto s = random_space(rng, 2 + rng.index(7));
    std::vector<double> c(s->size());
    for (auto& x : c) x = rng.uniform(-1.0, 1.0);
    c[s->base()] = 0.0;
    const FreeVector z(s, c);
    worst_gap = std::max(worst_gap, std::abs(free_norm(z).norm - free_norm_primal(z).norm));
    for (std::size_t a = 0; a < s->size(); ++a)
      for (std::size_t b = 0; b < s->size(); ++b) {
        const auto m = FreeVector::point(s, a).plus(FreeVector::point(s, b), -1.0);
        worst_iso = std::max(worst_iso, std::abs(free_norm(m).norm - s->dist(a, b)));
      }
  }
  o.require(worst_gap <= 1e-7, "dual/primal gap");
  o.require(worst_iso <= 1e-9, "isometric embedding");
  o.detail << "max |dual - primal| " << worst_gap << ", max isometry error " << worst_iso;
}

void criterion_mcshane(Outcome& o) {
  Rng rng(1002);
  double worst_lip = 0.0;
  bool restrict_ok = true, order_ok = true;
  for (int t = 0; t < 100; ++t) {
    const auto s = random_space(rng, 3 + rng.index(8));
    std::vector<std::size_t> idx{s->base()};
    for (std::size_t p = 0; p < s->size(); ++p)
      if (p != s->base() && rng.uniform() < 0.5) idx.push_back(p);
    if (idx.size() < 2) idx.push_back(s->base() == 0 ? 1 : 0);
    std::vector<double> vals(idx.size());
    for (std::size_t i = 1; i < vals.size(); ++i) vals[i] = rng.uniform(-1.0, 1.0);
    const double target = lip_of_values(*s, idx, vals);
    std::vector<LipFunctional> ext;
    for (auto v : {McShaneVariant::Sup, McShaneVariant::Midpoint, McShaneVariant::Inf}) {
      ext.push_back(mcshane_extend(s, idx, vals, v));
      for (std::size_t i = 0; i < idx.size(); ++i) restrict_ok = restrict_ok && ext.back()[idx[i]] == vals[i];
      worst_lip = std::max(worst_lip, std::abs(lip_norm(ext.back()).norm - target));
    }
    for (std::size_t p = 0; p < s->size(); ++p)
      order_ok = order_ok && ext[0][p] <= ext[1][p] + 1e-12 && ext[1][p] <= ext[2][p] + 1e-12;
  }
  o.require(restrict_ok, "exact restriction");
  o.require(worst_lip <= 1e-9, "Lipschitz constant preserved");
  o.require(order_ok, "SUP <= MIDPOINT <= INF");
  o.detail << "max |lip(ext) - lip(f_sub)| " << worst_lip;
}

void criterion_bpb(Outcome& o) {
  Rng rng(1003);
  const double deltas[] = {0.005, 0.02, 0.08};
  double worst_unit = 0.0, worst_slack = 1.0;
  int oracle_runs = 0, oracle_hits = 0;
  for (int t = 0; t < 20; ++t) {
    const double delta = deltas[t % 3];
    const auto inst = bpb_instance(rng, 3 + static_cast<std::size_t>(t % 4), delta);
    const auto r = bpb_correct(inst.f, inst.x, inst.y, delta);
    worst_unit = std::max({worst_unit, std::abs(r.pairing - 1.0), std::abs(r.g_norm - 1.0), std::abs(r.z_norm - 1.0)});
    worst_slack = std::min(worst_slack, r.bound - std::max(r.dist_f, r.dist_w));
    o.require(r.achieved && std::max(r.dist_f, r.dist_w) <= r.bound, "bound on fixture " + std::to_string(t));
    if (inst.f.size() <= 5) {
      const auto oracle = bpb_bruteforce_oracle(inst.f, inst.x, inst.y, delta);
      ++oracle_runs;
      if (oracle.achievable) {
        ++oracle_hits;
        o.require(r.achieved, "staged search missed an oracle witness on fixture " + std::to_string(t));
      }
    }
  }
  o.require(worst_unit <= 1e-9, "pairing and unit norms");
  o.detail << "max unit error " << worst_unit << ", min slack " << worst_slack << ", oracle witnesses "
           << oracle_hits << "/" << oracle_runs;
}

void criterion_trace(Outcome& o) {
  Rng rng(1004);
  const double delta = 0.02;
  double min_h = 2.0, min_g = 2.0, worst_bound_gap = 1.0;
  for (int t = 0; t < 10; ++t) {
    const auto inst = bpb_instance(rng, 4 + static_cast<std::size_t>(t % 3), delta);
    const auto& s = inst.f.space();
    std::vector<double> hv(s.size());
    for (std::size_t p = 0; p < hv.size(); ++p) hv[p] = s.dist(p, inst.y) - s.dist(s.base(), inst.y);
    const LipFunctional h(inst.f.space_ptr(), hv);
    const auto tr = lip_bpb_preliminary(inst.f, inst.x, inst.y, h, delta, 20);
    for (const auto& e : tr.entries) min_h = std::min(min_h, e.h_quotient);
    const auto& last = tr.entries.back();
    min_g = std::min(min_g, last.g_quotient);
    worst_bound_gap = std::min(worst_bound_gap, last.g_quotient - last.g_bound);
  }
  o.require(min_h > 1.0 - std::sqrt(2.0 * delta), "h-quotients above 1 - sqrt(2 delta)");
  o.require(min_g >= 0.9, "g-quotient at n = 20 within 0.1 of 1");
  o.require(worst_bound_gap >= -1e-3, "g-quotient at n = 20 against the bound");
  o.detail << "min h-quotient " << min_h << ", min g-quotient(20) " << min_g << ", min g - bound " << worst_bound_gap;
}

// Fixture k of the l_2 pipeline family; f is delta(eps_1)-near-attaining at (x, y).
struct PipelineFixture {
  NormedSpaceModel model;
  Vector x, y;
  AmbientFunctional f;
};

PipelineFixture pipeline_fixture(int k, double eps) {
  const std::size_t dim = 2 + static_cast<std::size_t>(k % 2);
  const auto m = NormedSpaceModel::lp(dim, 2.0);
  Vector x(dim, 0.0), y(dim, 0.0), c(dim, 0.0);
  x[0] = 1.0;
  x[1] = 0.4 + 0.05 * k;
  y[0] = 0.4 + 0.02 * k;
  y[1] = 0.1;
  if (dim == 3) {
    x[2] = 0.2;
    y[2] = -0.1;
  }
  c[0] = 0.8;
  c[1] = 0.5;
  const double delta = delta_for_eps(m, refine_eps(eps, 1));
  return {m, x, y, perturbed_linear(m, subtract(x, y), 0.25 * delta, {c})};
}

void criterion_refine(Outcome& o) {
  const double eps = 0.5;
  int converged = 0;
  double worst_dist = 0.0, worst_seg = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto fx = pipeline_fixture(k, eps);
    PipelineOptions opt;
    opt.seed = static_cast<std::uint64_t>(k + 1);
    try {
      const auto rep = lipbpb_uniformly_convex(fx.model, fx.f, fx.x, fx.y, eps, opt);
      const auto r = refine_to_local_attainment(rep.f, rep.x_index, rep.y_index, eps, grid_step_corrector(fx.model));
      for (const auto& row : r.audit)
        for (const auto* p : {&row.a, &row.b, &row.c, &row.d, &row.e})
          o.require(!p->checked || p->holds, "audit row " + std::to_string(row.n) + " of fixture " + std::to_string(k));
      o.require(r.converged, "fixture " + std::to_string(k) + " converged");
      o.require(r.dist_f < r.eps_sum || (r.eps_sum == 0.0 && r.dist_f == 0.0), "||f - g|| < sum eps_n");
      o.require(r.eps_sum < eps / 4.0, "sum eps_n < eps / 4");
      o.require(r.dist_to_segment < eps, "dist(v, conv{x, y}) < eps");
      converged += r.converged ? 1 : 0;
      worst_dist = std::max(worst_dist, r.dist_f);
      worst_seg = std::max(worst_seg, r.dist_to_segment);
    } catch (const Error& e) {
      o.require(false, "fixture " + std::to_string(k) + ": " + e.what());
    }
  }
  o.detail << converged << "/10 converged, max ||f - g|| " << worst_dist << ", max dist(v, conv) " << worst_seg;
}

void criterion_pipeline(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double min_slack = 1.0;
  std::size_t max_grid = 0;
  for (double p : {2.0, 4.0})
    for (std::size_t dim : {2u, 3u})
      for (double eps : {0.5, 0.25}) {
        const auto m = NormedSpaceModel::lp(dim, p);
        Vector x(dim, 0.0), y(dim, 0.0), c(dim, 0.0);
        x[0] = 1.0;
        x[1] = 0.6;
        y[0] = 0.5;
        y[1] = 0.1;
        if (dim == 3) x[2] = 0.2;
        c[0] = 0.8;
        c[1] = 0.5;
        const double delta = delta_for_eps(m, eps);
        std::ostringstream tag;
        tag << "p=" << p << " dim=" << dim << " eps=" << eps;
        try {
          const auto f = perturbed_linear(m, subtract(x, y), 0.25 * delta, {c});
          const auto rep = lipbpb_uniformly_convex(m, f, x, y, eps);
          max_grid = std::max(max_grid, rep.space->size());
          o.require(rep.space->size() <= 200, tag.str() + " grid size");
          for (const auto& a : rep.step.audits) {
            o.require(a.passed(), tag.str() + " audit " + a.name);
            min_slack = std::min(min_slack, a.slack());
          }
        } catch (const Error& e) {
          o.require(false, tag.str() + ": " + e.what());
        }
      }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs <= 300.0, "sweep within 5 minutes");
  o.detail << "min audit slack " << min_slack << ", max grid " << max_grid << ", sweep " << secs << " s";
}

void criterion_modulus(Outcome& o) {
  double worst = 0.0, widest = 0.0;
  const auto m = NormedSpaceModel::lp(2, 2.0);
  for (double eps : {0.25, 0.5, 1.0, 1.5}) {
    const double oracle = 1.0 - std::sqrt(1.0 - eps * eps / 4.0);
    worst = std::max(worst, std::abs(modulus_convexity(m, eps) - oracle));
    const auto rep = slice_diameter_check(m, Vector{1.0, 0.0}, oracle, 10000, 77);
    o.require(rep.samples >= 10000, "10^4 slice samples");
    o.require(rep.max_pair_distance < eps, "slice diameter below eps");
    widest = std::max(widest, rep.max_pair_distance / eps);
  }
  o.require(worst <= 1e-6, "modulus against 1 - sqrt(1 - eps^2 / 4)");
  o.detail << "max modulus error " << worst << ", max slice diameter / eps " << widest;
}

void criterion_svc(Outcome& o) {
  const auto set = svc_set(6);
  const auto g = cantor_primitive(6);
  Rational min_bound(2);
  int checked = 0, small = 0, gap = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    try {
      const auto b = sa_distance_lower_bound(set, g, random_sa_candidate(seed));
      min_bound = std::min(min_bound, b.bound);
      o.require(b.bound >= Rational(1, 2), "candidate " + std::to_string(seed) + " bound >= 1/2");
      o.require(b.distance >= b.bound, "candidate " + std::to_string(seed) + " distance >= bound");
      (b.reason == SaCase::SmallNorm ? small : gap) += 1;
      ++checked;
    } catch (const PreconditionError& e) {
      o.require(false, "candidate " + std::to_string(seed) + ": " + e.what());
    }
  }
  const auto grid = mconv_grid(7, 16);
  Rng rng(1008);
  std::vector<LipFunctional> cands;
  for (int i = 0; i < 200; ++i) {
    const double th = rng.uniform(0.0, 2.0 * std::acos(-1.0));
    cands.push_back(linear_candidate(grid, Vector{std::cos(th), std::sin(th)}, rng.uniform(0.0, 2.0)));
  }
  const auto rep = mconv_obstruction(grid, 8, cands);
  o.require(rep.passed, "grid audit min distance >= 1/2 - 2 mesh");
  o.detail << checked << " exact candidates (" << small << " small-norm, " << gap << " gap-piece), min bound "
           << to_fraction_string(min_bound) << "; grid min distance " << rep.min_distance << " vs " << rep.threshold;
}

void criterion_density(Outcome& o) {
  const auto fx = density_fixture(8);
  std::vector<double> v(fx.space->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(2.0 * fx.space->coord(i)[0]) / 2.0;
  v[fx.space->base()] = 0.0;
  const LipFunctional raw(fx.space, v);
  const auto g = raw.scaled(1.0 / lip_norm(raw).norm);
  const auto certs = sa_weak_density_construct(g, fx.balls);
  o.require(certs.size() == fx.balls.size(), "one certificate per ball");
  double worst_norm = 0.0, prev_dev = 1e300;
  bool monotone = true;
  for (std::size_t n = 0; n < certs.size(); ++n) {
    const auto& c = certs[n];
    const auto& ball = fx.balls[n];
    const double expected = 1.0 + 2.0 * ball.eps;
    worst_norm = std::max(worst_norm, std::abs(c.norm - expected));
    const bool pair_ok = (c.x == ball.center && c.y == ball.witness) || (c.x == ball.witness && c.y == ball.center);
    o.require(pair_ok, "attaining pair is (x_n, y_n)");
    o.require(strongly_attains(c.g_n).has_value() && std::abs(c.quotient - c.norm) <= 1e-12, "strong attainment");
    o.require(c.support_inside, "supp(g_n - g) inside U_n");
    o.require(ball.eps == ball.radius, "eps_n = r_n");
    monotone = monotone && c.max_deviation < prev_dev;
    prev_dev = c.max_deviation;
  }
  o.require(worst_norm <= 1e-9, "||g_n|| = 1 + 2 eps_n");
  o.require(monotone, "max |g_n - g| decreases");
  o.detail << certs.size() << " balls, max norm error " << worst_norm << ", last deviation " << prev_dev;
}

void criterion_c0(Outcome& o) {
  std::vector<double> pts(201);
  for (std::size_t k = 0; k < pts.size(); ++k) pts[k] = static_cast<double>(k) / 200.0;
  const auto line = line_space(pts);
  Rng rng(1010);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int count = 2 + static_cast<int>(rng.index(6));
    const auto fs = separated_bumps(line, count, 5000 + static_cast<std::uint64_t>(t));
    std::vector<double> coeffs(fs.size());
    for (auto& c : coeffs) c = rng.uniform(-1.0, 1.0);
    const auto r = c0_estimate_check(fs, coeffs, 0.05);
    o.require(r.within, "family " + std::to_string(t));
    worst = std::max(worst, r.deviation / r.tolerance);
  }
  o.detail << "max deviation / tolerance " << worst;
}

void criterion_seminorms(Outcome& o) {
  for (int n = 1; n <= 20; ++n) {
    const auto g = uniform_vs_lip_gap(n);
    o.require(g.uniform_dist == Rational(1, n) && g.lip_lower_bound == 1, "gap at n = " + std::to_string(n));
  }
  for (int N = 1; N <= 9; ++N) {
    const auto s = seminorm_norms(jn_truncated_seminorm(N, 10), NormedSpaceModel::lp(10, 2.0));
    o.require(s.exact_sup && *s.exact_sup == Rational(N, N + 1), "jn sup at N = " + std::to_string(N));
  }
  Rng rng(1011);
  const double eps = 0.2, delta = 0.005;
  double worst = 0.0;
  int passed = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t d = 2 + rng.index(3);
    std::vector<Vector> rows;
    for (std::size_t r = 0, m = 1 + rng.index(3); r < m; ++r) {
      Vector a = rng.normal_vector(d);
      double l1 = 0.0;
      for (double c : a) l1 += std::abs(c);
      rows.push_back(scale(a, 1.0 / l1));
    }
    const auto p0 = SeminormModel::max_abs(rows);
    const std::size_t i = rng.index(rows.size()), j0 = rng.index(d);
    Vector x0(d);
    for (std::size_t k = 0; k < d; ++k) {
      const double s = rows[i][k] < 0.0 ? -1.0 : 1.0;
      x0[k] = k == j0 ? s : s * (1.0 - rng.uniform() * delta);
    }
    const auto r = seminorm_bpb_construct(p0, x0, delta, eps);
    passed += r.passed ? 1 : 0;
    o.require(r.passed, "trial " + std::to_string(t));
    o.require(std::max(r.p_distance, r.x_distance) <= r.tau + 1e-12 && r.tau < eps, "trial distances");
    worst = std::max({worst, r.p_distance, r.x_distance});
  }
  o.detail << "gap exact for n = 1..20, jn exact for N = 1..9, BPB " << passed << "/50 with max distance " << worst
           << " <= sqrt(2 delta) = " << std::sqrt(2.0 * delta);
}

void criterion_determinism(Outcome& o) {
  const std::filesystem::path dir = LIPKIT_FIXTURE_DIR;
  const auto scenarios = app::parse_manifest(app::load_json_file(dir / "manifest.json"), dir, "manifest.json");
  const auto first = app::reports_to_json(app::run_manifest(scenarios, 1)).dump();
  const auto second = app::reports_to_json(app::run_manifest(scenarios, 4)).dump();
  const auto third = app::reports_to_json(app::run_manifest(scenarios, 2)).dump();
  o.require(first == second && second == third, "bit-identical JSON");
  o.detail << scenarios.size() << " scenarios, " << first.size() << " bytes, 3 runs identical";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Criterion>> criteria{
      {"free-space duality and isometric embedding", criterion_duality},
      {"McShane extensions", criterion_mcshane},
      {"BPB corrector within sqrt(2 delta)", criterion_bpb},
      {"preliminary trace quotients", criterion_trace},
      {"local attainment refinement loop", criterion_refine},
      {"uniformly convex pipeline sweep", criterion_pipeline},
      {"modulus of convexity and slices", criterion_modulus},
      {"fat Cantor obstruction", criterion_svc},
      {"weak density construction", criterion_density},
      {"c0 estimate", criterion_c0},
      {"seminorm gap, truncation and BPB", criterion_seminorms},
      {"manifest determinism", criterion_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += o.passed ? 0 : 1;
    std::printf("%s %2zu %-45s %7.2fs  %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
