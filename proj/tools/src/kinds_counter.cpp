#include <cmath>

#include "kinds.hpp"
#include "lipkit/counterexamples.hpp"
#include "lipkit/random.hpp"
#include "lipkit/seminorms.hpp"

namespace lipkit::app::detail {

namespace {

constexpr std::size_t kMaxListedIntervals = 4096;

Json intervals_json(const std::vector<Interval>& list) {
  Json j = Json::array();
  for (const auto& iv : list) j.push_back({to_fraction_string(iv.lo), to_fraction_string(iv.hi)});
  return j;
}

}  // namespace

void run_cantor(const Scenario& s, RunReport& r) {
  const Json& d = s.inputs.at("depth");
  if (!d.is_number_integer()) throw ParseError("inputs.depth", "expected an integer");
  const int depth = d.get<int>();
  const FatCantorSet set = svc_set(depth);
  const PiecewiseLinearFn g = cantor_primitive(depth);
  r.measured["depth"] = depth;
  r.measured["measure"] = to_fraction_string(set.measure);
  r.measured["interval_count"] = set.kept.size();
  if (set.kept.size() <= kMaxListedIntervals) r.measured["intervals"] = intervals_json(set.kept);
  r.measured["g_at_1"] = to_fraction_string(g.value(Rational(1)));
  r.measured["g_norm"] = to_fraction_string(g.norm());
  r.checks.push_back(check_exact("measure_formula", "measure == 1 - sum 2^(i-1) / 4^i", "==", set.measure,
                                 svc_measure_formula(depth)));
  r.checks.push_back(check_exact("primitive_endpoint", "g_k(1) == measure", "==", g.value(Rational(1)), set.measure));
  r.checks.push_back(check_exact("primitive_norm", "||g_k|| == 1", "==", g.norm(), Rational(1)));
}

// Fixture mode: density_fixture(count) with g = sin(2t) / 2 scaled to unit grid norm.
void run_sa_density(const Scenario& s, RunReport& r) {
  const Json& in = s.inputs;
  SpacePtr space;
  std::vector<BallSpec> balls;
  std::optional<LipFunctional> g;
  const bool fixture = in.contains("fixture");
  if (fixture) {
    DensityFixture fx = density_fixture(static_cast<int>(index_from_json(in["fixture"], "inputs.fixture")));
    space = fx.space;
    balls = fx.balls;
    std::vector<double> v(space->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(2.0 * space->coord(i)[0]) / 2.0;
    v[space->base()] = 0.0;
    LipFunctional raw(space, std::move(v));
    g = raw.scaled(1.0 / lip_norm(raw).norm);
  } else {
    space = space_from_json(in.at("space"), "inputs.space", s.dir);
    g = functional_from_json(space, in.at("values"), "inputs.values");
    const Json& list = in.at("balls");
    if (!list.is_array()) throw ParseError("inputs.balls", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string p = "inputs.balls[" + std::to_string(i) + "]";
      if (!list[i].is_object()) throw ParseError(p, "expected a ball object");
      balls.push_back({point_from_json(*space, list[i].at("center"), p + ".center"),
                       real_from_json(list[i].at("radius"), p + ".radius"), real_from_json(list[i].at("eps"), p + ".eps"),
                       point_from_json(*space, list[i].at("witness"), p + ".witness")});
    }
  }
  const auto certs = sa_weak_density_construct(*g, balls);
  const double tol = tolerance(s, "norm", 1e-9);
  Json out = Json::array();
  for (std::size_t n = 0; n < certs.size(); ++n) {
    const auto& c = certs[n];
    const std::string tag = "[" + std::to_string(n) + "]";
    out.push_back({{"norm", exact_fraction(c.norm)}, {"expected_norm", exact_fraction(c.expected_norm)},
                   {"x", c.x}, {"y", c.y}, {"quotient", exact_fraction(c.quotient)}, {"sign", c.sign},
                   {"support_inside", c.support_inside}, {"max_deviation", exact_fraction(c.max_deviation)}});
    r.checks.push_back(check_real("norm" + tag, "||g_n|| == 1 + 2 eps_n", "==", c.norm, c.expected_norm, tol));
    r.checks.push_back(check_real("attainment" + tag, "quotient(x_n, y_n) == 1 + 2 eps_n", "==", c.quotient,
                                  c.expected_norm, tol));
    r.checks.push_back(check_real("support" + tag, "supp(g_n - g) inside U_n", "==", c.support_inside ? 1.0 : 0.0, 1.0));
    if (fixture && n > 0) {
      r.checks.push_back(check_real("monotone" + tag, "max |g_n - g| <= max |g_(n-1) - g|", "<=", c.max_deviation,
                                    certs[n - 1].max_deviation));
    }
  }
  r.measured["certificates"] = std::move(out);
  r.measured["balls"] = certs.size();
}

namespace {

std::vector<std::vector<Rational>> rows_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError(path, "expected a nonempty array of rows");
  std::vector<std::vector<Rational>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array()) throw ParseError(p, "expected an array");
    std::vector<Rational> row;
    for (std::size_t k = 0; k < j[i].size(); ++k) row.push_back(rational_from_json(j[i][k], p + "[" + std::to_string(k) + "]"));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json exact_vector(const std::vector<Rational>& v) {
  Json j = Json::array();
  for (const auto& x : v) j.push_back(to_fraction_string(x));
  return j;
}

void seminorm_gap(const Scenario& s, RunReport& r) {
  const Json& n = s.inputs.at("n");
  if (!n.is_number_integer()) throw ParseError("inputs.n", "expected an integer");
  const GapReport g = uniform_vs_lip_gap(n.get<int>());
  r.measured["uniform_dist"] = to_fraction_string(g.uniform_dist);
  r.measured["uniform_witness"] = exact_vector(g.uniform_witness);
  r.measured["lip_lower_bound"] = to_fraction_string(g.lip_lower_bound);
  r.measured["pair"] = {exact_vector(g.pair_a), exact_vector(g.pair_b)};
  r.checks.push_back(check_exact("uniform", "||p_n - p_0||_inf == 1 / n", "==", g.uniform_dist, Rational(1, g.n)));
  r.checks.push_back(check_exact("lipschitz", "||p_n - p_0||_Lip >= 1", ">=", g.lip_lower_bound, Rational(1)));
}

void seminorm_jn(const Scenario& s, RunReport& r) {
  const int N = s.inputs.at("N").get<int>(), d = s.inputs.at("d").get<int>();
  const SeminormModel p = jn_truncated_seminorm(N, d);
  const NormedSpaceModel ambient = NormedSpaceModel::lp(static_cast<std::size_t>(d), 2.0);
  const SeminormNorms norms = seminorm_norms(p, ambient, 64, s.seed);
  const AttainmentAudit audit = attainment_equivalences(p, ambient);
  r.measured["sup"] = to_fraction_string(*norms.exact_sup);
  r.measured["lip"] = norms.lip_norm;
  r.measured["witness"] = norms.witness;
  r.checks.push_back(check_exact("sup", "sup_{S_X} p == N / (N + 1)", "==", *norms.exact_sup, Rational(N, N + 1)));
  r.checks.push_back(check_real("lip", "||p||_Lip == ||p||_inf", "==", norms.lip_norm, norms.sup_norm, norms.slack));
  r.checks.push_back(check_real("attainment", "conditions (i), (ii), (iv) agree", "==", audit.agree ? 1.0 : 0.0, 1.0));
}

void seminorm_norms_mode(const Scenario& s, RunReport& r) {
  const Json& in = s.inputs;
  const NormedSpaceModel ambient = model_from_json(in.at("ambient"), "inputs.ambient");
  const std::string kind = in.value("representation", "MAXABS");
  SeminormModel p;
  if (kind == "MAXABS") {
    p = SeminormModel::max_abs(rows_from_json(in.at("rows"), "inputs.rows"));
  } else if (kind == "OPNORM") {
    std::vector<Vector> m;
    for (std::size_t i = 0; i < in.at("rows").size(); ++i) m.push_back(vector_from_json(in["rows"][i], "inputs.rows[" + std::to_string(i) + "]"));
    const std::string t = in.value("target", "l2");
    if (t != "l2" && t != "linf") throw ParseError("inputs.target", "expected l2 or linf");
    p = SeminormModel::op_norm(std::move(m), t == "l2" ? TargetNorm::L2 : TargetNorm::Linf);
  } else {
    throw ParseError("inputs.representation", "expected MAXABS or OPNORM");
  }
  const SeminormNorms norms = seminorm_norms(p, ambient, 64, s.seed, tolerance(s, "grid_slack", 1e-9));
  const AttainmentAudit audit = attainment_equivalences(p, ambient);
  r.measured["seminorm"] = p.describe();
  r.measured["sup"] = norms.sup_norm;
  if (norms.exact_sup) r.measured["exact_sup"] = to_fraction_string(*norms.exact_sup);
  r.measured["certified"] = norms.certified;
  r.measured["witness"] = norms.witness;
  r.measured["lip"] = norms.lip_norm;
  r.measured["grid_points"] = norms.grid_points;
  r.measured["attainment"] = {{"value", audit.value}, {"pair_quotient", audit.pair_quotient},
                              {"operator_norm", audit.operator_norm}, {"operator_value", audit.operator_value},
                              {"inconclusive", audit.inconclusive}};
  r.checks.push_back(check_real("lip", "||p||_Lip == ||p||_inf", "==", norms.lip_norm, norms.sup_norm, norms.slack));
  if (audit.inconclusive) {
    r.status = Status::Inconclusive;
    r.message = "supremum found by numeric search; attainment not certified";
    return;
  }
  r.checks.push_back(check_real("attainment", "conditions (i), (ii), (iv) agree", "==", audit.agree ? 1.0 : 0.0, 1.0));
}

void seminorm_bpb(const Scenario& s, RunReport& r) {
  const Json& in = s.inputs;
  const SeminormModel p0 = SeminormModel::max_abs(rows_from_json(in.at("p0"), "inputs.p0"));
  const Vector x0 = vector_from_json(in.at("x0"), "inputs.x0");
  const double delta = real_from_json(in.at("delta"), "inputs.delta");
  const double eps = real_from_json(in.at("eps"), "inputs.eps");
  const SeminormBpbResult b = seminorm_bpb_construct(p0, x0, delta, eps);
  Json rows = Json::array();
  for (const auto& row : b.p.exact_rows()) rows.push_back(exact_vector(row));
  r.measured["p"] = std::move(rows);
  r.measured["x"] = b.x;
  r.measured["tau"] = b.tau;
  r.measured["index"] = b.index;
  r.measured["p_at_x"] = b.p_at_x;
  r.measured["p_norm"] = b.p_norm;
  r.measured["x_distance"] = b.x_distance;
  r.measured["p_distance"] = b.p_distance;
  r.measured["unchanged"] = b.unchanged;
  const double tol = tolerance(s, "unit", 1e-9);
  r.checks.push_back(check_real("attains", "p(x) == 1", "==", b.p_at_x, 1.0, tol));
  r.checks.push_back(check_real("p_norm", "||p|| == 1", "==", b.p_norm, 1.0, tol));
  r.checks.push_back(check_real("x_distance", "||x - x0|| <= sqrt(2 delta)", "<=", b.x_distance, b.tau));
  r.checks.push_back(check_real("p_distance", "||p - p0||_inf <= sqrt(2 delta)", "<=", b.p_distance, b.tau + 1e-12));
  r.checks.push_back(check_real("tau", "sqrt(2 delta) < eps", "<", b.tau, eps));
}

}  // namespace

void run_seminorm(const Scenario& s, RunReport& r) {
  const std::string mode = s.inputs.at("mode").get<std::string>();
  r.measured["mode"] = mode;
  if (mode == "gap") seminorm_gap(s, r);
  else if (mode == "jn") seminorm_jn(s, r);
  else if (mode == "norms") seminorm_norms_mode(s, r);
  else if (mode == "bpb") seminorm_bpb(s, r);
  else throw ParseError("inputs.mode", "expected gap, jn, norms or bpb");
}

// Without explicit functionals: separated_bumps on the grid k / (grid_points - 1)
// with coefficients uniform in [-1, 1].
void run_c0check(const Scenario& s, RunReport& r) {
  const Json& in = s.inputs;
  const std::size_t points = in.contains("grid_points") ? index_from_json(in["grid_points"], "inputs.grid_points") : 201;
  if (points < 2) throw ParseError("inputs.grid_points", "expected at least 2");
  std::vector<double> nodes;
  for (std::size_t k = 0; k < points; ++k) nodes.push_back(static_cast<double>(k) / static_cast<double>(points - 1));
  const SpacePtr line = line_space(nodes);
  std::vector<LipFunctional> fs;
  if (in.contains("functionals")) {
    for (std::size_t i = 0; i < in["functionals"].size(); ++i)
      fs.push_back(functional_from_json(line, in["functionals"][i], "inputs.functionals[" + std::to_string(i) + "]"));
  } else {
    fs = separated_bumps(line, static_cast<int>(index_from_json(in["count"], "inputs.count")), s.seed);
  }
  std::vector<double> coeffs;
  if (in.contains("coefficients")) {
    coeffs = vector_from_json(in["coefficients"], "inputs.coefficients");
  } else {
    Rng rng(s.seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t j = 0; j < fs.size(); ++j) coeffs.push_back(rng.uniform(-1.0, 1.0));
  }
  const double eta = real_from_json(in.at("locality_eps"), "inputs.locality_eps");
  const C0Report c = c0_estimate_check(fs, coeffs, eta);
  r.measured["lhs"] = c.lhs;
  r.measured["rhs"] = c.rhs;
  r.measured["deviation"] = c.deviation;
  r.measured["tolerance"] = c.tolerance;
  r.measured["min_separation"] = c.min_separation;
  r.measured["coefficients"] = coeffs;
  r.checks.push_back(check_real("c0", "| ||sum a_j f_j|| - max |a_k| | <= rhs eta / (1 - eta) + eta", "<=", c.deviation,
                                c.tolerance));
}

std::vector<std::vector<std::string>> required_inputs(Kind k, const Json& in) {
  switch (k) {
    case Kind::Norm: return {{"space"}, {"values"}};
    case Kind::Extend: return {{"space"}, {"subset"}, {"values"}};
    case Kind::FreeNorm: return {{"space"}, {"coeffs"}};
    case Kind::Bpb: return {{"space"}, {"values"}, {"x"}, {"y"}, {"delta"}};
    case Kind::Ucx: return {{"p"}, {"dim"}, {"eps"}};
    case Kind::Cantor: return {{"depth"}};
    case Kind::SaDensity:
      if (in.contains("fixture")) return {};
      return {{"space"}, {"values"}, {"balls"}};
    case Kind::Seminorm: {
      if (!in.contains("mode") || !in["mode"].is_string()) return {{"mode"}};
      const std::string m = in["mode"].get<std::string>();
      if (m == "gap") return {{"n"}};
      if (m == "jn") return {{"N"}, {"d"}};
      if (m == "norms") return {{"rows"}, {"ambient"}};
      if (m == "bpb") return {{"p0"}, {"x0"}, {"delta"}, {"eps"}};
      return {{"mode (gap, jn, norms or bpb)"}};
    }
    case Kind::C0Check: return {{"functionals", "count"}, {"locality_eps"}};
  }
  return {};
}

}  // namespace lipkit::app::detail
