#include <algorithm>
#include <cmath>
#include <limits>

#include "kinds.hpp"
#include "lipkit/bpb.hpp"
#include "lipkit/freespace.hpp"
#include "lipkit/ucx.hpp"

namespace lipkit::app::detail {

namespace {

SpacePtr input_space(const Scenario& s) { return space_from_json(s.inputs.at("space"), "inputs.space", s.dir); }

Json pair_json(const FinitePointedMetricSpace& space, std::size_t x, std::size_t y) {
  return Json{{"x", x}, {"y", y}, {"x_label", space.point(x).label}, {"y_label", space.point(y).label}};
}

}  // namespace

double tolerance(const Scenario& s, const std::string& name, double fallback) {
  return s.tolerances.contains(name) ? s.tolerances[name].get<double>() : fallback;
}

void run_norm(const Scenario& s, RunReport& r) {
  const SpacePtr space = input_space(s);
  const LipFunctional f = functional_from_json(space, s.inputs.at("values"), "inputs.values");
  const NormResult n = lip_norm(f);
  r.measured["norm"] = n.norm;
  if (n.exact) r.measured["exact_norm"] = to_fraction_string(*n.exact);
  r.measured["argmax"] = pair_json(*space, n.x, n.y);
  if (n.norm > 0.0) {
    const auto cert = strongly_attains(f, tolerance(s, "attainment", 1e-12));
    Json pairs = Json::array();
    for (const auto& p : cert->pairs) pairs.push_back({{"x", p.x}, {"y", p.y}, {"quotient", p.quotient}});
    r.measured["certificate"] = {{"mode", to_string(cert->mode)}, {"pairs", std::move(pairs)}, {"norm", cert->norm_value}};
  }
  const double abs_norm = lip_norm_abs(f);
  r.checks.push_back(check_real("norm_consistency", "signed max == max |quotient|", "==", n.norm, abs_norm,
                                tolerance(s, "norm_consistency", 1e-12)));
}

void run_extend(const Scenario& s, RunReport& r) {
  const SpacePtr space = input_space(s);
  const Json& sub = s.inputs.at("subset");
  const Json& vals = s.inputs.at("values");
  if (!sub.is_array() || !vals.is_array() || sub.size() != vals.size()) {
    throw ParseError("inputs.subset", "expected an array matching inputs.values");
  }
  std::vector<std::size_t> idx;
  std::vector<double> v;
  for (std::size_t i = 0; i < sub.size(); ++i) {
    idx.push_back(point_from_json(*space, sub[i], "inputs.subset[" + std::to_string(i) + "]"));
    v.push_back(real_from_json(vals[i], "inputs.values[" + std::to_string(i) + "]"));
  }
  const std::string name = s.inputs.value("variant", "MIDPOINT");
  McShaneVariant variant = McShaneVariant::Midpoint;
  if (name == "INF") variant = McShaneVariant::Inf;
  else if (name == "SUP") variant = McShaneVariant::Sup;
  else if (name != "MIDPOINT") throw ParseError("inputs.variant", "expected INF, SUP or MIDPOINT");
  double sub_lip = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j)
      if (idx[i] != idx[j]) sub_lip = std::max(sub_lip, (v[i] - v[j]) / space->dist(idx[i], idx[j]));
  const LipFunctional g = mcshane_extend(space, idx, v, variant);
  double restriction = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) restriction = std::max(restriction, std::abs(g[idx[i]] - v[i]));
  const double lip = lip_norm(g).norm;
  r.measured["variant"] = to_string(variant);
  r.measured["values"] = functional_to_json(g);
  r.measured["lip"] = lip;
  r.measured["subset_lip"] = sub_lip;
  r.measured["restriction_error"] = restriction;
  r.checks.push_back(check_real("restriction", "max |g - f_sub| on the subset <= tol", "<=", restriction,
                                tolerance(s, "restriction", 0.0)));
  r.checks.push_back(check_real("lipschitz", "||g|| == ||f_sub||", "==", lip, sub_lip, tolerance(s, "lipschitz", 1e-9)));
}

void run_freenorm(const Scenario& s, RunReport& r) {
  const SpacePtr space = input_space(s);
  const FreeVector z(space, vector_from_json(s.inputs.at("coeffs"), "inputs.coeffs"));
  const FreeNormResult dual = free_norm(z);
  const PrimalResult primal = free_norm_primal(z);
  r.measured["norm"] = dual.norm;
  r.measured["dual_values"] = functional_to_json(dual.dual);
  r.measured["primal_norm"] = primal.norm;
  Json arcs = Json::array();
  for (const auto& a : primal.transport) arcs.push_back({{"x", a.x}, {"y", a.y}, {"weight", a.weight}});
  r.measured["primal_transport"] = std::move(arcs);
  const double gap = std::abs(dual.norm - primal.norm);
  r.measured["gap"] = gap;
  r.checks.push_back(check_real("duality_gap", "|dual - primal| <= tol", "<=", gap, tolerance(s, "duality_gap", 1e-7)));
}

void run_bpb(const Scenario& s, RunReport& r) {
  const SpacePtr space = input_space(s);
  const LipFunctional f = functional_from_json(space, s.inputs.at("values"), "inputs.values");
  const std::size_t x = point_from_json(*space, s.inputs.at("x"), "inputs.x");
  const std::size_t y = point_from_json(*space, s.inputs.at("y"), "inputs.y");
  const double delta = real_from_json(s.inputs.at("delta"), "inputs.delta");
  const double tol = tolerance(s, "unit", 1e-9);
  const BpbResult b = bpb_correct(f, x, y, delta);
  r.measured["g"] = functional_to_json(b.g);
  r.measured["z"] = free_vector_to_json(b.z);
  r.measured["pairing"] = b.pairing;
  r.measured["g_norm"] = b.g_norm;
  r.measured["z_norm"] = b.z_norm;
  r.measured["dist_f"] = b.dist_f;
  r.measured["dist_w"] = b.dist_w;
  r.measured["bound"] = b.bound;
  r.measured["stage"] = b.stage;
  r.measured["candidates"] = b.candidates;
  r.checks.push_back(check_real("pairing", "<g, z> == 1", "==", b.pairing, 1.0, tol));
  r.checks.push_back(check_real("g_norm", "||g|| == 1", "==", b.g_norm, 1.0, tol));
  r.checks.push_back(check_real("z_norm", "free_norm(z) == 1", "==", b.z_norm, 1.0, tol));
  r.checks.push_back(check_real("dist_f", "||f - g|| <= sqrt(2 delta)", "<=", b.dist_f, b.bound));
  r.checks.push_back(check_real("dist_w", "free_norm(w - z) <= sqrt(2 delta)", "<=", b.dist_w, b.bound));
  if (!s.inputs.contains("trace")) return;
  const Json& t = s.inputs["trace"];
  if (!t.is_object() || !t.contains("h")) throw ParseError("inputs.trace", "expected {\"h\": [...], \"n_max\"}");
  const LipFunctional h = functional_from_json(space, t["h"], "inputs.trace.h");
  const int n_max = t.value("n_max", 20);
  const LipBpbTrace trace = lip_bpb_preliminary(f, x, y, h, delta, n_max);
  Json entries = Json::array();
  double min_h = std::numeric_limits<double>::infinity();
  for (const auto& e : trace.entries) {
    entries.push_back({{"n", e.n}, {"alpha", e.alpha}, {"delta_n", e.delta_n}, {"v", e.v}, {"w", e.w},
                       {"h_quotient", e.h_quotient}, {"g_quotient", e.g_quotient}, {"g_bound", e.g_bound}});
    min_h = std::min(min_h, e.h_quotient);
  }
  r.measured["trace"] = {{"nu", trace.nu}, {"entries", std::move(entries)}};
  if (trace.entries.empty()) return;
  const TraceEntry& last = trace.entries.back();
  r.checks.push_back(check_real("trace_h", "min h-quotient > 1 - sqrt(2 delta)", ">", min_h, 1.0 - b.bound));
  r.checks.push_back(check_real("trace_g", "final g-quotient >= g_bound - tol", ">=", last.g_quotient,
                                last.g_bound - tolerance(s, "trace_g", 1e-3)));
}

// Defaults: x = (1, 0.6, 0.2, 0, ...), y = (0.5, 0.1, 0, ...) and
// f = perturbed_linear(x - y, s_factor * delta, {(0.8, 0.5, 0, ...)}).
void run_ucx(const Scenario& s, RunReport& r) {
  const Json& in = s.inputs;
  const std::size_t dim = index_from_json(in.at("dim"), "inputs.dim");
  if (dim < 2) throw ParseError("inputs.dim", "expected at least 2");
  const double p = real_from_json(in.at("p"), "inputs.p");
  const double eps = real_from_json(in.at("eps"), "inputs.eps");
  const NormedSpaceModel model = NormedSpaceModel::lp(dim, p);
  Vector x(dim, 0.0), y(dim, 0.0), center(dim, 0.0);
  x[0] = 1.0;
  x[1] = 0.6;
  if (dim > 2) x[2] = 0.2;
  y[0] = 0.5;
  y[1] = 0.1;
  center[0] = 0.8;
  center[1] = 0.5;
  if (in.contains("x")) x = vector_from_json(in["x"], "inputs.x");
  if (in.contains("y")) y = vector_from_json(in["y"], "inputs.y");
  std::vector<Vector> centers{center};
  if (in.contains("cone_centers")) {
    centers.clear();
    for (std::size_t i = 0; i < in["cone_centers"].size(); ++i)
      centers.push_back(vector_from_json(in["cone_centers"][i], "inputs.cone_centers[" + std::to_string(i) + "]"));
  }
  const Vector direction = in.contains("direction") ? vector_from_json(in["direction"], "inputs.direction") : subtract(x, y);
  const double delta = delta_for_eps(model, eps);
  const double s_factor = in.contains("s_factor") ? real_from_json(in["s_factor"], "inputs.s_factor") : 0.25;
  PipelineOptions opt;
  opt.seed = s.seed;
  opt.segment_points = in.value("segment_points", opt.segment_points);
  opt.max_points = in.value("max_points", opt.max_points);
  opt.n_max = in.value("n_max", opt.n_max);
  const AmbientFunctional f = perturbed_linear(model, direction, s_factor * delta, centers);
  const PipelineReport rep = lipbpb_uniformly_convex(model, f, x, y, eps, opt);
  r.measured["model"] = rep.model;
  r.measured["functional"] = rep.functional;
  r.measured["delta"] = delta;
  r.measured["delta_x"] = rep.step.delta_x;
  r.measured["grid_points"] = rep.space->size();
  r.measured["f_scale"] = rep.f_scale;
  r.measured["tilde"] = {{"x", rep.step.tilde.x}, {"y", rep.step.tilde.y}, {"separation", rep.step.tilde.separation},
                         {"quotient", rep.step.tilde.quotient}};
  r.measured["bump_radius"] = rep.step.bump_radius;
  r.measured["h_scale"] = rep.step.h_scale;
  Json audits = Json::array();
  for (const auto& a : rep.step.audits) {
    audits.push_back({{"name", a.name}, {"value", a.value}, {"bound", a.bound}, {"slack", a.slack()}, {"passed", a.passed()}});
    r.checks.push_back(check_real(a.name, a.name + (a.upper ? " < " : " > ") + "bound", a.upper ? "<" : ">", a.value, a.bound));
  }
  r.measured["audits"] = std::move(audits);
}

}  // namespace lipkit::app::detail
