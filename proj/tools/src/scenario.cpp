#include "lipkit/app/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <thread>

#include "kinds.hpp"

namespace lipkit::app {

namespace {

constexpr std::pair<Kind, const char*> kKinds[] = {
    {Kind::Norm, "norm"},         {Kind::Extend, "extend"},     {Kind::FreeNorm, "freenorm"},
    {Kind::Bpb, "bpb"},           {Kind::Ucx, "ucx"},           {Kind::Cantor, "cantor"},
    {Kind::SaDensity, "sa-density"}, {Kind::Seminorm, "seminorm"}, {Kind::C0Check, "c0check"},
};

std::string fmt(double v) { return Json(v).dump(); }

}  // namespace

const char* to_string(Kind k) {
  for (const auto& [kind, name] : kKinds)
    if (kind == k) return name;
  return "unknown";
}

std::optional<Kind> kind_from_string(const std::string& s) {
  for (const auto& [kind, name] : kKinds)
    if (s == name) return kind;
  return std::nullopt;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

double Check::slack() const {
  if (op == "<=" || op == "<") return rhs - lhs;
  if (op == ">=" || op == ">") return lhs - rhs;
  return tol - std::abs(lhs - rhs);
}

Json Check::to_json() const {
  Json j{{"name", name}, {"relation", relation}, {"op", op}, {"passed", passed}};
  if (exact_lhs) {
    j["lhs"] = *exact_lhs;
    j["rhs"] = *exact_rhs;
  } else {
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    if (op == "==") j["tol"] = tol;
  }
  return j;
}

Check check_real(std::string name, std::string relation, std::string op, double lhs, double rhs, double tol) {
  Check c{std::move(name), std::move(relation), std::move(op), lhs, rhs, tol, std::nullopt, std::nullopt, false};
  if (c.op == "<=") c.passed = lhs <= rhs;
  else if (c.op == "<") c.passed = lhs < rhs;
  else if (c.op == ">=") c.passed = lhs >= rhs;
  else if (c.op == ">") c.passed = lhs > rhs;
  else if (c.op == "==") c.passed = std::abs(lhs - rhs) <= tol;
  else throw StructuralError("unknown relation '" + c.op + "'");
  return c;
}

Check check_exact(std::string name, std::string relation, std::string op, const Rational& lhs, const Rational& rhs) {
  Check c{std::move(name), std::move(relation), std::move(op), to_double(lhs), to_double(rhs), 0.0,
          to_fraction_string(lhs), to_fraction_string(rhs), false};
  if (c.op == "<=") c.passed = lhs <= rhs;
  else if (c.op == "<") c.passed = lhs < rhs;
  else if (c.op == ">=") c.passed = lhs >= rhs;
  else if (c.op == ">") c.passed = lhs > rhs;
  else if (c.op == "==") c.passed = lhs == rhs;
  else throw StructuralError("unknown relation '" + c.op + "'");
  return c;
}

const Check* RunReport::key_check() const {
  const Check* best = nullptr;
  for (const auto& c : checks) {
    if (!c.passed) return &c;
    if (!best || c.slack() < best->slack()) best = &c;
  }
  return best;
}

Json RunReport::to_json() const {
  Json j{{"id", id}, {"kind", to_string(kind)}, {"status", to_string(status)}, {"measured", measured}};
  Json cs = Json::array();
  for (const auto& c : checks) cs.push_back(c.to_json());
  j["checks"] = std::move(cs);
  if (!message.empty()) j["message"] = message;
  return j;
}

Scenario parse_scenario(const Json& j, const std::filesystem::path& dir, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected a scenario object");
  for (const auto& [key, value] : j.items()) {
    if (key != "id" && key != "kind" && key != "inputs" && key != "seed" && key != "tolerances") {
      throw ParseError(path + "." + key, "unknown scenario field");
    }
  }
  Scenario s;
  s.dir = dir;
  if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty()) {
    throw ParseError(path + ".id", "expected a non-empty string");
  }
  s.id = j["id"].get<std::string>();
  if (!j.contains("kind") || !j["kind"].is_string()) throw ParseError(path + ".kind", "expected a string");
  const auto kind = kind_from_string(j["kind"].get<std::string>());
  if (!kind) throw ParseError(path + ".kind", "unknown kind '" + j["kind"].get<std::string>() + "'");
  s.kind = *kind;
  if (j.contains("inputs")) {
    if (!j["inputs"].is_object()) throw ParseError(path + ".inputs", "expected an object");
    s.inputs = j["inputs"];
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ParseError(path + ".seed", "expected a non-negative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) throw ParseError(path + ".tolerances", "expected an object");
    for (const auto& [key, value] : j["tolerances"].items())
      if (!value.is_number()) throw ParseError(path + ".tolerances." + key, "expected a number");
    s.tolerances = j["tolerances"];
  }
  for (const auto& alternatives : detail::required_inputs(s.kind, s.inputs)) {
    bool found = false;
    for (const auto& key : alternatives) found = found || s.inputs.contains(key);
    if (!found) {
      std::string names;
      for (const auto& key : alternatives) names += (names.empty() ? "" : " or ") + key;
      throw ParseError(path + ".inputs", "missing " + names);
    }
  }
  if (s.inputs.contains("expect")) {
    const Json& e = s.inputs["expect"];
    if (!e.is_array()) throw ParseError(path + ".inputs.expect", "expected an array");
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::string p = path + ".inputs.expect[" + std::to_string(i) + "]";
      if (!e[i].is_object() || !e[i].contains("measure") || !e[i]["measure"].is_string()) {
        throw ParseError(p, "expected {\"measure\", \"op\", \"value\"}");
      }
      const std::string op = e[i].value("op", "");
      if (op != "<=" && op != ">=" && op != "<" && op != ">" && op != "==") throw ParseError(p + ".op", "unknown relation");
      if (!e[i].contains("value")) throw ParseError(p + ".value", "missing");
      rational_from_json(e[i]["value"], p + ".value");
    }
  }
  return s;
}

std::vector<Scenario> parse_manifest(const Json& manifest, const std::filesystem::path& dir, const std::string& path) {
  const Json* list = &manifest;
  std::string base = path;
  if (manifest.is_object()) {
    if (!manifest.contains("scenarios")) throw ParseError(path + ".scenarios", "missing");
    list = &manifest["scenarios"];
    base = path + ".scenarios";
  }
  if (!list->is_array()) throw ParseError(base, "expected an array of scenarios");
  std::vector<Scenario> out;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const std::string p = base + "[" + std::to_string(i) + "]";
    Scenario s = parse_scenario((*list)[i], dir, p);
    for (const auto& prev : out)
      if (prev.id == s.id) throw ParseError(p + ".id", "duplicate id '" + s.id + "'");
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

void apply_expectations(const Scenario& s, RunReport& r) {
  if (!s.inputs.contains("expect")) return;
  for (const auto& e : s.inputs["expect"]) {
    const std::string key = e["measure"].get<std::string>();
    const Json::json_pointer ptr(key.front() == '/' ? key : "/" + key);
    const bool fraction = r.measured.contains(ptr) && r.measured[ptr].is_string();
    if (!r.measured.contains(ptr) || !(r.measured[ptr].is_number() || fraction)) {
      throw StructuralError("expectation names no numeric measurement '" + key + "'");
    }
    const std::string op = e["op"].get<std::string>();
    const double tol = e.value("tol", 0.0);
    if (fraction) {
      // Exact measurements compare exactly unless a tolerance is given.
      const Rational lhs = rational_from_json(r.measured[ptr], "measured." + key);
      const Rational rhs = rational_from_json(e["value"], "expect.value");
      if (tol == 0.0) {
        r.checks.push_back(check_exact("expect." + key, key + " " + op + " " + to_fraction_string(rhs), op, lhs, rhs));
        continue;
      }
      r.checks.push_back(check_real("expect." + key, key + " " + op + " " + to_fraction_string(rhs), op,
                                    to_double(lhs), to_double(rhs), tol));
      continue;
    }
    const double lhs = r.measured[ptr].get<double>();
    const double rhs = real_from_json(e["value"], "expect.value");
    r.checks.push_back(check_real("expect." + key, key + " " + op + " " + fmt(rhs), op, lhs, rhs, tol));
  }
}

}  // namespace

RunReport run_scenario(const Scenario& s) {
  RunReport r;
  r.id = s.id;
  r.kind = s.kind;
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (s.kind) {
      case Kind::Norm: detail::run_norm(s, r); break;
      case Kind::Extend: detail::run_extend(s, r); break;
      case Kind::FreeNorm: detail::run_freenorm(s, r); break;
      case Kind::Bpb: detail::run_bpb(s, r); break;
      case Kind::Ucx: detail::run_ucx(s, r); break;
      case Kind::Cantor: detail::run_cantor(s, r); break;
      case Kind::SaDensity: detail::run_sa_density(s, r); break;
      case Kind::Seminorm: detail::run_seminorm(s, r); break;
      case Kind::C0Check: detail::run_c0check(s, r); break;
    }
    apply_expectations(s, r);
    if (r.status != Status::Inconclusive) {
      r.status = Status::Pass;
      for (const auto& c : r.checks) {
        if (c.passed) continue;
        r.status = Status::Fail;
        if (r.message.empty()) {
          r.message = "violated: " + c.relation + " (lhs " + (c.exact_lhs ? *c.exact_lhs : fmt(c.lhs)) + ", rhs " +
                      (c.exact_rhs ? *c.exact_rhs : fmt(c.rhs)) + ")";
        }
      }
    }
  } catch (const NumericalError& e) {
    r.status = Status::Inconclusive;
    r.message = std::string("solver: ") + e.what();
  } catch (const GridTooCoarseError& e) {
    r.status = Status::Inconclusive;
    r.message = std::string("grid too coarse: ") + e.what();
  } catch (const SamplerExhausted& e) {
    r.status = Status::Inconclusive;
    r.message = std::string("sampler: ") + e.what();
  } catch (const Error& e) {
    r.status = Status::Fail;
    r.message = std::string("error: ") + e.what();
  } catch (const Json::exception& e) {
    r.status = Status::Fail;
    r.message = std::string("input: ") + e.what();
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<RunReport> run_manifest(const std::vector<Scenario>& scenarios, int jobs) {
  std::vector<RunReport> out(scenarios.size());
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), scenarios.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) out[i] = run_scenario(scenarios[i]);
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  if (workers > 0) work();
  return out;
}

std::optional<std::uint64_t> seed_override() {
  const char* env = std::getenv("LIPKIT_SEED");
  if (!env || !*env) return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') return std::nullopt;
  return static_cast<std::uint64_t>(v);
}

void apply_seed_override(std::vector<Scenario>& scenarios) {
  if (const auto seed = seed_override())
    for (auto& s : scenarios) s.seed = *seed;
}

Json reports_to_json(const std::vector<RunReport>& reports) {
  Json list = Json::array();
  std::size_t pass = 0, fail = 0, inconclusive = 0;
  for (const auto& r : reports) {
    list.push_back(r.to_json());
    if (r.status == Status::Pass) ++pass;
    else if (r.status == Status::Fail) ++fail;
    else ++inconclusive;
  }
  return Json{{"reports", std::move(list)},
              {"summary", {{"total", reports.size()}, {"pass", pass}, {"fail", fail}, {"inconclusive", inconclusive}}}};
}

void write_csv(std::ostream& out, const std::vector<RunReport>& reports) {
  out << "scenario_id,kind,status,key_value,bound,slack,wall_ms\n";
  for (const auto& r : reports) {
    out << r.id << ',' << to_string(r.kind) << ',' << to_string(r.status) << ',';
    if (const Check* c = r.key_check()) out << fmt(c->lhs) << ',' << fmt(c->rhs) << ',' << fmt(c->slack());
    else out << ",,";
    out << ',' << fmt(std::round(r.wall_ms * 1000.0) / 1000.0) << '\n';
  }
}

bool any_failed(const std::vector<RunReport>& reports) {
  return std::any_of(reports.begin(), reports.end(), [](const RunReport& r) { return r.status == Status::Fail; });
}

}  // namespace lipkit::app
