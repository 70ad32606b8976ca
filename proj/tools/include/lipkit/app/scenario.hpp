#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lipkit/app/json_io.hpp"

namespace lipkit::app {

enum class Kind { Norm, Extend, FreeNorm, Bpb, Ucx, Cantor, SaDensity, Seminorm, C0Check };

const char* to_string(Kind k);
std::optional<Kind> kind_from_string(const std::string& s);

struct Scenario {
  std::string id;
  Kind kind = Kind::Norm;
  Json inputs = Json::object();
  std::uint64_t seed = 0;
  Json tolerances = Json::object();
  std::filesystem::path dir;  // base for relative file references
};

enum class Status { Pass, Fail, Inconclusive };
const char* to_string(Status s);

// One asserted relation lhs `op` rhs, op in {"<=", ">=", "<", ">", "=="}; "=="
// allows |lhs - rhs| <= tol. Exact checks carry fraction strings.
struct Check {
  std::string name;
  std::string relation;  // e.g. "dist_w <= sqrt(2 delta)"
  std::string op;
  double lhs = 0.0;
  double rhs = 0.0;
  double tol = 0.0;
  std::optional<std::string> exact_lhs, exact_rhs;
  bool passed = false;
  double slack() const;
  Json to_json() const;
};

Check check_real(std::string name, std::string relation, std::string op, double lhs, double rhs, double tol = 0.0);
Check check_exact(std::string name, std::string relation, std::string op, const Rational& lhs, const Rational& rhs);

struct RunReport {
  std::string id;
  Kind kind = Kind::Norm;
  Status status = Status::Pass;
  Json measured = Json::object();
  std::vector<Check> checks;
  std::string message;
  double wall_ms = 0.0;  // CSV only

  // The first failed check, else the one with least slack.
  const Check* key_check() const;
  Json to_json() const;
};

// {"scenarios": [...]} or a bare array. ParseError names the offending path.
std::vector<Scenario> parse_manifest(const Json& manifest, const std::filesystem::path& dir = {},
                                     const std::string& path = "manifest");
Scenario parse_scenario(const Json& j, const std::filesystem::path& dir, const std::string& path);

// Runs one scenario; module errors become fail or inconclusive reports.
RunReport run_scenario(const Scenario& s);

// Scenarios run on up to `jobs` threads; report order follows the manifest.
std::vector<RunReport> run_manifest(const std::vector<Scenario>& scenarios, int jobs);

// Returns the seed in LIPKIT_SEED when set and valid.
std::optional<std::uint64_t> seed_override();
void apply_seed_override(std::vector<Scenario>& scenarios);

Json reports_to_json(const std::vector<RunReport>& reports);
// scenario_id,kind,status,key_value,bound,slack,wall_ms
void write_csv(std::ostream& out, const std::vector<RunReport>& reports);
bool any_failed(const std::vector<RunReport>& reports);

}  // namespace lipkit::app
