#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>

#include "lipkit/app/json_io.hpp"
#include "lipkit/app/scenario.hpp"

using namespace lipkit;
using namespace lipkit::app;

namespace {

const std::filesystem::path kFixtures = LIPKIT_FIXTURE_DIR;

std::vector<Scenario> load(const std::string& name) {
  return parse_manifest(load_json_file(kFixtures / name), kFixtures, name);
}

std::string error_of(const Json& manifest) {
  try {
    parse_manifest(manifest, kFixtures);
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("parse errors name the offending path") {
  const auto bad_kind = error_of(Json::parse(R"({"scenarios": [{"id": "x", "kind": "nope", "inputs": {}}]})"));
  CHECK(bad_kind.find("scenarios[0].kind") != std::string::npos);

  const auto dup = error_of(Json::parse(
      R"({"scenarios": [{"id": "a", "kind": "cantor", "inputs": {"depth": 1}},
                         {"id": "a", "kind": "cantor", "inputs": {"depth": 2}}]})"));
  CHECK(dup.find("scenarios[1].id") != std::string::npos);

  const auto missing = error_of(Json::parse(R"({"scenarios": [{"id": "a", "kind": "cantor", "inputs": {}}]})"));
  CHECK(missing.find("scenarios[0].inputs") != std::string::npos);
  CHECK(missing.find("depth") != std::string::npos);

  const auto unknown = error_of(Json::parse(
      R"({"scenarios": [{"id": "a", "kind": "cantor", "inputs": {"depth": 1}, "colour": 1}]})"));
  CHECK(unknown.find("colour") != std::string::npos);
}

TEST_CASE("empty manifest gives an empty report") {
  const auto scenarios = load("empty_manifest.json");
  CHECK(scenarios.empty());
  const auto reports = run_manifest(scenarios, 2);
  CHECK(reports.empty());
  CHECK_FALSE(any_failed(reports));
  const auto j = reports_to_json(reports);
  CHECK(j["reports"].empty());
}

TEST_CASE("cantor depth 2 has measure 5/8") {
  Scenario s;
  s.id = "c";
  s.kind = Kind::Cantor;
  s.inputs = Json::parse(R"({"depth": 2})");
  const auto r = run_scenario(s);
  CHECK(r.status == Status::Pass);
  CHECK(r.measured["measure"] == "5/8");
  CHECK(r.measured["g_at_1"] == "5/8");
}

TEST_CASE("violated expectation fails and names the inequality") {
  const auto reports = run_manifest(load("violated_manifest.json"), 1);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].status == Status::Fail);
  CHECK(reports[0].message.find("violated") != std::string::npos);
  CHECK(reports[0].message.find("<=") != std::string::npos);
  CHECK(any_failed(reports));
}

TEST_CASE("exact measurements compare exactly") {
  const auto run = [](const char* value) {
    const auto j = Json::parse(std::string(R"([{"id": "c", "kind": "cantor", "inputs": {"depth": 2, "expect": [)") +
                               R"({"measure": "measure", "op": "==", "value": )" + value + "}]}}]");
    return run_scenario(parse_manifest(j, kFixtures).front());
  };
  CHECK(run(R"("5/8")").status == Status::Pass);
  CHECK(run("0.625").status == Status::Pass);
  const auto off = run(R"("5/9")");
  CHECK(off.status == Status::Fail);
  REQUIRE(off.checks.back().exact_lhs);
  CHECK(*off.checks.back().exact_lhs == "5/8");
}

TEST_CASE("fixture manifest passes and is deterministic") {
  const auto scenarios = load("manifest.json");
  const auto a = run_manifest(scenarios, 1);
  const auto b = run_manifest(scenarios, 4);
  for (const auto& r : a) {
    INFO(r.id << ": " << r.message);
    CHECK(r.status == Status::Pass);
  }
  CHECK(reports_to_json(a).dump() == reports_to_json(b).dump());
}

TEST_CASE("seed override replaces every scenario seed") {
  auto scenarios = load("manifest.json");
  ::setenv("LIPKIT_SEED", "4242", 1);
  REQUIRE(seed_override() == std::optional<std::uint64_t>(4242));
  apply_seed_override(scenarios);
  ::unsetenv("LIPKIT_SEED");
  for (const auto& s : scenarios) CHECK(s.seed == 4242);
  CHECK_FALSE(seed_override().has_value());
}

TEST_CASE("csv header and one row per report") {
  Scenario s;
  s.id = "c";
  s.kind = Kind::Cantor;
  s.inputs = Json::parse(R"({"depth": 1})");
  std::ostringstream out;
  write_csv(out, {run_scenario(s)});
  const std::string text = out.str();
  CHECK(text.rfind("scenario_id,kind,status,key_value,bound,slack,wall_ms\n", 0) == 0);
  CHECK(text.find("\nc,cantor,pass,") != std::string::npos);
}

TEST_CASE("space json round trip") {
  const auto space = space_from_json(Json("exact_path.json"), "space", kFixtures);
  REQUIRE(space->size() == 3);
  CHECK(space->has_exact());
  const auto again = space_from_json(space_to_json(*space), "space");
  REQUIRE(again->size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(again->exact_dist(i, j) == space->exact_dist(i, j));
  CHECK(point_from_json(*space, Json("v"), "p") == 2);

  const auto f = functional_from_json(space, Json::parse(R"(["0", "1/3", "1/3"])"), "f");
  CHECK(f.is_exact());
  CHECK(functional_to_json(f) == Json::parse(R"(["0", "1/3", "1/3"])"));
}

TEST_CASE("rational and exact fraction parsing") {
  CHECK(rational_from_json(Json("3/4"), "x") == Rational(3, 4));
  CHECK(rational_from_json(Json(2), "x") == 2);
  CHECK(exact_fraction(0.375) == "3/8");
  CHECK_THROWS_AS(rational_from_json(Json("abc"), "x"), ParseError);
  CHECK_THROWS_AS(space_from_json(Json::parse(R"({"points": [[0]], "base": 3})"), "s"), Error);
}
