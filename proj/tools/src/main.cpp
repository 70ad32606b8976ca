#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lipkit/app/scenario.hpp"

namespace fs = std::filesystem;
using lipkit::app::Json;
using lipkit::app::Kind;
using lipkit::app::Scenario;

namespace {

Json load(const std::string& file) { return lipkit::app::load_json_file(file); }

fs::path dir_of(const std::string& file) { return fs::path(file).parent_path(); }

// {"key": [...]} or a bare array.
Json unwrap(const Json& j, const std::string& key) { return j.is_object() && j.contains(key) ? j[key] : j; }

Json parse_list(const std::string& text) {
  Json out = Json::array();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used == item.size()) {
        out.push_back(v);
        continue;
      }
      const double d = std::stod(item, &used);
      if (used == item.size()) {
        out.push_back(d);
        continue;
      }
    } catch (const std::exception&) {
    }
    out.push_back(item);
  }
  return out;
}

int emit(const std::vector<lipkit::app::RunReport>& reports, bool single, const std::string& csv) {
  if (single) std::cout << reports.front().to_json().dump(2) << '\n';
  else std::cout << lipkit::app::reports_to_json(reports).dump(2) << '\n';
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw lipkit::app::ParseError(csv, "cannot write CSV");
    lipkit::app::write_csv(out, reports);
  }
  return lipkit::app::any_failed(reports) ? 1 : 0;
}

lipkit::app::RunReport run_cli(Kind kind, Json inputs, const fs::path& dir, std::uint64_t seed) {
  const Json j{{"id", lipkit::app::to_string(kind)}, {"kind", lipkit::app::to_string(kind)}, {"inputs", std::move(inputs)},
               {"seed", seed}};
  std::vector<Scenario> list{lipkit::app::parse_scenario(j, dir, "cli")};
  lipkit::app::apply_seed_override(list);
  return lipkit::app::run_scenario(list.front());
}

void write_audit_csv(const std::string& file, const lipkit::app::RunReport& r) {
  std::ofstream out(file);
  if (!out) throw lipkit::app::ParseError(file, "cannot write CSV");
  out << "audit,value,bound,slack,passed\n";
  if (!r.measured.contains("audits")) return;
  for (const auto& a : r.measured["audits"]) {
    out << a["name"].get<std::string>() << ',' << a["value"].dump() << ',' << a["bound"].dump() << ','
        << a["slack"].dump() << ',' << (a["passed"].get<bool>() ? "true" : "false") << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lipkit: Lipschitz functionals on finite pointed metric spaces"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for randomized steps (LIPKIT_SEED overrides)");
  std::string csv;

  std::string file, file2, pair, trace;
  double delta = 0.0, eps = 0.0, p = 2.0;
  int n_max = 20, depth = 0, n = 0, dim = 2, jobs = 1, fixture = 0, count = 2, N = 1, d = 1;
  std::size_t grid_points = 201;
  std::string variant = "MIDPOINT";

  auto* norm = app.add_subcommand("norm", "Lipschitz norm, argmax pair and attainment certificate");
  norm->add_option("file", file, "{space, values}")->required()->check(CLI::ExistingFile);

  auto* extend = app.add_subcommand("extend", "McShane extension from a subset");
  extend->add_option("file", file, "{space, subset, values}")->required()->check(CLI::ExistingFile);
  extend->add_option("--variant", variant, "INF, SUP or MIDPOINT")->check(CLI::IsMember({"INF", "SUP", "MIDPOINT"}));

  auto* freenorm = app.add_subcommand("freenorm", "Free-space norm by both LPs");
  freenorm->add_option("space", file, "Space JSON")->required()->check(CLI::ExistingFile);
  freenorm->add_option("coeffs", file2, "Coefficients JSON")->required()->check(CLI::ExistingFile);

  auto* bpb = app.add_subcommand("bpb", "BPB correction of an almost attaining pair");
  bpb->add_option("space", file, "Space JSON")->required()->check(CLI::ExistingFile);
  bpb->add_option("f", file2, "Functional values JSON")->required()->check(CLI::ExistingFile);
  bpb->add_option("pair", pair, "x,y as indices or labels")->required();
  bpb->add_option("--delta", delta, "delta in (0, 2)")->required();
  bpb->add_option("--trace", trace, "Values of h; emits the preliminary trace")->check(CLI::ExistingFile);
  bpb->add_option("--n-max", n_max, "Trace length");

  auto* ucx = app.add_subcommand("ucx", "Local directional BPB pipeline on an l_p grid");
  ucx->add_option("--p", p, "Exponent");
  ucx->add_option("--dim", dim, "Dimension");
  ucx->add_option("--eps", eps, "eps in (0, 1/2]")->required();
  ucx->add_option("--scenario", file, "Input overrides (x, y, direction, cone_centers, ...)")->check(CLI::ExistingFile);
  ucx->add_option("--csv", csv, "Write the audit table");

  auto* cantor = app.add_subcommand("cantor", "Smith-Volterra-Cantor set and its primitive");
  cantor->add_option("--depth", depth, "Depth 1..20")->required();

  auto* density = app.add_subcommand("sa-density", "Strongly attaining approximants of g");
  density->add_option("g", file, "{space, values}")->check(CLI::ExistingFile);
  density->add_option("balls", file2, "[{center, radius, eps, witness}]")->check(CLI::ExistingFile);
  density->add_option("--fixture", fixture, "Built-in dyadic fixture with this many balls");

  auto* seminorm = app.add_subcommand("seminorm", "Seminorm experiments");
  seminorm->require_subcommand(1);
  auto* gap = seminorm->add_subcommand("gap", "Uniform versus Lipschitz distance of p_n and p_0");
  gap->add_option("--n", n, "n >= 1")->required();
  auto* jn = seminorm->add_subcommand("jn", "Truncated non-attaining seminorm");
  jn->add_option("--N", N, "Truncation level")->required();
  jn->add_option("--d", d, "Dimension >= N")->required();
  auto* snorms = seminorm->add_subcommand("norms", "Sup and Lipschitz norms with the attainment audit");
  snorms->add_option("file", file, "{representation, rows, target, ambient}")->required()->check(CLI::ExistingFile);
  auto* sbpb = seminorm->add_subcommand("bpb", "BPB construction for a MAXABS seminorm on l_inf");
  sbpb->add_option("p0", file, "Rows of p0 (JSON)")->required()->check(CLI::ExistingFile);
  sbpb->add_option("x0", file2, "x0 as a,b,c")->required();
  sbpb->add_option("--delta", delta, "delta <= eps^2 / 4")->required();
  sbpb->add_option("--eps", eps, "eps")->required();

  auto* c0 = app.add_subcommand("c0check", "c_0 estimate for separated unit functionals");
  c0->add_option("file", file, "Scenario inputs JSON")->check(CLI::ExistingFile);
  c0->add_option("--count", count, "Random bumps when no file is given");
  c0->add_option("--grid-points", grid_points, "Grid size of [0, 1]");
  c0->add_option("--locality-eps", eps, "Locality scale")->default_val(0.05);

  auto* run = app.add_subcommand("run", "Run a scenario manifest");
  run->add_option("manifest", file, "Manifest JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--csv", csv, "Summary CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto scenarios = lipkit::app::parse_manifest(load(file), dir_of(file), file);
      lipkit::app::apply_seed_override(scenarios);
      return emit(lipkit::app::run_manifest(scenarios, jobs), false, csv);
    }
    lipkit::app::RunReport report;
    if (*norm) {
      report = run_cli(Kind::Norm, load(file), dir_of(file), seed);
    } else if (*extend) {
      Json in = load(file);
      if (extend->count("--variant")) in["variant"] = variant;
      report = run_cli(Kind::Extend, std::move(in), dir_of(file), seed);
    } else if (*freenorm) {
      report = run_cli(Kind::FreeNorm, {{"space", load(file)}, {"coeffs", unwrap(load(file2), "coeffs")}}, dir_of(file), seed);
    } else if (*bpb) {
      const Json xy = parse_list(pair);
      if (xy.size() != 2) throw lipkit::app::ParseError("pair", "expected x,y");
      Json in{{"space", load(file)}, {"values", unwrap(load(file2), "values")}, {"x", xy[0]}, {"y", xy[1]}, {"delta", delta}};
      if (!trace.empty()) in["trace"] = {{"h", unwrap(load(trace), "values")}, {"n_max", n_max}};
      report = run_cli(Kind::Bpb, std::move(in), dir_of(file), seed);
    } else if (*ucx) {
      Json in = file.empty() ? Json::object() : load(file);
      in["p"] = p;
      in["dim"] = dim;
      in["eps"] = eps;
      report = run_cli(Kind::Ucx, std::move(in), file.empty() ? fs::path{} : dir_of(file), seed);
      if (!csv.empty()) write_audit_csv(csv, report);
      csv.clear();
    } else if (*cantor) {
      report = run_cli(Kind::Cantor, {{"depth", depth}}, {}, seed);
    } else if (*density) {
      if (density->count("--fixture")) {
        report = run_cli(Kind::SaDensity, {{"fixture", fixture}}, {}, seed);
      } else {
        if (file.empty() || file2.empty()) throw lipkit::app::ParseError("sa-density", "needs g and balls, or --fixture");
        Json in = load(file);
        in["balls"] = unwrap(load(file2), "balls");
        report = run_cli(Kind::SaDensity, std::move(in), dir_of(file), seed);
      }
    } else if (*gap) {
      report = run_cli(Kind::Seminorm, {{"mode", "gap"}, {"n", n}}, {}, seed);
    } else if (*jn) {
      report = run_cli(Kind::Seminorm, {{"mode", "jn"}, {"N", N}, {"d", d}}, {}, seed);
    } else if (*snorms) {
      Json in = load(file);
      in["mode"] = "norms";
      report = run_cli(Kind::Seminorm, std::move(in), dir_of(file), seed);
    } else if (*sbpb) {
      report = run_cli(Kind::Seminorm,
                       {{"mode", "bpb"}, {"p0", unwrap(load(file), "p0")}, {"x0", parse_list(file2)}, {"delta", delta}, {"eps", eps}},
                       dir_of(file), seed);
    } else if (*c0) {
      Json in = file.empty() ? Json{{"count", count}} : load(file);
      if (!in.contains("grid_points")) in["grid_points"] = grid_points;
      if (!in.contains("locality_eps")) in["locality_eps"] = eps;
      report = run_cli(Kind::C0Check, std::move(in), file.empty() ? fs::path{} : dir_of(file), seed);
    }
    return emit({report}, true, csv);
  } catch (const lipkit::app::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
