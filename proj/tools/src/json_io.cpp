#include "lipkit/app/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace lipkit::app {

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(at(path, key), "missing");
  return *it;
}

const Json& require_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  return j;
}

}  // namespace

Json load_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError(file.string(), "cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(file.string(), e.what());
  }
}

Rational rational_from_json(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(path, "non-finite number");
    return Rational(v);
  }
  if (j.is_string()) {
    try {
      return parse_fraction(j.get<std::string>());
    } catch (const std::exception& e) {
      throw ParseError(path, e.what());
    }
  }
  throw ParseError(path, "expected a number or a fraction string");
}

double real_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  return to_double(rational_from_json(j, path));
}

Vector vector_from_json(const Json& j, const std::string& path) {
  Vector v;
  for (std::size_t i = 0; i < require_array(j, path).size(); ++i) v.push_back(real_from_json(j[i], at(path, i)));
  return v;
}

std::size_t index_from_json(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ParseError(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

std::string exact_fraction(double v) { return to_fraction_string(Rational(v)); }

NormedSpaceModel model_from_json(const Json& j, const std::string& path) {
  try {
    if (j.is_string()) {
      throw ParseError(path, "model string needs a dimension; use {\"norm\": \"" + j.get<std::string>() + "\", \"dim\": d}");
    }
    if (!j.is_object()) throw ParseError(path, "expected a model object");
    if (j.contains("functionals")) {
      std::vector<Vector> rows;
      const Json& f = require_array(j["functionals"], at(path, "functionals"));
      for (std::size_t i = 0; i < f.size(); ++i) rows.push_back(vector_from_json(f[i], at(at(path, "functionals"), i)));
      return NormedSpaceModel::polyhedral(std::move(rows));
    }
    const std::size_t dim = index_from_json(require(j, "dim", path), at(path, "dim"));
    const Json& norm = require(j, "norm", path);
    if (norm.is_string()) {
      const std::string n = norm.get<std::string>();
      if (n == "l2") return NormedSpaceModel::lp(dim, 2.0);
      if (n == "linf") return NormedSpaceModel::linf(dim);
      if (n == "l1") return NormedSpaceModel::l1(dim);
      throw ParseError(at(path, "norm"), "unknown norm '" + n + "'");
    }
    return NormedSpaceModel::lp(dim, real_from_json(norm, at(path, "norm")));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
}

Json model_to_json(const NormedSpaceModel& model) {
  Json j;
  if (model.kind() == NormKind::Lp) {
    j["dim"] = model.dim();
    if (model.p() == 2.0) j["norm"] = "l2";
    else j["norm"] = model.p();
  } else if (std::isinf(model.p())) {
    j["dim"] = model.dim();
    j["norm"] = "linf";
  } else if (model.p() == 1.0) {
    j["dim"] = model.dim();
    j["norm"] = "l1";
  } else {
    j["functionals"] = model.functionals();
  }
  return j;
}

SpacePtr space_from_json(const Json& j, const std::string& path, const std::filesystem::path& dir) {
  if (j.is_string()) {
    const std::filesystem::path file = dir / j.get<std::string>();
    return space_from_json(load_json_file(file), file.string(), file.parent_path());
  }
  const Json& pts = require_array(require(j, "points", path), at(path, "points"));
  std::vector<PointRecord> points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string p = at(at(path, "points"), i);
    PointRecord rec{"p" + std::to_string(i), std::nullopt};
    if (pts[i].is_array()) {
      rec.coord = vector_from_json(pts[i], p);
    } else if (pts[i].is_object()) {
      if (pts[i].contains("label")) {
        if (!pts[i]["label"].is_string()) throw ParseError(at(p, "label"), "expected a string");
        rec.label = pts[i]["label"].get<std::string>();
      }
      if (pts[i].contains("coord") && !pts[i]["coord"].is_null()) rec.coord = vector_from_json(pts[i]["coord"], at(p, "coord"));
    } else {
      throw ParseError(p, "expected a point object or a coordinate array");
    }
    points.push_back(std::move(rec));
  }
  const std::size_t base = j.contains("base") ? index_from_json(j["base"], at(path, "base")) : 0;
  std::optional<NormedSpaceModel> model;
  if (j.contains("model")) model = model_from_json(j["model"], at(path, "model"));
  try {
    if (!j.contains("dist")) {
      if (!model) throw ParseError(path, "needs \"dist\" or \"model\" with coordinates");
      return FinitePointedMetricSpace::from_coordinates(std::move(points), base, *model);
    }
    const Json& d = require_array(j["dist"], at(path, "dist"));
    bool exact = false;
    for (const auto& row : d)
      if (row.is_array())
        for (const auto& v : row) exact = exact || v.is_string();
    if (exact) {
      std::vector<std::vector<Rational>> m;
      for (std::size_t r = 0; r < d.size(); ++r) {
        std::vector<Rational> row;
        for (std::size_t c = 0; c < require_array(d[r], at(at(path, "dist"), r)).size(); ++c)
          row.push_back(rational_from_json(d[r][c], at(at(at(path, "dist"), r), c)));
        m.push_back(std::move(row));
      }
      return FinitePointedMetricSpace::from_exact(std::move(points), base, std::move(m), model);
    }
    DistanceMatrix m;
    for (std::size_t r = 0; r < d.size(); ++r) m.push_back(vector_from_json(d[r], at(at(path, "dist"), r)));
    return std::make_shared<const FinitePointedMetricSpace>(std::move(points), base, std::move(m));
  } catch (const ParseError&) {
    throw;
  } catch (const StructuralError& e) {
    throw ParseError(path, e.what());
  }
}

Json space_to_json(const FinitePointedMetricSpace& space) {
  Json j;
  j["base"] = space.base();
  Json pts = Json::array();
  for (const auto& p : space.points()) {
    Json rec{{"label", p.label}};
    rec["coord"] = p.coord ? Json(*p.coord) : Json(nullptr);
    pts.push_back(std::move(rec));
  }
  j["points"] = std::move(pts);
  if (space.model()) j["model"] = model_to_json(*space.model());
  Json dist = Json::array();
  for (std::size_t r = 0; r < space.size(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < space.size(); ++c) {
      if (space.has_exact()) row.push_back(to_fraction_string(space.exact_dist(r, c)));
      else row.push_back(space.dist(r, c));
    }
    dist.push_back(std::move(row));
  }
  j["dist"] = std::move(dist);
  return j;
}

std::size_t point_from_json(const FinitePointedMetricSpace& space, const Json& j, const std::string& path) {
  if (j.is_string()) {
    if (auto idx = space.find_label(j.get<std::string>())) return *idx;
    throw ParseError(path, "no point labelled '" + j.get<std::string>() + "'");
  }
  const std::size_t i = index_from_json(j, path);
  if (i >= space.size()) throw ParseError(path, "point index out of range");
  return i;
}

LipFunctional functional_from_json(const SpacePtr& space, const Json& values, const std::string& path) {
  require_array(values, path);
  if (values.size() != space->size()) throw ParseError(path, "expected one value per point");
  bool exact = !values.empty();
  for (const auto& v : values) exact = exact && v.is_string();
  try {
    if (exact) {
      std::vector<Rational> r;
      for (std::size_t i = 0; i < values.size(); ++i) r.push_back(rational_from_json(values[i], at(path, i)));
      return LipFunctional::exact(space, std::move(r));
    }
    return LipFunctional(space, vector_from_json(values, path));
  } catch (const PreconditionError& e) {
    throw ParseError(path, e.what());
  }
}

Json functional_to_json(const LipFunctional& f) {
  Json j = Json::array();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.is_exact()) j.push_back(to_fraction_string(f.exact_values()[i]));
    else j.push_back(f[i]);
  }
  return j;
}

Json free_vector_to_json(const FreeVector& z) { return Json(z.coeffs()); }

}  // namespace lipkit::app
