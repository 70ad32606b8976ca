#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lipkit/errors.hpp"
#include "lipkit/freespace.hpp"
#include "lipkit/lipfunc.hpp"
#include "lipkit/metric.hpp"
#include "lipkit/normed_space.hpp"
#include "lipkit/rational.hpp"

namespace lipkit::app {

using Json = nlohmann::json;

// Malformed input; the message starts with the JSON path of the offending node.
class ParseError : public StructuralError {
 public:
  ParseError(const std::string& path, const std::string& what) : StructuralError(path + ": " + what) {}
};

Json load_json_file(const std::filesystem::path& file);

// A number, or a "p/q" string.
Rational rational_from_json(const Json& j, const std::string& path);
double real_from_json(const Json& j, const std::string& path);
Vector vector_from_json(const Json& j, const std::string& path);
std::size_t index_from_json(const Json& j, const std::string& path);

// Exact fraction string of a finite double.
std::string exact_fraction(double v);

// {"norm": "l2" | "linf" | "l1" | p, "dim": d} or {"functionals": [[...]]}.
NormedSpaceModel model_from_json(const Json& j, const std::string& path);
Json model_to_json(const NormedSpaceModel& model);

// {"points": [{"label", "coord"} | [coord]], "base", "dist"?, "model"?}. A
// string is read as a file relative to `dir`. Fraction-string distances give
// an exact space.
SpacePtr space_from_json(const Json& j, const std::string& path, const std::filesystem::path& dir = {});
Json space_to_json(const FinitePointedMetricSpace& space);

// Point index or label.
std::size_t point_from_json(const FinitePointedMetricSpace& space, const Json& j, const std::string& path);

// Values as numbers, or all fraction strings for an exact functional.
LipFunctional functional_from_json(const SpacePtr& space, const Json& values, const std::string& path);
Json functional_to_json(const LipFunctional& f);
Json free_vector_to_json(const FreeVector& z);

}  // namespace lipkit::app
