#include "lipkit/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lipkit/errors.hpp"
#include "lipkit/random.hpp"

namespace lipkit {

const char* to_string(MetricViolation::Kind kind) {
  switch (kind) {
    case MetricViolation::Kind::NonFinite: return "non-finite";
    case MetricViolation::Kind::NonZeroDiagonal: return "nonzero-diagonal";
    case MetricViolation::Kind::Asymmetric: return "symmetry";
    case MetricViolation::Kind::NonPositive: return "positivity";
    case MetricViolation::Kind::Triangle: return "triangle";
  }
  return "unknown";
}

std::vector<MetricViolation> validate_metric(const DistanceMatrix& dist, double tolerance) {
  const std::size_t n = dist.size();
  for (const auto& row : dist) {
    if (row.size() != n) throw StructuralError("distance matrix is not square");
  }
  using K = MetricViolation::Kind;
  std::vector<MetricViolation> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = dist[i][j];
      if (!std::isfinite(d)) {
        out.push_back({K::NonFinite, i, j, 0, d});
        continue;
      }
      if (i == j) {
        if (std::abs(d) > tolerance) out.push_back({K::NonZeroDiagonal, i, i, 0, d});
        continue;
      }
      if (j > i && std::abs(d - dist[j][i]) > tolerance) {
        out.push_back({K::Asymmetric, i, j, 0, std::abs(d - dist[j][i])});
      }
      if (d <= 0.0) out.push_back({K::NonPositive, i, j, 0, d});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double excess = dist[i][k] - dist[i][j] - dist[j][k];
        if (excess > tolerance) out.push_back({K::Triangle, i, j, k, excess});
      }
    }
  }
  return out;
}

FinitePointedMetricSpace::FinitePointedMetricSpace(std::vector<PointRecord> points, std::size_t base,
                                                   DistanceMatrix dist, double tolerance)
    : points_(std::move(points)), base_(base), dist_(std::move(dist)) {
  if (points_.size() < 2) throw StructuralError("a pointed metric space needs at least two points");
  if (dist_.size() != points_.size()) {
    throw StructuralError("distance matrix size does not match the point count");
  }
  if (base_ >= points_.size()) throw StructuralError("base index out of range");
  const auto violations = validate_metric(dist_, tolerance);
  if (!violations.empty()) {
    const auto& v = violations.front();
    std::ostringstream os;
    os << "metric axiom violated (" << to_string(v.kind) << ") at (" << v.i << "," << v.j << ","
       << v.k << "), amount " << v.amount << "; " << violations.size() << " violation(s) total";
    throw PreconditionError(os.str());
  }
}

SpacePtr FinitePointedMetricSpace::from_coordinates(std::vector<PointRecord> points, std::size_t base,
                                                    const NormedSpaceModel& model) {
  const std::size_t n = points.size();
  DistanceMatrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    if (!points[i].coord) throw StructuralError("point '" + points[i].label + "' has no coordinates");
    if (points[i].coord->size() != model.dim()) {
      throw StructuralError("point '" + points[i].label + "' has the wrong dimension");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = model.distance(*points[i].coord, *points[j].coord);
  auto space = std::make_shared<FinitePointedMetricSpace>(std::move(points), base, std::move(d), 1e-12);
  space->model_ = model;
  return space;
}

SpacePtr FinitePointedMetricSpace::from_exact(std::vector<PointRecord> points, std::size_t base,
                                              std::vector<std::vector<Rational>> dist,
                                              std::optional<NormedSpaceModel> model) {
  const std::size_t n = dist.size();
  for (const auto& row : dist) {
    if (row.size() != n) throw StructuralError("exact distance matrix is not square");
  }
  // Exact axiom check.
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i][i] != 0) throw PreconditionError("exact metric: nonzero diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && (dist[i][j] <= 0 || dist[i][j] != dist[j][i])) {
        throw PreconditionError("exact metric: positivity or symmetry violated");
      }
      for (std::size_t k = 0; k < n; ++k) {
        if (dist[i][k] > dist[i][j] + dist[j][k]) throw PreconditionError("exact metric: triangle violated");
      }
    }
  }
  DistanceMatrix d(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i][j] = to_double(dist[i][j]);
  auto space = std::make_shared<FinitePointedMetricSpace>(std::move(points), base, std::move(d), 1e-12);
  space->exact_ = std::move(dist);
  space->model_ = std::move(model);
  return space;
}

bool FinitePointedMetricSpace::has_coordinates() const {
  return std::all_of(points_.begin(), points_.end(), [](const PointRecord& p) { return p.coord.has_value(); });
}

const Vector& FinitePointedMetricSpace::coord(std::size_t i) const {
  if (!points_[i].coord) throw StructuralError("point '" + points_[i].label + "' has no coordinates");
  return *points_[i].coord;
}

std::optional<std::size_t> FinitePointedMetricSpace::find_label(const std::string& label) const {
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (points_[i].label == label) return i;
  return std::nullopt;
}

std::optional<std::size_t> FinitePointedMetricSpace::find_coord(const Vector& c, double tol) const {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!points_[i].coord || points_[i].coord->size() != c.size()) continue;
    double diff = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) diff = std::max(diff, std::abs((*points_[i].coord)[k] - c[k]));
    if (diff <= tol) return i;
  }
  return std::nullopt;
}

std::vector<BetweennessTriple> betweenness_triples(const FinitePointedMetricSpace& space, double tol) {
  std::vector<BetweennessTriple> out;
  const std::size_t n = space.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        if (z == x || z == y) continue;
        const double defect = std::abs(space.dist(x, y) - space.dist(x, z) - space.dist(z, y));
        if (defect <= tol) out.push_back({x, z, y, defect});
      }
    }
  }
  return out;
}

GridBuilder::GridBuilder(NormedSpaceModel model) : model_(std::move(model)) {
  add("0", Vector(model_.dim(), 0.0));
}

std::size_t GridBuilder::add(const std::string& label, const Vector& coord) {
  if (coord.size() != model_.dim()) throw StructuralError("grid point dimension mismatch");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    double diff = 0.0;
    for (std::size_t k = 0; k < coord.size(); ++k) diff = std::max(diff, std::abs((*points_[i].coord)[k] - coord[k]));
    if (diff <= kDedupTolerance) return i;
  }
  points_.push_back({label, coord});
  return points_.size() - 1;
}

std::vector<std::size_t> GridBuilder::add_segment(const std::string& label, const Vector& a,
                                                  const Vector& b, int resolution) {
  if (resolution < 1) throw PreconditionError("segment resolution must be at least 1");
  std::vector<std::size_t> idx;
  for (int s = 0; s <= resolution; ++s) {
    const double t = static_cast<double>(s) / resolution;
    Vector c(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) c[k] = (1.0 - t) * a[k] + t * b[k];
    if (s == 0) c = a;
    if (s == resolution) c = b;
    idx.push_back(add(label + "_" + std::to_string(s), c));
  }
  return idx;
}

void GridBuilder::add_neighborhood(const std::string& label, const Vector& center, double radius,
                                   int count, std::uint64_t seed) {
  if (count <= 0 || radius <= 0.0) return;
  Rng rng(seed);
  int made = 0;
  for (int attempt = 0; made < count && attempt < 1000 * count; ++attempt) {
    Vector offset(center.size());
    for (auto& x : offset) x = rng.uniform(-radius, radius);
    if (model_.norm(offset) >= radius) continue;
    add(label + "_" + std::to_string(made), lipkit::add(center, offset));
    ++made;
  }
}

SpacePtr GridBuilder::build() const {
  return FinitePointedMetricSpace::from_coordinates(points_, 0, model_);
}

SpacePtr build_grid_space(const NormedSpaceModel& model, const GridSpec& spec) {
  GridBuilder builder(model);
  for (std::size_t i = 0; i < spec.anchors.size(); ++i) {
    if (spec.anchors[i].size() != model.dim()) throw StructuralError("anchor dimension mismatch");
    builder.add("a" + std::to_string(i), spec.anchors[i]);
  }
  std::vector<std::pair<int, int>> segments = spec.segments;
  if (segments.empty()) {
    const int k = static_cast<int>(spec.anchors.size());
    for (int i = -1; i < k; ++i)
      for (int j = i + 1; j < k; ++j) segments.emplace_back(i, j);
  }
  const Vector origin(model.dim(), 0.0);
  auto endpoint = [&](int i) -> const Vector& {
    if (i < 0) return origin;
    if (static_cast<std::size_t>(i) >= spec.anchors.size()) throw StructuralError("segment anchor index out of range");
    return spec.anchors[static_cast<std::size_t>(i)];
  };
  for (const auto& [i, j] : segments) {
    builder.add_segment("s" + std::to_string(i) + "_" + std::to_string(j), endpoint(i), endpoint(j),
                        spec.segment_resolution);
  }
  for (std::size_t i = 0; i < spec.anchors.size(); ++i) {
    builder.add_neighborhood("n" + std::to_string(i), spec.anchors[i], spec.neighborhood_radius,
                             spec.neighborhood_count, spec.seed * 1000003ULL + i);
  }
  return builder.build();
}

SpacePtr line_space(const std::vector<double>& points) {
  auto model = NormedSpaceModel::linf(1);
  std::vector<PointRecord> recs;
  std::size_t base = points.size();
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::ostringstream os;
    os << points[i];
    recs.push_back({os.str(), Vector{points[i]}});
    if (points[i] == 0.0) base = i;
  }
  if (base == points.size()) throw StructuralError("line space needs the point 0");
  return FinitePointedMetricSpace::from_coordinates(std::move(recs), base, model);
}

SpacePtr exact_line_space(const std::vector<Rational>& points) {
  const std::size_t n = points.size();
  std::vector<PointRecord> recs;
  std::size_t base = n;
  std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    recs.push_back({to_fraction_string(points[i]), Vector{to_double(points[i])}});
    if (points[i] == 0) base = i;
    for (std::size_t j = 0; j < n; ++j) d[i][j] = abs(Rational(points[i] - points[j]));
  }
  if (base == n) throw StructuralError("line space needs the point 0");
  return FinitePointedMetricSpace::from_exact(std::move(recs), base, std::move(d), NormedSpaceModel::linf(1));
}

}  // namespace lipkit
