#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lipkit/normed_space.hpp"
#include "lipkit/rational.hpp"

namespace lipkit {

using DistanceMatrix = std::vector<std::vector<double>>;

struct PointRecord {
  std::string label;
  std::optional<Vector> coord;
};

// Finite set with a distinguished base point and a validated metric. Immutable
// once built; shared between functionals through SpacePtr.
class FinitePointedMetricSpace {
 public:
  // Throws StructuralError for shape problems and PreconditionError when the
  // matrix fails the metric axioms beyond `tolerance`.
  FinitePointedMetricSpace(std::vector<PointRecord> points, std::size_t base, DistanceMatrix dist,
                           double tolerance = 1e-12);

  // Distances from the model's norm; every point needs coordinates.
  static std::shared_ptr<const FinitePointedMetricSpace> from_coordinates(
      std::vector<PointRecord> points, std::size_t base, const NormedSpaceModel& model);

  // Exact rational distances; the double matrix is derived from them.
  static std::shared_ptr<const FinitePointedMetricSpace> from_exact(
      std::vector<PointRecord> points, std::size_t base, std::vector<std::vector<Rational>> dist,
      std::optional<NormedSpaceModel> model = std::nullopt);

  std::size_t size() const { return points_.size(); }
  std::size_t base() const { return base_; }
  double dist(std::size_t i, std::size_t j) const { return dist_[i][j]; }
  const DistanceMatrix& distances() const { return dist_; }
  const PointRecord& point(std::size_t i) const { return points_[i]; }
  const std::vector<PointRecord>& points() const { return points_; }

  bool has_coordinates() const;
  const Vector& coord(std::size_t i) const;
  const std::optional<NormedSpaceModel>& model() const { return model_; }

  bool has_exact() const { return exact_.has_value(); }
  const Rational& exact_dist(std::size_t i, std::size_t j) const { return (*exact_)[i][j]; }

  std::optional<std::size_t> find_label(const std::string& label) const;
  // Index of the point with these coordinates (max-abs difference <= tol).
  std::optional<std::size_t> find_coord(const Vector& c, double tol = 1e-12) const;

 private:
  std::vector<PointRecord> points_;
  std::size_t base_;
  DistanceMatrix dist_;
  std::optional<NormedSpaceModel> model_;
  std::optional<std::vector<std::vector<Rational>>> exact_;
};

using SpacePtr = std::shared_ptr<const FinitePointedMetricSpace>;

struct MetricViolation {
  enum class Kind { NonFinite, NonZeroDiagonal, Asymmetric, NonPositive, Triangle };
  Kind kind;
  std::size_t i = 0, j = 0, k = 0;
  double amount = 0.0;
};

const char* to_string(MetricViolation::Kind kind);

// Empty iff every axiom holds within `tolerance`. Throws StructuralError for a
// non-square matrix.
std::vector<MetricViolation> validate_metric(const DistanceMatrix& dist, double tolerance = 0.0);

struct BetweennessTriple {
  std::size_t x, z, y;
  double defect;  // |rho(x,y) - rho(x,z) - rho(z,y)|
};

inline constexpr double kBetweennessTolerance = 1e-9;

// Triples (x, z, y) with x < y, z distinct from both and defect <= tol,
// sorted by (x, y, z).
std::vector<BetweennessTriple> betweenness_triples(const FinitePointedMetricSpace& space,
                                                   double tol = kBetweennessTolerance);

// Accumulates coordinate points, dropping duplicates within 1e-12, and builds a
// pointed space whose base is the origin.
class GridBuilder {
 public:
  explicit GridBuilder(NormedSpaceModel model);

  // Returns the index of the (possibly pre-existing) point.
  std::size_t add(const std::string& label, const Vector& coord);
  // resolution + 1 equally spaced points from a to b inclusive.
  std::vector<std::size_t> add_segment(const std::string& label, const Vector& a, const Vector& b,
                                       int resolution);
  // `count` pseudo-random points of the open ball of `radius` around center.
  void add_neighborhood(const std::string& label, const Vector& center, double radius, int count,
                        std::uint64_t seed);

  std::size_t size() const { return points_.size(); }
  const NormedSpaceModel& model() const { return model_; }
  SpacePtr build() const;

 private:
  NormedSpaceModel model_;
  std::vector<PointRecord> points_;
};

inline constexpr double kDedupTolerance = 1e-12;

struct GridSpec {
  std::vector<Vector> anchors;
  // Segment endpoints as anchor indices, -1 meaning the origin. Empty means
  // every pair of {origin} and the anchors.
  std::vector<std::pair<int, int>> segments;
  int segment_resolution = 1;
  double neighborhood_radius = 0.0;
  int neighborhood_count = 0;  // per anchor
  std::uint64_t seed = 0;
};

SpacePtr build_grid_space(const NormedSpaceModel& model, const GridSpec& spec);

// 1-D convenience: points t_i on the real line, base at t = 0 (which must be present).
SpacePtr line_space(const std::vector<double>& points);

// Same with exact rational distances |s - t|; labels are fraction strings.
SpacePtr exact_line_space(const std::vector<Rational>& points);

}  // namespace lipkit
