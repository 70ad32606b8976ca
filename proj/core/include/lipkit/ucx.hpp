#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lipkit/bpb.hpp"
#include "lipkit/metric.hpp"
#include "lipkit/normed_space.hpp"

namespace lipkit {

struct ModulusReport {
  double delta = 0.0;
  std::vector<double> restarts;  // value reached by each restart
  std::size_t agreeing = 0;      // restarts within 1e-6 of the best
};

// delta_X(eps) = 1 - sup{ t : ||t e + d|| <= 1, ||t e - d|| <= 1 } over unit e
// and ||d|| = eps / 2, maximized by Nelder-Mead from `restarts` random starts.
// PreconditionError for polyhedral models or eps outside (0, 2].
ModulusReport modulus_convexity_report(const NormedSpaceModel& model, double eps, int restarts = 20,
                                       std::uint64_t seed = 0x5eed);
double modulus_convexity(const NormedSpaceModel& model, double eps);

// 1 - sqrt(1 - eps^2 / 4).
double modulus_convexity_l2(double eps);

// min(eps^2 / 2, (delta_X(eps) / 2)^2 / 2) * (1 - 1e-6); eps in (0, 1/2].
double delta_for_eps(const NormedSpaceModel& model, double eps);

struct SliceReport {
  double max_pair_distance = 0.0;
  std::size_t samples = 0;
  std::size_t attempts = 0;
};

// Samples {x in B_X : f*(x) > 1 - delta} around the point exposed by f* and
// returns the largest pairwise distance. SamplerExhausted if fewer than two
// points are accepted.
SliceReport slice_diameter_check(const NormedSpaceModel& model, const Vector& fstar, double delta,
                                 std::size_t sample_count, std::uint64_t seed);

// sign(u_i) |u_i|^(p-1), normalized in l_q. PreconditionError unless ||u|| = 1.
Vector duality_map(const NormedSpaceModel& model, const Vector& u);

struct TildePair {
  std::size_t x = 0, y = 0;
  double separation = 0.0;
  double quotient = 0.0;
};

// Grid points x~, y~ on conv{x, y} with x~ - y~ a positive multiple of x - y,
// ||x~ - y~|| < min(eps, ||x~||, ||y~||) / 4 and f-quotient > 1 - delta; the
// widest qualifying pair. GridTooCoarseError when none exists.
TildePair select_tilde_pair(const LipFunctional& f, std::size_t x, std::size_t y, double delta, double eps);

// F(z) = max(r - rho(x~, z), 0), r = rho(x~, y~). PreconditionError when the
// base lies inside the ball.
LipFunctional bump_functional(const SpacePtr& space, std::size_t xt, std::size_t yt);

// Function on the ambient space; evaluated on grids and shifted to vanish at 0.
struct AmbientFunctional {
  std::string description;
  std::function<double(const Vector&)> eval;
};

LipFunctional restrict_to_grid(const AmbientFunctional& f, const SpacePtr& space);

// (1 - s) x*(z) + s max_k(-||z - c_k||) with x* the unit functional exposing
// `direction`; 1-Lipschitz on the whole space.
AmbientFunctional perturbed_linear(const NormedSpaceModel& model, const Vector& direction, double s,
                                   std::vector<Vector> cone_centers);

struct AuditEntry {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool upper = true;  // value < bound when true, value > bound otherwise
  double slack() const { return upper ? bound - value : value - bound; }
  bool passed() const { return slack() > 0.0; }
};

struct GridStepReport {
  double eps = 0.0;
  double delta = 0.0;
  double delta_x = 0.0;
  TildePair tilde;
  double bump_radius = 0.0;
  Vector xstar;
  double h_scale = 1.0;
  LipFunctional bump;
  LipFunctional h;
  LipBpbTrace trace;
  std::vector<AuditEntry> audits;
  bool passed() const;
};

// The corrector step of the uniformly convex construction on a fixed grid:
// tilde pair, bump, h = (F + x*) / 2 rescaled to unit grid norm, then
// lip_bpb_preliminary(f, (x~, y~), h, delta) with n_max steps, audited.
GridStepReport lipbpb_on_grid(const LipFunctional& f, std::size_t x, std::size_t y, double eps, int n_max = 20);

struct PipelineOptions {
  int segment_points = 64;
  std::size_t max_points = 200;
  int n_max = 20;
  std::uint64_t seed = 1;
};

struct PipelineReport {
  std::string model;
  double eps = 0.0;
  Vector x, y;
  std::string functional;
  SpacePtr space;
  std::size_t x_index = 0, y_index = 0;
  double f_scale = 1.0;  // grid normalization of the ambient functional
  LipFunctional f;
  GridStepReport step;
  bool passed() const { return step.passed(); }
};

// Builds the grid (0, x, y, a segment sample of conv{x, y} and a neighborhood
// of x~ of radius 2 ||x~ - y~||), normalizes f on it and runs lipbpb_on_grid.
PipelineReport lipbpb_uniformly_convex(const NormedSpaceModel& model, const AmbientFunctional& f, const Vector& x,
                                       const Vector& y, double eps, const PipelineOptions& options = {});

// Corrector for refine_to_local_attainment on a fixed grid: returns its input
// when the pair already attains, otherwise g of lipbpb_on_grid at eps_n and
// the latest trace pair (v_n, w_n) with g-quotient above 1 - delta(eps_n / 2),
// or the best pair when none is.
StepCorrector grid_step_corrector(const NormedSpaceModel& model, int n_max = 20);

}  // namespace lipkit
