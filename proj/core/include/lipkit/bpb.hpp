#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "lipkit/difference_constraints.hpp"
#include "lipkit/freespace.hpp"
#include "lipkit/lipfunc.hpp"

namespace lipkit {

struct BpbResult {
  LipFunctional g;
  FreeVector z;
  double pairing = 0.0;  // <g, z>
  double g_norm = 0.0;
  double z_norm = 0.0;
  double dist_f = 0.0;  // ||f - g||
  double dist_w = 0.0;  // free_norm(w - z)
  double bound = 0.0;   // sqrt(2 delta)
  bool achieved = false;
  int stage = 1;
  std::size_t candidates = 0;  // anchored problems solved
};

// (g, z) with <g, z> = ||g|| = free_norm(z) = 1 close to (f, w). The search
// first anchors z at single molecules (exact difference-constraint solves),
// then alternates face projections from several starts on small spaces.
// PreconditionError unless ||f|| = 1, delta in (0, 2) and <f, w> > 1 - delta.
BpbResult bpb_correct(const LipFunctional& f, std::size_t x, std::size_t y, double delta);
// w must be a molecule; StructuralError otherwise.
BpbResult bpb_correct(const LipFunctional& f, const FreeVector& w, double delta);

struct OracleResult {
  double optimum = 0.0;  // min over (g, z) of max(||f - g||, free_norm(w - z))
  std::vector<PointPair> face;  // molecules spanning the optimal z's face
  bool achievable = false;  // optimum <= sqrt(2 delta)
  std::size_t subsets = 0;
};

// Exhaustive search over molecule sets of size < |E| (Caratheodory) for
// |E| <= 5; StructuralError on larger spaces.
OracleResult bpb_bruteforce_oracle(const LipFunctional& f, std::size_t x, std::size_t y, double delta);

// Nearest point of conv{molecules} to w in the free norm.
struct HullProjection {
  FreeVector z;
  double distance;
  std::vector<double> weights;
};
std::optional<HullProjection> nearest_in_hull(const FreeVector& w, const std::vector<PointPair>& pairs);

struct TraceEntry {
  int n = 0;
  double alpha = 0.0;
  double delta_n = 0.0;
  std::size_t v = 0, w = 0;
  double h_quotient = 0.0;
  double g_quotient = 0.0;
  double g_bound = 0.0;  // 1 - delta_n - alpha / (1 - alpha) * sqrt(2 delta)
};

struct LipBpbTrace {
  BpbResult correction;
  double nu = 0.0;
  double delta = 0.0;
  Decomposition decomposition;
  std::vector<TraceEntry> entries;
};

// w := molecule(x, y), (g, z) := bpb_correct(f, w, delta), then for n = 1..n_max
// the support molecule of z maximizing alpha_n <h, u> + (1 - alpha_n) <g, u>.
// h must have norm one and attain at (x, y). NumericalError when the corrector
// misses its bound.
LipBpbTrace lip_bpb_preliminary(const LipFunctional& f, std::size_t x, std::size_t y, const LipFunctional& h,
                                double delta, int n_max);

struct StepInput {
  const LipFunctional& f;
  std::size_t x, y;
  double eps_n;
  int n;
};

struct StepOutput {
  LipFunctional f;
  std::size_t x, y;
};

struct StepCorrector {
  std::function<double(double)> delta;  // delta(eps)
  std::function<StepOutput(const StepInput&)> step;
};

struct PropertyCheck {
  double value = 0.0;
  double bound = 0.0;
  bool checked = false;
  bool holds = true;
};

struct RefineAudit {
  int n = 0;
  double eps_n = 0.0;
  double delta_n = 0.0;
  std::size_t x = 0, y = 0;
  PropertyCheck a, b, c, d, e;
};

struct RefineResult {
  LipFunctional g;
  std::size_t v = 0, w = 0;
  std::optional<Vector> v_coord;
  std::optional<Vector> u;  // normalized x_N - y_N
  std::vector<RefineAudit> audit;
  AttainmentCertificate certificate;
  double dist_f = 0.0;         // ||f - g||
  double eps_sum = 0.0;        // sum of eps_n over performed steps
  double dist_to_segment = 0.0;  // dist(v, conv{x, y}), coordinates only
  bool converged = false;
};

inline double refine_eps(double eps, int n) { return eps / static_cast<double>(1ULL << (n + 2)); }

// Iterates the corrector with eps_n = eps / 2^(n+2), auditing
//   (a) ||f_n - f_{n+1}|| < eps_n        (b) direction drift < eps_n
//   (c) f_n-quotient > 1 - delta(eps_n)   (d) dist(x_{n+1}, conv{x_n, y_n}) < eps_n
//   (e) ||x_n - y_n|| < eps_{n-1}  (n >= 2)
// Stops when the step returns its input, the pair gets closer than `floor`, or
// after max_iters. ContractViolation names the first failing property.
RefineResult refine_to_local_attainment(const LipFunctional& f, std::size_t x, std::size_t y, double eps,
                                        const StepCorrector& corrector, int max_iters = 30,
                                        double floor = 1e-12);

}  // namespace lipkit
