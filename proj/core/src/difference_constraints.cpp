#include "lipkit/difference_constraints.hpp"

#include <algorithm>
#include <limits>

namespace lipkit {

namespace {

constexpr double kRelaxTolerance = 1e-14;

}  // namespace

std::optional<std::vector<double>> attaining_potentials(const LipFunctional& f,
                                                        const std::vector<PointPair>& attained, double t) {
  const auto& s = f.space();
  const std::size_t n = s.size();
  // Bound on g(a) - g(b): edge b -> a.
  std::vector<double> w(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const double rho = s.dist(a, b);
      w[a * n + b] = std::min(rho, t * rho + f[a] - f[b]);
    }
  const std::size_t base = s.base();
  std::vector<double> d(n);
  for (std::size_t v = 0; v < n; ++v) d[v] = v == base ? 0.0 : w[v * n + base];
  for (std::size_t round = 0; round <= n; ++round) {
    bool changed = false;
    for (std::size_t a = 0; a < n; ++a) {
      double best = d[a];
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) continue;
        const double cand = d[b] + w[a * n + b];
        if (cand < best - kRelaxTolerance) best = cand;
      }
      if (best < d[a]) {
        d[a] = best;
        changed = true;
      }
    }
    for (const auto& [a, b] : attained) {
      const double cand = d[a] - s.dist(a, b);
      if (cand < d[b] - kRelaxTolerance) {
        d[b] = cand;
        changed = true;
      }
    }
    if (!changed) {
      const double shift = d[base];
      for (auto& x : d) x -= shift;
      return d;
    }
  }
  return std::nullopt;
}

std::optional<AnchoredFit> nearest_attaining_functional(const LipFunctional& f,
                                                        const std::vector<PointPair>& attained,
                                                        int bisection_steps) {
  double hi = lip_norm_abs(f) + 1.0;
  auto best = attaining_potentials(f, attained, hi);
  if (!best) return std::nullopt;
  double lo = 0.0;
  if (auto at_zero = attaining_potentials(f, attained, 0.0)) {
    best = std::move(at_zero);
  } else {
    for (int it = 0; it < bisection_steps && hi - lo > 1e-14; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (auto p = attaining_potentials(f, attained, mid)) {
        hi = mid;
        best = std::move(p);
      } else {
        lo = mid;
      }
    }
  }
  LipFunctional g(f.space_ptr(), std::move(*best));
  const double dist = lip_distance(f, g);
  return AnchoredFit{std::move(g), dist};
}

}  // namespace lipkit
