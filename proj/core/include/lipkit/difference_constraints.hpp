#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "lipkit/lipfunc.hpp"

namespace lipkit {

using PointPair = std::pair<std::size_t, std::size_t>;

struct AnchoredFit {
  LipFunctional g;
  double distance;  // ||f - g||, measured
};

// min ||f - g|| over g with ||g|| <= 1, g(0) = 0 and g(a) - g(b) = rho(a, b) for
// every (a, b) in `attained`. Every constraint is a difference bound, so
// feasibility at a fixed distance t is a negative-cycle test; t is bisected.
// nullopt when no unit functional attains on all of `attained`.
std::optional<AnchoredFit> nearest_attaining_functional(const LipFunctional& f,
                                                        const std::vector<PointPair>& attained,
                                                        int bisection_steps = 60);

// Potentials for a fixed t, or nullopt on a negative cycle.
std::optional<std::vector<double>> attaining_potentials(const LipFunctional& f,
                                                        const std::vector<PointPair>& attained, double t);

}  // namespace lipkit
