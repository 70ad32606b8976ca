#include "lipkit/random.hpp"

#include <cmath>
#include <numbers>

namespace lipkit {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) return 0;
  return static_cast<std::size_t>(engine_() % n);
}

std::vector<double> Rng::normal_vector(std::size_t dim) {
  std::vector<double> v(dim);
  for (auto& x : v) x = normal();
  return v;
}

}  // namespace lipkit
