#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace lipkit {

// Platform-independent generator: std::mt19937_64 is fully specified by the
// standard, the distributions are not, so conversions are done by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::size_t index(std::size_t n);
  int sign() { return (next() & 1U) ? 1 : -1; }
  std::vector<double> normal_vector(std::size_t dim);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lipkit
