#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lipkit/errors.hpp"
#include "lipkit/freespace.hpp"
#include "lipkit/random.hpp"

using namespace lipkit;

namespace {

// On a line with base 0: the integral of |tail mass| on both half-lines.
double line_oracle(const std::vector<double>& t, const std::vector<double>& c) {
  std::vector<double> cuts(t);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    double mass = 0.0;
    for (std::size_t p = 0; p < t.size(); ++p) {
      if (mid > 0.0 && t[p] > mid) mass += c[p];
      if (mid < 0.0 && t[p] < mid) mass += c[p];
    }
    total += std::abs(mass) * (cuts[k + 1] - cuts[k]);
  }
  return total;
}

SpacePtr random_space(Rng& rng, std::size_t n) {
  GridBuilder b(rng.uniform() < 0.5 ? NormedSpaceModel::lp(2, 2.0) : NormedSpaceModel::l1(2));
  while (b.size() < n) b.add("p", Vector{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
  return b.build();
}

FreeVector random_vector(Rng& rng, const SpacePtr& s) {
  std::vector<double> c(s->size());
  for (auto& x : c) x = rng.uniform() < 0.3 ? 0.0 : rng.uniform(-1.0, 1.0);
  return FreeVector(s, c);
}

}  // namespace

TEST_CASE("free norm on a line equals the transport integral") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> t{0.0};
    while (t.size() < 6) {
      const double v = std::round(rng.uniform(-4.0, 4.0) * 8.0) / 8.0;
      if (std::find(t.begin(), t.end(), v) == t.end()) t.push_back(v);
    }
    const auto s = line_space(t);
    std::vector<double> c(t.size());
    for (std::size_t p = 1; p < c.size(); ++p) c[p] = rng.uniform(-1.0, 1.0);
    const FreeVector z(s, c);
    const double oracle = line_oracle(t, c);
    CHECK(free_norm(z).norm == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(free_norm_primal(z).norm == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("dual and primal LPs agree and the embedding is isometric") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = random_space(rng, 3 + rng.index(6));
    const auto z = random_vector(rng, s);
    const auto dual = free_norm(z);
    CHECK(std::abs(dual.norm - free_norm_primal(z).norm) <= 1e-7);
    CHECK(lip_norm(dual.dual).norm <= 1.0 + 1e-9);
    CHECK(pairing(dual.dual, z) == doctest::Approx(dual.norm).epsilon(1e-9));
    for (std::size_t x = 0; x < s->size(); ++x)
      for (std::size_t y = 0; y < s->size(); ++y) {
        if (x == y) continue;
        const auto d = FreeVector::point(s, x).plus(FreeVector::point(s, y), -1.0);
        CHECK(std::abs(free_norm(d).norm - s->dist(x, y)) <= 1e-9);
      }
  }
}

TEST_CASE("base coefficient is ignored") {
  const auto s = line_space({0.0, 1.0});
  const FreeVector z(s, {5.0, 2.0});
  CHECK(z[0] == 0.0);
  CHECK(free_norm(z).norm == doctest::Approx(2.0));
}

TEST_CASE("decomposition into molecules reconstructs the unit vector") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_space(rng, 4 + rng.index(3));
    auto z = random_vector(rng, s);
    const double n = free_norm(z).norm;
    if (n == 0.0) continue;
    z = z.scaled(1.0 / n);
    const auto d = decompose_in_convW(z);
    CHECK(d.total <= 1.0 + 1e-9);
    CHECK(d.residual <= 1e-9);
    std::vector<double> rebuilt(s->size(), 0.0);
    for (const auto& w : d.weights) {
      CHECK(w.weight >= 0.0);
      const auto m = FreeVector::molecule(s, w.x, w.y);
      for (std::size_t p = 0; p < s->size(); ++p) rebuilt[p] += w.weight * m[p];
    }
    for (std::size_t p = 0; p < s->size(); ++p)
      if (p != s->base()) CHECK(rebuilt[p] == doctest::Approx(z[p]).epsilon(1e-8));
  }
  const auto s = line_space({0.0, 1.0});
  CHECK_THROWS_AS(decompose_in_convW(FreeVector(s, {0.0, 2.0})), PreconditionError);
}

TEST_CASE("supporting functional has norm one and norms the vector") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_space(rng, 5);
    const auto z = random_vector(rng, s);
    if (free_norm(z).norm == 0.0) continue;
    const auto g = supporting_functional(z);
    CHECK(lip_norm(g).norm == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pairing(g, z) == doctest::Approx(free_norm(z).norm).epsilon(1e-9));
  }
  CHECK_THROWS_AS(supporting_functional(FreeVector::zero(line_space({0.0, 1.0}))), PreconditionError);
}

TEST_CASE("molecules are lexicographic unit vectors") {
  const auto s = line_space({0.0, 1.0, 3.0});
  const auto ms = molecules(s);
  CHECK(ms.size() == 6);
  CHECK(ms.front().x == 0);
  CHECK(ms.front().y == 1);
  for (const auto& m : ms) CHECK(free_norm(m.vector).norm == doctest::Approx(1.0));
}
