#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lipkit/errors.hpp"
#include "lipkit/lipfunc.hpp"
#include "lipkit/random.hpp"

using namespace lipkit;

namespace {

double oracle_norm(const LipFunctional& f) {
  double m = 0.0;
  const auto& s = f.space();
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (i != j) m = std::max(m, std::abs(f[i] - f[j]) / s.dist(i, j));
  return m;
}

SpacePtr random_space(Rng& rng, std::size_t n, std::size_t dim = 2) {
  GridBuilder b(NormedSpaceModel::lp(dim, 2.0));
  while (b.size() < n) {
    Vector c(dim);
    for (auto& x : c) x = rng.uniform(-2.0, 2.0);
    b.add("p" + std::to_string(b.size()), c);
  }
  return b.build();
}

LipFunctional random_functional(Rng& rng, const SpacePtr& s) {
  std::vector<double> v(s->size());
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  v[s->base()] = 0.0;
  return LipFunctional(s, v);
}

}  // namespace

TEST_CASE("norm of a two-point functional") {
  const auto s = line_space({0.0, 2.0});
  const LipFunctional f(s, {0.0, 3.0});
  const auto n = lip_norm(f);
  CHECK(n.norm == doctest::Approx(1.5));
  CHECK(n.x == 1);
  CHECK(n.y == 0);
  CHECK_THROWS_AS(LipFunctional(s, {1.0, 3.0}), PreconditionError);
}

TEST_CASE("lip_norm matches the brute-force oracle") {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto s = random_space(rng, 3 + rng.index(8));
    const auto f = random_functional(rng, s);
    CHECK(lip_norm(f).norm == doctest::Approx(oracle_norm(f)).epsilon(1e-14));
    CHECK(lip_norm_abs(f) == doctest::Approx(oracle_norm(f)).epsilon(1e-14));
  }
}

TEST_CASE("exact norms on rational line spaces") {
  const auto s = exact_line_space({Rational(0), Rational(1, 3), Rational(1)});
  const auto f = LipFunctional::exact(s, {Rational(0), Rational(1, 2), Rational(1, 2)});
  const auto n = lip_norm(f);
  REQUIRE(n.exact);
  CHECK(*n.exact == Rational(3, 2));
  const auto cert = strongly_attains(f);
  REQUIRE(cert);
  CHECK(cert->mode == AttainmentMode::Strong);
  CHECK(cert->pairs.size() == 1);
  CHECK_THROWS_AS(strongly_attains(LipFunctional::zero(s)), DegenerateError);
}

TEST_CASE("McShane variants restrict, keep the constant and are ordered") {
  Rng rng(17);
  for (int t = 0; t < 40; ++t) {
    const auto s = random_space(rng, 5 + rng.index(6));
    std::vector<std::size_t> idx{s->base()};
    for (std::size_t i = 0; i < s->size(); ++i)
      if (i != s->base() && rng.uniform() < 0.5) idx.push_back(i);
    std::vector<double> vals{0.0};
    for (std::size_t k = 1; k < idx.size(); ++k) vals.push_back(rng.uniform(-1.0, 1.0));
    double sub = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b)
        if (a != b) sub = std::max(sub, std::abs(vals[a] - vals[b]) / s->dist(idx[a], idx[b]));
    const auto inf = mcshane_extend(s, idx, vals, McShaneVariant::Inf);
    const auto sup = mcshane_extend(s, idx, vals, McShaneVariant::Sup);
    const auto mid = mcshane_extend(s, idx, vals, McShaneVariant::Midpoint);
    for (const auto* g : {&inf, &sup, &mid}) {
      for (std::size_t k = 0; k < idx.size(); ++k) CHECK((*g)[idx[k]] == vals[k]);
      CHECK(oracle_norm(*g) == doctest::Approx(sub).epsilon(1e-9));
    }
    for (std::size_t p = 0; p < s->size(); ++p) {
      CHECK(sup[p] <= mid[p] + 1e-15);
      CHECK(mid[p] <= inf[p] + 1e-15);
    }
  }
}

TEST_CASE("extension by coordinates onto a finer grid") {
  const auto coarse = line_space({0.0, 1.0});
  const auto fine = line_space({0.0, 0.5, 1.0, 2.0});
  const LipFunctional f(coarse, {0.0, 1.0});
  const auto g = mcshane_extend(f, fine, McShaneVariant::Inf);
  CHECK(g[*fine->find_coord(Vector{0.5})] == doctest::Approx(0.5));
  CHECK(g[*fine->find_coord(Vector{2.0})] == doctest::Approx(2.0));
}

TEST_CASE("interpolation residual vanishes for affine functions on a line") {
  const auto s = exact_line_space({Rational(0), Rational(1, 2), Rational(1)});
  const auto f = LipFunctional::exact(s, {Rational(0), Rational(1, 4), Rational(1, 2)});
  for (const auto& t : betweenness_triples(*s)) CHECK(interpolation_residual_exact(f, t) == 0);
}

TEST_CASE("composition with a retraction obeys the product bound") {
  std::vector<double> nodes;
  for (int k = 0; k <= 10; ++k) nodes.push_back(k / 10.0);
  const auto line = line_space(nodes);
  std::vector<double> gv;
  for (double t : nodes) gv.push_back(std::abs(t - 0.5) - 0.5);
  const LipFunctional g(line, gv);
  const auto plane = line_space({0.0, 0.25, 0.8, 1.0});
  const LipFunctional u(plane, {0.0, 0.25, 0.8, 1.0});
  const auto c = compose_with_retraction(g, u);
  CHECK(c.bound_holds);
  CHECK(c.h_norm <= c.bound + 1e-12);
  CHECK(c.h[1] == doctest::Approx(-0.25));
  const LipFunctional out(plane, {0.0, 0.25, 0.8, 1.5});
  CHECK_THROWS_AS(compose_with_retraction(g, out), RangeError);
}

TEST_CASE("locality witnesses exist on fine line grids") {
  std::vector<double> nodes;
  for (int k = 0; k <= 100; ++k) nodes.push_back(k / 100.0);
  const auto s = line_space(nodes);
  std::vector<double> v;
  for (double t : nodes) v.push_back(std::sin(3.0 * t) / 3.0);
  const LipFunctional f(s, v);
  const auto w = locality_witness(f, 0.05);
  REQUIRE(w);
  CHECK(w->distance < 0.05);
  CHECK(w->quotient > lip_norm(f).norm - 0.05);
  CHECK_FALSE(locality_witness(LipFunctional(line_space({0.0, 1.0}), {0.0, 1.0}), 0.5));
}
