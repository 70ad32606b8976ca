#include <doctest.h>

#include <cmath>

#include "lipkit/errors.hpp"
#include "lipkit/random.hpp"
#include "lipkit/seminorms.hpp"

using namespace lipkit;

namespace {

SeminormModel random_maxabs(Rng& rng, std::size_t rows, std::size_t dim) {
  std::vector<Vector> r;
  for (std::size_t i = 0; i < rows; ++i) {
    Vector v = rng.normal_vector(dim);
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    r.push_back(scale(v, 1.0 / s));
  }
  return SeminormModel::max_abs(r);
}

}  // namespace

TEST_CASE("first coordinate on l_inf^2") {
  const auto p = SeminormModel::max_abs(std::vector<std::vector<Rational>>{{Rational(1), Rational(0)}});
  const auto n = seminorm_norms(p, NormedSpaceModel::linf(2));
  REQUIRE(n.exact_sup);
  CHECK(*n.exact_sup == 1);
  CHECK(n.witness[0] == 1.0);
  CHECK(n.lip_norm == doctest::Approx(1.0));
  CHECK(n.agree);
  const auto a = attainment_equivalences(p, NormedSpaceModel::linf(2));
  CHECK(a.agree);
  CHECK_FALSE(a.inconclusive);
}

TEST_CASE("the norm itself and the identity operator") {
  const auto id = SeminormModel::op_norm({Vector{1, 0}, Vector{0, 1}}, TargetNorm::L2);
  const auto n = seminorm_norms(id, NormedSpaceModel::lp(2, 2.0));
  CHECK(n.sup_norm == doctest::Approx(1.0));
  CHECK(n.certified);
  CHECK(attainment_equivalences(id, NormedSpaceModel::lp(2, 2.0)).agree);
  const auto linf = SeminormModel::max_abs(std::vector<Vector>{Vector{1, 0}, Vector{0, 1}});
  CHECK(*seminorm_norms(linf, NormedSpaceModel::linf(2)).exact_sup == 1);
}

TEST_CASE("p_n = max(|x_1|, |x_2| / n) has sup norm one") {
  for (int n = 1; n <= 5; ++n) {
    const auto p = SeminormModel::max_abs(
        std::vector<std::vector<Rational>>{{Rational(1), Rational(0)}, {Rational(0), Rational(1, n)}});
    CHECK(*seminorm_norms(p, NormedSpaceModel::linf(2)).exact_sup == 1);
  }
}

TEST_CASE("sup norm equals the grid Lipschitz norm on random models") {
  Rng rng(9);
  for (int t = 0; t < 30; ++t) {
    const std::size_t dim = 2 + rng.index(2);
    const auto p = random_maxabs(rng, 1 + rng.index(4), dim);
    CHECK(spot_check_seminorm_axioms(p, t));
    for (const auto& ambient : {NormedSpaceModel::linf(dim), NormedSpaceModel::lp(dim, 2.0), NormedSpaceModel::l1(dim)}) {
      const auto n = seminorm_norms(p, ambient, 32, t);
      CHECK(std::abs(n.sup_norm - n.lip_norm) <= 1e-9);
      CHECK(ambient.norm(n.witness) == doctest::Approx(1.0));
    }
    std::vector<Vector> m{rng.normal_vector(dim), rng.normal_vector(dim)};
    const auto op = SeminormModel::op_norm(m, TargetNorm::L2);
    const auto on = seminorm_norms(op, NormedSpaceModel::lp(dim, 3.0), 32, t);
    CHECK_FALSE(on.certified);
    CHECK(on.lip_norm <= on.sup_norm + 1e-9);
  }
}

TEST_CASE("uniform distance never exceeds the Lipschitz distance") {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_maxabs(rng, 3, 2);
    const auto q = random_maxabs(rng, 3, 2);
    const double uniform = to_double(uniform_distance_linf(p, q).value);
    GridBuilder b(NormedSpaceModel::linf(2));
    for (int i = -4; i <= 4; ++i)
      for (int j = -4; j <= 4; ++j) b.add("g", Vector{i / 4.0, j / 4.0});
    const auto grid = b.build();
    const double lip = lip_distance(seminorm_functional(p, grid), seminorm_functional(q, grid));
    CHECK(uniform <= lip + 1e-12);
  }
}

TEST_CASE("truncated seminorm") {
  const auto p1 = jn_truncated_seminorm(1, 1);
  CHECK(*seminorm_norms(p1, NormedSpaceModel::lp(1, 2.0)).exact_sup == Rational(1, 2));
  Rational prev(0);
  for (int N = 1; N <= 9; ++N) {
    const auto p = jn_truncated_seminorm(N, 10);
    const auto n = seminorm_norms(p, NormedSpaceModel::lp(10, 2.0));
    CHECK(*n.exact_sup == Rational(N, N + 1));
    CHECK(*n.exact_sup > prev);
    prev = *n.exact_sup;
  }
  const auto n9 = seminorm_norms(jn_truncated_seminorm(9, 10), NormedSpaceModel::lp(10, 2.0));
  CHECK(n9.witness[8] == doctest::Approx(1.0));
  const auto a = attainment_equivalences(jn_truncated_seminorm(5, 6), NormedSpaceModel::lp(6, 2.0));
  CHECK(a.value == doctest::Approx(5.0 / 6.0));
  CHECK(a.agree);
  CHECK_THROWS_AS(jn_truncated_seminorm(3, 2), PreconditionError);
}

TEST_CASE("uniform versus Lipschitz gap") {
  for (int n = 1; n <= 20; ++n) {
    const auto g = uniform_vs_lip_gap(n);
    CHECK(g.uniform_dist * n == 1);
    CHECK(g.lip_lower_bound == 1);
    CHECK(abs(g.uniform_witness[1]) == 1);
  }
  CHECK_THROWS_AS(uniform_vs_lip_gap(0), PreconditionError);
}

TEST_CASE("seminorm BPB construction") {
  const auto p0 = SeminormModel::max_abs(std::vector<Vector>{Vector{1.0, 0.0}, Vector{0.5, 0.5}});
  SUBCASE("attaining input is returned unchanged") {
    const auto r = seminorm_bpb_construct(p0, Vector{1.0, 0.3}, 0.0025, 0.2);
    CHECK(r.unchanged);
    CHECK(r.passed);
    CHECK(r.x == Vector{1.0, 0.3});
  }
  SUBCASE("near-attaining input is corrected") {
    const auto r = seminorm_bpb_construct(p0, Vector{0.999, 1.0}, 0.0025, 0.2);
    CHECK(r.passed);
    CHECK(r.p_at_x == doctest::Approx(1.0));
    CHECK(r.x_distance <= std::sqrt(0.005));
    CHECK(r.p_distance <= std::sqrt(0.005) + 1e-12);
  }
  CHECK_THROWS_AS(seminorm_bpb_construct(p0, Vector{0.5, 1.0}, 0.0025, 0.2), PreconditionError);
  CHECK_THROWS_AS(seminorm_bpb_construct(p0, Vector{1.0, 0.3}, 0.02, 0.2), PreconditionError);
}
