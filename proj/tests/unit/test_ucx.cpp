#include <doctest.h>

#include <cmath>

#include "lipkit/errors.hpp"
#include "lipkit/ucx.hpp"

using namespace lipkit;

namespace {

// Clarkson: delta(eps) = 1 - (1 - (eps / 2)^p)^(1 / p) on l_p, p >= 2.
double clarkson(double p, double eps) { return 1.0 - std::pow(1.0 - std::pow(eps / 2.0, p), 1.0 / p); }

}  // namespace

TEST_CASE("modulus of convexity matches closed forms") {
  for (double eps : {0.25, 0.5, 1.0, 1.5}) {
    CHECK(std::abs(modulus_convexity(NormedSpaceModel::lp(2, 2.0), eps) - modulus_convexity_l2(eps)) <= 1e-6);
    CHECK(std::abs(modulus_convexity(NormedSpaceModel::lp(2, 4.0), eps) - clarkson(4.0, eps)) <= 1e-6);
  }
  CHECK(modulus_convexity_l2(1.0) == doctest::Approx(1.0 - std::sqrt(0.75)));
  const auto rep = modulus_convexity_report(NormedSpaceModel::lp(3, 3.0), 1.0, 10, 4);
  CHECK(rep.restarts.size() == 10);
  CHECK(rep.agreeing >= 1);
  CHECK_THROWS_AS(modulus_convexity(NormedSpaceModel::linf(2), 0.5), PreconditionError);
  CHECK_THROWS_AS(modulus_convexity(NormedSpaceModel::lp(2, 2.0), 2.5), PreconditionError);
}

TEST_CASE("delta_for_eps stays below eps^2 / 2") {
  const auto m = NormedSpaceModel::lp(2, 2.0);
  for (double eps : {0.1, 0.25, 0.5}) {
    const double d = delta_for_eps(m, eps);
    CHECK(d > 0.0);
    CHECK(d < eps * eps / 2.0);
  }
  CHECK_THROWS_AS(delta_for_eps(m, 0.0), PreconditionError);
  CHECK_THROWS_AS(delta_for_eps(m, 0.6), PreconditionError);
}

TEST_CASE("slices at the modulus have diameter below eps") {
  for (double p : {2.0, 3.0}) {
    const auto m = NormedSpaceModel::lp(2, p);
    const double eps = 0.5;
    const auto fstar = m.dual_map(m.normalized(Vector{1.0, 0.4}));
    const auto rep = slice_diameter_check(m, fstar, modulus_convexity(m, eps), 2000, 8);
    CHECK(rep.samples >= 2);
    CHECK(rep.max_pair_distance < eps);
  }
}

TEST_CASE("duality map norms its argument") {
  const auto m = NormedSpaceModel::lp(3, 3.0);
  const auto u = m.normalized(Vector{1.0, -2.0, 0.5});
  const auto j = duality_map(m, u);
  CHECK(m.dual_norm(j) == doctest::Approx(1.0));
  CHECK(dot(j, u) == doctest::Approx(1.0));
  CHECK_THROWS_AS(duality_map(m, Vector{1.0, 1.0, 1.0}), PreconditionError);
}

TEST_CASE("bump functional has norm one and vanishes at the base") {
  const auto s = line_space({0.0, 1.0, 1.25, 2.0});
  const auto f = bump_functional(s, 1, 2);
  CHECK(f[0] == 0.0);
  CHECK(lip_norm(f).norm == doctest::Approx(1.0));
  CHECK_THROWS_AS(bump_functional(line_space({0.0, 1.0, 3.5}), 1, 2), PreconditionError);
}

TEST_CASE("pipeline on a small l_2 grid passes every audit") {
  const auto m = NormedSpaceModel::lp(2, 2.0);
  const Vector x{1.0, 0.6}, y{0.5, 0.1};
  const double eps = 0.5;
  const double delta = delta_for_eps(m, eps);
  const auto f = perturbed_linear(m, subtract(x, y), 0.25 * delta, {Vector{0.8, 0.5}});
  const auto rep = lipbpb_uniformly_convex(m, f, x, y, eps);
  CHECK(rep.space->size() <= 200);
  CHECK(rep.passed());
  for (const auto& a : rep.step.audits) CHECK_MESSAGE(a.passed(), a.name);
  CHECK(lip_norm(rep.f).norm == doctest::Approx(1.0));
}

TEST_CASE("grid step corrector leaves attaining pairs alone") {
  const auto s = line_space({0.0, 1.0, 2.0});
  const LipFunctional f(s, {0.0, 1.0, 2.0});
  const auto corr = grid_step_corrector(NormedSpaceModel::linf(1));
  const auto out = corr.step({f, 2, 0, 0.01, 1});
  CHECK(out.x == 2);
  CHECK(out.y == 0);
  CHECK(lip_distance(out.f, f) == 0.0);
}

TEST_CASE("refinement loop on a near-attaining l_2 pipeline converges") {
  const auto m = NormedSpaceModel::lp(2, 2.0);
  const Vector x{1.0, 0.5}, y{0.44, 0.1};
  const double eps = 0.5;
  const double delta1 = delta_for_eps(m, refine_eps(eps, 1));
  const auto f = perturbed_linear(m, subtract(x, y), 0.25 * delta1, {Vector{0.8, 0.5}});
  PipelineOptions opt;
  opt.seed = 3;
  const auto rep = lipbpb_uniformly_convex(m, f, x, y, eps, opt);
  const auto r = refine_to_local_attainment(rep.f, rep.x_index, rep.y_index, eps, grid_step_corrector(m));
  CHECK(r.converged);
  CHECK(r.dist_f < r.eps_sum);
  CHECK(r.eps_sum < eps / 4.0);
  CHECK(r.dist_to_segment < eps);
  for (const auto& row : r.audit)
    for (const auto* p : {&row.a, &row.b, &row.c, &row.d, &row.e}) CHECK((!p->checked || p->holds));
}
