#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lipkit/bpb.hpp"
#include "lipkit/errors.hpp"
#include "lipkit/random.hpp"

using namespace lipkit;

namespace {

struct Instance {
  LipFunctional f;
  std::size_t x, y;
  double delta;
};

// Unit-norm f with a non-attaining pair; delta just above its defect.
std::optional<Instance> random_instance(Rng& rng, std::size_t n) {
  GridBuilder b(NormedSpaceModel::lp(2, 2.0));
  while (b.size() < n) b.add("p", Vector{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
  const auto s = b.build();
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  v[s->base()] = 0.0;
  LipFunctional f(s, v);
  f = f.scaled(1.0 / lip_norm(f).norm);
  double best = -1.0;
  std::size_t bx = 0, by = 0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      const double q = f.quotient(x, y);
      if (q < 1.0 - 1e-6 && q > best) {
        best = q;
        bx = x;
        by = y;
      }
    }
  if (best <= 0.0) return std::nullopt;
  return Instance{f, bx, by, std::min(1.5, 1.25 * (1.0 - best) + 1e-3)};
}

}  // namespace

TEST_CASE("corrected pairs attain and stay within sqrt(2 delta)") {
  Rng rng(101);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = random_instance(rng, 4 + rng.index(3));
    if (!inst) continue;
    const auto r = bpb_correct(inst->f, inst->x, inst->y, inst->delta);
    CHECK(r.achieved);
    CHECK(std::abs(r.pairing - 1.0) <= 1e-9);
    CHECK(std::abs(r.g_norm - 1.0) <= 1e-9);
    CHECK(std::abs(r.z_norm - 1.0) <= 1e-9);
    CHECK(std::max(r.dist_f, r.dist_w) <= r.bound + 1e-12);
    CHECK(r.bound == doctest::Approx(std::sqrt(2.0 * inst->delta)));
    // Independent checks of the reported quantities.
    CHECK(pairing(r.g, r.z) == doctest::Approx(r.pairing));
    CHECK(lip_distance(inst->f, r.g) == doctest::Approx(r.dist_f).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("the brute-force oracle never beats the corrector when both succeed") {
  Rng rng(202);
  for (int trial = 0; trial < 15; ++trial) {
    const auto inst = random_instance(rng, 4 + rng.index(2));
    if (!inst) continue;
    const auto oracle = bpb_bruteforce_oracle(inst->f, inst->x, inst->y, inst->delta);
    const auto r = bpb_correct(inst->f, inst->x, inst->y, inst->delta);
    if (oracle.achievable) CHECK(r.achieved);
    CHECK(std::max(r.dist_f, r.dist_w) >= oracle.optimum - 1e-7);
  }
}

TEST_CASE("already attaining pairs need no correction") {
  const auto s = line_space({0.0, 1.0, 2.0});
  const LipFunctional f(s, {0.0, 1.0, 1.5});
  const auto r = bpb_correct(f, 1, 0, 0.1);
  CHECK(r.dist_f == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.dist_w == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("preconditions") {
  const auto s = line_space({0.0, 1.0, 2.0});
  const LipFunctional f(s, {0.0, 1.0, 1.5});
  CHECK_THROWS_AS(bpb_correct(f, 1, 0, 0.0), PreconditionError);
  CHECK_THROWS_AS(bpb_correct(f, 1, 0, 2.0), PreconditionError);
  CHECK_THROWS_AS(bpb_correct(f.scaled(2.0), 1, 0, 0.1), PreconditionError);
  CHECK_THROWS_AS(bpb_correct(f, 2, 1, 0.1), PreconditionError);  // quotient 1/2
  CHECK_THROWS_AS(bpb_correct(f, FreeVector::point(s, 2), 0.1), StructuralError);
  const auto big = line_space({0.0, 1.0, 2.0, 3.0, 4.0, 5.0});
  CHECK_THROWS_AS(bpb_bruteforce_oracle(LipFunctional(big, {0, 1, 2, 3, 4, 5}), 1, 0, 0.1), StructuralError);
}

TEST_CASE("hull projection of a listed molecule is exact") {
  const auto s = line_space({0.0, 1.0, 3.0});
  const auto w = FreeVector::molecule(s, 2, 1);
  const auto h = nearest_in_hull(w, {{2, 1}, {1, 0}});
  REQUIRE(h);
  CHECK(h->distance == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("preliminary trace meets its g-bound") {
  Rng rng(303);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = random_instance(rng, 5);
    if (!inst) continue;
    // h = rho(., y) - rho(0, y) attains at (x, y).
    const auto& s = inst->f.space();
    std::vector<double> hv(inst->f.size());
    for (std::size_t t = 0; t < hv.size(); ++t) hv[t] = s.dist(t, inst->y) - s.dist(s.base(), inst->y);
    const LipFunctional h(inst->f.space_ptr(), hv);
    const auto t = lip_bpb_preliminary(inst->f, inst->x, inst->y, h, inst->delta, 10);
    REQUIRE(t.entries.size() == 10);
    for (const auto& e : t.entries) {
      CHECK(e.alpha > 0.0);
      CHECK(e.alpha < 1.0);
      CHECK(e.g_quotient >= e.g_bound - 1e-9);
    }
  }
}

TEST_CASE("refinement schedule") {
  CHECK(refine_eps(1.0, 1) == 0.125);
  CHECK(refine_eps(0.5, 3) == 0.5 / 32.0);
}
