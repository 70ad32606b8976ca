#include <doctest.h>

#include "lipkit/random.hpp"
#include "lipkit/rational.hpp"
#include "lipkit/simplex.hpp"

using namespace lipkit;

TEST_CASE("textbook maximization in double and exact arithmetic") {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6).
  lp::Problem<double> d(2);
  d.set_objective(0, 3);
  d.set_objective(1, 5);
  d.add_row({1, 0}, lp::Sense::LessEqual, 4);
  d.add_row({0, 2}, lp::Sense::LessEqual, 12);
  d.add_row({3, 2}, lp::Sense::LessEqual, 18);
  const auto sd = lp::solve(d);
  REQUIRE(sd.status == lp::Status::Optimal);
  CHECK(sd.objective == doctest::Approx(36.0));
  CHECK(sd.x[0] == doctest::Approx(2.0));
  CHECK(sd.x[1] == doctest::Approx(6.0));

  lp::Problem<Rational> q(2);
  q.set_objective(0, Rational(3));
  q.set_objective(1, Rational(5));
  q.add_row({Rational(1), Rational(0)}, lp::Sense::LessEqual, Rational(4));
  q.add_row({Rational(0), Rational(2)}, lp::Sense::LessEqual, Rational(12));
  q.add_row({Rational(3), Rational(2)}, lp::Sense::LessEqual, Rational(18));
  const auto sq = lp::solve(q);
  REQUIRE(sq.status == lp::Status::Optimal);
  CHECK(sq.objective == Rational(36));
}

TEST_CASE("equality rows and free variables") {
  // max -x - y, x + y >= 2, x - y = 0, x and y free -> -2 at (1, 1).
  lp::Problem<Rational> q(2);
  q.set_free(0);
  q.set_free(1);
  q.set_objective(0, Rational(-1));
  q.set_objective(1, Rational(-1));
  q.add_row({Rational(1), Rational(1)}, lp::Sense::GreaterEqual, Rational(2));
  q.add_row({Rational(1), Rational(-1)}, lp::Sense::Equal, Rational(0));
  const auto s = lp::solve(q);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.objective == Rational(-2));
  CHECK(s.x[0] == Rational(1));
}

TEST_CASE("free variable taking a negative value") {
  lp::Problem<double> p(1);
  p.set_free(0);
  p.set_objective(0, -1);
  p.add_row({1}, lp::Sense::GreaterEqual, -3);
  const auto s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.x[0] == doctest::Approx(-3.0));
}

TEST_CASE("infeasible and unbounded problems") {
  lp::Problem<double> inf(1);
  inf.add_row({1}, lp::Sense::GreaterEqual, 2);
  inf.add_row({1}, lp::Sense::LessEqual, 1);
  CHECK(lp::solve(inf).status == lp::Status::Infeasible);

  lp::Problem<double> unb(2);
  unb.set_objective(0, 1);
  unb.add_row({0, 1}, lp::Sense::LessEqual, 1);
  CHECK(lp::solve(unb).status == lp::Status::Unbounded);
}

TEST_CASE("double and exact solves agree on random bounded problems") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + rng.index(3), m = 3 + rng.index(4);
    lp::Problem<double> d(n);
    lp::Problem<Rational> q(n);
    for (std::size_t j = 0; j < n; ++j) {
      const int c = static_cast<int>(rng.index(11)) - 3;
      d.set_objective(j, c);
      q.set_objective(j, Rational(c));
      std::vector<double> box(n, 0.0);
      std::vector<Rational> qbox(n, Rational(0));
      box[j] = 1;
      qbox[j] = 1;
      d.add_row(box, lp::Sense::LessEqual, 5);
      q.add_row(qbox, lp::Sense::LessEqual, Rational(5));
    }
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> row(n);
      std::vector<Rational> qrow(n);
      for (std::size_t j = 0; j < n; ++j) {
        const int a = static_cast<int>(rng.index(9)) - 4;
        row[j] = a;
        qrow[j] = a;
      }
      const int b = static_cast<int>(rng.index(10));
      d.add_row(row, lp::Sense::LessEqual, b);
      q.add_row(qrow, lp::Sense::LessEqual, Rational(b));
    }
    const auto sd = lp::solve(d);
    const auto sq = lp::solve(q);
    REQUIRE(sd.status == lp::Status::Optimal);
    REQUIRE(sq.status == lp::Status::Optimal);
    CHECK(sd.objective == doctest::Approx(to_double(sq.objective)).epsilon(1e-9));
  }
}
