#pragma once

// Dense two-phase tableau simplex with Bland's anti-cycling rule.
//
// Templated on the scalar so the same pivoting runs in floating point or in
// exact rational arithmetic. Problems are stated as
//
//   maximize  c^T x   subject to  rows (<=, =, >=),  x_j >= 0 unless free.
//
// Intended for desk-scale LPs (hundreds of rows/columns); no sparsity, no
// factorization updates.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "lipkit/rational.hpp"

namespace lipkit::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

enum class Sense { LessEqual, Equal, GreaterEqual };

template <typename Scalar>
struct Row {
  std::vector<Scalar> coeffs;  // dense, one entry per variable
  Sense sense = Sense::LessEqual;
  Scalar rhs{};
};

template <typename Scalar>
class Problem {
 public:
  explicit Problem(std::size_t num_vars)
      : objective_(num_vars, Scalar(0)), free_(num_vars, false) {}

  std::size_t num_vars() const { return objective_.size(); }

  void set_objective(std::size_t j, Scalar c) { objective_[j] = std::move(c); }
  void set_free(std::size_t j, bool is_free = true) { free_[j] = is_free; }

  void add_row(std::vector<Scalar> coeffs, Sense sense, Scalar rhs) {
    coeffs.resize(num_vars(), Scalar(0));
    rows_.push_back({std::move(coeffs), sense, std::move(rhs)});
  }

  const std::vector<Scalar>& objective() const { return objective_; }
  const std::vector<bool>& free_vars() const { return free_; }
  const std::vector<Row<Scalar>>& rows() const { return rows_; }

 private:
  std::vector<Scalar> objective_;
  std::vector<bool> free_;
  std::vector<Row<Scalar>> rows_;
};

template <typename Scalar>
struct Solution {
  Status status = Status::Infeasible;
  Scalar objective{};
  std::vector<Scalar> x;
  std::size_t pivots = 0;
};

struct Options {
  double tolerance = 1e-10;  // ignored for exact scalars
  std::size_t max_pivots = 200000;
};

namespace detail {

template <typename Scalar>
struct Tol {
  static bool positive(const Scalar& v, double) { return v > 0; }
  static bool nonzero(const Scalar& v, double) { return v != 0; }
  static bool ratio_tie(const Scalar& a, const Scalar& b, double) { return a == b; }
};

template <>
struct Tol<double> {
  static bool positive(double v, double eps) { return v > eps; }
  static bool nonzero(double v, double eps) { return std::abs(v) > eps; }
  static bool ratio_tie(double a, double b, double eps) {
    return std::abs(a - b) <= eps * (1.0 + std::abs(a));
  }
};

template <typename Scalar>
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), data_(rows * (cols + 1), Scalar(0)), basis_(rows, 0) {}

  Scalar& at(std::size_t i, std::size_t j) { return data_[i * (n_ + 1) + j]; }
  const Scalar& at(std::size_t i, std::size_t j) const { return data_[i * (n_ + 1) + j]; }
  Scalar& rhs(std::size_t i) { return at(i, n_); }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c, std::vector<Scalar>& reduced) {
    const Scalar inv = Scalar(1) / at(r, c);
    for (std::size_t j = 0; j <= n_; ++j) at(r, j) *= inv;
    at(r, c) = Scalar(1);
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const Scalar factor = at(i, c);
      if (factor == Scalar(0)) continue;
      for (std::size_t j = 0; j <= n_; ++j) at(i, j) -= factor * at(r, j);
      at(i, c) = Scalar(0);
    }
    const Scalar factor = reduced[c];
    if (factor != Scalar(0)) {
      for (std::size_t j = 0; j <= n_; ++j) reduced[j] -= factor * at(r, j);
      reduced[c] = Scalar(0);
    }
    basis_[r] = c;
  }

  void drop_row(std::size_t r) {
    data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(r * (n_ + 1)),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * (n_ + 1)));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --m_;
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<Scalar> data_;
  std::vector<std::size_t> basis_;
};

// Runs Bland-rule pivots on `reduced` (reduced costs, maximization) over the
// allowed columns. Returns Optimal, Unbounded or IterationLimit.
template <typename Scalar>
Status run_phase(Tableau<Scalar>& t, std::vector<Scalar>& reduced, std::size_t allowed_cols,
                 const Options& opt, std::size_t& pivots) {
  using T = Tol<Scalar>;
  const double eps = opt.tolerance;
  while (true) {
    std::size_t enter = allowed_cols;
    for (std::size_t j = 0; j < allowed_cols; ++j) {
      if (T::positive(reduced[j], eps)) {
        enter = j;
        break;
      }
    }
    if (enter == allowed_cols) return Status::Optimal;

    std::size_t leave = t.rows();
    Scalar best_ratio{};
    for (std::size_t i = 0; i < t.rows(); ++i) {
      const Scalar& a = t.at(i, enter);
      if (!T::positive(a, eps)) continue;
      Scalar ratio = t.rhs(i) / a;
      bool take = leave == t.rows();
      if (!take) {
        if (T::ratio_tie(ratio, best_ratio, eps)) take = t.basis()[i] < t.basis()[leave];
        else take = ratio < best_ratio;
      }
      if (take) {
        leave = i;
        best_ratio = std::move(ratio);
      }
    }
    if (leave == t.rows()) return Status::Unbounded;
    if (++pivots > opt.max_pivots) return Status::IterationLimit;
    t.pivot(leave, enter, reduced);
  }
}

}  // namespace detail

template <typename Scalar>
Solution<Scalar> solve(const Problem<Scalar>& problem, const Options& opt = {}) {
  using T = detail::Tol<Scalar>;
  const double eps = opt.tolerance;
  const std::size_t nv = problem.num_vars();
  const auto& rows = problem.rows();
  const std::size_t m = rows.size();

  // Column layout: structural (free vars split in two), slack/surplus, artificial.
  std::vector<std::size_t> pos_col(nv), neg_col(nv, static_cast<std::size_t>(-1));
  std::size_t ncols = 0;
  for (std::size_t j = 0; j < nv; ++j) {
    pos_col[j] = ncols++;
    if (problem.free_vars()[j]) neg_col[j] = ncols++;
  }
  const std::size_t structural = ncols;

  std::vector<Sense> sense(m);
  std::vector<bool> flipped(m, false);
  std::size_t n_slack = 0, n_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sense[i] = rows[i].sense;
    if (rows[i].rhs < Scalar(0)) {
      flipped[i] = true;
      if (sense[i] == Sense::LessEqual) sense[i] = Sense::GreaterEqual;
      else if (sense[i] == Sense::GreaterEqual) sense[i] = Sense::LessEqual;
    }
    if (sense[i] != Sense::Equal) ++n_slack;
    if (sense[i] != Sense::LessEqual) ++n_art;
  }
  const std::size_t art_begin = structural + n_slack;
  const std::size_t total = art_begin + n_art;

  detail::Tableau<Scalar> t(m, total);
  std::size_t slack = structural, art = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    const Scalar s = flipped[i] ? Scalar(-1) : Scalar(1);
    for (std::size_t j = 0; j < nv; ++j) {
      const Scalar& a = rows[i].coeffs[j];
      if (a == Scalar(0)) continue;
      t.at(i, pos_col[j]) = s * a;
      if (neg_col[j] != static_cast<std::size_t>(-1)) t.at(i, neg_col[j]) = -s * a;
    }
    t.rhs(i) = s * rows[i].rhs;
    switch (sense[i]) {
      case Sense::LessEqual:
        t.at(i, slack) = Scalar(1);
        t.basis()[i] = slack++;
        break;
      case Sense::GreaterEqual:
        t.at(i, slack++) = Scalar(-1);
        t.at(i, art) = Scalar(1);
        t.basis()[i] = art++;
        break;
      case Sense::Equal:
        t.at(i, art) = Scalar(1);
        t.basis()[i] = art++;
        break;
    }
  }

  Solution<Scalar> sol;
  std::vector<Scalar> reduced(total + 1, Scalar(0));

  if (n_art > 0) {
    // Phase 1: maximize -sum(artificials).
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis()[i] < art_begin) continue;
      for (std::size_t j = 0; j <= total; ++j) {
        if (j >= art_begin && j < total) continue;
        reduced[j] += t.at(i, j);
      }
    }
    const Status st = detail::run_phase(t, reduced, total, opt, sol.pivots);
    if (st == Status::IterationLimit) {
      sol.status = st;
      return sol;
    }
    Scalar infeasibility(0);
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (t.basis()[i] >= art_begin) infeasibility += t.rhs(i);
    }
    if (T::positive(infeasibility, eps * 10.0)) {
      sol.status = Status::Infeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < t.rows();) {
      if (t.basis()[i] < art_begin) {
        ++i;
        continue;
      }
      std::size_t c = art_begin;
      for (std::size_t j = 0; j < art_begin; ++j) {
        if (T::nonzero(t.at(i, j), eps)) {
          c = j;
          break;
        }
      }
      if (c == art_begin) {
        t.drop_row(i);
      } else {
        t.pivot(i, c, reduced);
        ++i;
      }
    }
  }

  // Phase 2 reduced costs c_j - c_B^T column_j.
  std::vector<Scalar> cost(total + 1, Scalar(0));
  for (std::size_t j = 0; j < nv; ++j) {
    cost[pos_col[j]] = problem.objective()[j];
    if (neg_col[j] != static_cast<std::size_t>(-1)) cost[neg_col[j]] = -problem.objective()[j];
  }
  std::fill(reduced.begin(), reduced.end(), Scalar(0));
  for (std::size_t j = 0; j < total; ++j) reduced[j] = cost[j];
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const Scalar& cb = cost[t.basis()[i]];
    if (cb == Scalar(0)) continue;
    for (std::size_t j = 0; j <= total; ++j) reduced[j] -= cb * t.at(i, j);
  }
  for (std::size_t j = art_begin; j < total; ++j) reduced[j] = Scalar(0);

  const Status st = detail::run_phase(t, reduced, art_begin, opt, sol.pivots);
  sol.status = st;
  if (st != Status::Optimal) return sol;

  std::vector<Scalar> col_value(total, Scalar(0));
  for (std::size_t i = 0; i < t.rows(); ++i) col_value[t.basis()[i]] = t.rhs(i);
  sol.x.assign(nv, Scalar(0));
  sol.objective = Scalar(0);
  for (std::size_t j = 0; j < nv; ++j) {
    sol.x[j] = col_value[pos_col[j]];
    if (neg_col[j] != static_cast<std::size_t>(-1)) sol.x[j] -= col_value[neg_col[j]];
    sol.objective += problem.objective()[j] * sol.x[j];
  }
  return sol;
}

}  // namespace lipkit::lp
