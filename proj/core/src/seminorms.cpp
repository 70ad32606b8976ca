#include "lipkit/seminorms.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lipkit/errors.hpp"
#include "lipkit/random.hpp"
#include "lipkit/simplex.hpp"

namespace lipkit {

const char* to_string(SeminormKind k) { return k == SeminormKind::MaxAbs ? "MAXABS" : "OPNORM"; }
const char* to_string(TargetNorm t) { return t == TargetNorm::L2 ? "l2" : "linf"; }

SeminormModel SeminormModel::max_abs(std::vector<std::vector<Rational>> functionals) {
  if (functionals.empty()) throw StructuralError("MAXABS seminorm needs at least one functional");
  SeminormModel m;
  m.kind_ = SeminormKind::MaxAbs;
  m.dim_ = functionals.front().size();
  if (m.dim_ == 0) throw StructuralError("seminorm dimension must be positive");
  for (const auto& row : functionals) {
    if (row.size() != m.dim_) throw StructuralError("functional dimensions differ");
    Vector r;
    for (const auto& a : row) r.push_back(to_double(a));
    m.rows_.push_back(std::move(r));
  }
  m.exact_rows_ = std::move(functionals);
  return m;
}

SeminormModel SeminormModel::max_abs(const std::vector<Vector>& functionals) {
  std::vector<std::vector<Rational>> exact;
  for (const auto& row : functionals) {
    std::vector<Rational> r;
    for (double a : row) {
      if (!std::isfinite(a)) throw StructuralError("non-finite functional entry");
      r.emplace_back(a);
    }
    exact.push_back(std::move(r));
  }
  return max_abs(std::move(exact));
}

SeminormModel SeminormModel::op_norm(std::vector<Vector> matrix, TargetNorm target) {
  if (matrix.empty() || matrix.front().empty()) throw StructuralError("OPNORM seminorm needs a nonempty matrix");
  SeminormModel m;
  m.kind_ = SeminormKind::OpNorm;
  m.target_ = target;
  m.dim_ = matrix.front().size();
  for (const auto& row : matrix) {
    if (row.size() != m.dim_) throw StructuralError("matrix rows differ in length");
    for (double a : row)
      if (!std::isfinite(a)) throw StructuralError("non-finite matrix entry");
  }
  m.rows_ = std::move(matrix);
  return m;
}

double SeminormModel::operator()(std::span<const double> x) const {
  if (x.size() != dim_) throw StructuralError("vector dimension does not match the seminorm");
  if (kind_ == SeminormKind::OpNorm && target_ == TargetNorm::L2) {
    double s = 0.0;
    for (const auto& r : rows_) s += dot(r, x) * dot(r, x);
    return std::sqrt(s);
  }
  double m = 0.0;
  for (const auto& r : rows_) m = std::max(m, std::abs(dot(r, x)));
  return m;
}

Rational SeminormModel::exact_value(std::span<const Rational> x) const {
  if (kind_ != SeminormKind::MaxAbs) throw PreconditionError("exact evaluation needs a MAXABS seminorm");
  if (x.size() != dim_) throw StructuralError("vector dimension does not match the seminorm");
  Rational m(0);
  for (const auto& r : exact_rows_) {
    Rational s(0);
    for (std::size_t k = 0; k < dim_; ++k) s += r[k] * x[k];
    m = std::max(m, abs(s));
  }
  return m;
}

std::string SeminormModel::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  if (kind_ == SeminormKind::OpNorm) os << "(" << to_string(target_) << ")";
  os << " dim " << dim_ << " rows " << rows_.size();
  return os.str();
}

bool spot_check_seminorm_axioms(const SeminormModel& p, std::uint64_t seed, int trials, double tol) {
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Vector x = rng.normal_vector(p.dim());
    const Vector y = rng.normal_vector(p.dim());
    const double lambda = rng.uniform(-3.0, 3.0);
    const double px = p(x), py = p(y);
    if (std::abs(p(scale(x, lambda)) - std::abs(lambda) * px) > tol * (1.0 + px)) return false;
    if (p(add(x, y)) > px + py + tol * (1.0 + px + py)) return false;
  }
  return true;
}

namespace {

bool is_linf(const NormedSpaceModel& m) { return m.kind() == NormKind::Polyhedral && std::isinf(m.p()); }
bool is_l1(const NormedSpaceModel& m) { return m.kind() == NormKind::Polyhedral && m.p() == 1.0; }

struct RowSup {
  double value = 0.0;
  std::optional<Rational> exact;
  Vector witness;
};

// sup_{||x|| <= 1} <a, x> with a maximizer.
RowSup row_sup(const NormedSpaceModel& ambient, const Vector& a, const std::vector<Rational>* exact) {
  const std::size_t d = a.size();
  RowSup out;
  out.witness.assign(d, 0.0);
  if (is_linf(ambient)) {
    for (std::size_t k = 0; k < d; ++k) out.witness[k] = a[k] < 0.0 ? -1.0 : 1.0;
    if (exact) {
      Rational s(0);
      for (const auto& v : *exact) s += abs(v);
      out.exact = s;
    }
  } else if (is_l1(ambient)) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < d; ++i)
      if (std::abs(a[i]) > std::abs(a[k])) k = i;
    out.witness[k] = a[k] < 0.0 ? -1.0 : 1.0;
    if (exact) out.exact = abs((*exact)[k]);
  } else if (ambient.kind() == NormKind::Lp) {
    std::size_t nonzero = 0, last = 0;
    for (std::size_t i = 0; i < d; ++i)
      if (a[i] != 0.0) {
        ++nonzero;
        last = i;
      }
    if (nonzero == 0) {
      out.witness[0] = 1.0;
      if (exact) out.exact = Rational(0);
    } else if (nonzero == 1) {
      out.witness[last] = a[last] < 0.0 ? -1.0 : 1.0;
      if (exact) out.exact = abs((*exact)[last]);
    } else {
      const double q = ambient.q();
      for (std::size_t i = 0; i < d; ++i) out.witness[i] = std::copysign(std::pow(std::abs(a[i]), q - 1.0), a[i]);
      out.witness = ambient.normalized(out.witness);
    }
  } else {
    double best = -1.0;
    for (const auto& v : ambient.unit_ball_vertices()) {
      const double s = dot(a, v);
      if (s > best) {
        best = s;
        out.witness = v;
      }
    }
  }
  out.value = out.exact ? to_double(*out.exact) : dot(a, out.witness);
  return out;
}

// Maximizer of <g, .> on the unit ball of l_p: the l_q duality map of g.
Vector lp_norming_point(const NormedSpaceModel& ambient, const Vector& g) {
  const double q = ambient.q();
  Vector x(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) x[i] = std::copysign(std::pow(std::abs(g[i]), q - 1.0), g[i]);
  return ambient.normalized(x);
}

// ||T x||_2 is convex, so x <- argmax_B <T^T T x, .> never decreases it.
Vector numeric_l2_ascent(const SeminormModel& p, const NormedSpaceModel& ambient, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vector> starts;
  for (const auto& r : p.rows())
    if (std::any_of(r.begin(), r.end(), [](double v) { return v != 0.0; })) starts.push_back(lp_norming_point(ambient, r));
  while (starts.size() < 32) starts.push_back(ambient.normalized(rng.normal_vector(p.dim())));
  Vector best;
  double best_val = -1.0;
  for (Vector x : starts) {
    double val = p(x);
    for (int it = 0; it < 2000; ++it) {
      Vector g(p.dim(), 0.0);
      for (const auto& r : p.rows()) g = add(g, scale(r, dot(r, x)));
      if (std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; })) break;
      const Vector next = lp_norming_point(ambient, g);
      const double nv = p(next);
      if (nv <= val * (1.0 + 1e-15)) break;
      x = next;
      val = nv;
    }
    if (val > best_val) {
      best_val = val;
      best = x;
    }
  }
  return best;
}

}  // namespace

SeminormNorms seminorm_norms(const SeminormModel& p, const NormedSpaceModel& ambient, std::size_t grid_samples,
                             std::uint64_t seed, double slack) {
  if (ambient.dim() != p.dim()) throw StructuralError("seminorm and ambient dimensions differ");
  SeminormNorms out;
  out.slack = slack;
  if (p.kind() == SeminormKind::OpNorm && p.target() == TargetNorm::L2) {
    if (ambient.kind() == NormKind::Lp && ambient.p() == 2.0) {
      Eigen::MatrixXd t(static_cast<Eigen::Index>(p.rows().size()), static_cast<Eigen::Index>(p.dim()));
      for (std::size_t i = 0; i < p.rows().size(); ++i)
        for (std::size_t k = 0; k < p.dim(); ++k) t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = p.rows()[i][k];
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(t, Eigen::ComputeThinV);
      const Eigen::VectorXd v = svd.matrixV().col(0);
      out.witness.assign(v.data(), v.data() + v.size());
      out.certified = true;
    } else if (ambient.kind() == NormKind::Polyhedral) {
      double best = -1.0;
      for (const auto& v : ambient.unit_ball_vertices()) {
        if (p(v) > best) {
          best = p(v);
          out.witness = v;
        }
      }
      out.certified = true;
    } else {
      out.witness = numeric_l2_ascent(p, ambient, seed);
    }
    out.sup_norm = p(out.witness);
  } else {
    out.certified = true;
    bool all_exact = p.is_exact();
    Rational exact_best(-1);
    out.sup_norm = -1.0;
    for (std::size_t i = 0; i < p.rows().size(); ++i) {
      const RowSup r = row_sup(ambient, p.rows()[i], p.is_exact() ? &p.exact_rows()[i] : nullptr);
      if (r.value > out.sup_norm) {
        out.sup_norm = r.value;
        out.witness = r.witness;
      }
      if (r.exact) exact_best = std::max(exact_best, *r.exact);
      else all_exact = false;
    }
    if (all_exact) {
      out.exact_sup = exact_best;
      out.sup_norm = to_double(exact_best);
    }
  }

  GridBuilder grid(ambient);
  grid.add("z", out.witness);
  grid.add("-z", scale(out.witness, -1.0));
  Rng rng(seed);
  for (std::size_t s = 0; s < grid_samples; ++s) {
    const Vector dir = ambient.normalized(rng.normal_vector(p.dim()));
    grid.add("s" + std::to_string(s), scale(dir, rng.uniform()));
  }
  const SpacePtr space = grid.build();
  const NormResult lip = lip_norm(seminorm_functional(p, space));
  out.lip_norm = lip.norm;
  out.lip_x = lip.x;
  out.lip_y = lip.y;
  out.grid_points = space->size();
  out.agree = std::abs(out.sup_norm - out.lip_norm) <= slack;
  return out;
}

LipFunctional seminorm_functional(const SeminormModel& p, const SpacePtr& space) {
  if (!space->has_coordinates()) throw PreconditionError("seminorm functional needs a coordinate space");
  std::vector<double> v(space->size());
  const double p0 = p(space->coord(space->base()));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = p(space->coord(i)) - p0;
  v[space->base()] = 0.0;
  return LipFunctional(space, std::move(v));
}

AttainmentAudit attainment_equivalences(const SeminormModel& p, const NormedSpaceModel& ambient, double tol) {
  const SeminormNorms norms = seminorm_norms(p, ambient, 0);
  AttainmentAudit a;
  a.z = norms.witness;
  a.value = p(a.z);
  a.sup_norm = norms.sup_norm;
  const double zn = ambient.norm(a.z);
  a.attains = std::abs(zn - 1.0) <= tol && std::abs(a.value - a.sup_norm) <= tol;
  a.pair_quotient = a.value / zn;
  a.pair_attains = std::abs(a.pair_quotient - a.sup_norm) <= tol;
  if (p.kind() == SeminormKind::OpNorm && p.target() == TargetNorm::L2) {
    a.operator_value = a.value;
    a.operator_norm = a.sup_norm;
  } else {
    // T x = (<a_i, x>)_i into l_inf^m; ||T|| = max_i ||a_i||_*.
    for (const auto& r : p.rows()) {
      a.operator_norm = std::max(a.operator_norm, ambient.dual_norm(r));
      a.operator_value = std::max(a.operator_value, std::abs(dot(r, a.z)));
    }
  }
  a.operator_attains = std::abs(a.operator_value - a.operator_norm) <= tol;
  a.inconclusive = !norms.certified;
  a.agree = !a.inconclusive && a.attains && a.pair_attains && a.operator_attains;
  return a;
}

SeminormModel jn_truncated_seminorm(int N, int d) {
  if (N < 1 || d < N) throw PreconditionError("truncation needs 1 <= N <= d");
  std::vector<std::vector<Rational>> rows;
  for (int n = 1; n <= N; ++n) {
    std::vector<Rational> r(static_cast<std::size_t>(d), Rational(0));
    r[static_cast<std::size_t>(n - 1)] = Rational(n, n + 1);
    rows.push_back(std::move(r));
  }
  return SeminormModel::max_abs(std::move(rows));
}

namespace {

// sup_{||x||_inf <= 1} p(x) - q(x): for each row a of p, maximize <a, x> - s
// with s >= |<b, x>| for every row b of q.
template <typename Scalar>
std::pair<Scalar, std::vector<Scalar>> one_sided(const std::vector<std::vector<Scalar>>& p,
                                                 const std::vector<std::vector<Scalar>>& q) {
  const std::size_t d = p.front().size();
  std::pair<Scalar, std::vector<Scalar>> best{Scalar(0), std::vector<Scalar>(d, Scalar(0))};
  for (const auto& a : p) {
    lp::Problem<Scalar> prob(d + 1);
    for (std::size_t k = 0; k < d; ++k) {
      prob.set_free(k);
      prob.set_objective(k, a[k]);
      std::vector<Scalar> row(d + 1, Scalar(0));
      row[k] = Scalar(1);
      prob.add_row(row, lp::Sense::LessEqual, Scalar(1));
      prob.add_row(row, lp::Sense::GreaterEqual, Scalar(-1));
    }
    prob.set_objective(d, Scalar(-1));
    for (const auto& b : q) {
      std::vector<Scalar> plus(d + 1), minus(d + 1);
      for (std::size_t k = 0; k < d; ++k) {
        plus[k] = -b[k];
        minus[k] = b[k];
      }
      plus[d] = minus[d] = Scalar(1);
      prob.add_row(plus, lp::Sense::GreaterEqual, Scalar(0));
      prob.add_row(minus, lp::Sense::GreaterEqual, Scalar(0));
    }
    const auto sol = lp::solve(prob);
    if (sol.status != lp::Status::Optimal) throw NumericalError("uniform distance LP failed");
    if (sol.objective > best.first) {
      best.first = sol.objective;
      best.second.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(d));
    }
  }
  return best;
}

double uniform_distance_numeric(const SeminormModel& p, const SeminormModel& q) {
  return std::max(one_sided(p.rows(), q.rows()).first, one_sided(q.rows(), p.rows()).first);
}

}  // namespace

UniformDistance uniform_distance_linf(const SeminormModel& p, const SeminormModel& q) {
  if (!p.is_exact() || !q.is_exact()) throw PreconditionError("uniform distance needs MAXABS seminorms");
  if (p.dim() != q.dim()) throw StructuralError("seminorm dimensions differ");
  auto a = one_sided(p.exact_rows(), q.exact_rows());
  auto b = one_sided(q.exact_rows(), p.exact_rows());
  if (b.first > a.first) a = std::move(b);
  return {std::move(a.first), std::move(a.second)};
}

GapReport uniform_vs_lip_gap(int n) {
  if (n < 1) throw PreconditionError("gap needs n >= 1");
  const SeminormModel p0 = SeminormModel::max_abs(std::vector<std::vector<Rational>>{{Rational(1), Rational(0)}});
  const SeminormModel pn = SeminormModel::max_abs(
      std::vector<std::vector<Rational>>{{Rational(1), Rational(0)}, {Rational(0), Rational(1, n)}});
  GapReport g;
  g.n = n;
  const UniformDistance u = uniform_distance_linf(pn, p0);
  g.uniform_dist = u.value;
  g.uniform_witness = u.witness;
  g.pair_a = {Rational(0), Rational(n)};
  g.pair_b = {Rational(1), Rational(n)};
  auto diff = [&](const std::vector<Rational>& x) { return pn.exact_value(x) - p0.exact_value(x); };
  const Rational gap = abs(Rational(diff(g.pair_a) - diff(g.pair_b)));
  const Rational sep = std::max(abs(Rational(g.pair_a[0] - g.pair_b[0])), abs(Rational(g.pair_a[1] - g.pair_b[1])));
  g.lip_lower_bound = gap / sep;
  return g;
}

SeminormBpbResult seminorm_bpb_construct(const SeminormModel& p0, const Vector& x0, double delta, double eps) {
  if (!p0.is_exact()) throw PreconditionError("seminorm BPB needs a MAXABS seminorm");
  const std::size_t d = p0.dim();
  if (x0.size() != d) throw StructuralError("x0 dimension does not match the seminorm");
  if (!(delta > 0.0) || !(eps > 0.0) || delta > eps * eps / 4.0) {
    throw PreconditionError("need 0 < delta <= eps^2 / 4");
  }
  double p0_norm = 0.0;
  for (const auto& r : p0.rows()) {
    double s = 0.0;
    for (double a : r) s += std::abs(a);
    p0_norm = std::max(p0_norm, s);
  }
  if (std::abs(p0_norm - 1.0) > 1e-9) throw PreconditionError("p0 must have norm one on l_inf");
  double xn = 0.0;
  for (double v : x0) xn = std::max(xn, std::abs(v));
  if (std::abs(xn - 1.0) > 1e-12) throw PreconditionError("x0 must be a unit vector");
  const double v0 = p0(x0);
  if (!(v0 > 1.0 - delta)) throw PreconditionError("p0(x0) must exceed 1 - delta");

  SeminormBpbResult out;
  out.p = p0;
  out.x = x0;
  out.tau = std::sqrt(2.0 * delta);
  out.p_norm = p0_norm;
  for (std::size_t i = 0; i < p0.rows().size(); ++i)
    if (std::abs(dot(p0.rows()[i], x0)) > std::abs(dot(p0.rows()[out.index], x0))) out.index = i;
  const double sigma = dot(p0.rows()[out.index], x0) < 0.0 ? -1.0 : 1.0;
  const Vector a = scale(p0.rows()[out.index], sigma);

  if (v0 >= 1.0) {
    out.ystar = a;
    out.p_at_x = v0;
    out.unchanged = true;
    out.passed = out.tau < eps;
    return out;
  }

  // J = coordinates where sign(a_i) x0_i > 1 - tau; y* = a|_J / ||a|_J||_1.
  out.ystar.assign(d, 0.0);
  double mass = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double s = a[i] >= 0.0 ? 1.0 : -1.0;
    if (a[i] != 0.0 && s * x0[i] > 1.0 - out.tau) {
      out.ystar[i] = a[i];
      out.x[i] = s;
      mass += std::abs(a[i]);
    }
  }
  if (mass == 0.0) throw NumericalError("no coordinate carries the functional");
  for (auto& v : out.ystar) v /= mass;
  for (std::size_t i = 0; i < d; ++i) out.functional_distance += std::abs(out.ystar[i] - a[i]);

  std::vector<std::vector<Rational>> rows;
  const Rational shrink(1.0 - out.tau);
  for (const auto& r : p0.exact_rows()) {
    std::vector<Rational> s;
    for (const auto& v : r) s.push_back(shrink * v);
    rows.push_back(std::move(s));
  }
  std::vector<Rational> y;
  for (double v : out.ystar) y.emplace_back(v);
  rows.push_back(std::move(y));
  out.p = SeminormModel::max_abs(std::move(rows));

  out.p_at_x = out.p(out.x);
  out.p_norm = 0.0;
  for (const auto& r : out.p.rows()) {
    double s = 0.0;
    for (double v : r) s += std::abs(v);
    out.p_norm = std::max(out.p_norm, s);
  }
  for (std::size_t i = 0; i < d; ++i) out.x_distance = std::max(out.x_distance, std::abs(out.x[i] - x0[i]));
  out.p_distance = uniform_distance_numeric(out.p, p0);
  out.passed = std::abs(out.p_at_x - 1.0) <= 1e-9 && std::abs(out.p_norm - 1.0) <= 1e-9 &&
               out.x_distance <= out.tau && out.p_distance <= out.tau + 1e-12 && out.tau < eps;
  return out;
}

}  // namespace lipkit
