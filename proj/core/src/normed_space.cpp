#include "lipkit/normed_space.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lipkit/errors.hpp"
#include "lipkit/random.hpp"
#include "lipkit/simplex.hpp"

namespace lipkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lp_norm(std::span<const double> v, double p) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m == 0.0) return 0.0;
  if (std::isinf(p)) return m;
  if (p == 2.0) {
    double s = 0.0;
    for (double x : v) s += (x / m) * (x / m);
    return m * std::sqrt(s);
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x) / m, p);
  return m * std::pow(s, 1.0 / p);
}

}  // namespace

NormedSpaceModel NormedSpaceModel::lp(std::size_t dim, double p) {
  if (dim == 0) throw PreconditionError("normed space dimension must be positive");
  if (std::isinf(p)) return linf(dim);
  if (p == 1.0) return l1(dim);
  if (!(p > 1.0)) throw PreconditionError("l_p exponent must satisfy p >= 1");
  NormedSpaceModel m;
  m.kind_ = NormKind::Lp;
  m.dim_ = dim;
  m.p_ = p;
  return m;
}

NormedSpaceModel NormedSpaceModel::linf(std::size_t dim) {
  std::vector<Vector> f(dim, Vector(dim, 0.0));
  for (std::size_t i = 0; i < dim; ++i) f[i][i] = 1.0;
  auto m = polyhedral(std::move(f));
  m.p_ = kInf;
  return m;
}

NormedSpaceModel NormedSpaceModel::l1(std::size_t dim) {
  if (dim == 0 || dim > 16) throw PreconditionError("l_1 model supports 1 <= dim <= 16");
  std::vector<Vector> f;
  // Sign patterns with first coordinate +1; the absolute value covers the rest.
  for (std::size_t mask = 0; mask < (std::size_t{1} << (dim - 1)); ++mask) {
    Vector row(dim, 1.0);
    for (std::size_t i = 1; i < dim; ++i) row[i] = (mask >> (i - 1)) & 1U ? -1.0 : 1.0;
    f.push_back(std::move(row));
  }
  auto m = polyhedral(std::move(f));
  m.p_ = 1.0;
  return m;
}

NormedSpaceModel NormedSpaceModel::polyhedral(std::vector<Vector> functionals) {
  if (functionals.empty()) throw PreconditionError("polyhedral norm needs generating functionals");
  NormedSpaceModel m;
  m.kind_ = NormKind::Polyhedral;
  m.dim_ = functionals.front().size();
  m.p_ = 0.0;
  for (const auto& f : functionals) {
    if (f.size() != m.dim_) throw StructuralError("generating functionals differ in dimension");
  }
  m.functionals_ = std::move(functionals);
  // Definiteness: the functionals must span the dual.
  Eigen::MatrixXd a(static_cast<Eigen::Index>(m.functionals_.size()),
                    static_cast<Eigen::Index>(m.dim_));
  for (std::size_t i = 0; i < m.functionals_.size(); ++i)
    for (std::size_t j = 0; j < m.dim_; ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m.functionals_[i][j];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (static_cast<std::size_t>(lu.rank()) < m.dim_) {
    throw PreconditionError("polyhedral functionals do not span the dual: not a norm");
  }
  return m;
}

double NormedSpaceModel::q() const {
  if (kind_ != NormKind::Lp) throw PreconditionError("conjugate exponent requires an l_p model");
  return p_ / (p_ - 1.0);
}

double NormedSpaceModel::norm(std::span<const double> v) const {
  if (v.size() != dim_) throw StructuralError("vector dimension does not match the model");
  if (kind_ == NormKind::Lp) return lp_norm(v, p_);
  if (std::isinf(p_)) return lp_norm(v, kInf);
  if (p_ == 1.0) return lp_norm(v, 1.0);
  double m = 0.0;
  for (const auto& f : functionals_) m = std::max(m, std::abs(dot(f, v)));
  return m;
}

double NormedSpaceModel::distance(std::span<const double> a, std::span<const double> b) const {
  return norm(subtract(a, b));
}

double NormedSpaceModel::dual_norm(std::span<const double> functional) const {
  if (functional.size() != dim_) throw StructuralError("functional dimension does not match");
  if (kind_ == NormKind::Lp) return lp_norm(functional, q());
  if (std::isinf(p_)) return lp_norm(functional, 1.0);
  if (p_ == 1.0) return lp_norm(functional, kInf);
  // sup { f(x) : |phi_k(x)| <= 1 }.
  lp::Problem<double> prob(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    prob.set_free(j);
    prob.set_objective(j, functional[j]);
  }
  for (const auto& f : functionals_) {
    prob.add_row(f, lp::Sense::LessEqual, 1.0);
    prob.add_row(scale(f, -1.0), lp::Sense::LessEqual, 1.0);
  }
  const auto sol = lp::solve(prob);
  if (sol.status != lp::Status::Optimal) throw NumericalError("dual norm LP did not converge");
  return sol.objective;
}

Vector NormedSpaceModel::normalized(std::span<const double> v) const {
  const double n = norm(v);
  if (n == 0.0) throw PreconditionError("cannot normalize the zero vector");
  return scale(v, 1.0 / n);
}

Vector NormedSpaceModel::dual_map(std::span<const double> u) const {
  if (kind_ != NormKind::Lp) throw PreconditionError("duality map requires an l_p model");
  const double n = norm(u);
  if (n == 0.0) throw PreconditionError("duality map of the zero vector");
  Vector out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    const double a = u[i] / n;
    out[i] = std::copysign(std::pow(std::abs(a), p_ - 1.0), a);
  }
  const double dn = lp_norm(out, q());
  for (auto& x : out) x /= dn;
  return out;
}

std::vector<Vector> NormedSpaceModel::unit_ball_vertices() const {
  if (kind_ != NormKind::Polyhedral) throw PreconditionError("vertices requested for a smooth ball");
  // Halfspaces s * phi_k(x) <= 1; a vertex is a feasible point where dim_
  // linearly independent halfspaces are tight.
  std::vector<Vector> halfspaces;
  for (const auto& f : functionals_) {
    halfspaces.push_back(f);
    halfspaces.push_back(scale(f, -1.0));
  }
  const std::size_t h = halfspaces.size();
  const std::size_t d = dim_;
  std::vector<Vector> vertices;
  std::vector<std::size_t> pick(d);
  for (std::size_t i = 0; i < d; ++i) pick[i] = i;
  if (d > h) return vertices;
  while (true) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = halfspaces[pick[r]][c];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (static_cast<std::size_t>(lu.rank()) == d) {
      Eigen::VectorXd x = lu.solve(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(d)));
      Vector v(x.data(), x.data() + d);
      bool feasible = true;
      for (const auto& hs : halfspaces) {
        if (dot(hs, v) > 1.0 + 1e-10) {
          feasible = false;
          break;
        }
      }
      if (feasible) {
        bool dup = false;
        for (const auto& w : vertices) {
          double diff = 0.0;
          for (std::size_t i = 0; i < d; ++i) diff = std::max(diff, std::abs(w[i] - v[i]));
          if (diff < 1e-10) {
            dup = true;
            break;
          }
        }
        if (!dup) vertices.push_back(std::move(v));
      }
    }
    // Next combination.
    std::size_t i = d;
    while (i > 0 && pick[i - 1] == h - d + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < d; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::sort(vertices.begin(), vertices.end());
  return vertices;
}

std::string NormedSpaceModel::describe() const {
  std::ostringstream os;
  if (kind_ == NormKind::Lp) {
    os << "l_" << p_ << "^" << dim_;
  } else if (std::isinf(p_)) {
    os << "l_inf^" << dim_;
  } else if (p_ == 1.0) {
    os << "l_1^" << dim_;
  } else {
    os << "polyhedral(" << functionals_.size() << " functionals)^" << dim_;
  }
  return os.str();
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw StructuralError("dimension mismatch in dot product");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vector add(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw StructuralError("dimension mismatch in vector sum");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw StructuralError("dimension mismatch in vector difference");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vector scale(std::span<const double> a, double s) {
  Vector out(a.begin(), a.end());
  for (auto& x : out) x *= s;
  return out;
}

double distance_to_segment(const NormedSpaceModel& model, std::span<const double> p,
                           std::span<const double> a, std::span<const double> b) {
  // The distance along the segment is convex in theta: golden-section search.
  auto at = [&](double theta) {
    Vector q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = theta * a[i] + (1.0 - theta) * b[i];
    return model.distance(p, q);
  };
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
  double fc = at(c), fd = at(d);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - phi * (hi - lo);
      fc = at(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + phi * (hi - lo);
      fd = at(d);
    }
  }
  return std::min({at(0.0), at(1.0), at(0.5 * (lo + hi))});
}

bool spot_check_norm_axioms(const NormedSpaceModel& model, std::size_t trials,
                            unsigned long long seed, double tol) {
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const Vector a = rng.normal_vector(model.dim());
    const Vector b = rng.normal_vector(model.dim());
    const double lambda = rng.uniform(-3.0, 3.0);
    const double na = model.norm(a), nb = model.norm(b);
    if (std::abs(model.norm(scale(a, lambda)) - std::abs(lambda) * na) > tol * (1.0 + na)) return false;
    if (model.norm(add(a, b)) > na + nb + tol) return false;
    if (na <= 0.0) return false;
  }
  return true;
}

}  // namespace lipkit
