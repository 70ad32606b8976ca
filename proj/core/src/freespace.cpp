#include "lipkit/freespace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lipkit/errors.hpp"
#include "lipkit/simplex.hpp"

namespace lipkit {

FreeVector::FreeVector(SpacePtr space, std::vector<double> coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (!space_) throw StructuralError("free vector without a space");
  if (coeffs_.size() != space_->size()) throw StructuralError("coefficient count does not match the space");
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw StructuralError("non-finite free-vector coefficient");
  }
  coeffs_[space_->base()] = 0.0;
}

FreeVector FreeVector::zero(SpacePtr space) {
  const std::size_t n = space->size();
  return FreeVector(std::move(space), std::vector<double>(n, 0.0));
}

FreeVector FreeVector::point(SpacePtr space, std::size_t x) {
  if (x >= space->size()) throw StructuralError("point index out of range");
  std::vector<double> c(space->size(), 0.0);
  c[x] = 1.0;
  return FreeVector(std::move(space), std::move(c));
}

FreeVector FreeVector::molecule(SpacePtr space, std::size_t x, std::size_t y) {
  if (x >= space->size() || y >= space->size() || x == y) throw StructuralError("molecule needs two distinct points");
  std::vector<double> c(space->size(), 0.0);
  const double r = space->dist(x, y);
  c[x] += 1.0 / r;
  c[y] -= 1.0 / r;
  return FreeVector(std::move(space), std::move(c));
}

std::vector<std::size_t> FreeVector::support(double tol) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (i != space_->base() && std::abs(coeffs_[i]) > tol) out.push_back(i);
  return out;
}

FreeVector FreeVector::plus(const FreeVector& other, double a) const {
  if (other.size() != size()) throw StructuralError("free vectors live on different spaces");
  std::vector<double> c(coeffs_);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += a * other.coeffs_[i];
  return FreeVector(space_, std::move(c));
}

FreeVector FreeVector::scaled(double a) const {
  std::vector<double> c(coeffs_);
  for (auto& v : c) v *= a;
  return FreeVector(space_, std::move(c));
}

double FreeVector::max_abs_difference(const FreeVector& other) const {
  double m = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) m = std::max(m, std::abs(coeffs_[i] - other.coeffs_[i]));
  return m;
}

double pairing(const LipFunctional& f, const FreeVector& z) {
  if (f.size() != z.size()) throw StructuralError("functional and free vector live on different spaces");
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) s += z[i] * f[i];
  return s;
}

namespace {

void require_optimal(lp::Status st, const std::string& what) {
  if (st != lp::Status::Optimal) throw NumericalError(what + ": LP ended " + lp::to_string(st));
}

}  // namespace

FreeNormResult free_norm(const FreeVector& z) {
  const auto& s = z.space();
  const std::vector<std::size_t> supp = z.support();
  if (supp.empty()) return {0.0, LipFunctional::zero(z.space_ptr())};

  // Variables g(p) for p in supp; g(base) = 0.
  const std::size_t k = supp.size();
  lp::Problem<double> prob(k);
  for (std::size_t i = 0; i < k; ++i) {
    prob.set_free(i);
    prob.set_objective(i, z[supp[i]]);
  }
  const std::size_t base = s.base();
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> row(k, 0.0);
    row[i] = 1.0;
    prob.add_row(row, lp::Sense::LessEqual, s.dist(supp[i], base));
    row[i] = -1.0;
    prob.add_row(row, lp::Sense::LessEqual, s.dist(supp[i], base));
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      std::vector<double> r(k, 0.0);
      r[i] = 1.0;
      r[j] = -1.0;
      prob.add_row(std::move(r), lp::Sense::LessEqual, s.dist(supp[i], supp[j]));
    }
  }
  const auto sol = lp::solve(prob);
  require_optimal(sol.status, "free_norm");

  std::vector<std::size_t> idx{base};
  std::vector<double> vals{0.0};
  for (std::size_t i = 0; i < k; ++i) {
    idx.push_back(supp[i]);
    vals.push_back(sol.x[i]);
  }
  LipFunctional dual = mcshane_extend(z.space_ptr(), idx, vals, McShaneVariant::Midpoint);
  return {sol.objective, std::move(dual)};
}

PrimalResult free_norm_primal(const FreeVector& z, bool restrict_to_support) {
  const auto& s = z.space();
  std::vector<std::size_t> nodes;
  if (restrict_to_support) {
    nodes = z.support();
    nodes.push_back(s.base());
    std::sort(nodes.begin(), nodes.end());
  } else {
    for (std::size_t i = 0; i < s.size(); ++i) nodes.push_back(i);
  }
  const std::size_t m = nodes.size();
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (a != b) arcs.emplace_back(a, b);

  lp::Problem<double> prob(arcs.size());
  for (std::size_t e = 0; e < arcs.size(); ++e)
    prob.set_objective(e, -s.dist(nodes[arcs[e].first], nodes[arcs[e].second]));
  for (std::size_t p = 0; p < m; ++p) {
    if (nodes[p] == s.base()) continue;
    std::vector<double> row(arcs.size(), 0.0);
    for (std::size_t e = 0; e < arcs.size(); ++e) {
      if (arcs[e].first == p) row[e] += 1.0;
      if (arcs[e].second == p) row[e] -= 1.0;
    }
    prob.add_row(std::move(row), lp::Sense::Equal, z[nodes[p]]);
  }
  const auto sol = lp::solve(prob);
  require_optimal(sol.status, "free_norm_primal");
  PrimalResult r;
  r.norm = -sol.objective;
  for (std::size_t e = 0; e < arcs.size(); ++e)
    if (sol.x[e] > 1e-12) r.transport.push_back({nodes[arcs[e].first], nodes[arcs[e].second], sol.x[e]});
  return r;
}

std::vector<Molecule> molecules(const SpacePtr& space) {
  std::vector<Molecule> out;
  for (std::size_t x = 0; x < space->size(); ++x)
    for (std::size_t y = 0; y < space->size(); ++y)
      if (x != y) out.push_back({x, y, FreeVector::molecule(space, x, y)});
  return out;
}

Decomposition decompose_in_convW(const FreeVector& z) {
  const double norm = free_norm(z).norm;
  if (norm > 1.0 + 1e-9) throw PreconditionError("decomposition needs free norm <= 1, got " + std::to_string(norm));
  Decomposition d;
  std::vector<std::size_t> nodes = z.support();
  if (nodes.empty()) return d;
  const auto& s = z.space();
  nodes.push_back(s.base());
  std::sort(nodes.begin(), nodes.end());
  const std::size_t m = nodes.size();
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (a != b) arcs.emplace_back(nodes[a], nodes[b]);

  // lambda_e >= 0 on molecules; minimize the total mass.
  lp::Problem<double> prob(arcs.size());
  for (std::size_t e = 0; e < arcs.size(); ++e) prob.set_objective(e, -1.0);
  for (std::size_t p : nodes) {
    if (p == s.base()) continue;
    std::vector<double> row(arcs.size(), 0.0);
    for (std::size_t e = 0; e < arcs.size(); ++e) {
      const double r = s.dist(arcs[e].first, arcs[e].second);
      if (arcs[e].first == p) row[e] += 1.0 / r;
      if (arcs[e].second == p) row[e] -= 1.0 / r;
    }
    prob.add_row(std::move(row), lp::Sense::Equal, z[p]);
  }
  prob.add_row(std::vector<double>(arcs.size(), 1.0), lp::Sense::LessEqual, 1.0 + 1e-9);
  const auto sol = lp::solve(prob);
  require_optimal(sol.status, "decompose_in_convW");

  std::vector<double> rebuilt(z.size(), 0.0);
  for (std::size_t e = 0; e < arcs.size(); ++e) {
    if (sol.x[e] <= 1e-14) continue;
    const auto [x, y] = arcs[e];
    d.weights.push_back({x, y, sol.x[e]});
    d.total += sol.x[e];
    const double r = s.dist(x, y);
    rebuilt[x] += sol.x[e] / r;
    rebuilt[y] -= sol.x[e] / r;
  }
  rebuilt[s.base()] = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) d.residual = std::max(d.residual, std::abs(rebuilt[i] - z[i]));
  return d;
}

LipFunctional supporting_functional(const FreeVector& z) {
  auto r = free_norm(z);
  if (r.norm <= 1e-14) throw PreconditionError("supporting functional of the zero vector");
  const double L = lip_norm(r.dual).norm;
  return r.dual.scaled(1.0 / L);
}

}  // namespace lipkit
