#include "polopt/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace polopt {

OpinionVector::OpinionVector(Vector values) : values_(std::move(values)) {
  if (values_.size() == 0)
    throw std::invalid_argument("opinion vector must not be empty");
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    double x = values_(i);
    if (!(x >= 0.0 && x <= 1.0))  // also rejects NaN
      throw std::invalid_argument("opinion out of [0, 1] at entry " +
                                  std::to_string(i));
  }
}

EquilibriumSolver::EquilibriumSolver(const WeightedGraph& g)
    : system_(laplacian(g)) {
  system_.diagonal().array() += 1.0;
  llt_.compute(system_);
  if (llt_.info() != Eigen::Success)
    throw std::runtime_error("Cholesky factorization of I + L failed");
}

Vector EquilibriumSolver::solve(const Vector& rhs) const {
  if (rhs.size() != system_.rows())
    throw std::invalid_argument("right-hand side has wrong length");
  Vector x = llt_.solve(rhs);
  // One refinement pass; with eigenvalues of I + L in [1, 1 + 2 max_deg]
  // this brings the residual to a few ulps of ||rhs||.
  Vector r = rhs - system_ * x;
  x += llt_.solve(r);
  double res = (rhs - system_ * x).norm();
  if (res > 1e-10 * rhs.norm() + 1e-300)
    throw std::runtime_error("linear solve failed to reach tolerance");
  return x;
}

Vector equilibrium(const WeightedGraph& g, const OpinionVector& s) {
  if (s.size() != g.n())
    throw std::invalid_argument("opinion length does not match node count");
  return EquilibriumSolver(g).solve(s.values());
}

Vector equilibrium_cg(const WeightedGraph& g, const OpinionVector& s,
                      double rel_tol, int max_iters) {
  if (s.size() != g.n())
    throw std::invalid_argument("opinion length does not match node count");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
  int n = g.n();
  if (max_iters <= 0) max_iters = 10 * n + 100;
  auto adj = adjacency(g);

  // y = (I + L) x without forming the matrix.
  auto apply = [&](const Vector& x) {
    Vector y = x;
    for (int u = 0; u < n; ++u) {
      double acc = 0.0;
      for (auto [v, w] : adj[u]) acc += w * (x(u) - x(v));
      y(u) += acc;
    }
    return y;
  };

  const Vector& b = s.values();
  double bnorm = b.norm();
  if (bnorm == 0.0) return Vector::Zero(n);
  Vector x = Vector::Zero(n);
  Vector r = b;
  Vector p = r;
  double rho = r.squaredNorm();
  for (int k = 0; k < max_iters; ++k) {
    if (std::sqrt(rho) <= rel_tol * bnorm) return x;
    Vector ap = apply(p);
    double alpha = rho / p.dot(ap);
    x += alpha * p;
    r -= alpha * ap;
    double rho_next = r.squaredNorm();
    p = r + (rho_next / rho) * p;
    rho = rho_next;
  }
  if (std::sqrt(rho) <= rel_tol * bnorm) return x;
  throw std::runtime_error("conjugate gradient did not converge");
}

Vector center(const Vector& x) {
  if (x.size() == 0) throw std::invalid_argument("cannot center an empty vector");
  return x.array() - x.mean();
}

double disagreement(const WeightedGraph& g, const Vector& z) {
  if (z.size() != g.n())
    throw std::invalid_argument("vector length does not match node count");
  double d = 0.0;
  for (const Edge& e : g.edges()) {
    double diff = z(e.u) - z(e.v);
    d += e.weight * diff * diff;
  }
  return d;
}

double polarization(const Vector& z_bar) {
  if (z_bar.size() == 0) throw std::invalid_argument("empty vector");
  if (std::abs(z_bar.sum()) > 1e-8)
    throw std::invalid_argument("polarization input is not mean-centered");
  return z_bar.squaredNorm();
}

EquilibriumReport pd_index(const WeightedGraph& g, const OpinionVector& s) {
  EquilibriumReport report;
  report.z_star = equilibrium(g, s);
  report.z_bar = center(report.z_star);
  report.polarization = polarization(report.z_bar);
  report.disagreement = disagreement(g, report.z_star);
  report.index = report.polarization + report.disagreement;
  return report;
}

Vector node_stress(const WeightedGraph& g, const OpinionVector& s,
                   const Vector& z) {
  if (s.size() != g.n() || z.size() != g.n())
    throw std::invalid_argument("vector length does not match node count");
  Vector stress(g.n());
  auto adj = adjacency(g);
  for (int v = 0; v < g.n(); ++v) {
    double cost = (z(v) - s.values()(v)) * (z(v) - s.values()(v));
    for (auto [u, w] : adj[v]) cost += w * (z(v) - z(u)) * (z(v) - z(u));
    stress(v) = cost;
  }
  return stress;
}

}  // namespace polopt
