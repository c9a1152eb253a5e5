#pragma once

#include "polopt/graph.hpp"
#include "polopt/types.hpp"

#include <Eigen/Cholesky>

namespace polopt {

// Innate opinion vector with every entry in [0, 1].
class OpinionVector {
 public:
  explicit OpinionVector(Vector values);

  int size() const { return static_cast<int>(values_.size()); }
  const Vector& values() const { return values_; }

 private:
  Vector values_;
};

// Cached SPD factorization of (I + L). The system matrix has all eigenvalues
// >= 1, so a Cholesky factorization plus one step of iterative refinement
// reaches residuals near machine precision.
class EquilibriumSolver {
 public:
  explicit EquilibriumSolver(const WeightedGraph& g);

  // Solves (I + L) x = rhs; the returned x satisfies
  // ||rhs - (I+L)x|| <= 1e-10 * ||rhs||.
  Vector solve(const Vector& rhs) const;

  int size() const { return static_cast<int>(system_.rows()); }

 private:
  Matrix system_;
  Eigen::LLT<Matrix> llt_;
};

struct EquilibriumReport {
  Vector z_star;        // expressed opinions at equilibrium
  Vector z_bar;         // mean-centered equilibrium
  double polarization = 0.0;
  double disagreement = 0.0;
  double index = 0.0;   // polarization + disagreement
};

// Equilibrium z = (I + L)^-1 s via a dense factorization.
Vector equilibrium(const WeightedGraph& g, const OpinionVector& s);

// Matrix-free conjugate-gradient variant for large sparse graphs. Stops when
// the relative residual drops below rel_tol; max_iters <= 0 means 10n + 100.
Vector equilibrium_cg(const WeightedGraph& g, const OpinionVector& s,
                      double rel_tol = 1e-10, int max_iters = 0);

// x minus its mean on every entry.
Vector center(const Vector& x);

// Sum of w_uv * (z_u - z_v)^2 over edges. Invariant to a uniform shift of z,
// so the centered and uncentered equilibria give the same value.
double disagreement(const WeightedGraph& g, const Vector& z);

// Squared norm of a mean-centered vector; rejects inputs whose entries do not
// sum to ~0.
double polarization(const Vector& z_bar);

// Full polarization-disagreement summary for one instance.
EquilibriumReport pd_index(const WeightedGraph& g, const OpinionVector& s);

// Per-node cost (z_v - s_v)^2 + sum_u w_uv (z_v - z_u)^2. Each edge term
// appears once per endpoint, so the entries sum to
// ||z - s||^2 + 2 * disagreement(g, z).
Vector node_stress(const WeightedGraph& g, const OpinionVector& s,
                   const Vector& z);

}  // namespace polopt
