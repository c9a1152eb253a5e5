#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "polopt/dynamics.hpp"
#include "polopt/graph.hpp"
#include "polopt/types.hpp"

namespace polopt {

// Backtracking line search with sufficient-decrease acceptance. The trial
// step doubles at the start of every outer iteration, so useful step sizes
// are rediscovered quickly even when they span many orders of magnitude.
struct LineSearchParams {
  double initial_step = 1.0;
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
};

// Shared configuration for the projected-gradient solvers.
struct OptimizerConfig {
  int max_iters = 5000;
  double rel_tol = 1e-8;  // stop when (f_k - f_{k+1}) / |f_k| falls below
  LineSearchParams line_search;
  std::uint64_t seed = 0;

  void validate() const;
};

// Minimize the equilibrium index over edge-weight vectors with fixed total
// weight: min_w center(s)' (I + L(w))^-1 center(s) subject to w >= 0 and
// sum(w) = total_weight. The feasible set couples every node pair, not just
// the edges present in some input graph.
struct TopologyProblem {
  OpinionVector s;
  double total_weight;
  int n;

  TopologyProblem(OpinionVector opinions, double total);
};

struct TopologySolution {
  EdgeWeightVector weights;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  bool connected = false;  // of the support graph of the returned weights
  std::vector<double> objective_history;  // initial value, then one per step
};

// Objective center(s)' (I + L(w))^-1 center(s); w must be nonnegative.
double topology_objective(const EdgeWeightVector& w, const OpinionVector& s);

// Exact gradient: entry i for pair (u, v) is -(x_u - x_v)^2 where
// x = (I + L(w))^-1 center(s). One linear solve for the whole vector.
Vector topology_gradient(const EdgeWeightVector& w, const OpinionVector& s);

// Euclidean projection onto {w >= 0, sum(w) = total} by the sort-and-
// threshold rule. Already-feasible inputs are returned unchanged.
Vector project_simplex(const Vector& w, double total);

// Projected gradient descent from w0 (default: uniform weights).
TopologySolution solve_topology(
    const TopologyProblem& problem, const OptimizerConfig& config,
    const std::optional<EdgeWeightVector>& w0 = std::nullopt);

// Checks the midpoint convexity inequality f(lambda w1 + (1-lambda) w2) <=
// lambda f(w1) + (1-lambda) f(w2) + 1e-9 at lambda = i/k, i = 1..k-1.
// Both weight vectors must have the same node count and total.
bool convexity_probe(const EdgeWeightVector& w1, const EdgeWeightVector& w2,
                     const OpinionVector& s, int k);

// Minimum eigenvalue of
//   lambda h(L1) + (1-lambda) h(L2) - h(lambda L1 + (1-lambda) L2)
// for h(L) = (I+L)^-1 L (I+L)^-1, the matrix function behind the
// disagreement term alone. A negative value exhibits non-convexity of that
// term in isolation.
double disagreement_midpoint_gap(const Matrix& l1, const Matrix& l2,
                                 double lambda);

// Fixed pair of 3-node Laplacians (a path and a star) whose midpoint gap at
// lambda = 1/2 is negative, certifying that the disagreement term by itself
// is not convex in the weights.
struct NonconvexityWitness {
  Matrix l1;
  Matrix l2;
  double min_eigenvalue = 0.0;
};
NonconvexityWitness nonconvexity_witness();

// First-order optimality certificate on the weight simplex: gradient entries
// of active pairs (w_i > active_tol) must agree, and inactive pairs must not
// undercut them. Both measures are relative to max_i |g_i|.
struct SimplexKkt {
  double active_spread = 0.0;
  double inactive_violation = 0.0;
  double gradient_scale = 0.0;

  bool satisfied(double tol = 1e-4) const {
    return active_spread <= tol && inactive_violation <= tol;
  }
};
SimplexKkt simplex_kkt(const EdgeWeightVector& w, const OpinionVector& s,
                       double active_tol = 1e-6);

}  // namespace polopt
