#pragma once

#include <vector>

#include "polopt/dynamics.hpp"
#include "polopt/graph.hpp"
#include "polopt/topology_opt.hpp"
#include "polopt/types.hpp"

namespace polopt {

// Budgeted opinion intervention on a fixed graph: minimize the quadratic form
// (s + ds)' (I + L)^-1 (s + ds) over decreases ds <= 0 with total magnitude
// at most alpha and s + ds kept nonnegative.
struct InterventionProblem {
  WeightedGraph g;
  OpinionVector s;
  double alpha;

  InterventionProblem(WeightedGraph graph, OpinionVector opinions,
                      double budget);
};

struct InterventionResult {
  Vector ds;                  // per-node decrease, all entries <= 0
  double objective = 0.0;     // polarization-disagreement index at s + ds
  double budget_used = 0.0;   // -sum(ds)
  EquilibriumReport report;   // full summary at s + ds
  double quadratic_value = 0.0;  // (s+ds)'(I+L)^-1(s+ds), the solver objective
  int iterations = 0;
  bool converged = false;
};

// Euclidean projection onto {lower <= x <= 0, sum(x) >= -alpha}. If clipping
// into the box already satisfies the budget, that is the projection;
// otherwise a uniform shift mu >= 0 is added before clipping, with mu found
// by bisection so the sum lands on -alpha.
Vector project_box_halfspace(const Vector& y, const Vector& lower,
                             double alpha);

// Value of x' (I + L)^-1 x for a prefactored system.
double quadratic_value(const EquilibriumSolver& solver, const Vector& x);

// Projected gradient descent on the convex intervention program. The system
// matrix is factorized once and reused for every gradient and objective
// evaluation.
InterventionResult optimize_opinions(const InterventionProblem& problem,
                                     const OptimizerConfig& config);

// One optimize_opinions result per budget, sharing a single factorization.
// Budgets must be sorted ascending.
std::vector<InterventionResult> budget_sweep(const WeightedGraph& g,
                                             const OpinionVector& s,
                                             const std::vector<double>& alphas,
                                             const OptimizerConfig& config);

}  // namespace polopt
