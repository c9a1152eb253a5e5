#include "polopt/opinion_opt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polopt {

namespace {

Vector clip_box(const Vector& y, const Vector& lower) {
  return y.cwiseMax(lower).cwiseMin(0.0);
}

InterventionResult solve_with_factorization(const EquilibriumSolver& solver,
                                            const WeightedGraph& g,
                                            const OpinionVector& s,
                                            double alpha,
                                            const OptimizerConfig& config) {
  config.validate();
  const Vector& s0 = s.values();
  Vector lower = -s0;

  auto value = [&](const Vector& ds) {
    return quadratic_value(solver, s0 + ds);
  };

  Vector ds = Vector::Zero(s.size());
  double f = value(ds);
  int iterations = 0;
  bool converged = false;

  double t = config.line_search.initial_step;
  for (int k = 0; k < config.max_iters; ++k) {
    Vector grad = 2.0 * solver.solve(s0 + ds);
    t = std::min(t * 2.0, 1e18);

    Vector ds_next;
    double f_next = f;
    bool accepted = false;
    while (t >= 1e-20) {
      ds_next = project_box_halfspace(ds - t * grad, lower, alpha);
      f_next = value(ds_next);
      double model_decrease = grad.dot(ds_next - ds);
      if (f_next <=
          f + config.line_search.sufficient_decrease * model_decrease) {
        accepted = true;
        break;
      }
      t *= config.line_search.shrink;
    }
    ++iterations;

    if (!accepted) {  // stationary to machine precision
      converged = true;
      break;
    }
    double rel_decrease = (f - f_next) / std::max(std::abs(f), 1e-300);
    ds = ds_next;
    f = f_next;
    if (rel_decrease < config.rel_tol) {
      converged = true;
      break;
    }
  }

  InterventionResult result;
  result.ds = ds;
  result.report = pd_index(g, OpinionVector(s0 + ds));
  result.objective = result.report.index;
  result.budget_used = -ds.sum() + 0.0;  // +0.0 folds -0.0 into 0.0
  result.quadratic_value = f;
  result.iterations = iterations;
  result.converged = converged;
  return result;
}

}  // namespace

InterventionProblem::InterventionProblem(WeightedGraph graph,
                                         OpinionVector opinions, double budget)
    : g(std::move(graph)), s(std::move(opinions)), alpha(budget) {
  if (s.size() != g.n())
    throw std::invalid_argument("opinion length does not match node count");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("budget must be nonnegative and finite");
}

Vector project_box_halfspace(const Vector& y, const Vector& lower,
                             double alpha) {
  if (y.size() != lower.size())
    throw std::invalid_argument("vector lengths differ");
  if (!y.allFinite() || !lower.allFinite())
    throw std::invalid_argument("non-finite entry in projection input");
  if (!(alpha >= 0.0))
    throw std::invalid_argument("budget must be nonnegative");
  if (lower.maxCoeff() > 0.0)
    throw std::invalid_argument("lower bounds must be <= 0");

  // With x <= 0 and sum(x) >= 0 the only feasible point is the origin.
  if (alpha == 0.0) return Vector::Zero(y.size());

  Vector clipped = clip_box(y, lower);
  if (clipped.sum() >= -alpha) return clipped;

  // The budget constraint is active: shift by mu >= 0 before clipping. The
  // clipped sum is continuous and nondecreasing in mu, 0 at mu_hi, and below
  // -alpha at mu = 0, so bisection brackets the multiplier.
  double lo = 0.0;
  double hi = std::max(0.0, -y.minCoeff());
  auto shifted = [&](double mu) {
    return clip_box(Vector((y.array() + mu).matrix()), lower);
  };
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (shifted(mid).sum() < -alpha)
      lo = mid;
    else
      hi = mid;
  }
  return shifted(hi);
}

double quadratic_value(const EquilibriumSolver& solver, const Vector& x) {
  return x.dot(solver.solve(x));
}

InterventionResult optimize_opinions(const InterventionProblem& problem,
                                     const OptimizerConfig& config) {
  EquilibriumSolver solver(problem.g);
  return solve_with_factorization(solver, problem.g, problem.s, problem.alpha,
                                  config);
}

std::vector<InterventionResult> budget_sweep(const WeightedGraph& g,
                                             const OpinionVector& s,
                                             const std::vector<double>& alphas,
                                             const OptimizerConfig& config) {
  if (alphas.empty()) throw std::invalid_argument("no budgets given");
  for (std::size_t i = 0; i + 1 < alphas.size(); ++i)
    if (alphas[i + 1] < alphas[i])
      throw std::invalid_argument("budgets must be sorted ascending");
  for (double a : alphas)
    if (!(a >= 0.0) || !std::isfinite(a))
      throw std::invalid_argument("budget must be nonnegative and finite");

  EquilibriumSolver solver(g);
  std::vector<InterventionResult> results;
  results.reserve(alphas.size());
  for (double a : alphas)
    results.push_back(solve_with_factorization(solver, g, s, a, config));
  return results;
}

}  // namespace polopt
