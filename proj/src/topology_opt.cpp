#include "polopt/topology_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace polopt {

namespace {

// Factorization of I + L(w) for repeated use within one iteration.
Eigen::LLT<Matrix> factor_system(const EdgeWeightVector& w) {
  Matrix a = laplacian(w);
  a.diagonal().array() += 1.0;
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("Cholesky factorization of I + L(w) failed");
  return llt;
}

void check_nonnegative(const EdgeWeightVector& w) {
  for (Eigen::Index i = 0; i < w.values().size(); ++i) {
    double x = w.values()(i);
    if (!(x >= 0.0) || !std::isfinite(x))
      throw std::invalid_argument("weights must be nonnegative and finite");
  }
}

void check_dimensions(const EdgeWeightVector& w, const OpinionVector& s) {
  if (w.nodes() != s.size())
    throw std::invalid_argument("weight vector and opinions disagree on n");
}

double objective_from_factor(const Eigen::LLT<Matrix>& llt,
                             const Vector& sbar) {
  return sbar.dot(llt.solve(sbar));
}

Vector gradient_from_factor(const Eigen::LLT<Matrix>& llt, const Vector& sbar,
                            int n) {
  Vector x = llt.solve(sbar);
  Vector g(static_cast<Eigen::Index>(pair_count(n)));
  Eigen::Index idx = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v, ++idx) {
      double diff = x(u) - x(v);
      g(idx) = -diff * diff;
    }
  }
  return g;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
  if (!(line_search.initial_step > 0.0))
    throw std::invalid_argument("initial step must be positive");
  if (!(line_search.shrink > 0.0 && line_search.shrink < 1.0))
    throw std::invalid_argument("line-search shrink must lie in (0, 1)");
  if (!(line_search.sufficient_decrease > 0.0 &&
        line_search.sufficient_decrease < 1.0))
    throw std::invalid_argument("sufficient-decrease factor must lie in (0, 1)");
}

TopologyProblem::TopologyProblem(OpinionVector opinions, double total)
    : s(std::move(opinions)), total_weight(total), n(s.size()) {
  if (n < 2) throw std::invalid_argument("topology problem needs n >= 2");
  if (!(total > 0.0) || !std::isfinite(total))
    throw std::invalid_argument("total weight must be positive and finite");
}

double topology_objective(const EdgeWeightVector& w, const OpinionVector& s) {
  check_dimensions(w, s);
  check_nonnegative(w);
  return objective_from_factor(factor_system(w), center(s.values()));
}

Vector topology_gradient(const EdgeWeightVector& w, const OpinionVector& s) {
  check_dimensions(w, s);
  check_nonnegative(w);
  return gradient_from_factor(factor_system(w), center(s.values()), w.nodes());
}

Vector project_simplex(const Vector& w, double total) {
  if (!(total > 0.0) || !std::isfinite(total))
    throw std::invalid_argument("simplex total must be positive and finite");
  if (w.size() == 0) throw std::invalid_argument("empty vector");
  if (!w.allFinite()) throw std::invalid_argument("non-finite entry");

  // Feasible points are fixed points of the projection; return them bitwise
  // unchanged instead of letting rounding perturb them.
  if (w.minCoeff() >= 0.0 &&
      std::abs(w.sum() - total) <= 1e-12 * std::max(1.0, total))
    return w;

  std::vector<double> u(w.data(), w.data() + w.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    double candidate = (cumulative - total) / static_cast<double>(k + 1);
    if (u[k] - candidate > 0.0) theta = candidate;
  }
  return (w.array() - theta).max(0.0);
}

TopologySolution solve_topology(const TopologyProblem& problem,
                                const OptimizerConfig& config,
                                const std::optional<EdgeWeightVector>& w0) {
  config.validate();
  int n = problem.n;
  Eigen::Index count = static_cast<Eigen::Index>(pair_count(n));

  Vector w;
  if (w0) {
    if (w0->nodes() != n)
      throw std::invalid_argument("starting point has wrong node count");
    check_nonnegative(*w0);
    if (std::abs(w0->sum() - problem.total_weight) >
        1e-8 * std::max(1.0, problem.total_weight))
      throw std::invalid_argument("starting point violates the total-weight constraint");
    w = w0->values();
  } else {
    w = Vector::Constant(count, problem.total_weight / static_cast<double>(count));
  }

  Vector sbar = center(problem.s.values());
  auto objective_at = [&](const Vector& x) {
    return objective_from_factor(
        factor_system(EdgeWeightVector(n, x)), sbar);
  };

  double f = objective_at(w);
  TopologySolution solution{EdgeWeightVector(n, w), f, 0, false, false, {f}};

  double t = config.line_search.initial_step;
  for (int k = 0; k < config.max_iters; ++k) {
    Vector g = gradient_from_factor(factor_system(EdgeWeightVector(n, w)),
                                    sbar, n);
    t = std::min(t * 2.0, 1e18);  // let useful step sizes regrow after shrinks

    Vector w_next;
    double f_next = f;
    bool accepted = false;
    while (t >= 1e-20) {
      w_next = project_simplex(w - t * g, problem.total_weight);
      f_next = objective_at(w_next);
      double model_decrease = g.dot(w_next - w);
      if (f_next <=
          f + config.line_search.sufficient_decrease * model_decrease) {
        accepted = true;
        break;
      }
      t *= config.line_search.shrink;
    }
    ++solution.iterations;

    if (!accepted) {
      // No representable step makes progress: the iterate is stationary to
      // machine precision, which satisfies any positive rel_tol.
      solution.converged = true;
      break;
    }

    double rel_decrease = (f - f_next) / std::max(std::abs(f), 1e-300);
    w = w_next;
    f = f_next;
    solution.objective_history.push_back(f);
    if (rel_decrease < config.rel_tol) {
      solution.converged = true;
      break;
    }
  }

  solution.weights = EdgeWeightVector(n, w);
  solution.objective = f;
  solution.connected = is_connected(from_dense_weights(solution.weights));
  return solution;
}

bool convexity_probe(const EdgeWeightVector& w1, const EdgeWeightVector& w2,
                     const OpinionVector& s, int k) {
  if (w1.nodes() != w2.nodes())
    throw std::invalid_argument("weight vectors disagree on node count");
  check_dimensions(w1, s);
  check_nonnegative(w1);
  check_nonnegative(w2);
  if (std::abs(w1.sum() - w2.sum()) >
      1e-8 * std::max({1.0, std::abs(w1.sum()), std::abs(w2.sum())}))
    throw std::invalid_argument("weight vectors have different totals");
  if (k < 2) throw std::invalid_argument("probe needs at least two segments");

  Vector sbar = center(s.values());
  int n = w1.nodes();
  auto value = [&](const Vector& x) {
    return objective_from_factor(factor_system(EdgeWeightVector(n, x)), sbar);
  };
  double f1 = value(w1.values());
  double f2 = value(w2.values());
  for (int i = 1; i < k; ++i) {
    double lambda = static_cast<double>(i) / k;
    Vector mid = lambda * w1.values() + (1.0 - lambda) * w2.values();
    if (value(mid) > lambda * f1 + (1.0 - lambda) * f2 + 1e-9) return false;
  }
  return true;
}

double disagreement_midpoint_gap(const Matrix& l1, const Matrix& l2,
                                 double lambda) {
  if (l1.rows() != l1.cols() || l2.rows() != l2.cols() ||
      l1.rows() != l2.rows())
    throw std::invalid_argument("matrices must be square and equally sized");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("lambda must lie in [0, 1]");

  auto h = [](const Matrix& l) {
    Matrix a = l;
    a.diagonal().array() += 1.0;
    Matrix inv = a.inverse();
    return Matrix(inv * l * inv);
  };
  Matrix mid = lambda * l1 + (1.0 - lambda) * l2;
  Matrix gap = lambda * h(l1) + (1.0 - lambda) * h(l2) - h(mid);
  Matrix sym = 0.5 * (gap + gap.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eigs(sym);
  return eigs.eigenvalues()(0);
}

NonconvexityWitness nonconvexity_witness() {
  NonconvexityWitness witness;
  witness.l1 = Matrix{{1.0, -1.0, 0.0}, {-1.0, 2.0, -1.0}, {0.0, -1.0, 1.0}};
  witness.l2 = Matrix{{2.0, -1.0, -1.0}, {-1.0, 1.0, 0.0}, {-1.0, 0.0, 1.0}};
  witness.min_eigenvalue =
      disagreement_midpoint_gap(witness.l1, witness.l2, 0.5);
  return witness;
}

SimplexKkt simplex_kkt(const EdgeWeightVector& w, const OpinionVector& s,
                       double active_tol) {
  check_dimensions(w, s);
  check_nonnegative(w);
  if (!(active_tol > 0.0))
    throw std::invalid_argument("active tolerance must be positive");

  Vector g = topology_gradient(w, s);
  SimplexKkt kkt;
  kkt.gradient_scale = g.cwiseAbs().maxCoeff();
  if (kkt.gradient_scale == 0.0) return kkt;  // flat objective, trivially optimal

  double active_min = std::numeric_limits<double>::infinity();
  double active_max = -std::numeric_limits<double>::infinity();
  double active_sum = 0.0;
  int active_count = 0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (w.values()(i) > active_tol) {
      active_min = std::min(active_min, g(i));
      active_max = std::max(active_max, g(i));
      active_sum += g(i);
      ++active_count;
    }
  }
  if (active_count == 0)
    throw std::invalid_argument("no active pairs above the activity tolerance");

  double multiplier = active_sum / active_count;  // estimate of -lambda
  double worst = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (w.values()(i) <= active_tol)
      worst = std::max(worst, multiplier - g(i));
  }
  kkt.active_spread = (active_max - active_min) / kkt.gradient_scale;
  kkt.inactive_violation = worst / kkt.gradient_scale;
  return kkt;
}

}  // namespace polopt
