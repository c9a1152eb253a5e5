#include "polopt/topology_opt.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "helpers.hpp"
#include "polopt/dynamics.hpp"
#include "polopt/graph.hpp"
#include "polopt/rng.hpp"

using namespace polopt;

namespace {

OpinionVector two_node_split() { return OpinionVector(Vector{{0.0, 1.0}}); }

}  // namespace

TEST_CASE("objective matches the hand-computed two-node value") {
  // One pair at weight 1 with opinions 0 and 1: centered quadratic form 1/6.
  EdgeWeightVector w(2, Vector::Constant(1, 1.0));
  CHECK(std::abs(topology_objective(w, two_node_split()) - 1.0 / 6.0) <= 1e-12);

  Vector negative = Vector::Constant(1, -0.5);
  CHECK_THROWS_AS(topology_objective(EdgeWeightVector(2, negative),
                                     two_node_split()),
                  std::invalid_argument);
  CHECK_THROWS_AS(topology_objective(EdgeWeightVector::uniform(3, 1.0),
                                     two_node_split()),
                  std::invalid_argument);
}

TEST_CASE("objective equals the index of the weight-support graph") {
  Rng rng(101);
  for (int trial = 0; trial < 5; ++trial) {
    int n = 4 + static_cast<int>(rng.next_double() * 6);
    EdgeWeightVector w = testutil::interior_weights(n, 3.0, rng);
    OpinionVector s(testutil::random_unit_vector(n, rng));
    double direct = topology_objective(w, s);
    double via_graph = pd_index(from_dense_weights(w), s).index;
    CHECK(std::abs(direct - via_graph) <= 1e-10);
  }
}

TEST_CASE("gradient matches the two-node closed form and is nonpositive") {
  EdgeWeightVector w(2, Vector::Constant(1, 1.0));
  Vector g = topology_gradient(w, two_node_split());
  CHECK(std::abs(g(0) + 1.0 / 9.0) <= 1e-12);

  Rng rng(103);
  EdgeWeightVector wr = testutil::interior_weights(7, 2.5, rng);
  OpinionVector s(testutil::random_unit_vector(7, rng));
  CHECK(topology_gradient(wr, s).maxCoeff() <= 0.0);
}

TEST_CASE("gradient agrees with central finite differences") {
  Rng rng(107);
  for (int trial = 0; trial < 3; ++trial) {
    int n = 4 + trial * 2;
    EdgeWeightVector w = testutil::interior_weights(n, 5.0, rng);
    OpinionVector s(testutil::random_unit_vector(n, rng));
    Vector g = topology_gradient(w, s);
    double h = 1e-5;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      Vector plus = w.values();
      Vector minus = w.values();
      plus(i) += h;
      minus(i) -= h;
      double fd = (topology_objective(EdgeWeightVector(n, plus), s) -
                   topology_objective(EdgeWeightVector(n, minus), s)) /
                  (2.0 * h);
      double scale = std::max({std::abs(g(i)), std::abs(fd), 1e-10});
      CHECK(std::abs(g(i) - fd) / scale < 1e-4);
    }
  }
}

TEST_CASE("simplex projection handles the worked examples") {
  Vector x{{1.5, 0.5}};
  Vector p = project_simplex(x, 1.0);
  CHECK(std::abs(p(0) - 1.0) <= 1e-12);
  CHECK(std::abs(p(1)) <= 1e-12);

  // All-negative input collapses onto the uniform point.
  Vector neg{{-1.0, -1.0}};
  Vector pn = project_simplex(neg, 2.0);
  CHECK(std::abs(pn(0) - 1.0) <= 1e-12);
  CHECK(std::abs(pn(1) - 1.0) <= 1e-12);

  CHECK_THROWS_AS(project_simplex(x, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(project_simplex(x, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(project_simplex(Vector(0), 1.0), std::invalid_argument);
  Vector bad{{std::numeric_limits<double>::quiet_NaN()}};
  CHECK_THROWS_AS(project_simplex(bad, 1.0), std::invalid_argument);
}

TEST_CASE("simplex projection returns feasible points unchanged, bitwise") {
  Vector w{{0.3, 0.7}};
  Vector p = project_simplex(w, 1.0);
  CHECK(p(0) == 0.3);
  CHECK(p(1) == 0.7);
}

TEST_CASE("simplex projection is idempotent and optimal") {
  Rng rng(109);
  for (int trial = 0; trial < 50; ++trial) {
    int len = 2 + static_cast<int>(rng.next_double() * 30);
    Vector x(len);
    for (int i = 0; i < len; ++i) x(i) = 4.0 * rng.next_double() - 2.0;
    double total = 0.5 + 2.0 * rng.next_double();
    Vector p = project_simplex(x, total);

    CHECK(p.minCoeff() >= 0.0);
    CHECK(std::abs(p.sum() - total) <= 1e-10 * std::max(1.0, total));
    Vector again = project_simplex(p, total);
    CHECK((again - p).cwiseAbs().maxCoeff() == 0.0);  // second pass is a no-op

    // Optimality: on the support the shift x_i - p_i is a constant theta,
    // and entries clipped to zero satisfy x_i <= theta.
    double theta = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < len; ++i)
      if (p(i) > 0.0) theta = std::max(theta, x(i) - p(i));
    for (int i = 0; i < len; ++i) {
      if (p(i) > 0.0)
        CHECK(std::abs(x(i) - p(i) - theta) <= 1e-10);
      else
        CHECK(x(i) <= theta + 1e-10);
    }
  }
}

TEST_CASE("solver treats a flat objective as instantly converged") {
  // Constant opinions center to zero, so every weight vector scores zero.
  TopologyProblem problem(OpinionVector(Vector::Constant(4, 0.5)), 2.0);
  OptimizerConfig config;
  EdgeWeightVector w0 = EdgeWeightVector::uniform(4, 2.0);
  TopologySolution solution = solve_topology(problem, config, w0);
  CHECK(solution.converged);
  CHECK(solution.iterations == 1);
  CHECK(solution.objective == 0.0);
  CHECK((solution.weights.values() - w0.values()).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("solver descends, stays feasible, and certifies optimality") {
  Rng rng(113);
  int n = 10;
  OpinionVector s(testutil::random_unit_vector(n, rng));
  double total = 12.0;
  TopologyProblem problem(s, total);
  OptimizerConfig config;
  config.rel_tol = 1e-14;
  config.max_iters = 3000;
  TopologySolution solution = solve_topology(problem, config, std::nullopt);

  CHECK(solution.converged);
  REQUIRE(!solution.objective_history.empty());
  CHECK(solution.objective_history.size() <=
        static_cast<std::size_t>(solution.iterations) + 1);
  CHECK(solution.objective == solution.objective_history.back());
  for (std::size_t i = 1; i < solution.objective_history.size(); ++i)
    CHECK(solution.objective_history[i] <= solution.objective_history[i - 1]);
  CHECK(solution.weights.values().minCoeff() >= 0.0);
  CHECK(std::abs(solution.weights.sum() - total) <= 1e-8 * total);
  CHECK(simplex_kkt(solution.weights, s).satisfied(1e-4));
  // The uniform start is strictly suboptimal for non-constant opinions.
  CHECK(solution.objective <
        topology_objective(EdgeWeightVector::uniform(n, total), s));
}

TEST_CASE("solver runs are deterministic") {
  Rng rng(127);
  OpinionVector s(testutil::random_unit_vector(8, rng));
  TopologyProblem problem(s, 5.0);
  OptimizerConfig config;
  config.rel_tol = 1e-12;
  TopologySolution a = solve_topology(problem, config, std::nullopt);
  TopologySolution b = solve_topology(problem, config, std::nullopt);
  CHECK(a.objective == b.objective);
  CHECK((a.weights.values() - b.weights.values()).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("solver validates problem, start, and config") {
  OpinionVector s(Vector{{0.0, 1.0, 0.5}});
  CHECK_THROWS_AS(TopologyProblem(s, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(TopologyProblem(s, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(TopologyProblem(OpinionVector(Vector{{0.5}}), 1.0),
                  std::invalid_argument);

  TopologyProblem problem(s, 3.0);
  OptimizerConfig config;

  EdgeWeightVector wrong_size = EdgeWeightVector::uniform(4, 3.0);
  CHECK_THROWS_AS(solve_topology(problem, config, wrong_size),
                  std::invalid_argument);
  EdgeWeightVector wrong_total = EdgeWeightVector::uniform(3, 1.0);
  CHECK_THROWS_AS(solve_topology(problem, config, wrong_total),
                  std::invalid_argument);

  OptimizerConfig bad = config;
  bad.max_iters = 0;
  CHECK_THROWS_AS(solve_topology(problem, bad, std::nullopt),
                  std::invalid_argument);
  bad = config;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(solve_topology(problem, bad, std::nullopt),
                  std::invalid_argument);
  bad = config;
  bad.line_search.shrink = 1.0;
  CHECK_THROWS_AS(solve_topology(problem, bad, std::nullopt),
                  std::invalid_argument);
  bad = config;
  bad.line_search.initial_step = 0.0;
  CHECK_THROWS_AS(solve_topology(problem, bad, std::nullopt),
                  std::invalid_argument);
}

TEST_CASE("midpoint convexity holds for the full objective") {
  // The two fixed witness supports: a path and a star on three nodes.
  EdgeWeightVector path(3, Vector{{1.0, 0.0, 1.0}});
  EdgeWeightVector star(3, Vector{{1.0, 1.0, 0.0}});
  OpinionVector s(Vector{{0.0, 0.3, 1.0}});
  CHECK(convexity_probe(path, star, s, 9));

  Rng rng(131);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 4 + static_cast<int>(rng.next_double() * 5);
    EdgeWeightVector w1 = testutil::interior_weights(n, 4.0, rng);
    EdgeWeightVector w2 = testutil::interior_weights(n, 4.0, rng);
    OpinionVector so(testutil::random_unit_vector(n, rng));
    CHECK(convexity_probe(w1, w2, so, 7));
  }

  CHECK_THROWS_AS(convexity_probe(path, EdgeWeightVector::uniform(4, 2.0), s, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(convexity_probe(path, EdgeWeightVector::uniform(3, 5.0), s, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(convexity_probe(path, star, s, 1), std::invalid_argument);
}

TEST_CASE("the disagreement term alone is not convex") {
  NonconvexityWitness witness = nonconvexity_witness();
  // Frozen eigensolver oracle for this fixed 3x3 midpoint gap.
  CHECK(std::abs(witness.min_eigenvalue + 0.005625) <= 1e-9);
  CHECK(witness.min_eigenvalue < -1e-6);

  // The same matrices under matching endpoints give a vanishing gap.
  CHECK(std::abs(disagreement_midpoint_gap(witness.l1, witness.l2, 0.0)) <=
        1e-12);
  CHECK(std::abs(disagreement_midpoint_gap(witness.l1, witness.l2, 1.0)) <=
        1e-12);
  CHECK(std::abs(disagreement_midpoint_gap(witness.l1, witness.l1, 0.5)) <=
        1e-12);

  CHECK_THROWS_AS(disagreement_midpoint_gap(witness.l1, Matrix::Zero(2, 2), 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(disagreement_midpoint_gap(witness.l1, witness.l2, 1.5),
                  std::invalid_argument);
}

TEST_CASE("kkt certificate distinguishes optimal from arbitrary points") {
  Rng rng(137);
  int n = 8;
  OpinionVector s(testutil::random_unit_vector(n, rng));
  TopologyProblem problem(s, 6.0);
  OptimizerConfig config;
  config.rel_tol = 1e-14;
  config.max_iters = 3000;
  TopologySolution solution = solve_topology(problem, config, std::nullopt);
  CHECK(simplex_kkt(solution.weights, s).satisfied(1e-4));

  // Concentrating all weight on one pair is far from stationary here.
  Vector lopsided = Vector::Zero(static_cast<Eigen::Index>(pair_count(n)));
  lopsided(0) = 6.0;
  SimplexKkt at_corner = simplex_kkt(EdgeWeightVector(n, lopsided), s);
  CHECK_FALSE(at_corner.satisfied(1e-4));

  CHECK_THROWS_AS(simplex_kkt(solution.weights, s, 0.0),
                  std::invalid_argument);
}
