#include "polopt/sparsifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>

#include "polopt/rng.hpp"

namespace polopt {

std::size_t SparsifyConfig::resolved_sample_count(int n) const {
  if (epsilon.has_value() == sample_count.has_value())
    throw std::invalid_argument(
        "exactly one of epsilon and sample_count must be set");
  if (sample_count) {
    if (*sample_count < 1)
      throw std::invalid_argument("sample count must be at least 1");
    return *sample_count;
  }
  if (!(*epsilon > 0.0 && *epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(oversample_c > 0.0))
    throw std::invalid_argument("oversampling constant must be positive");
  if (n < 2) throw std::invalid_argument("sparsification needs n >= 2");
  double q = std::ceil(oversample_c * n * std::log(static_cast<double>(n)) /
                       (*epsilon * *epsilon));
  return static_cast<std::size_t>(q);
}

Vector effective_resistances(const WeightedGraph& g) {
  if (!is_connected(g))
    throw std::invalid_argument("effective resistances need a connected graph");
  int n = g.n();
  if (g.edge_count() == 0) return Vector(0);

  Matrix m = laplacian(g);
  m.array() += 1.0 / n;  // shift by 11'/n, invertible and equal to pinv(L) on 1-perp
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("factorization of shifted Laplacian failed");
  Matrix inv = llt.solve(Matrix::Identity(n, n));

  Vector r(static_cast<Eigen::Index>(g.edge_count()));
  Eigen::Index i = 0;
  for (const Edge& e : g.edges())
    r(i++) = inv(e.u, e.u) + inv(e.v, e.v) - 2.0 * inv(e.u, e.v);
  return r;
}

WeightedGraph sparsify(const WeightedGraph& g, const SparsifyConfig& config) {
  int n = g.n();
  std::size_t q = config.resolved_sample_count(n);
  if (g.edge_count() == 0)
    throw std::invalid_argument("cannot sparsify a graph with no edges");

  Vector resistance = effective_resistances(g);
  const auto& edges = g.edges();
  std::size_t m = edges.size();

  // Sampling probabilities p_e = w_e R_e / (n-1); they sum to 1 exactly in
  // exact arithmetic, so only rounding error needs normalizing away.
  std::vector<double> probability(m);
  for (std::size_t e = 0; e < m; ++e)
    probability[e] = edges[e].weight * resistance(static_cast<Eigen::Index>(e)) /
                     static_cast<double>(n - 1);
  std::vector<double> cumulative(m);
  double acc = 0.0;
  for (std::size_t e = 0; e < m; ++e) {
    acc += probability[e];
    cumulative[e] = acc;
  }
  double total_p = cumulative.back();

  Rng rng(config.seed);
  std::vector<double> accumulated(m, 0.0);
  for (std::size_t draw = 0; draw < q; ++draw) {
    double u = rng.next_double() * total_p;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t e = std::min<std::size_t>(it - cumulative.begin(), m - 1);
    accumulated[e] += edges[e].weight / (static_cast<double>(q) * probability[e]);
  }

  std::vector<Edge> kept;
  for (std::size_t e = 0; e < m; ++e)
    if (accumulated[e] > 0.0)
      kept.push_back({edges[e].u, edges[e].v, accumulated[e]});
  return WeightedGraph(n, std::move(kept));
}

WeightedGraph rescale_trace(const WeightedGraph& g, double target_total) {
  if (!(target_total > 0.0) || !std::isfinite(target_total))
    throw std::invalid_argument("target total weight must be positive and finite");
  double current = g.total_weight();
  if (current <= 0.0)
    throw std::invalid_argument("cannot rescale a graph with no edges");
  double factor = target_total / current;
  std::vector<Edge> scaled = g.edges();
  for (Edge& e : scaled) e.weight *= factor;
  return WeightedGraph(g.n(), std::move(scaled));
}

}  // namespace polopt
