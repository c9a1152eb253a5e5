#include "polopt/generators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "polopt/rng.hpp"

namespace polopt {

namespace {

Vector power_law_draws(int n, double slope, Rng& rng) {
  Vector x(n);
  double exponent = -1.0 / (slope - 1.0);
  for (int i = 0; i < n; ++i)
    x(i) = std::pow(1.0 - rng.next_double(), exponent);
  return x;
}

WeightedGraph sample_norros_reittu(const Vector& capacities, Rng& rng) {
  int n = static_cast<int>(capacities.size());
  double total = capacities.sum();
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      double p = 1.0 - std::exp(-capacities(u) * capacities(v) / total);
      if (rng.next_double() < p) edges.push_back({u, v, 1.0});
    }
  }
  return WeightedGraph(n, std::move(edges));
}

}  // namespace

WeightedGraph erdos_renyi(int n, double p, Seed seed) {
  if (n < 0) throw std::invalid_argument("node count must be nonnegative");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("edge probability must lie in [0, 1]");
  Rng rng(seed.value);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.next_double() < p) edges.push_back({u, v, 1.0});
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph norros_reittu(int n, double slope, Seed seed) {
  if (n < 1) throw std::invalid_argument("node count must be at least 1");
  if (!(slope > 1.0)) throw std::invalid_argument("slope must exceed 1");
  Rng rng(seed.value);
  Vector capacities = power_law_draws(n, slope, rng);
  return sample_norros_reittu(capacities, rng);
}

WeightedGraph norros_reittu_from_capacities(const Vector& capacities,
                                            Seed seed) {
  if (capacities.size() == 0)
    throw std::invalid_argument("capacity vector must not be empty");
  if (!capacities.allFinite() || capacities.minCoeff() <= 0.0)
    throw std::invalid_argument("capacities must be positive and finite");
  Rng rng(seed.value);
  return sample_norros_reittu(capacities, rng);
}

Vector power_law_raw(int n, double slope, Seed seed) {
  if (n < 1) throw std::invalid_argument("sample count must be at least 1");
  if (!(slope > 1.0)) throw std::invalid_argument("slope must exceed 1");
  Rng rng(seed.value);
  return power_law_draws(n, slope, rng);
}

OpinionVector power_law_sample(int n, double slope, Seed seed) {
  Vector x = power_law_raw(n, slope, seed);
  return OpinionVector(x / x.maxCoeff());
}

OpinionVector degree_proportional_opinions(const WeightedGraph& g) {
  if (g.edge_count() == 0)
    throw std::invalid_argument(
        "degree-proportional opinions need at least one edge");
  Vector degree = Vector::Zero(g.n());
  for (const Edge& e : g.edges()) {
    degree(e.u) += e.weight;
    degree(e.v) += e.weight;
  }
  return OpinionVector(degree / degree.sum());
}

OpinionVector uniform_opinions(int n, Seed seed) {
  if (n < 1) throw std::invalid_argument("node count must be at least 1");
  Rng rng(seed.value);
  Vector s(n);
  for (int i = 0; i < n; ++i) s(i) = rng.next_double();
  return OpinionVector(std::move(s));
}

}  // namespace polopt
