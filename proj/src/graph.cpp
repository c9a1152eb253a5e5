#include "polopt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace polopt {

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
  if (n < 0) throw std::invalid_argument("node count must be nonnegative");
  for (Edge& e : edges_) {
    if (e.u == e.v)
      throw std::invalid_argument("self-loop on node " + std::to_string(e.u));
    if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_)
      throw std::invalid_argument("edge endpoint out of range: (" +
                                  std::to_string(e.u) + ", " +
                                  std::to_string(e.v) + ")");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw std::invalid_argument("edge weight must be positive and finite");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i - 1].u == edges_[i].u && edges_[i - 1].v == edges_[i].v)
      throw std::invalid_argument("duplicate edge (" +
                                  std::to_string(edges_[i].u) + ", " +
                                  std::to_string(edges_[i].v) + ")");
  }
}

double WeightedGraph::total_weight() const {
  double total = 0.0;
  for (const Edge& e : edges_) total += e.weight;
  return total;
}

std::size_t pair_count(int n) {
  if (n < 0) throw std::invalid_argument("node count must be nonnegative");
  return static_cast<std::size_t>(n) * (n - 1) / 2;
}

std::size_t pair_index(int n, int u, int v) {
  if (u < 0 || v <= u || v >= n)
    throw std::invalid_argument("pair requires 0 <= u < v < n");
  // Pairs with first endpoint < u occupy a prefix of length
  // u*n - u*(u+1)/2; inside block u the pair (u, v) sits at v - u - 1.
  std::size_t su = static_cast<std::size_t>(u);
  return su * n - su * (su + 1) / 2 + (v - u - 1);
}

std::pair<int, int> pair_endpoints(int n, std::size_t index) {
  if (index >= pair_count(n)) throw std::invalid_argument("pair index out of range");
  std::size_t offset = 0;
  for (int u = 0; u < n - 1; ++u) {
    std::size_t block = static_cast<std::size_t>(n - 1 - u);
    if (index < offset + block) return {u, u + 1 + static_cast<int>(index - offset)};
    offset += block;
  }
  throw std::logic_error("pair index scan failed");
}

EdgeWeightVector::EdgeWeightVector(int n, Vector values)
    : n_(n), values_(std::move(values)) {
  if (n < 1) throw std::invalid_argument("weight vector needs at least one node");
  if (static_cast<std::size_t>(values_.size()) != pair_count(n))
    throw std::invalid_argument("weight vector length must be n*(n-1)/2");
}

EdgeWeightVector EdgeWeightVector::uniform(int n, double total) {
  if (n < 2) throw std::invalid_argument("uniform weights need at least two nodes");
  if (!(total > 0.0) || !std::isfinite(total))
    throw std::invalid_argument("total weight must be positive and finite");
  std::size_t count = pair_count(n);
  return EdgeWeightVector(
      n, Vector::Constant(static_cast<Eigen::Index>(count), total / count));
}

Matrix laplacian(const WeightedGraph& g) {
  Matrix l = Matrix::Zero(g.n(), g.n());
  for (const Edge& e : g.edges()) {
    l(e.u, e.u) += e.weight;
    l(e.v, e.v) += e.weight;
    l(e.u, e.v) -= e.weight;
    l(e.v, e.u) -= e.weight;
  }
  return l;
}

Matrix laplacian(const EdgeWeightVector& w) {
  int n = w.nodes();
  Matrix l = Matrix::Zero(n, n);
  std::size_t idx = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v, ++idx) {
      double wi = w.values()(static_cast<Eigen::Index>(idx));
      l(u, u) += wi;
      l(v, v) += wi;
      l(u, v) -= wi;
      l(v, u) -= wi;
    }
  }
  return l;
}

EdgeWeightVector to_dense_weights(const WeightedGraph& g) {
  if (g.n() < 1) throw std::invalid_argument("graph has no nodes");
  Vector w = Vector::Zero(static_cast<Eigen::Index>(pair_count(g.n())));
  for (const Edge& e : g.edges())
    w(static_cast<Eigen::Index>(pair_index(g.n(), e.u, e.v))) = e.weight;
  return EdgeWeightVector(g.n(), std::move(w));
}

WeightedGraph from_dense_weights(const EdgeWeightVector& w, double threshold) {
  if (!(threshold >= 0.0))
    throw std::invalid_argument("threshold must be nonnegative");
  int n = w.nodes();
  std::vector<Edge> edges;
  std::size_t idx = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v, ++idx) {
      double wi = w.values()(static_cast<Eigen::Index>(idx));
      if (wi < 0.0)
        throw std::invalid_argument("negative weight at pair (" +
                                    std::to_string(u) + ", " +
                                    std::to_string(v) + ")");
      if (wi > threshold) edges.push_back({u, v, wi});
    }
  }
  return WeightedGraph(n, std::move(edges));
}

std::vector<std::vector<std::pair<int, double>>> adjacency(
    const WeightedGraph& g) {
  std::vector<std::vector<std::pair<int, double>>> adj(g.n());
  for (const Edge& e : g.edges()) {
    adj[e.u].emplace_back(e.v, e.weight);
    adj[e.v].emplace_back(e.u, e.weight);
  }
  return adj;
}

bool is_connected(const WeightedGraph& g) {
  if (g.n() <= 1) return true;
  auto adj = adjacency(g);
  std::vector<char> seen(g.n(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (auto [v, w] : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == g.n();
}

}  // namespace polopt
