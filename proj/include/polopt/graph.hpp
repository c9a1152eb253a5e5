#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "polopt/types.hpp"

namespace polopt {

// Single undirected edge with endpoints u < v and a positive weight.
struct Edge {
  int u = 0;
  int v = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Immutable undirected weighted graph on nodes 0..n-1. Construction
// normalizes endpoint order, sorts edges lexicographically, and rejects
// self-loops, duplicate pairs, and non-positive or non-finite weights.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(int n, std::vector<Edge> edges);

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  double total_weight() const;

  friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

// Number of unordered node pairs, n*(n-1)/2.
std::size_t pair_count(int n);

// Index of the pair (u, v), u < v, in lexicographic order
// (0,1),(0,2),...,(0,n-1),(1,2),...
std::size_t pair_index(int n, int u, int v);

// Endpoints (u, v) of the pair at a lexicographic index.
std::pair<int, int> pair_endpoints(int n, std::size_t index);

// Dense weight vector over all unordered pairs of n nodes, in pair_index
// order. The length is always pair_count(n). Entries may be negative while
// the vector is an optimizer intermediate; nonnegativity is checked by the
// routines that require it.
class EdgeWeightVector {
 public:
  EdgeWeightVector(int n, Vector values);

  // Equal weight total / pair_count(n) on every pair.
  static EdgeWeightVector uniform(int n, double total);

  int nodes() const { return n_; }
  const Vector& values() const { return values_; }
  double sum() const { return values_.sum(); }

 private:
  int n_ = 0;
  Vector values_;
};

// Combinatorial Laplacian L = D - A as a dense symmetric matrix.
Matrix laplacian(const WeightedGraph& g);
Matrix laplacian(const EdgeWeightVector& w);

// Pair-indexed weights of g; zero where no edge exists.
EdgeWeightVector to_dense_weights(const WeightedGraph& g);

// Graph containing exactly the pairs whose weight exceeds threshold.
// Entries must be nonnegative and threshold must be >= 0.
WeightedGraph from_dense_weights(const EdgeWeightVector& w,
                                 double threshold = 0.0);

// True iff a single component spans all nodes. Graphs on zero or one nodes
// count as connected.
bool is_connected(const WeightedGraph& g);

// Neighbor lists (neighbor, weight) per node.
std::vector<std::vector<std::pair<int, double>>> adjacency(
    const WeightedGraph& g);

}  // namespace polopt
