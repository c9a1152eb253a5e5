#pragma once

#include <cstdint>
#include <optional>

#include "polopt/graph.hpp"
#include "polopt/types.hpp"

namespace polopt {

// Sample-count selection for the spectral sparsifier. Exactly one of epsilon
// and sample_count must be set; epsilon translates into
// ceil(oversample_c * n * log(n) / epsilon^2) draws.
struct SparsifyConfig {
  std::optional<double> epsilon;
  std::optional<std::size_t> sample_count;
  double oversample_c = 4.0;
  std::uint64_t seed = 0;

  std::size_t resolved_sample_count(int n) const;
};

// Effective resistance of every edge of a connected graph, in edges() order.
// Uses one dense factorization of L + (1/n) 11' ; for vectors orthogonal to
// the all-ones vector, that inverse agrees with the Laplacian pseudoinverse,
// so R_e = M_uu + M_vv - 2 M_uv with M = (L + 11'/n)^-1.
Vector effective_resistances(const WeightedGraph& g);

// Spectral sparsification by effective-resistance sampling: q independent
// draws from p_e = w_e R_e / (n - 1), each adding w_e / (q p_e) to the
// sampled edge. Repeated draws of the same edge merge by summing.
WeightedGraph sparsify(const WeightedGraph& g, const SparsifyConfig& config);

// Uniform weight rescaling so the total becomes target_total (equivalently,
// fixing the Laplacian trace to twice that). Rejects empty graphs.
WeightedGraph rescale_trace(const WeightedGraph& g, double target_total);

}  // namespace polopt
