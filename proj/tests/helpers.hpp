#pragma once

// Deterministic random instances for the unit suite, built on the library's
// own Rng so every test is reproducible across platforms.

#include <vector>

#include "polopt/dynamics.hpp"
#include "polopt/graph.hpp"
#include "polopt/rng.hpp"
#include "polopt/types.hpp"

namespace testutil {

inline polopt::WeightedGraph random_graph(int n, double p, double w_max,
                                          polopt::Rng& rng) {
  std::vector<polopt::Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.next_double() < p)
        edges.push_back({u, v, 0.1 + (w_max - 0.1) * rng.next_double()});
  return polopt::WeightedGraph(n, std::move(edges));
}

inline polopt::Vector random_unit_vector(int n, polopt::Rng& rng) {
  polopt::Vector s(n);
  for (int i = 0; i < n; ++i) s(i) = rng.next_double();
  return s;
}

// Feasible weight vector with entries bounded away from zero, so central
// finite differences stay inside the nonnegative orthant.
inline polopt::EdgeWeightVector interior_weights(int n, double total,
                                                 polopt::Rng& rng) {
  auto count = static_cast<Eigen::Index>(polopt::pair_count(n));
  polopt::Vector w(count);
  for (Eigen::Index i = 0; i < count; ++i) w(i) = 0.1 + 0.9 * rng.next_double();
  w *= total / w.sum();
  return polopt::EdgeWeightVector(n, std::move(w));
}

}  // namespace testutil
