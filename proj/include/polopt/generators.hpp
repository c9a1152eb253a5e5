#pragma once

#include <cstdint>

#include "polopt/dynamics.hpp"
#include "polopt/graph.hpp"
#include "polopt/types.hpp"

namespace polopt {

// Seed wrapper so generator signatures cannot silently swap a seed with a
// size or probability parameter.
struct Seed {
  std::uint64_t value = 0;
};

// Each unordered pair present independently with probability p, unit weight.
WeightedGraph erdos_renyi(int n, double p, Seed seed);

// Power-law random graph: node capacities W_i drawn from the continuous
// power law with the given slope (x_min = 1), then each pair (i, j) present
// independently with probability 1 - exp(-W_i W_j / sum_k W_k), unit weight.
WeightedGraph norros_reittu(int n, double slope, Seed seed);

// Same connection rule with caller-supplied capacities (all > 0); lets tests
// pin the capacity layer and exercise only the edge sampling.
WeightedGraph norros_reittu_from_capacities(const Vector& capacities,
                                            Seed seed);

// Raw continuous power-law draws x = (1 - u)^(-1 / (slope - 1)), x >= 1,
// before any normalization.
Vector power_law_raw(int n, double slope, Seed seed);

// Power-law opinions normalized into [0, 1] by the sample maximum; the
// largest entry is exactly 1.
OpinionVector power_law_sample(int n, double slope, Seed seed);

// s_v = weighted degree of v divided by the total weighted degree. Needs at
// least one edge; entries sum to 1.
OpinionVector degree_proportional_opinions(const WeightedGraph& g);

// Independent uniform [0, 1) opinions.
OpinionVector uniform_opinions(int n, Seed seed);

}  // namespace polopt
