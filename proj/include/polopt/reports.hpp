#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "polopt/dynamics.hpp"
#include "polopt/generators.hpp"
#include "polopt/io.hpp"
#include "polopt/opinion_opt.hpp"
#include "polopt/sparsifier.hpp"
#include "polopt/topology_opt.hpp"

namespace polopt {

using Json = nlohmann::json;

// One executed command: parameter echo, payload, and provenance. The outputs
// section is a pure function of inputs and seed; timing lives outside it so
// reports stay byte-comparable across runs.
struct RunReport {
  std::string command;
  Json inputs;
  Json outputs;
  double timing_seconds = 0.0;
  std::uint64_t seed = 0;
  std::string tool_version;

  Json to_json() const;
  void write(const std::string& path) const;
};

Json equilibrium_json(const EquilibriumReport& report);

// Per-node and per-edge CSV artifacts (17-digit values).
void write_node_csv(const std::string& path,
                    const std::vector<std::string>& labels,
                    const std::vector<std::pair<std::string, Vector>>& columns);
void write_edge_csv(const std::string& path, const WeightedGraph& g,
                    const std::vector<std::string>& labels);

// Equilibrium, polarization, disagreement, and per-node stress for one
// instance.
struct IndexCommandResult {
  RunReport report;
  EquilibriumReport equilibrium;
  Vector stress;
};
IndexCommandResult cmd_index(const WeightedGraph& g, const OpinionVector& s,
                             const Json& input_echo);

// Full pipeline around solve_topology. When an input graph is given its
// index becomes the baseline row of the report; when sparsify_config is set
// the optimized graph is sparsified and rescaled back to the problem's total
// weight, adding a third row (the original / optimized / sparsified layout).
struct TopologyCommandResult {
  RunReport report;
  TopologySolution solution;
  WeightedGraph optimized;                  // support graph of the solution
  std::optional<WeightedGraph> sparsified;  // present when chained
};
TopologyCommandResult cmd_optimize_topology(
    const std::optional<WeightedGraph>& baseline, const OpinionVector& s,
    double total_weight, const OptimizerConfig& config,
    const std::optional<SparsifyConfig>& sparsify_config,
    const Json& input_echo);

struct SparsifyCommandResult {
  RunReport report;
  WeightedGraph sparsified;
};
SparsifyCommandResult cmd_sparsify(const WeightedGraph& g,
                                   const SparsifyConfig& config,
                                   std::optional<double> rescale_to,
                                   const Json& input_echo);

struct OpinionCommandResult {
  RunReport report;
  std::vector<InterventionResult> results;  // one per budget
};
OpinionCommandResult cmd_optimize_opinions(const WeightedGraph& g,
                                           const OpinionVector& s,
                                           const std::vector<double>& alphas,
                                           const OptimizerConfig& config,
                                           const Json& input_echo);

// Synthetic-instance generation; writes the graph or opinion artifact to
// data_path when given.
struct GenerateParams {
  std::string model;  // erdos-renyi | norros-reittu | uniform | power-law |
                      // degree-proportional
  int nodes = 0;
  double p = 0.5;
  double slope = 2.0;
  std::optional<WeightedGraph> base_graph;  // for degree-proportional
};
RunReport cmd_generate(const GenerateParams& params, Seed seed,
                       const std::optional<std::string>& data_path,
                       const Json& input_echo);

// Built-in worked examples: the three two-node-pair index rows, the
// centering and disagreement identities on a random instance, and the
// non-convexity witness. outputs.all_pass reports the aggregate.
RunReport cmd_reproduce_examples();

}  // namespace polopt
