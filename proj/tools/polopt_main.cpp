#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "polopt/generators.hpp"
#include "polopt/io.hpp"
#include "polopt/reports.hpp"
#include "polopt/version.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using polopt::Json;

// POLOPT_THREADS caps the linear-algebra thread pool; unset means all cores.
void configure_threads() {
  const char* env = std::getenv("POLOPT_THREADS");
  if (!env) return;
  int threads = std::atoi(env);
  if (threads < 1) return;
  Eigen::setNbThreads(threads);
#ifdef _OPENMP
  omp_set_num_threads(threads);
#endif
}

void emit(const polopt::RunReport& report, const std::string& out_path) {
  if (out_path.empty())
    std::cout << report.to_json().dump(2) << "\n";
  else
    report.write(out_path);
}

struct CommonOptions {
  std::string graph_path;
  std::string opinion_path;
  std::string out_path;
  std::string csv_prefix;
  std::uint64_t seed = 0;
  int max_iters = 5000;
  double tol = 1e-8;
  bool strict = false;
};

polopt::OptimizerConfig optimizer_config(const CommonOptions& options) {
  polopt::OptimizerConfig config;
  config.max_iters = options.max_iters;
  config.rel_tol = options.tol;
  config.seed = options.seed;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads();

  CLI::App app{"polarization-disagreement optimization toolkit"};
  app.set_version_flag("--version", polopt::kToolVersion);
  app.require_subcommand(1);

  CommonOptions options;
  double total_weight = 0.0;
  std::vector<double> alphas;
  std::optional<double> epsilon;
  std::optional<std::size_t> samples;
  std::optional<double> rescale_to;
  polopt::GenerateParams generate_params;
  std::string generate_data;
  std::string generate_base_graph;

  auto add_common = [&](CLI::App* cmd, bool with_optimizer) {
    cmd->add_option("--out", options.out_path, "report JSON path (default: stdout)");
    cmd->add_option("--csv", options.csv_prefix, "prefix for CSV artifacts");
    if (with_optimizer) {
      cmd->add_option("--seed", options.seed, "random seed");
      cmd->add_option("--max-iters", options.max_iters, "iteration cap");
      cmd->add_option("--tol", options.tol, "relative-decrease stopping tolerance");
      cmd->add_flag("--strict", options.strict,
                    "exit 2 when the solver stops without converging");
    }
  };

  CLI::App* sub_index = app.add_subcommand(
      "index", "equilibrium, polarization, and disagreement of one instance");
  sub_index->add_option("--graph", options.graph_path, "edge-list file")
      ->required();
  sub_index->add_option("--opinions", options.opinion_path, "opinion file")
      ->required();
  add_common(sub_index, false);

  CLI::App* sub_topo = app.add_subcommand(
      "optimize-topology",
      "optimal edge-weight allocation at fixed total weight");
  sub_topo->add_option("--graph", options.graph_path,
                       "baseline edge-list file (optional)");
  sub_topo->add_option("--opinions", options.opinion_path, "opinion file")
      ->required();
  CLI::Option* total_weight_option =
      sub_topo->add_option("--total-weight", total_weight,
                           "weight budget (default: baseline graph total)");
  sub_topo->add_option("--epsilon", epsilon,
                       "chain sparsify+rescale at this accuracy");
  sub_topo->add_option("--samples", samples,
                       "chain sparsify+rescale with a fixed draw count");
  add_common(sub_topo, true);

  CLI::App* sub_sparse = app.add_subcommand(
      "sparsify", "effective-resistance sampling of a connected graph");
  sub_sparse->add_option("--graph", options.graph_path, "edge-list file")
      ->required();
  sub_sparse->add_option("--epsilon", epsilon, "target accuracy in (0,1)");
  sub_sparse->add_option("--samples", samples, "number of i.i.d. edge draws");
  sub_sparse->add_option("--rescale-to", rescale_to,
                         "rescale total weight after sampling");
  sub_sparse->add_option("--seed", options.seed, "random seed");
  add_common(sub_sparse, false);

  CLI::App* sub_opinion = app.add_subcommand(
      "optimize-opinions", "budgeted innate-opinion intervention");
  sub_opinion->add_option("--graph", options.graph_path, "edge-list file")
      ->required();
  sub_opinion->add_option("--opinions", options.opinion_path, "opinion file")
      ->required();
  sub_opinion
      ->add_option("--alpha", alphas,
                   "budget; repeat for an ascending sweep")
      ->required();
  add_common(sub_opinion, true);

  CLI::App* sub_gen = app.add_subcommand(
      "generate", "synthetic graphs and opinion vectors");
  sub_gen
      ->add_option("--model", generate_params.model,
                   "erdos-renyi | norros-reittu | uniform | power-law | "
                   "degree-proportional")
      ->required();
  sub_gen->add_option("--nodes", generate_params.nodes, "node count");
  sub_gen->add_option("--p", generate_params.p, "edge probability");
  sub_gen->add_option("--slope", generate_params.slope, "power-law exponent");
  sub_gen->add_option("--graph", generate_base_graph,
                      "base graph for degree-proportional opinions");
  sub_gen->add_option("--data", generate_data,
                      "write the generated artifact to this path");
  sub_gen->add_option("--seed", options.seed, "random seed");
  add_common(sub_gen, false);

  CLI::App* sub_examples = app.add_subcommand(
      "reproduce-examples", "built-in worked examples and identity checks");
  add_common(sub_examples, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(sub_index)) {
      polopt::IngestedGraph in = polopt::ingest_graph(options.graph_path);
      polopt::OpinionVector s =
          polopt::ingest_opinions(options.opinion_path, in.labels);
      Json echo{{"graph", options.graph_path},
                {"opinions", options.opinion_path},
                {"self_loops_dropped", in.self_loops_dropped},
                {"duplicate_lines_merged", in.duplicate_lines_merged}};
      auto result = polopt::cmd_index(in.graph, s, echo);
      if (!options.csv_prefix.empty())
        polopt::write_node_csv(options.csv_prefix + ".nodes.csv", in.labels,
                               {{"s", s.values()},
                                {"z_star", result.equilibrium.z_star},
                                {"z_bar", result.equilibrium.z_bar},
                                {"stress", result.stress}});
      emit(result.report, options.out_path);
      return 0;
    }

    if (app.got_subcommand(sub_topo)) {
      std::optional<polopt::WeightedGraph> baseline;
      std::vector<std::string> labels;
      if (!options.graph_path.empty()) {
        polopt::IngestedGraph in = polopt::ingest_graph(options.graph_path);
        baseline = std::move(in.graph);
        labels = std::move(in.labels);
      }
      polopt::OpinionVector s =
          polopt::ingest_opinions(options.opinion_path, labels);
      bool total_weight_set = total_weight_option->count() > 0;
      if (!total_weight_set && baseline) total_weight = baseline->total_weight();

      polopt::OptimizerConfig config = optimizer_config(options);
      std::optional<polopt::SparsifyConfig> chain;
      if (epsilon || samples) {
        polopt::SparsifyConfig sc;
        sc.epsilon = epsilon;
        sc.sample_count = samples;
        sc.seed = options.seed;
        chain = sc;
      }
      Json echo{{"graph", options.graph_path},
                {"opinions", options.opinion_path},
                {"total_weight", total_weight},
                {"max_iters", options.max_iters},
                {"tol", options.tol}};
      auto result = polopt::cmd_optimize_topology(baseline, s, total_weight,
                                                  config, chain, echo);
      if (!options.csv_prefix.empty()) {
        polopt::write_edge_csv(options.csv_prefix + ".optimized.edges.csv",
                               result.optimized, labels);
        if (result.sparsified)
          polopt::write_edge_csv(options.csv_prefix + ".sparsified.edges.csv",
                                 *result.sparsified, labels);
      }
      emit(result.report, options.out_path);
      return options.strict && !result.solution.converged ? 2 : 0;
    }

    if (app.got_subcommand(sub_sparse)) {
      polopt::IngestedGraph in = polopt::ingest_graph(options.graph_path);
      polopt::SparsifyConfig config;
      config.epsilon = epsilon;
      config.sample_count = samples;
      config.seed = options.seed;
      Json echo{{"graph", options.graph_path}};
      auto result = polopt::cmd_sparsify(in.graph, config, rescale_to, echo);
      if (!options.csv_prefix.empty())
        polopt::write_edge_csv(options.csv_prefix + ".edges.csv",
                               result.sparsified, in.labels);
      emit(result.report, options.out_path);
      return 0;
    }

    if (app.got_subcommand(sub_opinion)) {
      polopt::IngestedGraph in = polopt::ingest_graph(options.graph_path);
      polopt::OpinionVector s =
          polopt::ingest_opinions(options.opinion_path, in.labels);
      polopt::OptimizerConfig config = optimizer_config(options);
      Json echo{{"graph", options.graph_path},
                {"opinions", options.opinion_path},
                {"alphas", alphas},
                {"max_iters", options.max_iters},
                {"tol", options.tol}};
      auto result =
          polopt::cmd_optimize_opinions(in.graph, s, alphas, config, echo);
      if (!options.csv_prefix.empty()) {
        for (std::size_t i = 0; i < result.results.size(); ++i) {
          const auto& r = result.results[i];
          polopt::write_node_csv(
              options.csv_prefix + ".alpha" + std::to_string(i) + ".nodes.csv",
              in.labels,
              {{"s", s.values()},
               {"ds", r.ds},
               {"s_new", s.values() + r.ds},
               {"z_star_new", r.report.z_star}});
        }
      }
      emit(result.report, options.out_path);
      bool all_converged = true;
      for (const auto& r : result.results) all_converged &= r.converged;
      return options.strict && !all_converged ? 2 : 0;
    }

    if (app.got_subcommand(sub_gen)) {
      if (!generate_base_graph.empty())
        generate_params.base_graph =
            polopt::ingest_graph(generate_base_graph).graph;
      Json echo{{"model", generate_params.model},
                {"nodes", generate_params.nodes},
                {"p", generate_params.p},
                {"slope", generate_params.slope}};
      std::optional<std::string> data_path;
      if (!generate_data.empty()) data_path = generate_data;
      polopt::RunReport report = polopt::cmd_generate(
          generate_params, polopt::Seed{options.seed}, data_path, echo);
      emit(report, options.out_path);
      return 0;
    }

    if (app.got_subcommand(sub_examples)) {
      polopt::RunReport report = polopt::cmd_reproduce_examples();
      emit(report, options.out_path);
      return report.outputs.at("all_pass").get<bool>() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
