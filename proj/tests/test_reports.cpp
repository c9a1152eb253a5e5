#include "polopt/reports.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "polopt/generators.hpp"
#include "polopt/io.hpp"
#include "polopt/rng.hpp"

using namespace polopt;

namespace {

std::string temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "polopt_report_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream file(path);
  REQUIRE(file.good());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("run reports serialize all provenance fields") {
  RunReport report;
  report.command = "index";
  report.inputs = Json{{"graph", "g.txt"}};
  report.outputs = Json{{"index", 0.5}};
  report.seed = 42;
  report.tool_version = "0.1.0";
  report.timing_seconds = 1.25;

  Json j = report.to_json();
  CHECK(j["command"] == "index");
  CHECK(j["inputs"]["graph"] == "g.txt");
  CHECK(j["outputs"]["index"] == 0.5);
  CHECK(j["seed"] == 42);
  CHECK(j["tool_version"] == "0.1.0");
  CHECK(j["timing_seconds"] == 1.25);

  std::string path = temp_file("report.json");
  report.write(path);
  Json back = Json::parse(slurp(path));
  CHECK(back == j);
}

TEST_CASE("index command reproduces the library quantities") {
  WeightedGraph g(3, {{0, 1, 1.0}});
  OpinionVector s(Vector{{0.0, 0.0, 1.0}});
  Json echo{{"graph", "inline"}};
  IndexCommandResult result = cmd_index(g, s, echo);

  EquilibriumReport expected = pd_index(g, s);
  CHECK(result.report.command == "index");
  CHECK(result.report.inputs == echo);
  CHECK(result.report.outputs["polarization"] == expected.polarization);
  CHECK(result.report.outputs["disagreement"] == expected.disagreement);
  CHECK(result.report.outputs["index"] == expected.index);
  CHECK(std::abs(expected.index - 2.0 / 3.0) <= 1e-12);
  CHECK(result.report.outputs["graph"]["n"] == 3);
  CHECK(result.report.outputs["graph"]["connected"] == false);

  double stress_total = result.report.outputs["stress_total"].get<double>();
  Vector diff = expected.z_star - s.values();
  CHECK(std::abs(stress_total -
                 (diff.squaredNorm() +
                  2.0 * disagreement(g, expected.z_star))) <= 1e-12);
}

TEST_CASE("topology command reports baseline, optimum, and sparsified rows") {
  Rng rng(401);
  int n = 12;
  WeightedGraph baseline = testutil::random_graph(n, 0.6, 1.5, rng);
  REQUIRE(is_connected(baseline));
  OpinionVector s(testutil::random_unit_vector(n, rng));

  OptimizerConfig config;
  config.rel_tol = 1e-12;
  SparsifyConfig sparse_config;
  sparse_config.sample_count = 400;
  sparse_config.seed = 3;

  TopologyCommandResult result = cmd_optimize_topology(
      baseline, s, baseline.total_weight(), config, sparse_config,
      Json::object());

  const Json& out = result.report.outputs;
  CHECK(out["problem"]["n"] == n);
  CHECK(out["problem"]["pairs"] == pair_count(n));
  CHECK(out["baseline"]["index"].get<double>() > 0.0);
  CHECK(out["reduction_factor"].get<double>() >= 1.0);
  CHECK(out["optimized"]["converged"] == true);
  CHECK(out["optimized"]["index"].get<double>() ==
        doctest::Approx(result.solution.objective).epsilon(1e-14));
  CHECK(out["optimized"]["kkt_active_spread"].get<double>() < 1e-3);
  REQUIRE(out.contains("sparsified"));
  CHECK(out["sparsified"]["samples"] == 400);
  REQUIRE(result.sparsified.has_value());
  CHECK(std::abs(result.sparsified->total_weight() -
                 baseline.total_weight()) <= 1e-9 * baseline.total_weight());

  // The optimized support graph scores exactly the reported objective.
  CHECK(std::abs(pd_index(result.optimized, s).index -
                 result.solution.objective) <= 1e-10);
}

TEST_CASE("chained sparsify accepts supports with isolated nodes") {
  // This instance is known to converge to a support whose active set
  // leaves two nodes isolated; the chain must handle that, sampling each
  // component and carrying the isolated nodes through unchanged.
  const int n = 50;
  const double total = 0.5 * static_cast<double>(pair_count(n));
  OpinionVector s = power_law_sample(n, 2.0, Seed{4});
  OptimizerConfig config;
  config.rel_tol = 1e-14;
  config.max_iters = 20000;
  SparsifyConfig sparse_config;
  sparse_config.epsilon = 0.25;
  sparse_config.seed = 4;

  TopologyCommandResult result = cmd_optimize_topology(
      std::nullopt, s, total, config, sparse_config, Json::object());
  REQUIRE(!is_connected(result.optimized));  // the case under test
  REQUIRE(result.sparsified.has_value());
  CHECK(result.sparsified->n() == n);
  CHECK(std::abs(result.sparsified->total_weight() - total) <= 1e-9 * total);
  CHECK(result.report.outputs["sparsified"]["connected"] == false);

  // Nodes isolated in the support stay isolated in the sample.
  auto before = adjacency(result.optimized);
  auto after = adjacency(*result.sparsified);
  for (int u = 0; u < n; ++u)
    if (before[static_cast<std::size_t>(u)].empty())
      CHECK(after[static_cast<std::size_t>(u)].empty());

  // The sampled-and-rescaled graph stays feasible, so it cannot score
  // below the optimum, and it should land near it.
  double sparse_index = pd_index(*result.sparsified, s).index;
  CHECK(sparse_index >= result.solution.objective - 1e-6);
  CHECK(sparse_index <= 2.0 * result.solution.objective);

  // The component-wise path is deterministic too.
  TopologyCommandResult again = cmd_optimize_topology(
      std::nullopt, s, total, config, sparse_config, Json::object());
  CHECK(result.report.outputs.dump() == again.report.outputs.dump());
}

TEST_CASE("command outputs are byte-deterministic across runs") {
  Rng rng(409);
  int n = 10;
  OpinionVector s(testutil::random_unit_vector(n, rng));
  OptimizerConfig config;
  config.rel_tol = 1e-10;

  TopologyCommandResult a = cmd_optimize_topology(
      std::nullopt, s, 8.0, config, std::nullopt, Json::object());
  TopologyCommandResult b = cmd_optimize_topology(
      std::nullopt, s, 8.0, config, std::nullopt, Json::object());
  // timing_seconds varies; the outputs payload must not.
  CHECK(a.report.outputs.dump() == b.report.outputs.dump());
  CHECK(!a.report.outputs.contains("baseline"));
}

TEST_CASE("sparsify command echoes sample counts and rescaling") {
  Rng rng(419);
  WeightedGraph g = testutil::random_graph(15, 0.7, 2.0, rng);
  REQUIRE(is_connected(g));
  SparsifyConfig config;
  config.epsilon = 0.5;
  config.seed = 2;

  SparsifyCommandResult result = cmd_sparsify(g, config, 10.0, Json::object());
  const Json& out = result.report.outputs;
  CHECK(out["input"]["n"] == 15);
  CHECK(out["sparsified"]["samples"] == config.resolved_sample_count(15));
  CHECK(out["sparsified"]["rescaled_to"] == 10.0);
  CHECK(std::abs(result.sparsified.total_weight() - 10.0) <= 1e-9);
  CHECK(result.report.seed == 2);
}

TEST_CASE("opinion command tabulates one row per budget") {
  Rng rng(421);
  WeightedGraph g = testutil::random_graph(10, 0.6, 1.0, rng);
  REQUIRE(is_connected(g));
  OpinionVector s(testutil::random_unit_vector(10, rng));
  std::vector<double> alphas{0.0, 0.25, 1.0};
  OptimizerConfig config;
  config.rel_tol = 1e-12;

  OpinionCommandResult result =
      cmd_optimize_opinions(g, s, alphas, config, Json::object());
  const Json& out = result.report.outputs;
  CHECK(out["baseline_index"].get<double>() ==
        doctest::Approx(pd_index(g, s).index).epsilon(1e-14));
  REQUIRE(out["results"].size() == 3);
  CHECK(out["results"][0]["alpha"] == 0.0);
  CHECK(out["results"][0]["budget_used"] == 0.0);
  CHECK(out["results"][0]["changed_nodes"] == 0);
  CHECK(out["results"][2]["alpha"] == 1.0);
  double q0 = out["results"][0]["quadratic_value"].get<double>();
  double q2 = out["results"][2]["quadratic_value"].get<double>();
  CHECK(q2 <= q0);
  CHECK(result.results.size() == 3);
}

TEST_CASE("generate command writes artifacts that ingest back") {
  GenerateParams graph_params;
  graph_params.model = "erdos-renyi";
  graph_params.nodes = 30;
  graph_params.p = 0.4;
  std::string graph_path = temp_file("generated_graph.txt");
  RunReport graph_report =
      cmd_generate(graph_params, Seed{11}, graph_path, Json::object());
  CHECK(graph_report.outputs["model"] == "erdos-renyi");
  IngestedGraph back = ingest_graph(graph_path);
  CHECK(back.graph.n() == 30);
  CHECK(back.graph.edge_count() ==
        graph_report.outputs["graph"]["edges"].get<std::size_t>());

  GenerateParams opinion_params;
  opinion_params.model = "power-law";
  opinion_params.nodes = 25;
  opinion_params.slope = 2.0;
  std::string opinion_path = temp_file("generated_opinions.txt");
  RunReport opinion_report =
      cmd_generate(opinion_params, Seed{12}, opinion_path, Json::object());
  OpinionVector s = ingest_opinions(opinion_path, {});
  CHECK(s.size() == 25);
  CHECK(opinion_report.outputs["opinions"]["max"] == 1.0);

  GenerateParams degree_params;
  degree_params.model = "degree-proportional";
  degree_params.base_graph = back.graph;
  RunReport degree_report =
      cmd_generate(degree_params, Seed{13}, std::nullopt, Json::object());
  CHECK(degree_report.outputs["opinions"]["sum"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));

  GenerateParams bad;
  bad.model = "mystery";
  CHECK_THROWS_AS(cmd_generate(bad, Seed{1}, std::nullopt, Json::object()),
                  std::invalid_argument);
  GenerateParams no_base;
  no_base.model = "degree-proportional";
  CHECK_THROWS_AS(cmd_generate(no_base, Seed{1}, std::nullopt, Json::object()),
                  std::invalid_argument);
}

TEST_CASE("node and edge CSVs print ids, labels, and exact values") {
  std::string node_path = temp_file("nodes.csv");
  Vector a{{0.5, 0.25}};
  Vector b{{1.0 / 3.0, 1.0}};
  write_node_csv(node_path, {"alice", "bob"}, {{"s", a}, {"z", b}});
  CHECK(slurp(node_path) ==
        "node,label,s,z\n0,alice,0.5,0.33333333333333331\n1,bob,0.25,1\n");

  Vector short_column{{0.5}};
  CHECK_THROWS_AS(
      write_node_csv(node_path, {}, {{"s", a}, {"z", short_column}}),
      std::invalid_argument);

  std::string edge_path = temp_file("edges.csv");
  WeightedGraph g(3, {{0, 2, 0.1}, {1, 2, 2.0}});
  write_edge_csv(edge_path, g, {"x", "y", "z"});
  CHECK(slurp(edge_path) ==
        "u,v,label_u,label_v,weight\n0,2,x,z,0.10000000000000001\n"
        "1,2,y,z,2\n");
}

TEST_CASE("built-in worked examples all reproduce") {
  RunReport report = cmd_reproduce_examples();
  CHECK(report.outputs["all_pass"] == true);
  REQUIRE(report.outputs["checks"].size() == 7);
  for (const Json& check : report.outputs["checks"])
    CHECK(check["pass"] == true);
}
