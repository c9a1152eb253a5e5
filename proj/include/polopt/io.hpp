#pragma once

#include <string>
#include <vector>

#include "polopt/dynamics.hpp"
#include "polopt/graph.hpp"
#include "polopt/types.hpp"

namespace polopt {

// Graph read from an edge-list file together with the label map produced
// while assigning dense node ids, plus ingestion statistics.
struct IngestedGraph {
  WeightedGraph graph;
  std::vector<std::string> labels;        // labels[id] = original token
  std::size_t self_loops_dropped = 0;
  std::size_t duplicate_lines_merged = 0;
};

// Parses a whitespace-separated edge list, one "u v [w]" line per edge
// (weight defaults to 1). '#' starts a comment. Node tokens are arbitrary
// strings mapped to dense ids in order of first appearance; duplicate pairs
// sum their weights; self-loops are dropped and counted. Exported files
// carry "# nodes:" / "# node:" header comments that pin the id assignment,
// so re-ingesting an export reproduces the graph exactly.
IngestedGraph ingest_graph(const std::string& path);

// Parses one opinion per line, either bare values in node-id order or
// "label value" pairs resolved through the graph's label map. Values must
// lie in [0, 1]; every node must receive exactly one value. With an empty
// label map only the bare form is accepted and the vector length is the
// number of data lines.
OpinionVector ingest_opinions(const std::string& path,
                              const std::vector<std::string>& labels);

// Writes an edge list (17 significant digits) that ingest_graph reads back
// into an identical WeightedGraph. labels must be empty (numeric ids) or
// have exactly g.n() entries.
void write_graph(const std::string& path, const WeightedGraph& g,
                 const std::vector<std::string>& labels = {});

// Writes one opinion per line, bare or labeled depending on labels.
void write_opinions(const std::string& path, const Vector& values,
                    const std::vector<std::string>& labels = {});

// 17-significant-digit decimal form; parsing it recovers the double exactly.
std::string format_double(double x);

}  // namespace polopt
