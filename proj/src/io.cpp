#include "polopt/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace polopt {

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line,
                       const std::string& message) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + message);
}

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream stream(line);
  std::vector<std::string> tokens;
  std::string token;
  while (stream >> token) tokens.push_back(std::move(token));
  return tokens;
}

double parse_value(const std::string& token, const std::string& path,
                   std::size_t line) {
  char* end = nullptr;
  double x = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size())
    fail(path, line, "not a number: '" + token + "'");
  return x;
}

// Export headers "# nodes: N" and "# node: <id> <label>" pin the id
// assignment of a previously exported graph. Returns true if the comment was
// such a directive.
bool apply_directive(const std::string& raw, std::vector<std::string>& labels,
                     std::unordered_map<std::string, int>& ids,
                     const std::string& path, std::size_t line) {
  std::istringstream stream(raw);
  std::string hash, keyword;
  stream >> hash >> keyword;
  if (hash != "#") return false;
  if (keyword == "nodes:") {
    long n = 0;
    if (!(stream >> n) || n < 0) fail(path, line, "bad node-count directive");
    if (!labels.empty()) fail(path, line, "node-count directive after labels");
    for (long i = 0; i < n; ++i) {
      labels.push_back(std::to_string(i));
      ids.emplace(labels.back(), static_cast<int>(i));
    }
    return true;
  }
  if (keyword == "node:") {
    long id = 0;
    std::string label;
    if (!(stream >> id >> label)) fail(path, line, "bad node directive");
    if (id != static_cast<long>(labels.size()))
      fail(path, line, "node directives must be sequential");
    labels.push_back(label);
    ids.emplace(label, static_cast<int>(id));
    return true;
  }
  return false;
}

}  // namespace

IngestedGraph ingest_graph(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open graph file: " + path);

  std::vector<std::string> labels;
  std::unordered_map<std::string, int> ids;
  std::map<std::pair<int, int>, double> weights;
  IngestedGraph result;

  auto resolve = [&](const std::string& token) {
    auto [it, inserted] = ids.emplace(token, static_cast<int>(labels.size()));
    if (inserted) labels.push_back(token);
    return it->second;
  };

  std::string raw;
  std::size_t line_no = 0;
  bool saw_line = false;
  while (std::getline(file, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    saw_line = true;
    if (apply_directive(raw, labels, ids, path, line_no)) continue;
    auto tokens = tokenize(strip_comment(raw));
    if (tokens.empty()) continue;
    if (tokens.size() != 2 && tokens.size() != 3)
      fail(path, line_no, "expected 'u v [w]'");
    double w = 1.0;
    if (tokens.size() == 3) {
      w = parse_value(tokens[2], path, line_no);
      if (!(w > 0.0) || !std::isfinite(w))
        fail(path, line_no, "edge weight must be positive and finite");
    }
    int u = resolve(tokens[0]);
    int v = resolve(tokens[1]);
    if (u == v) {
      ++result.self_loops_dropped;
      continue;
    }
    if (u > v) std::swap(u, v);
    auto [it, inserted] = weights.emplace(std::pair(u, v), w);
    if (!inserted) {
      it->second += w;
      ++result.duplicate_lines_merged;
    }
  }
  if (!saw_line) throw std::runtime_error("empty graph file: " + path);
  if (labels.empty())
    throw std::runtime_error("graph file defines no nodes: " + path);

  std::vector<Edge> edges;
  edges.reserve(weights.size());
  for (const auto& [pair, w] : weights)
    edges.push_back({pair.first, pair.second, w});
  result.graph = WeightedGraph(static_cast<int>(labels.size()), std::move(edges));
  result.labels = std::move(labels);
  return result;
}

OpinionVector ingest_opinions(const std::string& path,
                              const std::vector<std::string>& labels) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open opinion file: " + path);

  std::vector<double> bare;
  std::unordered_map<std::string, double> labeled;
  int form = 0;  // 0 undecided, 1 bare, 2 labeled

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(file, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    auto tokens = tokenize(strip_comment(raw));
    if (tokens.empty()) continue;
    if (tokens.size() > 2) fail(path, line_no, "expected '[label] value'");
    int line_form = tokens.size() == 1 ? 1 : 2;
    if (form == 0) form = line_form;
    if (form != line_form)
      fail(path, line_no, "mixed bare and labeled opinion lines");
    double value = parse_value(tokens.back(), path, line_no);
    if (!(value >= 0.0 && value <= 1.0))
      fail(path, line_no, "opinion out of [0, 1]: " + tokens.back());
    if (form == 1) {
      bare.push_back(value);
    } else {
      if (!labeled.emplace(tokens[0], value).second)
        fail(path, line_no, "duplicate opinion for node " + tokens[0]);
    }
  }

  if (form == 0) throw std::runtime_error("empty opinion file: " + path);
  if (form == 2 && labels.empty())
    throw std::runtime_error(path +
                             ": labeled opinions need a graph's label map");
  Vector s(static_cast<Eigen::Index>(form == 1 && labels.empty()
                                         ? bare.size()
                                         : labels.size()));
  if (form == 1) {
    if (!labels.empty() && bare.size() != labels.size())
      throw std::runtime_error(path + ": expected " +
                               std::to_string(labels.size()) +
                               " opinions, found " + std::to_string(bare.size()));
    for (std::size_t i = 0; i < bare.size(); ++i)
      s(static_cast<Eigen::Index>(i)) = bare[i];
  } else {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto it = labeled.find(labels[i]);
      if (it == labeled.end())
        throw std::runtime_error(path + ": missing opinion for node " +
                                 labels[i]);
      s(static_cast<Eigen::Index>(i)) = it->second;
      labeled.erase(it);
    }
    if (!labeled.empty())
      throw std::runtime_error(path + ": opinion for unknown node " +
                               labeled.begin()->first);
  }
  return OpinionVector(std::move(s));
}

void write_graph(const std::string& path, const WeightedGraph& g,
                 const std::vector<std::string>& labels) {
  if (!labels.empty() && labels.size() != static_cast<std::size_t>(g.n()))
    throw std::invalid_argument("label map size does not match node count");
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write graph file: " + path);
  if (labels.empty()) {
    file << "# nodes: " << g.n() << "\n";
  } else {
    for (std::size_t i = 0; i < labels.size(); ++i)
      file << "# node: " << i << " " << labels[i] << "\n";
  }
  auto name = [&](int v) {
    return labels.empty() ? std::to_string(v) : labels[v];
  };
  for (const Edge& e : g.edges())
    file << name(e.u) << " " << name(e.v) << " " << format_double(e.weight)
         << "\n";
  if (!file) throw std::runtime_error("write failed: " + path);
}

void write_opinions(const std::string& path, const Vector& values,
                    const std::vector<std::string>& labels) {
  if (!labels.empty() && labels.size() != static_cast<std::size_t>(values.size()))
    throw std::invalid_argument("label map size does not match vector length");
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write opinion file: " + path);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!labels.empty()) file << labels[static_cast<std::size_t>(i)] << " ";
    file << format_double(values(i)) << "\n";
  }
  if (!file) throw std::runtime_error("write failed: " + path);
}

std::string format_double(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

}  // namespace polopt
