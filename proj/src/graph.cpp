#include "wle/graph.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>

#include "wle/errors.hpp"

namespace wle {

const std::vector<int>& Graph::neighbors(int i) const {
  if (i < 0 || i >= num_nodes)
    throw IndexOutOfRange("node index " + std::to_string(i) + " out of range");
  return adj[i];
}

std::vector<int> Graph::neighbor_label_multiset(int i) const {
  std::vector<int> out;
  out.reserve(neighbors(i).size());
  for (int j : adj[i]) out.push_back(labels[j]);
  std::sort(out.begin(), out.end());
  return out;
}

bool Graph::connected() const {
  if (num_nodes == 0) return true;
  std::vector<char> seen(num_nodes, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == num_nodes;
}

int Graph::label_specific_max_degree() const {
  int best = 0;
  std::vector<int> count(num_labels + 1, 0);
  for (int i = 0; i < num_nodes; ++i) {
    for (int j : adj[i]) ++count[labels[j]];
    for (int j : adj[i]) {
      best = std::max(best, count[labels[j]]);
      count[labels[j]] = 0;
    }
  }
  return best;
}

Graph build_graph(int num_nodes, const std::vector<int>& labels,
                  const std::vector<std::array<int, 2>>& edges, int num_labels,
                  const std::vector<int>& bond_orders) {
  if (num_nodes < 0) throw IndexOutOfRange("negative node count");
  if (static_cast<int>(labels.size()) != num_nodes)
    throw IndexOutOfRange("label list length does not match node count");
  if (!bond_orders.empty() && bond_orders.size() != edges.size())
    throw IndexOutOfRange("bond order list length does not match edge count");

  Graph g;
  g.num_nodes = num_nodes;
  g.labels = labels;

  int max_label = 0;
  for (int l : labels) max_label = std::max(max_label, l);
  g.num_labels = num_labels > 0 ? num_labels : max_label;
  for (int l : labels)
    if (l < 1 || l > g.num_labels)
      throw LabelOutOfAlphabet("label " + std::to_string(l) +
                               " outside 1.." + std::to_string(g.num_labels));

  g.edges.reserve(edges.size());
  for (const auto& e : edges) {
    int a = e[0], b = e[1];
    if (a < 0 || a >= num_nodes || b < 0 || b >= num_nodes)
      throw IndexOutOfRange("edge endpoint out of range");
    if (a == b) throw SelfLoop("self loop at node " + std::to_string(a));
    g.edges.push_back({std::min(a, b), std::max(a, b)});
  }
  g.bond_orders = bond_orders.empty()
                      ? std::vector<int>(edges.size(), 1)
                      : bond_orders;

  // Collapse parallel edges into a simple sorted adjacency.
  g.adj.assign(num_nodes, {});
  for (const auto& e : g.edges) {
    g.adj[e[0]].push_back(e[1]);
    g.adj[e[1]].push_back(e[0]);
  }
  for (auto& nbrs : g.adj) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return g;
}

Graph permute_graph(const Graph& g, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != g.num_nodes)
    throw IndexOutOfRange("permutation length does not match node count");
  std::vector<int> inv(g.num_nodes, -1);
  for (int i = 0; i < g.num_nodes; ++i) {
    int p = perm[i];
    if (p < 0 || p >= g.num_nodes || inv[p] != -1)
      throw IndexOutOfRange("not a permutation");
    inv[p] = i;
  }
  std::vector<int> labels(g.num_nodes);
  for (int i = 0; i < g.num_nodes; ++i) labels[i] = g.labels[perm[i]];
  std::vector<std::array<int, 2>> edges;
  edges.reserve(g.edges.size());
  for (const auto& e : g.edges) edges.push_back({inv[e[0]], inv[e[1]]});
  return build_graph(g.num_nodes, labels, edges, g.num_labels, g.bond_orders);
}

std::string graph_to_json_line(const Graph& g, double target, bool with_target) {
  nlohmann::json j;
  j["labels"] = g.labels;
  auto& je = j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges) je.push_back({e[0], e[1]});
  if (with_target) j["target"] = target;
  return j.dump();
}

DatasetRecord graph_from_json_line(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("bad JSONL line: ") + e.what());
  }
  if (!j.contains("labels") || !j.contains("edges"))
    throw FormatError("JSONL line missing labels/edges");
  std::vector<int> labels = j["labels"].get<std::vector<int>>();
  std::vector<std::array<int, 2>> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2)
      throw FormatError("edge entries must be [i, j] pairs");
    edges.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  DatasetRecord rec;
  rec.graph = build_graph(static_cast<int>(labels.size()), labels, edges);
  rec.target = j.value("target", 0.0);
  return rec;
}

void write_dataset_jsonl(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (const auto& rec : data)
    out << graph_to_json_line(rec.graph, rec.target) << '\n';
}

Dataset read_dataset_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  Dataset data;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    data.push_back(graph_from_json_line(line));
  }
  return data;
}

}  // namespace wle
