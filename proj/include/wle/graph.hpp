#pragma once

#include <array>
#include <string>
#include <vector>

namespace wle {

/**
 * Undirected labeled multigraph.
 *
 * Node labels are integers in {1..num_labels}.  Parallel edges are kept in
 * the edge list but collapsed to simple adjacency for neighborhood queries,
 * so degree(i) counts distinct neighbors.  Self loops are rejected.
 * Instances are built once via build_graph() and treated as immutable.
 */
struct Graph {
  int num_nodes = 0;
  int num_labels = 0;                      // alphabet size K
  std::vector<int> labels;                 // 1-based label per node
  std::vector<std::array<int, 2>> edges;   // endpoints normalized a <= b
  std::vector<int> bond_orders;            // per-edge metadata, parallel to edges
  std::vector<std::vector<int>> adj;       // collapsed neighbors, sorted ascending

  int degree(int i) const { return static_cast<int>(adj[i].size()); }
  const std::vector<int>& neighbors(int i) const;

  // Sorted multiset of labels over the collapsed neighborhood of node i.
  std::vector<int> neighbor_label_multiset(int i) const;

  bool connected() const;

  // Largest per-label neighbor count over all nodes: max_i max_k
  // |{j in N(i) : label(j) = k}|.  Zero for edgeless graphs.
  int label_specific_max_degree() const;
};

// Validates and assembles a graph.  num_labels == 0 means "use the largest
// label present".  bond_orders may be empty (defaults to all 1) or must match
// edges in length.
// Throws IndexOutOfRange, SelfLoop, LabelOutOfAlphabet.
Graph build_graph(int num_nodes, const std::vector<int>& labels,
                  const std::vector<std::array<int, 2>>& edges,
                  int num_labels = 0, const std::vector<int>& bond_orders = {});

// Applies a node relabeling: node i of the result is node perm[i] of g.
// perm must be a permutation of 0..n-1.
Graph permute_graph(const Graph& g, const std::vector<int>& perm);

/** One graph plus its task target. */
struct DatasetRecord {
  Graph graph;
  double target = 0.0;
};

using Dataset = std::vector<DatasetRecord>;

// JSONL serialization: one object per line,
//   {"labels":[...], "edges":[[i,j],...], "target": t}
// "target" is optional on read and defaults to 0.
std::string graph_to_json_line(const Graph& g, double target,
                               bool with_target = true);
DatasetRecord graph_from_json_line(const std::string& line);

void write_dataset_jsonl(const Dataset& data, const std::string& path);
Dataset read_dataset_jsonl(const std::string& path);

}  // namespace wle
