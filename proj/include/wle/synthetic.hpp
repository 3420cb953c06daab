#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wle/graph.hpp"
#include "wle/nn.hpp"

namespace wle {

// Unlabeled pattern graphs, as adjacency over 5 nodes.
struct Pattern {
  std::string name;
  int num_nodes = 0;
  std::vector<std::array<int, 2>> edges;
};

// The three target substructures planted in positive examples.  All are
// connected 5-node graphs with maximum degree <= 4, dense enough to be rare
// in sparse random graphs, and pairwise incomparable under (non-induced)
// subgraph containment, so "contains exactly one pattern type" is attainable
// for every type.
const std::vector<Pattern>& target_patterns();

// Uniform-ish random d-regular simple graph on n nodes via the pairing
// model; pairings with self loops or duplicate edges are redrawn.  Labels
// are all 1.  Throws InfeasibleDegreeSequence when n*d is odd or d >= n,
// GenerationBudgetExceeded after max_attempts rejected pairings.
Graph random_regular_graph(int n, int degree, std::mt19937_64& rng,
                           int max_attempts = 10000);

// Keeps each edge independently with probability 1 - drop_prob.
Graph thin_edges(const Graph& g, double drop_prob, std::mt19937_64& rng);

// Disjoint union of base and pattern, plus each cross pair joined
// independently with probability cross_prob.  Pattern nodes get label 1.
Graph attach_subgraph(const Graph& base, const Pattern& pattern,
                      double cross_prob, std::mt19937_64& rng);

// Non-induced, label-blind subgraph containment via backtracking with degree
// pruning.
bool contains_subgraph(const Graph& g, const Pattern& pattern);

// Number of distinct pattern types (0..3) contained in g.
int count_pattern_types(const Graph& g);

struct GeneratorSpec {
  Task task = Task::Classification;
  int per_class = 300;       // positives and negatives each
  double thin_prob = 0.25;   // edge drop probability
  double cross_prob = 0.1;   // cross-edge probability when attaching
  int num_node_labels = 5;   // labels drawn uniformly from 1..this
  int counting_label = 1;    // label whose occurrences the counting task sums
  int max_attempts = 10000;  // rejection budget per accepted graph
};

// Balanced dataset per the acceptance protocol.  Positives: K5 thinned, one
// pattern attached, accepted iff connected, max degree <= 4, and exactly one
// pattern type contained.  Negatives: 10-node 4-regular thinned, accepted
// iff connected and pattern-free.  Node labels are uniform; the target is
// the class bit (Classification) or the count of counting_label nodes
// (Regression).  Record order alternates positive/negative.
Dataset generate_dataset(const GeneratorSpec& spec, uint64_t seed);

// Re-checks every record against the acceptance predicate; returns the
// number of violating records (0 for a valid dataset).
int verify_dataset(const Dataset& data, const GeneratorSpec& spec);

}  // namespace wle
