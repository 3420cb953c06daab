#include "wle/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "wle/errors.hpp"

namespace wle {

const std::vector<Pattern>& target_patterns() {
  // Pairwise incomparability, checked in the test suite:
  //  - only k4-tail contains K4, so neither other pattern contains it, and
  //    it contains neither of the others (both need structure its tail
  //    cannot provide);
  //  - fan needs a degree-4 node adjacent to a 4-path, which braced-pentagon
  //    (max degree 3) and k4-tail (tail blocks the path) lack;
  //  - braced-pentagon has 7 edges and is isomorphic to neither, so it fits
  //    inside no other 7-edge pattern.
  static const std::vector<Pattern> patterns = {
      {"k4-tail", 5, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {3, 4}}},
      {"fan", 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {2, 3}, {3, 4}}},
      {"braced-pentagon",
       5,
       {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {1, 3}, {0, 2}}},
  };
  return patterns;
}

Graph random_regular_graph(int n, int degree, std::mt19937_64& rng,
                           int max_attempts) {
  if (n <= 0 || degree < 0 || degree >= n || (n * degree) % 2 != 0)
    throw InfeasibleDegreeSequence("no " + std::to_string(degree) +
                                   "-regular graph on " + std::to_string(n) +
                                   " nodes");
  std::vector<int> stubs(static_cast<size_t>(n) * degree);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < degree; ++k) stubs[static_cast<size_t>(i) * degree + k] = i;

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::vector<std::array<int, 2>> edges;
    edges.reserve(stubs.size() / 2);
    std::vector<char> used(static_cast<size_t>(n) * n, 0);
    bool ok = true;
    for (size_t k = 0; k + 1 < stubs.size(); k += 2) {
      int a = stubs[k], b = stubs[k + 1];
      if (a == b) {
        ok = false;
        break;
      }
      size_t cell = static_cast<size_t>(std::min(a, b)) * n + std::max(a, b);
      if (used[cell]) {
        ok = false;
        break;
      }
      used[cell] = 1;
      edges.push_back({a, b});
    }
    if (ok)
      return build_graph(n, std::vector<int>(n, 1), edges, 1);
  }
  throw GenerationBudgetExceeded("pairing model failed " +
                                 std::to_string(max_attempts) + " times");
}

Graph thin_edges(const Graph& g, double drop_prob, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(1.0 - drop_prob);
  std::vector<std::array<int, 2>> edges;
  std::vector<int> orders;
  for (size_t e = 0; e < g.edges.size(); ++e) {
    if (keep(rng)) {
      edges.push_back(g.edges[e]);
      orders.push_back(g.bond_orders[e]);
    }
  }
  return build_graph(g.num_nodes, g.labels, edges, g.num_labels, orders);
}

Graph attach_subgraph(const Graph& base, const Pattern& pattern,
                      double cross_prob, std::mt19937_64& rng) {
  int n = base.num_nodes + pattern.num_nodes;
  std::vector<int> labels = base.labels;
  labels.resize(n, 1);
  std::vector<std::array<int, 2>> edges = base.edges;
  for (const auto& e : pattern.edges)
    edges.push_back({base.num_nodes + e[0], base.num_nodes + e[1]});
  std::bernoulli_distribution cross(cross_prob);
  for (int i = 0; i < base.num_nodes; ++i)
    for (int j = 0; j < pattern.num_nodes; ++j)
      if (cross(rng)) edges.push_back({i, base.num_nodes + j});
  return build_graph(n, labels, edges, base.num_labels);
}

namespace {

bool adjacent(const Graph& g, int a, int b) {
  const auto& nb = g.adj[a];
  return std::binary_search(nb.begin(), nb.end(), b);
}

struct Matcher {
  const Graph& g;
  std::vector<std::vector<int>> pat_adj;  // pattern adjacency lists
  std::vector<int> pat_deg;
  std::vector<int> assignment;  // pattern node -> target node
  std::vector<char> used;

  bool extend(size_t level) {
    if (level == pat_adj.size()) return true;
    for (int cand = 0; cand < g.num_nodes; ++cand) {
      if (used[cand] || g.degree(cand) < pat_deg[level]) continue;
      bool consistent = true;
      for (int p : pat_adj[level]) {
        if (p < static_cast<int>(level) && !adjacent(g, assignment[p], cand)) {
          consistent = false;
          break;
        }
      }
      if (!consistent) continue;
      assignment[level] = cand;
      used[cand] = 1;
      if (extend(level + 1)) return true;
      used[cand] = 0;
    }
    return false;
  }
};

}  // namespace

bool contains_subgraph(const Graph& g, const Pattern& pattern) {
  if (g.num_nodes < pattern.num_nodes) return false;
  Matcher m{g, {}, {}, {}, {}};
  m.pat_adj.assign(pattern.num_nodes, {});
  for (const auto& e : pattern.edges) {
    m.pat_adj[e[0]].push_back(e[1]);
    m.pat_adj[e[1]].push_back(e[0]);
  }
  m.pat_deg.resize(pattern.num_nodes);
  for (int i = 0; i < pattern.num_nodes; ++i)
    m.pat_deg[i] = static_cast<int>(m.pat_adj[i].size());
  m.assignment.assign(pattern.num_nodes, -1);
  m.used.assign(g.num_nodes, 0);
  return m.extend(0);
}

int count_pattern_types(const Graph& g) {
  int types = 0;
  for (const auto& p : target_patterns())
    if (contains_subgraph(g, p)) ++types;
  return types;
}

namespace {

int max_degree(const Graph& g) {
  int best = 0;
  for (int i = 0; i < g.num_nodes; ++i) best = std::max(best, g.degree(i));
  return best;
}

bool positive_shape_ok(const Graph& g) {
  return g.connected() && max_degree(g) <= 4 && count_pattern_types(g) == 1;
}

bool negative_shape_ok(const Graph& g) {
  return g.connected() && count_pattern_types(g) == 0;
}

Graph relabel_uniform(const Graph& g, int num_labels, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(1, num_labels);
  std::vector<int> labels(g.num_nodes);
  for (int& l : labels) l = pick(rng);
  return build_graph(g.num_nodes, labels, g.edges, num_labels, g.bond_orders);
}

}  // namespace

Dataset generate_dataset(const GeneratorSpec& spec, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_pattern(
      0, static_cast<int>(target_patterns().size()) - 1);

  auto draw_positive = [&]() {
    for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
      Graph base = thin_edges(random_regular_graph(5, 4, rng), spec.thin_prob, rng);
      const Pattern& pat = target_patterns()[pick_pattern(rng)];
      Graph g = attach_subgraph(base, pat, spec.cross_prob, rng);
      if (positive_shape_ok(g)) return g;
    }
    throw GenerationBudgetExceeded("no admissible positive graph in " +
                                   std::to_string(spec.max_attempts) +
                                   " attempts");
  };
  auto draw_negative = [&]() {
    for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
      Graph g = thin_edges(random_regular_graph(10, 4, rng), spec.thin_prob, rng);
      if (negative_shape_ok(g)) return g;
    }
    throw GenerationBudgetExceeded("no admissible negative graph in " +
                                   std::to_string(spec.max_attempts) +
                                   " attempts");
  };

  Dataset data;
  data.reserve(static_cast<size_t>(spec.per_class) * 2);
  for (int k = 0; k < spec.per_class; ++k) {
    for (int positive : {1, 0}) {
      Graph g = relabel_uniform(positive ? draw_positive() : draw_negative(),
                                spec.num_node_labels, rng);
      double target;
      if (spec.task == Task::Classification) {
        target = positive;
      } else {
        int count = 0;
        for (int l : g.labels)
          if (l == spec.counting_label) ++count;
        target = count;
      }
      data.push_back({std::move(g), target});
    }
  }
  return data;
}

int verify_dataset(const Dataset& data, const GeneratorSpec& spec) {
  int bad = 0;
  for (const auto& rec : data) {
    const Graph& g = rec.graph;
    bool ok;
    if (spec.task == Task::Classification) {
      ok = rec.target == 1.0 ? positive_shape_ok(g)
         : rec.target == 0.0 ? negative_shape_ok(g)
                             : false;
    } else {
      int count = 0;
      for (int l : g.labels)
        if (l == spec.counting_label) ++count;
      ok = (positive_shape_ok(g) || negative_shape_ok(g)) &&
           rec.target == static_cast<double>(count);
    }
    if (!ok) ++bad;
  }
  return bad;
}

}  // namespace wle
