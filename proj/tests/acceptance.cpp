// Release gate: one check per criterion, each printing a [PASS]/[FAIL] line.
//
//   ./wle_acceptance           runs everything
//   ./wle_acceptance 3 7       runs a subset
//
// Exit code is the number of failing criteria.  Checks 2 and 4 compare
// against externally fixed targets; see the notes inline where a target is
// stricter than this architecture can reach.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ad_check.hpp"
#include "wle/embedding.hpp"
#include "wle/errors.hpp"
#include "wle/experiment.hpp"
#include "wle/graph.hpp"
#include "wle/metrics.hpp"
#include "wle/nn.hpp"
#include "wle/smiles.hpp"
#include "wle/synthetic.hpp"
#include "wle/theory.hpp"
#include "wle/wl.hpp"

namespace {

using namespace wle;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

long long spec_bound(int k, int m) {
  long long b = k;
  for (int i = 0; i < k; ++i) b *= m + 1;
  return b;
}

Graph random_labeled_graph(std::mt19937_64& rng, int max_nodes, int num_labels,
                           double edge_prob) {
  std::uniform_int_distribution<int> size_dist(2, max_nodes);
  std::uniform_int_distribution<int> label_dist(1, num_labels);
  std::bernoulli_distribution coin(edge_prob);
  int n = size_dist(rng);
  std::vector<int> labels(n);
  for (int& l : labels) l = label_dist(rng);
  std::vector<std::array<int, 2>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) edges.push_back({i, j});
  return build_graph(n, labels, edges, num_labels);
}

// Graph with per-label neighbor counts capped at max_m.
Graph bounded_random_graph(std::mt19937_64& rng, int max_nodes, int num_labels,
                           int max_m) {
  std::uniform_real_distribution<double> prob(0.1, 0.5);
  for (;;) {
    Graph g = random_labeled_graph(rng, max_nodes, num_labels, prob(rng));
    if (g.label_specific_max_degree() <= max_m) return g;
  }
}

std::vector<int> random_permutation(std::mt19937_64& rng, int n) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

// Registry-independent form of an interned label, for comparing refinements
// that were run against different registries.
std::string canonical_label(const LabelRegistry& reg, int index) {
  ExtendedLabel e = reg.entry(index);
  if (e.multiset.empty()) return std::to_string(e.center);
  std::vector<std::string> parts;
  parts.reserve(e.multiset.size());
  for (int m : e.multiset) parts.push_back(canonical_label(reg, m));
  std::sort(parts.begin(), parts.end());
  std::string out = "(" + canonical_label(reg, e.center) + "|";
  for (const std::string& p : parts) out += p + ",";
  return out + ")";
}

std::vector<std::string> canonical_multiset(const LabelRegistry& reg,
                                            const std::vector<int>& labels) {
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (int j : labels) out.push_back(canonical_label(reg, j));
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// 1. The relu construction reaches rank K(M+1)^K for every small (K, M).

bool criterion1() {
  auto start = Clock::now();
  bool ok = true;
  for (int k = 1; k <= 3; ++k)
    for (int m = 1; m <= 3; ++m) {
      long long size = 1;
      for (int i = 0; i < k; ++i) size *= m + 1;
      if (size > 256) continue;
      int rank = construction_rank(k, m, 1.0);
      if (rank != spec_bound(k, m)) {
        std::printf("       K=%d M=%d: rank %d, expected %lld\n", k, m, rank,
                    spec_bound(k, m));
        ok = false;
      }
    }
  double elapsed = seconds_since(start);
  if (elapsed >= 10.0) ok = false;
  std::printf("[%s] 1 relu-construction rank: K(M+1)^K reached for all "
              "(K,M) in {1..3}^2 (%.1f s, limit 10)\n",
              ok ? "PASS" : "FAIL", elapsed);
  return ok;
}

// ---------------------------------------------------------------------------
// 2. Histogram-span dimensionality: the K(M+1)^K cap is never exceeded on
// random graph sets, and constructed sets should reach it exactly.
//
// The second half has a structural ceiling: in any graph the number of
// label-k nodes adjacent to label-l nodes, counted from either side, is the
// same number, which pins every realizable histogram to a subspace of
// codimension C(K,2).  Star graphs provably span that whole subspace, so the
// achievable maximum is K(M+1)^K - C(K,2) and the full cap is reachable only
// for K = 1.  The check reports the shortfall rather than lowering the bar.

Graph star_graph(int center_label, const std::vector<int>& leaf_counts,
                 int num_labels) {
  std::vector<int> labels{center_label};
  std::vector<std::array<int, 2>> edges;
  for (int k = 1; k <= static_cast<int>(leaf_counts.size()); ++k)
    for (int c = 0; c < leaf_counts[k - 1]; ++c) {
      labels.push_back(k);
      edges.push_back({0, static_cast<int>(labels.size()) - 1});
    }
  return build_graph(static_cast<int>(labels.size()), labels, edges,
                     num_labels);
}

// Incremental Gaussian elimination over growing column sets.  Rows added
// earlier are implicitly zero in columns interned later.
struct SpanBasis {
  std::vector<std::vector<double>> rows;  // reduced, each with a pivot
  std::vector<int> pivots;

  bool try_add(std::vector<double> row) {
    constexpr double kEps = 1e-6;
    for (size_t r = 0; r < rows.size(); ++r) {
      int p = pivots[r];
      if (p >= static_cast<int>(row.size()) || std::abs(row[p]) < kEps)
        continue;
      double f = row[p] / rows[r][p];
      for (size_t c = 0; c < rows[r].size(); ++c) row[c] -= f * rows[r][c];
    }
    int pivot = -1;
    double best = kEps;
    for (size_t c = 0; c < row.size(); ++c)
      if (std::abs(row[c]) > best) {
        best = std::abs(row[c]);
        pivot = static_cast<int>(c);
      }
    if (pivot < 0) return false;
    rows.push_back(std::move(row));
    pivots.push_back(pivot);
    return true;
  }
};

std::vector<double> histogram_row(const Graph& g, LabelRegistry& reg) {
  std::vector<double> row;
  for (int i = 0; i < g.num_nodes; ++i) {
    int idx = reg.intern(extended_label(g, i));
    if (idx >= static_cast<int>(row.size())) row.resize(idx + 1, 0.0);
    row[idx] += 1.0;
  }
  return row;
}

bool criterion2() {
  auto start = Clock::now();
  std::mt19937_64 rng(2024);
  bool ok = true;

  int bound_violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    int k = 1 + static_cast<int>(rng() % 3);
    int count = 3 + static_cast<int>(rng() % 6);
    std::vector<Graph> set;
    int d = 8;
    for (int i = 0; i < count; ++i) {
      set.push_back(bounded_random_graph(rng, 10, k, 3));
      d += set.back().num_nodes;
    }
    WleDimensionality res = wle_max_dimensionality(set, d);
    if (res.rank > res.bound) ++bound_violations;
  }
  if (bound_violations > 0) ok = false;

  for (int k = 1; k <= 3; ++k)
    for (int m = 1; m <= 3; ++m) {
      LabelRegistry reg;
      SpanBasis basis;
      std::vector<Graph> witness;
      for (int a = 1; a <= k; ++a)
        for (const auto& leaves : enumerate_lattice(k, m)) {
          Graph g = star_graph(a, leaves, k);
          if (basis.try_add(histogram_row(g, reg)))
            witness.push_back(std::move(g));
        }
      long long bound = spec_bound(k, m);
      for (int extra = 0;
           extra < 500 && static_cast<long long>(basis.rows.size()) < bound;
           ++extra) {
        Graph g = bounded_random_graph(rng, 12, k, m);
        if (basis.try_add(histogram_row(g, reg)))
          witness.push_back(std::move(g));
      }

      int total_nodes = 8;
      for (const Graph& g : witness) total_nodes += g.num_nodes;
      WleDimensionality res = wle_max_dimensionality(witness, total_nodes);
      long long achieved = res.rank;
      if (achieved != static_cast<long long>(basis.rows.size()) ||
          res.bound != bound)
        std::printf("       K=%d M=%d: inconsistent recheck (rank %d, basis "
                    "%zu, bound %lld vs %lld)\n",
                    k, m, res.rank, basis.rows.size(), res.bound, bound);
      if (achieved != bound) {
        std::printf("       K=%d M=%d: best span %lld of %lld (short by "
                    "%lld; adjacency symmetry costs C(K,2) = %d)\n",
                    k, m, achieved, bound, bound - achieved, k * (k - 1) / 2);
        ok = false;
      }
    }

  double elapsed = seconds_since(start);
  if (elapsed >= 30.0) ok = false;
  std::printf("[%s] 2 histogram-span bound: %d/100 random sets over the cap; "
              "equality required for each (K,M) (%.1f s, limit 30)\n",
              ok ? "PASS" : "FAIL", bound_violations, elapsed);
  return ok;
}

// ---------------------------------------------------------------------------
// 3. Bias norm grows like M^{3K/2}: the normalized ratio stays within a
// factor of 3 of its M=32 value.

bool criterion3() {
  auto start = Clock::now();
  bool ok = true;
  for (int k = 1; k <= 2; ++k) {
    auto profile = norm_profile(k, {2, 4, 8, 16, 32});
    double anchor = profile.back().ratio;
    for (const auto& p : profile) {
      if (p.ratio > 3.0 * anchor || p.ratio < anchor / 3.0) {
        std::printf("       K=%d M=%d: ratio %.4f vs anchor %.4f\n", k, p.M,
                    p.ratio, anchor);
        ok = false;
      }
    }
  }
  double elapsed = seconds_since(start);
  if (elapsed >= 5.0) ok = false;
  std::printf("[%s] 3 bias-norm rate: ratios within 3x of the M=32 anchor "
              "for K in {1,2} (%.1f s, limit 5)\n",
              ok ? "PASS" : "FAIL", elapsed);
  return ok;
}

// ---------------------------------------------------------------------------
// 4. Layer-sweep benchmark, 3 datasets x 5 runs per cell at L in {1,2}:
// detection additionally separates the refined embeddings from the atomic
// one by 0.05 AUC; counting is required to land within 20% of the atomic
// MAE.
//
// The counting band has no attainable operating point here: with a sum
// readout each node contributes with a degree-dependent weight, which an
// atomic table cannot undo (MAE floor near 0.085 regardless of budget)
// while refined tables can (floors 2-6x lower, variant-specific).  The
// band is checked as stated and the shortfall reported.

double cell_mean(const std::vector<BenchmarkCell>& cells, EmbeddingVariant v,
                 int layers) {
  for (const auto& c : cells)
    if (c.variant == v && c.layers == layers) return c.mean;
  throw FormatError("missing benchmark cell");
}

bool criterion4() {
  auto start = Clock::now();
  BenchmarkConfig cfg;
  cfg.min_layers = 1;
  cfg.max_layers = 2;
  cfg.num_datasets = 3;
  cfg.runs_per_dataset = 5;
  cfg.dim = 32;
  cfg.alpha = 0.01;
  cfg.epochs = 150;
  cfg.batch_size = 32;
  cfg.seed = 2025;
  cfg.cache_dir =
      (std::filesystem::temp_directory_path() / "wle_acceptance_cache")
          .string();

  cfg.task = Task::Classification;
  auto detection = run_benchmark(cfg);
  cfg.task = Task::Regression;
  auto counting = run_benchmark(cfg);

  const std::vector<EmbeddingVariant> refined = {
      EmbeddingVariant::NaiveWl, EmbeddingVariant::Cwl, EmbeddingVariant::Gwl};
  bool ok = true;
  for (int l = 1; l <= 2; ++l) {
    double atomic_auc = cell_mean(detection, EmbeddingVariant::Atomic, l);
    double atomic_mae = cell_mean(counting, EmbeddingVariant::Atomic, l);
    for (EmbeddingVariant v : refined) {
      double auc = cell_mean(detection, v, l);
      double mae = cell_mean(counting, v, l);
      std::printf("       %s L=%d: auc %.3f (atomic %.3f), mae %.4f "
                  "(atomic %.4f)\n",
                  variant_name(v), l, auc, atomic_auc, mae, atomic_mae);
      if (auc < atomic_auc + 0.05) {
        std::printf("       %s L=%d: detection margin %.3f below 0.05\n",
                    variant_name(v), l, auc - atomic_auc);
        ok = false;
      }
      if (std::abs(mae - atomic_mae) > 0.2 * atomic_mae) {
        std::printf("       %s L=%d: counting deviation %.4f outside "
                    "0.2*%.4f\n",
                    variant_name(v), l, std::abs(mae - atomic_mae),
                    atomic_mae);
        ok = false;
      }
    }
  }
  double elapsed = seconds_since(start);
  if (elapsed > 1800.0) ok = false;
  std::printf("[%s] 4 layer-sweep benchmark: detection margin 0.05 and "
              "counting band 20%% at L in {1,2} (%.0f s, limit 1800)\n",
              ok ? "PASS" : "FAIL", elapsed);
  return ok;
}

// ---------------------------------------------------------------------------
// 5. Trainability gap: atomic embedding + one layer cannot reach the loss a
// refined readout-only model reaches under the same budget.

bool criterion5() {
  auto start = Clock::now();
  GeneratorSpec spec;
  spec.task = Task::Classification;
  Dataset data = generate_dataset(spec, 909);
  bool ok = true;
  for (int dim : {32, 128}) {
    HardnessResult res = run_hardness(data, dim, 0.01, 500, 32, 303);
    std::printf("       d=%d: atomic+gcn loss %.4g, refined readout loss "
                "%.4g, ratio %.1f\n",
                dim, res.atomic_gcn_loss, res.wl_readout_loss, res.ratio);
    if (res.ratio < 2.0) ok = false;
  }
  double elapsed = seconds_since(start);
  std::printf("[%s] 5 trainability gap: atomic+gcn keeps at least 2x the "
              "readout-only loss at d in {32,128} (%.0f s)\n",
              ok ? "PASS" : "FAIL", elapsed);
  return ok;
}

// ---------------------------------------------------------------------------
// 6. Gradients of 200 random model stacks agree with central differences in
// every coordinate.

bool criterion6() {
  auto start = Clock::now();
  bool ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::mt19937_64 rng(5000 + trial);
    Graph g = random_labeled_graph(rng, 6, 3, 0.5);

    ModelSpec spec;
    switch (trial % 4) {
      case 0: spec.variant = EmbeddingVariant::Cwl; break;
      case 1: spec.variant = EmbeddingVariant::Gwl; break;
      case 2: spec.variant = EmbeddingVariant::NaiveWl; break;
      default: spec.variant = EmbeddingVariant::Atomic; break;
    }
    spec.task = trial % 2 ? Task::Classification : Task::Regression;
    spec.layers = trial % 3;
    spec.dim = 2 + trial % 2;
    LabelRegistry reg;
    intern_for_variant(g, spec.variant, spec.wl_iters, reg);
    Model model = init_model(spec, std::move(reg), g.num_labels, rng());

    // Zero-initialized biases leave dead receptive fields exactly on the
    // relu corner, where central differences straddle the kink.  Check at a
    // generic point instead.
    std::uniform_real_distribution<double> point(-0.7, 0.7);
    std::vector<ad::Tensor> params = model.parameters();
    for (ad::Tensor& p : params)
      for (double& v : p.values()) v = point(rng);

    double target = spec.task == Task::Classification
                        ? static_cast<double>(trial % 2)
                        : std::uniform_real_distribution<double>(-2, 2)(rng);
    auto forward = [&]() { return sample_loss(model, g, target); };
    double err = wle::testing::max_gradient_error(forward, params);
    worst = std::max(worst, err);
    if (err >= 1e-4) {
      std::printf("       stack %d (%s, %d layers): gradient error %.3g\n",
                  trial, variant_name(spec.variant), spec.layers, err);
      ok = false;
    }
  }
  double elapsed = seconds_since(start);
  std::printf("[%s] 6 gradient check: 200 random stacks vs central "
              "differences, worst %.2g (tolerance 1e-4, %.0f s)\n",
              ok ? "PASS" : "FAIL", worst, elapsed);
  return ok;
}

// ---------------------------------------------------------------------------
// 7. Refinement invariances: relabeling-independent outputs, monotone label
// growth, and a sound (never falsely negative) isomorphism screen.

bool criterion7() {
  auto start = Clock::now();
  std::mt19937_64 rng(77);
  bool ok = true;

  for (int trial = 0; trial < 500; ++trial) {
    Graph g = random_labeled_graph(rng, 10, 3, 0.4);
    Graph p = permute_graph(g, random_permutation(rng, g.num_nodes));
    LabelRegistry ra, rb;
    RefinementResult res_g = wl_refine(g, 3, ra);
    RefinementResult res_p = wl_refine(p, 3, rb);
    if (res_g.registry_sizes != res_p.registry_sizes) ok = false;
    for (size_t t = 0; t < res_g.labels.size() && ok; ++t)
      if (canonical_multiset(ra, res_g.labels[t]) !=
          canonical_multiset(rb, res_p.labels[t]))
        ok = false;
    for (size_t t = 1; t < res_g.registry_sizes.size(); ++t)
      if (res_g.registry_sizes[t] < res_g.registry_sizes[t - 1]) ok = false;
    if (wl_isomorphism_test(g, p) == IsoVerdict::NotIsomorphic) ok = false;
    if (!ok) {
      std::printf("       violated at pair %d\n", trial);
      break;
    }
  }

  auto cycle = [](int n, int offset, std::vector<int>& labels,
                  std::vector<std::array<int, 2>>& edges) {
    for (int i = 0; i < n; ++i) {
      labels.push_back(1);
      edges.push_back({offset + i, offset + (i + 1) % n});
    }
  };
  std::vector<int> labels6;
  std::vector<std::array<int, 2>> edges6;
  cycle(6, 0, labels6, edges6);
  Graph c6 = build_graph(6, labels6, edges6);
  std::vector<int> labels33;
  std::vector<std::array<int, 2>> edges33;
  cycle(3, 0, labels33, edges33);
  cycle(3, 3, labels33, edges33);
  Graph two_c3 = build_graph(6, labels33, edges33);
  if (wl_isomorphism_test(c6, two_c3) != IsoVerdict::Inconclusive) {
    std::printf("       C6 vs 2xC3 not Inconclusive\n");
    ok = false;
  }

  double elapsed = seconds_since(start);
  std::printf("[%s] 7 refinement invariances: 500 relabeled pairs, monotone "
              "growth, no false rejections, C6 vs 2xC3 inconclusive "
              "(%.1f s)\n",
              ok ? "PASS" : "FAIL", elapsed);
  return ok;
}

// ---------------------------------------------------------------------------
// 8. Generator validity: a fresh 600-graph detection dataset re-verified
// against the containment oracle.

bool criterion8() {
  auto start = Clock::now();
  GeneratorSpec spec;
  spec.task = Task::Classification;
  Dataset data = generate_dataset(spec, 4242);
  bool ok = data.size() == 600;

  int violations = verify_dataset(data, spec);
  for (const auto& rec : data) {
    const Graph& g = rec.graph;
    bool degrees_ok = true;
    for (int i = 0; i < g.num_nodes; ++i)
      if (g.degree(i) > 4) degrees_ok = false;
    int types = count_pattern_types(g);
    int expected = rec.target == 1.0 ? 1 : 0;
    if (!degrees_ok || !g.connected() || types != expected) ++violations;
  }
  if (violations > 0) ok = false;

  double elapsed = seconds_since(start);
  std::printf("[%s] 8 generator validity: %zu records, %d oracle violations "
              "(%.1f s)\n",
              ok ? "PASS" : "FAIL", data.size(), violations, elapsed);
  return ok;
}

// ---------------------------------------------------------------------------
// 9. Parser conformance on the pinned molecules and error classes.

template <typename E>
bool throws_exactly(const std::string& smiles) {
  try {
    parse_smiles(smiles);
  } catch (const E&) {
    return true;
  } catch (...) {
  }
  return false;
}

bool criterion9() {
  auto start = Clock::now();
  bool ok = true;

  auto expect_counts = [&](const std::string& smiles, int nodes, int edges) {
    Graph g = parse_smiles(smiles);
    if (g.num_nodes != nodes || static_cast<int>(g.edges.size()) != edges) {
      std::printf("       %s: %d nodes / %zu edges, expected %d / %d\n",
                  smiles.c_str(), g.num_nodes, g.edges.size(), nodes, edges);
      ok = false;
    }
  };
  expect_counts("C", 1, 0);
  expect_counts("CCO", 3, 2);
  expect_counts("C1CC1", 3, 3);
  expect_counts("c1ccccc1", 6, 6);

  Graph cco = parse_smiles("CCO");
  if (cco.edges != std::vector<std::array<int, 2>>{{0, 1}, {1, 2}}) {
    std::printf("       CCO edge list unexpected\n");
    ok = false;
  }

  if (!throws_exactly<EmptyInput>("")) {
    std::printf("       '': expected EmptyInput\n");
    ok = false;
  }
  if (!throws_exactly<UnknownAtom>("Xx")) {
    std::printf("       'Xx': expected UnknownAtom\n");
    ok = false;
  }
  if (!throws_exactly<UnbalancedParenthesis>("C(C")) {
    std::printf("       'C(C': expected UnbalancedParenthesis\n");
    ok = false;
  }
  if (!throws_exactly<DanglingRingClosure>("C1CC")) {
    std::printf("       'C1CC': expected DanglingRingClosure\n");
    ok = false;
  }
  if (!throws_exactly<SmilesSyntaxError>("C==")) {
    std::printf("       'C==': expected SmilesSyntaxError\n");
    ok = false;
  }

  double elapsed = seconds_since(start);
  std::printf("[%s] 9 parser conformance: pinned molecules and error "
              "classes (%.1f s)\n",
              ok ? "PASS" : "FAIL", elapsed);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  bool (*checks[])() = {criterion1, criterion2, criterion3,
                        criterion4, criterion5, criterion6,
                        criterion7, criterion8, criterion9};
  int failures = 0;
  for (int n : selected) {
    if (n < 1 || n > 9) {
      std::printf("[FAIL] %d: no such criterion\n", n);
      ++failures;
      continue;
    }
    bool pass = false;
    try {
      pass = checks[n - 1]();
    } catch (const std::exception& e) {
      std::printf("[FAIL] %d: unexpected exception: %s\n", n, e.what());
    }
    if (!pass) ++failures;
  }
  std::printf("%zu/%zu criteria passed\n", selected.size() - failures,
              selected.size());
  return failures;
}
