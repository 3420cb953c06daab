#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "wle/graph.hpp"

namespace wle {

// Reserved table row for labels that were never interned (e.g. seen only at
// evaluation time).  Registry indices proper start at 1.
inline constexpr int kUnknownIndex = 0;

// Sentinel center value for labels of the form (empty, M).
inline constexpr int kEmptyCenter = 0;

/**
 * Expanded node label: a center value paired with a sorted neighbor multiset.
 *
 * Three shapes occur in practice:
 *   (l, M)     full expanded label
 *   (l, {})    center only, used for atomic lookups
 *   (0, M)     neighborhood only (center = kEmptyCenter)
 * Center and multiset entries are raw alphabet labels at refinement step 0
 * and registry indices afterwards.
 */
struct ExtendedLabel {
  int center = kEmptyCenter;
  std::vector<int> multiset;  // kept sorted ascending

  bool operator==(const ExtendedLabel& o) const {
    return center == o.center && multiset == o.multiset;
  }
};

ExtendedLabel make_center_label(int center);
ExtendedLabel make_multiset_label(std::vector<int> multiset);

// Expanded label of node i with raw alphabet values: (label(i), sorted labels
// of collapsed neighbors).
ExtendedLabel extended_label(const Graph& g, int i);

struct ExtendedLabelHash {
  size_t operator()(const ExtendedLabel& l) const noexcept {
    // FNV-1a over center then elements; order is canonical (sorted).
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    mix(static_cast<uint64_t>(l.center));
    for (int v : l.multiset) mix(static_cast<uint64_t>(v) + 0x9e3779b9ull);
    return static_cast<size_t>(h);
  }
};

/**
 * Injective map from expanded labels to dense indices 1..J, in insertion
 * order.  Index 0 is reserved for unknown labels and never stored.
 */
class LabelRegistry {
 public:
  // Returns the existing index or assigns the next free one.
  int intern(const ExtendedLabel& label);

  // Lookup without growth; throws UninternedLabel when absent.
  int index_of(const ExtendedLabel& label) const;

  // Lookup without growth; returns kUnknownIndex when absent.
  int index_or_unknown(const ExtendedLabel& label) const;

  bool contains(const ExtendedLabel& label) const;

  // Number of interned labels J.
  int size() const { return static_cast<int>(entries_.size()); }

  // Entry for index j (1-based).
  const ExtendedLabel& entry(int index) const;

  // All entries in insertion order (index 1 first).
  const std::vector<ExtendedLabel>& entries() const { return entries_; }

 private:
  std::unordered_map<ExtendedLabel, int, ExtendedLabelHash> index_;
  std::vector<ExtendedLabel> entries_;
};

/**
 * Iterated label refinement transcript.
 *
 * labels[t][i] is the registry index of node i after t refinement steps;
 * labels[0] holds the interned original labels (l, {}).  registry_sizes[t]
 * records J after interning step t, so the sequence is nondecreasing.
 */
struct RefinementResult {
  std::vector<std::vector<int>> labels;  // (iters + 1) x num_nodes
  std::vector<int> registry_sizes;
};

// Runs `iters` refinement steps, interning new labels into `registry`.
// Step t+1 assigns node i the index of (labels[t][i], {labels[t][j] : j in N(i)}).
RefinementResult wl_refine(const Graph& g, int iters, LabelRegistry& registry);

// As above but against a frozen registry: nothing is interned and lookups
// that miss yield sentinel values that never collide with interned entries.
RefinementResult wl_refine_frozen(const Graph& g, int iters,
                                  const LabelRegistry& registry);

// Neighborhood-only key (empty, {prev[j] : j in N(i)}) over a previous
// labeling.  Unknown entries (index 0) become a sentinel value that misses
// every registry lookup instead of colliding with real labels.
ExtendedLabel neighborhood_key(const Graph& g, const std::vector<int>& prev,
                               int i);

enum class IsoVerdict { NotIsomorphic, Inconclusive };

// 1-dimensional WL isomorphism heuristic: refine both graphs over a shared
// registry and compare label histograms per iteration.  Returns NotIsomorphic
// as soon as the histograms differ, Inconclusive if they stay equal until the
// partitions stabilize or max_iters is reached.
IsoVerdict wl_isomorphism_test(const Graph& a, const Graph& b,
                               int max_iters = 16);

}  // namespace wle
