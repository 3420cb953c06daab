#include "wle/wl.hpp"

#include <algorithm>
#include <string>

#include "wle/errors.hpp"

namespace wle {

namespace {

std::string describe(const ExtendedLabel& l) {
  std::string s = "(" + std::to_string(l.center) + ", {";
  for (size_t i = 0; i < l.multiset.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(l.multiset[i]);
  }
  return s + "})";
}

// Value used inside refinement keys for nodes whose previous label missed a
// frozen registry.  Interned keys only ever hold values >= 0, so keys built
// with it can never collide with a stored entry.
constexpr int kUnknownKeyValue = -1;

}  // namespace

ExtendedLabel make_center_label(int center) { return {center, {}}; }

ExtendedLabel make_multiset_label(std::vector<int> multiset) {
  std::sort(multiset.begin(), multiset.end());
  return {kEmptyCenter, std::move(multiset)};
}

ExtendedLabel extended_label(const Graph& g, int i) {
  return {g.labels[i], g.neighbor_label_multiset(i)};
}

int LabelRegistry::intern(const ExtendedLabel& label) {
  auto it = index_.find(label);
  if (it != index_.end()) return it->second;
  entries_.push_back(label);
  int idx = static_cast<int>(entries_.size());
  index_.emplace(label, idx);
  return idx;
}

int LabelRegistry::index_of(const ExtendedLabel& label) const {
  auto it = index_.find(label);
  if (it == index_.end())
    throw UninternedLabel("label " + describe(label) + " not interned");
  return it->second;
}

int LabelRegistry::index_or_unknown(const ExtendedLabel& label) const {
  auto it = index_.find(label);
  return it == index_.end() ? kUnknownIndex : it->second;
}

bool LabelRegistry::contains(const ExtendedLabel& label) const {
  return index_.find(label) != index_.end();
}

const ExtendedLabel& LabelRegistry::entry(int index) const {
  if (index < 1 || index > size())
    throw UninternedLabel("registry has no entry " + std::to_string(index));
  return entries_[index - 1];
}

namespace {

// Shared driver for the growing and frozen variants.
RefinementResult refine_impl(const Graph& g, int iters,
                             LabelRegistry* growing,
                             const LabelRegistry* frozen) {
  RefinementResult res;
  res.labels.reserve(iters + 1);
  res.registry_sizes.reserve(iters + 1);

  auto resolve = [&](const ExtendedLabel& key) {
    return growing ? growing->intern(key) : frozen->index_or_unknown(key);
  };
  const LabelRegistry& reg = growing ? *growing : *frozen;

  // Alphabet labels claim rows 1..K before any node is visited, so (l, {})
  // sits at index l regardless of node order and a degree-zero node keeps a
  // stable label across iterations.
  if (growing)
    for (int l = 1; l <= g.num_labels; ++l)
      growing->intern(make_center_label(l));

  std::vector<int> current(g.num_nodes);
  for (int i = 0; i < g.num_nodes; ++i)
    current[i] = resolve(make_center_label(g.labels[i]));
  res.labels.push_back(current);
  res.registry_sizes.push_back(reg.size());

  // Stored labels are table row indices (0 = unknown); key values substitute
  // a negative sentinel for unknowns so lookups cannot alias real entries.
  auto key_value = [](int row) {
    return row == kUnknownIndex ? kUnknownKeyValue : row;
  };

  for (int t = 1; t <= iters; ++t) {
    std::vector<int> next(g.num_nodes);
    for (int i = 0; i < g.num_nodes; ++i) {
      ExtendedLabel key;
      key.center = key_value(current[i]);
      key.multiset.reserve(g.adj[i].size());
      for (int j : g.adj[i]) key.multiset.push_back(key_value(current[j]));
      std::sort(key.multiset.begin(), key.multiset.end());
      next[i] = resolve(key);
    }
    current = std::move(next);
    res.labels.push_back(current);
    res.registry_sizes.push_back(reg.size());
  }
  return res;
}

}  // namespace

RefinementResult wl_refine(const Graph& g, int iters, LabelRegistry& registry) {
  return refine_impl(g, iters, &registry, nullptr);
}

RefinementResult wl_refine_frozen(const Graph& g, int iters,
                                  const LabelRegistry& registry) {
  return refine_impl(g, iters, nullptr, &registry);
}

ExtendedLabel neighborhood_key(const Graph& g, const std::vector<int>& prev,
                               int i) {
  ExtendedLabel key;
  key.center = kEmptyCenter;
  key.multiset.reserve(g.adj[i].size());
  for (int j : g.adj[i])
    key.multiset.push_back(prev[j] == kUnknownIndex ? kUnknownKeyValue
                                                    : prev[j]);
  std::sort(key.multiset.begin(), key.multiset.end());
  return key;
}

namespace {

std::vector<std::pair<int, int>> histogram(const std::vector<int>& labels) {
  std::vector<std::pair<int, int>> h;
  std::vector<int> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 0; i < sorted.size();) {
    size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    h.emplace_back(sorted[i], static_cast<int>(j - i));
    i = j;
  }
  return h;
}

int distinct_count(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> all = a;
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return static_cast<int>(all.size());
}

}  // namespace

IsoVerdict wl_isomorphism_test(const Graph& a, const Graph& b, int max_iters) {
  LabelRegistry registry;
  for (int l = 1; l <= std::max(a.num_labels, b.num_labels); ++l)
    registry.intern(make_center_label(l));

  std::vector<int> la(a.num_nodes), lb(b.num_nodes);
  for (int i = 0; i < a.num_nodes; ++i)
    la[i] = registry.intern(make_center_label(a.labels[i]));
  for (int i = 0; i < b.num_nodes; ++i)
    lb[i] = registry.intern(make_center_label(b.labels[i]));
  if (histogram(la) != histogram(lb)) return IsoVerdict::NotIsomorphic;

  int classes = distinct_count(la, lb);
  for (int t = 0; t < max_iters; ++t) {
    auto step = [&registry](const Graph& g, const std::vector<int>& cur) {
      std::vector<int> next(g.num_nodes);
      for (int i = 0; i < g.num_nodes; ++i) {
        ExtendedLabel key;
        key.center = cur[i];
        key.multiset.reserve(g.adj[i].size());
        for (int j : g.adj[i]) key.multiset.push_back(cur[j]);
        std::sort(key.multiset.begin(), key.multiset.end());
        next[i] = registry.intern(key);
      }
      return next;
    };
    la = step(a, la);
    lb = step(b, lb);
    if (histogram(la) != histogram(lb)) return IsoVerdict::NotIsomorphic;
    int refined = distinct_count(la, lb);
    if (refined == classes) break;  // partitions stable, no progress possible
    classes = refined;
  }
  return IsoVerdict::Inconclusive;
}

}  // namespace wle
