#include "wle/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wle/errors.hpp"

namespace wle {

double mae(const std::vector<double>& pred, const std::vector<double>& truth) {
  if (pred.size() != truth.size())
    throw LengthMismatch("prediction and truth lengths differ");
  if (pred.empty()) throw EmptyMetricInput("mae over empty input");
  double sum = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) sum += std::abs(pred[i] - truth[i]);
  return sum / static_cast<double>(pred.size());
}

double roc_auc(const std::vector<double>& scores,
               const std::vector<int>& labels) {
  if (scores.size() != labels.size())
    throw LengthMismatch("score and label lengths differ");
  if (scores.empty()) throw EmptyMetricInput("roc_auc over empty input");
  double hits = 0.0;
  long long pairs = 0;
  for (size_t p = 0; p < scores.size(); ++p) {
    if (labels[p] != 1) continue;
    for (size_t n = 0; n < scores.size(); ++n) {
      if (labels[n] != 0) continue;
      ++pairs;
      if (scores[p] > scores[n])
        hits += 1.0;
      else if (scores[p] == scores[n])
        hits += 0.5;
    }
  }
  if (pairs == 0) throw SingleClass("roc_auc needs both classes");
  return hits / static_cast<double>(pairs);
}

double evaluate_model(const Model& m, const Dataset& data) {
  if (data.empty()) throw EmptyMetricInput("evaluation over empty dataset");
  std::vector<double> preds;
  preds.reserve(data.size());
  for (const auto& rec : data) preds.push_back(predict(m, rec.graph));
  if (m.spec.task == Task::Regression) {
    std::vector<double> truth;
    truth.reserve(data.size());
    for (const auto& rec : data) truth.push_back(rec.target);
    return mae(preds, truth);
  }
  std::vector<int> labels;
  labels.reserve(data.size());
  for (const auto& rec : data) labels.push_back(static_cast<int>(rec.target));
  return roc_auc(preds, labels);
}

namespace {

double predict_with_overrides(const Model& m, const Graph& g,
                              const std::vector<int>& center_override,
                              const std::vector<int>& neighbor_override) {
  ad::Tensor h = embed_nodes_with_overrides(m.embedding, m.registry, g,
                                            center_override, neighbor_override);
  for (const auto& layer : m.gcn) h = gcn_layer(g, h, layer);
  ad::Tensor out = ad::add(ad::matmul(ad::sum_rows(h), m.head_w), m.head_b);
  if (m.spec.task == Task::Regression) return out.at(0, 0);
  return out.at(0, 1) - out.at(0, 0);
}

}  // namespace

ShuffleResult shuffle_importance(const Model& m, const Dataset& data,
                                 ShuffleMode mode, uint64_t seed) {
  if (m.spec.variant != EmbeddingVariant::Cwl)
    throw WrongEmbeddingVariant("importance probe expects a cwl model");
  if (data.empty()) throw EmptyMetricInput("importance over empty dataset");

  // Replacement pools: raw labels for the center side, interned neighborhood
  // multisets for the other.
  std::vector<int> center_pool;
  for (int l = 1; l <= m.num_labels; ++l)
    center_pool.push_back(m.registry.index_of(make_center_label(l)));
  std::vector<int> neighbor_pool;
  for (int j = 1; j <= m.registry.size(); ++j)
    if (m.registry.entry(j).center == kEmptyCenter)
      neighbor_pool.push_back(j);

  std::mt19937_64 rng(seed);
  std::vector<double> preds;
  preds.reserve(data.size());
  for (const auto& rec : data) {
    const Graph& g = rec.graph;
    EmbeddingIndices idx = embedding_indices(m.embedding, m.registry, g);
    std::uniform_int_distribution<int> pick_node(0, g.num_nodes - 1);
    int node = pick_node(rng);

    const std::vector<int>& pool =
        mode == ShuffleMode::Atom ? center_pool : neighbor_pool;
    int own = mode == ShuffleMode::Atom ? idx.center[node] : idx.neighbor[node];
    std::vector<int> options;
    for (int row : pool)
      if (row != own) options.push_back(row);
    if (options.empty())
      throw EmptyReplacementPool("no alternative row to swap in");
    std::uniform_int_distribution<size_t> pick(0, options.size() - 1);
    int replacement = options[pick(rng)];

    std::vector<int> center_override, neighbor_override;
    if (mode == ShuffleMode::Atom) {
      center_override.assign(g.num_nodes, -1);
      center_override[node] = replacement;
    } else {
      neighbor_override.assign(g.num_nodes, -1);
      neighbor_override[node] = replacement;
    }
    preds.push_back(
        predict_with_overrides(m, g, center_override, neighbor_override));
  }

  ShuffleResult res;
  res.baseline = evaluate_model(m, data);
  if (m.spec.task == Task::Regression) {
    std::vector<double> truth;
    truth.reserve(data.size());
    for (const auto& rec : data) truth.push_back(rec.target);
    res.shuffled = mae(preds, truth);
  } else {
    std::vector<int> labels;
    labels.reserve(data.size());
    for (const auto& rec : data) labels.push_back(static_cast<int>(rec.target));
    res.shuffled = roc_auc(preds, labels);
  }
  res.delta = res.shuffled - res.baseline;
  return res;
}

WeightMagnitudes cwl_weight_magnitudes(const Model& m) {
  if (m.spec.variant != EmbeddingVariant::Cwl)
    throw WrongEmbeddingVariant("weight magnitudes expect a cwl model");
  const int d = m.embedding.dim;
  const int d1 = m.embedding.d1, d2 = m.embedding.d2;

  // Mean row norms over the rows each side actually addresses.
  auto side_norm = [&](const ad::Tensor& table, bool center_side) {
    double sum = 0.0;
    int count = 0;
    for (int j = 1; j <= m.registry.size(); ++j) {
      bool is_center = m.registry.entry(j).center != kEmptyCenter;
      if (is_center != center_side) continue;
      double sq = 0.0;
      for (int c = 0; c < table.cols(); ++c) {
        double v = table.at(j, c);
        sq += v * v;
      }
      sum += std::sqrt(sq);
      ++count;
    }
    return count > 0 ? sum / count : 1.0;
  };
  double n1 = side_norm(m.embedding.table1, true);
  double n2 = side_norm(m.embedding.table2, false);

  WeightMagnitudes res;
  res.scaled_abs.assign(d, std::vector<double>(d1 + d2, 0.0));
  double sum1 = 0.0, sum2 = 0.0;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d1 + d2; ++c) {
      double v = std::abs(m.embedding.mix_w.at(r, c)) * (c < d1 ? n1 : n2);
      res.scaled_abs[r][c] = v;
      (c < d1 ? sum1 : sum2) += v;
    }
  res.center_mean = sum1 / (static_cast<double>(d) * d1);
  res.neighbor_mean = sum2 / (static_cast<double>(d) * d2);
  return res;
}

}  // namespace wle
