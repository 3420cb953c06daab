#include <doctest.h>

#include <cmath>
#include <vector>

#include "wle/errors.hpp"
#include "wle/metrics.hpp"
#include "wle/synthetic.hpp"

using namespace wle;

TEST_CASE("mean absolute error") {
  CHECK(mae({1.0, 2.0}, {2.0, 4.0}) == doctest::Approx(1.5));
  CHECK(mae({3.0}, {3.0}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(mae({1.0}, {1.0, 2.0}), LengthMismatch);
  CHECK_THROWS_AS(mae({}, {}), EmptyMetricInput);
}

TEST_CASE("roc auc pair statistic") {
  CHECK(roc_auc({0.9, 0.8, 0.3, 0.1}, {1, 0, 1, 0}) == doctest::Approx(0.75));
  CHECK(roc_auc({0.9, 0.8, 0.3, 0.1}, {1, 1, 0, 0}) == doctest::Approx(1.0));
  CHECK(roc_auc({0.1, 0.2, 0.8, 0.9}, {1, 1, 0, 0}) == doctest::Approx(0.0));
  CHECK(roc_auc({0.5, 0.5}, {1, 0}) == doctest::Approx(0.5));  // tie
  CHECK_THROWS_AS(roc_auc({0.5, 0.5}, {1, 1}), SingleClass);
  CHECK_THROWS_AS(roc_auc({0.5}, {1, 0}), LengthMismatch);
  CHECK_THROWS_AS(roc_auc({}, {}), EmptyMetricInput);
}

namespace {

Dataset tiny_detection() {
  Dataset data;
  data.push_back({build_graph(3, {1, 1, 1}, {{0, 1}, {1, 2}, {0, 2}}, 2), 1.0});
  data.push_back({build_graph(3, {1, 2, 1}, {{0, 1}, {1, 2}, {0, 2}}, 2), 1.0});
  data.push_back({build_graph(3, {1, 1, 1}, {{0, 1}, {1, 2}}, 2), 0.0});
  data.push_back({build_graph(3, {2, 1, 2}, {{0, 1}, {1, 2}}, 2), 0.0});
  return data;
}

Model tiny_cwl_model(const Dataset& data, Task task) {
  ModelSpec spec;
  spec.variant = EmbeddingVariant::Cwl;
  spec.task = task;
  spec.layers = 1;
  spec.dim = 3;
  LabelRegistry reg = build_registry(data, spec.variant, spec.wl_iters, 2);
  return init_model(spec, std::move(reg), 2, 19);
}

}  // namespace

TEST_CASE("evaluate_model dispatches on the task") {
  Dataset data = tiny_detection();
  Model m = tiny_cwl_model(data, Task::Classification);
  double auc = evaluate_model(m, data);
  CHECK(auc >= 0.0);
  CHECK(auc <= 1.0);

  Dataset counting = data;
  for (auto& rec : counting) rec.target = rec.graph.num_nodes;
  Model mr = tiny_cwl_model(counting, Task::Regression);
  std::vector<double> preds, truth;
  for (const auto& rec : counting) {
    preds.push_back(predict(mr, rec.graph));
    truth.push_back(rec.target);
  }
  CHECK(evaluate_model(mr, counting) == doctest::Approx(mae(preds, truth)));
  CHECK_THROWS_AS(evaluate_model(m, {}), EmptyMetricInput);
}

TEST_CASE("shuffle probe perturbs only the requested side") {
  Dataset data = tiny_detection();
  Model m = tiny_cwl_model(data, Task::Classification);
  ShuffleResult atom = shuffle_importance(m, data, ShuffleMode::Atom, 5);
  ShuffleResult nbr = shuffle_importance(m, data, ShuffleMode::Neighborhood, 5);
  CHECK(atom.baseline == doctest::Approx(nbr.baseline));
  CHECK(atom.delta == doctest::Approx(atom.shuffled - atom.baseline));
  // Deterministic in the seed.
  ShuffleResult again = shuffle_importance(m, data, ShuffleMode::Atom, 5);
  CHECK(again.shuffled == doctest::Approx(atom.shuffled));
}

TEST_CASE("shuffle probe rejects other variants and degenerate pools") {
  Dataset data = tiny_detection();
  ModelSpec spec;
  spec.variant = EmbeddingVariant::Atomic;
  spec.task = Task::Classification;
  spec.dim = 2;
  LabelRegistry reg = build_registry(data, spec.variant, 1, 2);
  Model atomic = init_model(spec, std::move(reg), 2, 1);
  CHECK_THROWS_AS(shuffle_importance(atomic, data, ShuffleMode::Atom, 1),
                  WrongEmbeddingVariant);

  // One label and one distinct neighborhood leave nothing to swap in.
  Dataset uniform;
  uniform.push_back({build_graph(2, {1, 1}, {{0, 1}}, 1), 1.0});
  uniform.push_back({build_graph(2, {1, 1}, {{0, 1}}, 1), 0.0});
  ModelSpec cspec;
  cspec.variant = EmbeddingVariant::Cwl;
  cspec.task = Task::Classification;
  cspec.dim = 2;
  LabelRegistry creg = build_registry(uniform, cspec.variant, 1, 1);
  Model cm = init_model(cspec, std::move(creg), 1, 1);
  CHECK_THROWS_AS(shuffle_importance(cm, uniform, ShuffleMode::Atom, 1),
                  EmptyReplacementPool);
}

TEST_CASE("weight magnitude halves reflect the mix matrix") {
  Dataset data = tiny_detection();
  Model m = tiny_cwl_model(data, Task::Classification);
  const int d1 = m.embedding.d1, d2 = m.embedding.d2, d = m.embedding.dim;

  // Pin the mix matrix: center half all ones, neighborhood half all zeros.
  std::vector<double> w(static_cast<size_t>(d) * (d1 + d2), 0.0);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d1; ++c) w[static_cast<size_t>(r) * (d1 + d2) + c] = 1.0;
  m.embedding.mix_w = ad::Tensor::parameter(d, d1 + d2, w);

  WeightMagnitudes mag = cwl_weight_magnitudes(m);
  CHECK(mag.neighbor_mean == doctest::Approx(0.0));
  CHECK(mag.center_mean > 0.0);
  CHECK(mag.scaled_abs.size() == static_cast<size_t>(d));
  CHECK(mag.scaled_abs[0].size() == static_cast<size_t>(d1 + d2));

  ModelSpec spec;
  spec.variant = EmbeddingVariant::Gwl;
  LabelRegistry reg = build_registry(data, spec.variant, 1, 2);
  Model gwl = init_model(spec, std::move(reg), 2, 2);
  CHECK_THROWS_AS(cwl_weight_magnitudes(gwl), WrongEmbeddingVariant);
}
