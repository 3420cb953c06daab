#pragma once

#include <cstdint>
#include <vector>

#include "wle/nn.hpp"
#include "wle/theory.hpp"

namespace wle {

// Mean absolute error.  Throws LengthMismatch / EmptyMetricInput.
double mae(const std::vector<double>& pred, const std::vector<double>& truth);

// Area under the ROC curve via the pair statistic; ties count 1/2.
// Labels must be 0/1 with both classes present (SingleClass otherwise).
double roc_auc(const std::vector<double>& scores,
               const std::vector<int>& labels);

// Task metric of a model over a dataset: MAE for regression, ROC-AUC for
// classification.
double evaluate_model(const Model& m, const Dataset& data);

enum class ShuffleMode { Atom, Neighborhood };

struct ShuffleResult {
  double baseline = 0.0;
  double shuffled = 0.0;
  double delta = 0.0;  // shuffled - baseline
};

// Importance probe for C-WL models: for one uniformly chosen node per graph,
// swap the center-side row (Atom) or the neighborhood-side row
// (Neighborhood) for a different uniformly chosen interned alternative, then
// re-evaluate.  Throws WrongEmbeddingVariant for other variants and
// EmptyReplacementPool when no different row exists.
ShuffleResult shuffle_importance(const Model& m, const Dataset& data,
                                 ShuffleMode mode, uint64_t seed);

struct WeightMagnitudes {
  Matrix scaled_abs;           // |W| with columns scaled per side
  double center_mean = 0.0;    // mean entry over the center half
  double neighbor_mean = 0.0;  // mean entry over the neighborhood half
};

// Magnitude profile of the C-WL mix matrix, rescaled against the mean row
// norm of each side's table so the two halves are comparable.
WeightMagnitudes cwl_weight_magnitudes(const Model& m);

}  // namespace wle
