#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wle/autodiff.hpp"
#include "wle/embedding.hpp"
#include "wle/graph.hpp"

namespace wle {

/** One graph-convolution layer: H' = relu(A_hat H W + b). */
struct GcnLayerParams {
  ad::Tensor weight;  // (d_in x d_out)
  ad::Tensor bias;    // (1 x d_out)
};

// Symmetrically normalized adjacency with self connections over the
// collapsed neighborhood: entry (i, j) is 1/sqrt((deg_i+1)(deg_j+1)) for
// j in N(i) or j = i, using collapsed degrees.
ad::Tensor normalized_adjacency(const Graph& g);

ad::Tensor gcn_layer(const Graph& g, const ad::Tensor& h,
                     const GcnLayerParams& p);

enum class Task { Regression, Classification };

const char* task_name(Task t);
Task task_from_name(const std::string& name);

struct ModelSpec {
  EmbeddingVariant variant = EmbeddingVariant::Atomic;
  Task task = Task::Regression;
  int layers = 1;    // GCN layers after the embedding; 0 = readout only
  int dim = 32;      // embedding and hidden width
  int wl_iters = 1;  // refinement steps T
  int d1 = 0, d2 = 0;  // concat halves for Cwl (0 = dim)
};

/**
 * Embedding + GCN stack + sum readout + affine head.  The registry is frozen
 * after construction; the head emits one value for regression and two logits
 * for classification.
 */
struct Model {
  ModelSpec spec;
  int num_labels = 0;  // alphabet size K the registry was built with
  LabelRegistry registry;
  EmbeddingParams embedding;
  std::vector<GcnLayerParams> gcn;
  ad::Tensor head_w;  // (dim x out)
  ad::Tensor head_b;  // (1 x out)

  int head_out() const { return spec.task == Task::Classification ? 2 : 1; }
  std::vector<ad::Tensor> parameters() const;
  std::vector<std::string> parameter_names() const;
};

// Interns every label the variant needs over the dataset (alphabet labels
// first, so label l gets index l) and returns the frozen registry.
LabelRegistry build_registry(const Dataset& data, EmbeddingVariant variant,
                             int wl_iters, int num_labels);

Model init_model(const ModelSpec& spec, LabelRegistry registry, int num_labels,
                 uint64_t seed);

// Readout of the full stack: (1 x out) head output.
ad::Tensor model_output(const Model& m, const Graph& g);

// Scalar prediction: the regression value, or the class-1 logit margin for
// classification (monotone in the class-1 probability).
double predict(const Model& m, const Graph& g);

// Per-sample training loss: squared error or 2-class cross entropy.
// Throws TargetTypeMismatch when a classification target is not 0/1.
ad::Tensor sample_loss(const Model& m, const Graph& g, double target);

struct AdamState {
  std::vector<std::vector<double>> m, v;
  int64_t step = 0;
};

// One bias-corrected Adam update from the gradients currently stored in the
// parameters (beta1 = 0.9, beta2 = 0.999, eps = 1e-8).
void adam_step(const std::vector<ad::Tensor>& params, AdamState& state,
               double alpha);

struct TrainConfig {
  double alpha = 0.01;
  int epochs = 100;
  int batch_size = 32;
  uint64_t seed = 0;
};

// Mean training loss per epoch, in order.  Minibatches are reshuffled each
// epoch from the config seed; the run is deterministic given (model seed,
// config, dataset).
std::vector<double> train_model(Model& m, const Dataset& data,
                                const TrainConfig& cfg);

// Mean loss over a dataset at the current parameters (no updates).
double dataset_loss(const Model& m, const Dataset& data);

void save_model(const Model& m, const std::string& path);
Model load_model(const std::string& path);

}  // namespace wle
