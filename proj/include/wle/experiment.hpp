#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wle/metrics.hpp"
#include "wle/nn.hpp"
#include "wle/synthetic.hpp"

namespace wle {

/**
 * Layer-sweep benchmark: for every (embedding, depth) cell, train
 * runs_per_dataset fresh models on each of num_datasets generated datasets
 * and report the task metric on the training data (the protocol has no
 * held-out split).  Datasets are cached as JSONL under cache_dir keyed by
 * (task, seed, index).
 */
struct BenchmarkConfig {
  Task task = Task::Classification;
  std::vector<EmbeddingVariant> variants = {
      EmbeddingVariant::Atomic, EmbeddingVariant::NaiveWl,
      EmbeddingVariant::Cwl, EmbeddingVariant::Gwl};
  int min_layers = 1;
  int max_layers = 6;
  int num_datasets = 3;
  int runs_per_dataset = 5;
  int dim = 32;
  double alpha = 0.01;
  int epochs = 150;
  int batch_size = 32;
  int wl_iters = 1;
  uint64_t seed = 0;
  int threads = 1;
  std::string cache_dir;
  GeneratorSpec generator;  // task field is overridden by `task`
};

struct BenchmarkCell {
  Task task = Task::Classification;
  EmbeddingVariant variant = EmbeddingVariant::Atomic;
  int layers = 0;
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> trials;  // metric per (dataset, run)
};

std::vector<BenchmarkCell> run_benchmark(const BenchmarkConfig& cfg);

// CSV with header task,embedding,layers,mean,std.
void write_benchmark_csv(const std::vector<BenchmarkCell>& cells,
                       std::ostream& out);

// Deterministic tail split; records alternate classes, so the split is
// stratified.  eval_fraction of the records (rounded down, at least 1) form
// the eval set.
void split_dataset(const Dataset& data, double eval_fraction, Dataset& train,
                   Dataset& eval_set);

// The generated dataset for (task, seed, index), read from cache_dir when
// present, generated and written there otherwise.
Dataset load_or_generate_dataset(const GeneratorSpec& spec, uint64_t seed,
                                 int index, const std::string& cache_dir);

// Per-trial RNG stream derived from the experiment seed.
uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b, uint64_t c,
                     uint64_t d = 0);

/**
 * Trainability comparison on a detection dataset: an atomic embedding with
 * one graph-convolution layer against a naive WL embedding with no layers
 * (readout only), identical width and budget.  Losses are mean training-set
 * losses after training.
 */
struct HardnessResult {
  int dim = 0;
  double atomic_gcn_loss = 0.0;
  double wl_readout_loss = 0.0;
  double ratio = 0.0;  // atomic_gcn_loss / wl_readout_loss
};

HardnessResult run_hardness(const Dataset& detection_data, int dim,
                            double alpha, int epochs, int batch_size,
                            uint64_t seed);

}  // namespace wle
