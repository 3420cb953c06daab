#include "wle/experiment.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <thread>

#include "wle/errors.hpp"

namespace wle {

uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b, uint64_t c,
                     uint64_t d) {
  // splitmix64 over the packed inputs
  uint64_t x = base;
  for (uint64_t v : {a, b, c, d}) {
    x += 0x9e3779b97f4a7c15ull + v;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    x = z ^ (z >> 31);
  }
  return x;
}

void split_dataset(const Dataset& data, double eval_fraction, Dataset& train,
                   Dataset& eval_set) {
  if (data.empty()) throw EmptyDataset("cannot split an empty dataset");
  size_t eval_count = static_cast<size_t>(
      std::floor(static_cast<double>(data.size()) * eval_fraction));
  eval_count = std::min(std::max<size_t>(eval_count, 1), data.size() - 1);
  size_t train_count = data.size() - eval_count;
  train.assign(data.begin(), data.begin() + train_count);
  eval_set.assign(data.begin() + train_count, data.end());
}

Dataset load_or_generate_dataset(const GeneratorSpec& spec, uint64_t seed,
                                 int index, const std::string& cache_dir) {
  std::string path;
  if (!cache_dir.empty()) {
    std::filesystem::create_directories(cache_dir);
    path = cache_dir + "/" + task_name(spec.task) + "_" +
           std::to_string(seed) + "_" + std::to_string(index) + ".jsonl";
    if (std::filesystem::exists(path)) return read_dataset_jsonl(path);
  }
  Dataset data = generate_dataset(spec, derive_seed(seed, 1, index, 0));
  if (!path.empty()) write_dataset_jsonl(data, path);
  return data;
}

namespace {

struct Trial {
  size_t cell = 0;
  int dataset_index = 0;
  int run_index = 0;
};

// Metric is computed on the training data itself: the protocol has no
// held-out split, and the curves measure how well each embedding lets the
// model fit the task rather than transfer.
double run_trial(const BenchmarkConfig& cfg, const Dataset& data,
                 EmbeddingVariant variant, int layers, uint64_t model_seed) {
  ModelSpec spec;
  spec.variant = variant;
  spec.task = cfg.task;
  spec.layers = layers;
  spec.dim = cfg.dim;
  spec.wl_iters = cfg.wl_iters;
  int num_labels = cfg.generator.num_node_labels;
  LabelRegistry reg = build_registry(data, variant, cfg.wl_iters, num_labels);
  Model model = init_model(spec, std::move(reg), num_labels, model_seed);

  TrainConfig tc;
  tc.alpha = cfg.alpha;
  tc.epochs = cfg.epochs;
  tc.batch_size = cfg.batch_size;
  tc.seed = derive_seed(model_seed, 7, 0, 0);
  train_model(model, data, tc);
  return evaluate_model(model, data);
}

}  // namespace

std::vector<BenchmarkCell> run_benchmark(const BenchmarkConfig& cfg) {
  GeneratorSpec gen = cfg.generator;
  gen.task = cfg.task;

  std::vector<Dataset> datasets(cfg.num_datasets);
  for (int i = 0; i < cfg.num_datasets; ++i)
    datasets[i] = load_or_generate_dataset(gen, cfg.seed, i, cfg.cache_dir);

  std::vector<BenchmarkCell> cells;
  for (EmbeddingVariant v : cfg.variants)
    for (int l = cfg.min_layers; l <= cfg.max_layers; ++l) {
      BenchmarkCell cell;
      cell.task = cfg.task;
      cell.variant = v;
      cell.layers = l;
      cell.trials.resize(
          static_cast<size_t>(cfg.num_datasets) * cfg.runs_per_dataset, 0.0);
      cells.push_back(std::move(cell));
    }

  std::vector<Trial> trials;
  for (size_t c = 0; c < cells.size(); ++c)
    for (int i = 0; i < cfg.num_datasets; ++i)
      for (int r = 0; r < cfg.runs_per_dataset; ++r)
        trials.push_back({c, i, r});

  auto execute = [&](const Trial& t) {
    BenchmarkCell& cell = cells[t.cell];
    uint64_t model_seed =
        derive_seed(cfg.seed, static_cast<uint64_t>(cell.variant) + 10,
                    static_cast<uint64_t>(cell.layers), t.dataset_index,
                    t.run_index);
    double metric = run_trial(cfg, datasets[t.dataset_index], cell.variant,
                              cell.layers, model_seed);
    cell.trials[static_cast<size_t>(t.dataset_index) * cfg.runs_per_dataset +
                t.run_index] = metric;
  };

  if (cfg.threads <= 1) {
    for (const Trial& t : trials) execute(t);
  } else {
    // Trials are independent and write disjoint slots, so a shared cursor is
    // the only coordination needed; results stay deterministic.
    std::atomic<size_t> cursor{0};
    auto worker = [&]() {
      for (size_t k = cursor.fetch_add(1); k < trials.size();
           k = cursor.fetch_add(1))
        execute(trials[k]);
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < cfg.threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (auto& cell : cells) {
    double sum = 0.0;
    for (double v : cell.trials) sum += v;
    cell.mean = sum / static_cast<double>(cell.trials.size());
    double sq = 0.0;
    for (double v : cell.trials) sq += (v - cell.mean) * (v - cell.mean);
    cell.stddev = cell.trials.size() > 1
                      ? std::sqrt(sq / static_cast<double>(cell.trials.size() - 1))
                      : 0.0;
  }
  return cells;
}

void write_benchmark_csv(const std::vector<BenchmarkCell>& cells,
                       std::ostream& out) {
  out << "task,embedding,layers,mean,std\n";
  for (const auto& c : cells)
    out << task_name(c.task) << ',' << variant_name(c.variant) << ','
        << c.layers << ',' << c.mean << ',' << c.stddev << '\n';
}

HardnessResult run_hardness(const Dataset& detection_data, int dim,
                            double alpha, int epochs, int batch_size,
                            uint64_t seed) {
  const int num_labels = 5;
  TrainConfig tc;
  tc.alpha = alpha;
  tc.epochs = epochs;
  tc.batch_size = batch_size;

  auto final_loss = [&](EmbeddingVariant variant, int layers,
                        uint64_t model_seed) {
    ModelSpec spec;
    spec.variant = variant;
    spec.task = Task::Classification;
    spec.layers = layers;
    spec.dim = dim;
    LabelRegistry reg =
        build_registry(detection_data, variant, spec.wl_iters, num_labels);
    Model model = init_model(spec, std::move(reg), num_labels, model_seed);
    TrainConfig cfg = tc;
    cfg.seed = derive_seed(model_seed, 13, 0, 0);
    train_model(model, detection_data, cfg);
    return dataset_loss(model, detection_data);
  };

  HardnessResult res;
  res.dim = dim;
  res.atomic_gcn_loss =
      final_loss(EmbeddingVariant::Atomic, 1, derive_seed(seed, 2, dim, 0));
  res.wl_readout_loss =
      final_loss(EmbeddingVariant::NaiveWl, 0, derive_seed(seed, 3, dim, 0));
  res.ratio = res.atomic_gcn_loss / res.wl_readout_loss;
  return res;
}

}  // namespace wle
