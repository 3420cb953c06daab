#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "wle/errors.hpp"
#include "wle/experiment.hpp"

using namespace wle;

namespace {

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

BenchmarkConfig tiny_config() {
  BenchmarkConfig cfg;
  cfg.task = Task::Classification;
  cfg.variants = {EmbeddingVariant::Atomic, EmbeddingVariant::NaiveWl};
  cfg.min_layers = 1;
  cfg.max_layers = 2;
  cfg.num_datasets = 1;
  cfg.runs_per_dataset = 2;
  cfg.dim = 4;
  cfg.epochs = 3;
  cfg.batch_size = 8;
  cfg.seed = 21;
  cfg.generator.per_class = 10;
  return cfg;
}

}  // namespace

TEST_CASE("derived seeds separate coordinate streams") {
  uint64_t a = derive_seed(1, 2, 3, 4);
  CHECK(a == derive_seed(1, 2, 3, 4));
  CHECK(a != derive_seed(1, 2, 3, 5));
  CHECK(a != derive_seed(1, 2, 4, 3));
  CHECK(a != derive_seed(2, 2, 3, 4));
  CHECK(derive_seed(1, 2, 3, 4, 1) != a);
}

TEST_CASE("tail split keeps order and respects bounds") {
  Dataset data;
  for (int i = 0; i < 10; ++i)
    data.push_back({build_graph(1, {1}, {}), static_cast<double>(i)});
  Dataset train, eval_set;
  split_dataset(data, 0.2, train, eval_set);
  REQUIRE(train.size() == 8);
  REQUIRE(eval_set.size() == 2);
  CHECK(train.front().target == 0.0);
  CHECK(eval_set.front().target == 8.0);
  CHECK(eval_set.back().target == 9.0);

  // Extreme fractions still leave both sides nonempty.
  split_dataset(data, 0.0, train, eval_set);
  CHECK(eval_set.size() == 1);
  split_dataset(data, 1.0, train, eval_set);
  CHECK(train.size() == 1);
  CHECK_THROWS_AS(split_dataset({}, 0.2, train, eval_set), EmptyDataset);
}

TEST_CASE("dataset cache round trips through jsonl") {
  TempDir dir("wle_cache_test");
  GeneratorSpec spec;
  spec.per_class = 4;
  Dataset first = load_or_generate_dataset(spec, 5, 0, dir.path.string());
  CHECK(std::filesystem::exists(dir.path / "detection_5_0.jsonl"));
  Dataset second = load_or_generate_dataset(spec, 5, 0, dir.path.string());
  REQUIRE(first.size() == second.size());
  for (size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].graph.edges == second[i].graph.edges);
    CHECK(first[i].graph.labels == second[i].graph.labels);
    CHECK(first[i].target == second[i].target);
  }
  // Different index means a different dataset.
  Dataset other = load_or_generate_dataset(spec, 5, 1, dir.path.string());
  bool differs = other.size() != first.size();
  for (size_t i = 0; i < first.size() && !differs; ++i)
    differs = first[i].graph.edges != other[i].graph.edges;
  CHECK(differs);
}

TEST_CASE("layer sweep fills every cell deterministically") {
  TempDir dir("wle_bench_test");
  BenchmarkConfig cfg = tiny_config();
  cfg.cache_dir = dir.path.string();
  std::vector<BenchmarkCell> cells = run_benchmark(cfg);
  REQUIRE(cells.size() == 4);  // 2 variants x 2 depths
  for (const auto& cell : cells) {
    CHECK(cell.trials.size() == 2);
    for (double v : cell.trials) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);  // detection metric is an AUC
    }
    CHECK(cell.mean == doctest::Approx((cell.trials[0] + cell.trials[1]) / 2));
  }
  std::vector<BenchmarkCell> again = run_benchmark(cfg);
  for (size_t i = 0; i < cells.size(); ++i)
    CHECK(cells[i].trials == again[i].trials);
}

TEST_CASE("csv layout") {
  BenchmarkCell cell;
  cell.task = Task::Classification;
  cell.variant = EmbeddingVariant::Cwl;
  cell.layers = 3;
  cell.mean = 0.75;
  cell.stddev = 0.025;
  std::ostringstream out;
  write_benchmark_csv({cell}, out);
  CHECK(out.str() == "task,embedding,layers,mean,std\n"
                     "detection,cwl,3,0.75,0.025\n");
}

TEST_CASE("single-trial cells report zero spread") {
  TempDir dir("wle_bench_single");
  BenchmarkConfig cfg = tiny_config();
  cfg.cache_dir = dir.path.string();
  cfg.variants = {EmbeddingVariant::Atomic};
  cfg.max_layers = 1;
  cfg.runs_per_dataset = 1;
  std::vector<BenchmarkCell> cells = run_benchmark(cfg);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].stddev == 0.0);
}

TEST_CASE("hardness probe trains both contenders") {
  GeneratorSpec spec;
  spec.per_class = 8;
  Dataset data = generate_dataset(spec, 77);
  HardnessResult res = run_hardness(data, 4, 0.01, 3, 8, 1);
  CHECK(res.dim == 4);
  CHECK(res.atomic_gcn_loss > 0.0);
  CHECK(res.wl_readout_loss > 0.0);
  CHECK(res.ratio ==
        doctest::Approx(res.atomic_gcn_loss / res.wl_readout_loss));
}
