#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "wle/errors.hpp"
#include "wle/experiment.hpp"
#include "wle/metrics.hpp"
#include "wle/nn.hpp"
#include "wle/smiles.hpp"
#include "wle/synthetic.hpp"
#include "wle/theory.hpp"
#include "wle/wl.hpp"

namespace {

using namespace wle;

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw IoError("cannot open " + path + " for writing");
  return file;
}

Dataset load_input(const std::string& path, const std::string& smiles) {
  if (!smiles.empty()) {
    Dataset data;
    data.push_back({parse_smiles(smiles), 0.0});
    return data;
  }
  if (path.empty()) throw EmptyInput("need --input or --smiles");
  return read_dataset_jsonl(path);
}

std::string format_entry(int index, const ExtendedLabel& e) {
  std::ostringstream out;
  out << index << '\t';
  if (e.center == kEmptyCenter && !e.multiset.empty())
    out << '-';
  else
    out << e.center;
  out << '\t' << '{';
  for (size_t i = 0; i < e.multiset.size(); ++i) {
    if (i) out << ',';
    out << e.multiset[i];
  }
  out << '}';
  return out.str();
}

struct GenArgs {
  std::string task = "detection";
  std::string out;
  int per_class = 300;
  double thin_prob = 0.25;
  double cross_prob = 0.1;
  int num_labels = 5;
  int max_attempts = 10000;
  uint64_t seed = 0;
  bool verify = false;
};

int run_gen(const GenArgs& a) {
  GeneratorSpec spec;
  spec.task = task_from_name(a.task);
  spec.per_class = a.per_class;
  spec.thin_prob = a.thin_prob;
  spec.cross_prob = a.cross_prob;
  spec.num_node_labels = a.num_labels;
  spec.max_attempts = a.max_attempts;
  Dataset data = generate_dataset(spec, a.seed);
  if (a.verify) {
    int bad = verify_dataset(data, spec);
    std::cerr << "verified " << data.size() << " records, " << bad
              << " violations\n";
    if (bad > 0) return 1;
  }
  std::ofstream file;
  std::ostream& out = open_output(a.out, file);
  for (const auto& rec : data)
    out << graph_to_json_line(rec.graph, rec.target) << '\n';
  return 0;
}

struct ParseArgs {
  std::string smiles;
  std::string file;
  std::string out;
};

int run_parse(const ParseArgs& a) {
  if (a.smiles.empty() == a.file.empty())
    throw EmptyInput("need exactly one of --smiles or --file");
  std::ofstream out_file;
  std::ostream& out = open_output(a.out, out_file);
  if (!a.smiles.empty()) {
    out << graph_to_json_line(parse_smiles(a.smiles), 0.0, false) << '\n';
    return 0;
  }
  std::ifstream in(a.file);
  if (!in) throw IoError("cannot open " + a.file);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out << graph_to_json_line(parse_smiles(line), 0.0, false) << '\n';
  }
  return 0;
}

struct ExpandArgs {
  std::string input;
  std::string smiles;
  int iters = 1;
};

int run_expand(const ExpandArgs& a) {
  Dataset data = load_input(a.input, a.smiles);
  LabelRegistry registry;
  std::vector<int> sizes(static_cast<size_t>(a.iters) + 1, 0);
  for (const auto& rec : data) {
    RefinementResult res = wl_refine(rec.graph, a.iters, registry);
    for (size_t t = 0; t < res.registry_sizes.size(); ++t)
      sizes[t] = std::max(sizes[t], res.registry_sizes[t]);
  }
  for (size_t t = 0; t < sizes.size(); ++t)
    std::cout << "iter " << t << " J " << sizes[t] << '\n';
  for (int j = 1; j <= registry.size(); ++j)
    std::cout << format_entry(j, registry.entry(j)) << '\n';
  return 0;
}

struct TrainArgs {
  std::string data;
  std::string out;
  std::string history;
  std::string task = "detection";
  std::string embedding = "wl";
  int layers = 1;
  int dim = 32;
  int iters = 1;
  int epochs = 100;
  int batch = 32;
  double alpha = 0.01;
  int num_labels = 0;
  uint64_t seed = 0;
};

int run_train(const TrainArgs& a) {
  Dataset data = read_dataset_jsonl(a.data);
  ModelSpec spec;
  spec.variant = variant_from_name(a.embedding);
  spec.task = task_from_name(a.task);
  spec.layers = a.layers;
  spec.dim = a.dim;
  spec.wl_iters = a.iters;
  int num_labels = a.num_labels;
  if (num_labels == 0)
    for (const auto& rec : data)
      num_labels = std::max(num_labels, rec.graph.num_labels);
  LabelRegistry reg = build_registry(data, spec.variant, spec.wl_iters, num_labels);
  Model model = init_model(spec, std::move(reg), num_labels, a.seed);

  TrainConfig cfg;
  cfg.alpha = a.alpha;
  cfg.epochs = a.epochs;
  cfg.batch_size = a.batch;
  cfg.seed = derive_seed(a.seed, 7, 0, 0);
  std::vector<double> history = train_model(model, data, cfg);

  std::ofstream file;
  std::ostream& out = open_output(a.history, file);
  out << "epoch,loss\n";
  for (size_t e = 0; e < history.size(); ++e)
    out << e + 1 << ',' << history[e] << '\n';
  if (!a.out.empty()) save_model(model, a.out);
  return 0;
}

struct EvalArgs {
  std::string model;
  std::string data;
  std::string shuffle;
  uint64_t seed = 0;
};

int run_eval(const EvalArgs& a) {
  Model model = load_model(a.model);
  Dataset data = read_dataset_jsonl(a.data);
  const char* metric =
      model.spec.task == Task::Regression ? "mae" : "auc";
  std::cout << "metric,value\n";
  if (a.shuffle.empty()) {
    std::cout << metric << ',' << evaluate_model(model, data) << '\n';
    std::cout << "loss," << dataset_loss(model, data) << '\n';
    return 0;
  }
  ShuffleMode mode;
  if (a.shuffle == "atom")
    mode = ShuffleMode::Atom;
  else if (a.shuffle == "nl")
    mode = ShuffleMode::Neighborhood;
  else
    throw FormatError("--shuffle must be atom or nl");
  ShuffleResult res = shuffle_importance(model, data, mode, a.seed);
  std::cout << "baseline_" << metric << ',' << res.baseline << '\n';
  std::cout << "shuffled_" << metric << ',' << res.shuffled << '\n';
  std::cout << "delta," << res.delta << '\n';
  return 0;
}

struct InspectArgs {
  std::string model;
  bool summary = false;
};

int run_inspect(const InspectArgs& a) {
  Model model = load_model(a.model);
  WeightMagnitudes mag = cwl_weight_magnitudes(model);
  if (a.summary) {
    std::cout << "metric,value\n";
    std::cout << "center_mean," << mag.center_mean << '\n';
    std::cout << "neighbor_mean," << mag.neighbor_mean << '\n';
    std::cout << "neighbor_to_center,"
              << mag.neighbor_mean / mag.center_mean << '\n';
    return 0;
  }
  for (const auto& row : mag.scaled_abs) {
    for (size_t c = 0; c < row.size(); ++c)
      std::cout << (c ? "," : "") << row[c];
    std::cout << '\n';
  }
  return 0;
}

struct TheoremArgs {
  int kmax = 3;
  int mmax = 3;
  double alpha = 1.0;
  std::string graphs;
  int dim = 0;
};

int run_theorem(const TheoremArgs& a) {
  if (!a.graphs.empty()) {
    Dataset data = read_dataset_jsonl(a.graphs);
    std::vector<Graph> gs;
    gs.reserve(data.size());
    for (auto& rec : data) gs.push_back(std::move(rec.graph));
    int d = a.dim;
    if (d == 0)
      for (const Graph& g : gs) d += g.num_nodes;  // always enough rows
    WleDimensionality res = wle_max_dimensionality(gs, d);
    std::cout << "distinct_labels," << res.distinct_labels << '\n';
    std::cout << "rank," << res.rank << '\n';
    std::cout << "bound," << res.bound << '\n';
    std::cout << "K," << res.num_labels << '\n';
    std::cout << "M," << res.observed_m << '\n';
    return 0;
  }
  std::cout << "K,M,bound,rank,pass,bias_norm,ratio\n";
  bool all_pass = true;
  for (int k = 1; k <= a.kmax; ++k) {
    for (int m = 1; m <= a.mmax; ++m) {
      long long bound = k;
      for (int i = 0; i < k; ++i) bound *= m + 1;
      int rank = construction_rank(k, m, a.alpha);
      ReluConstruction c = relu_construction(k, m, a.alpha);
      double sq = 0.0;
      for (double b : c.bias) sq += b * b;
      double norm = std::sqrt(sq);
      double ratio = norm / std::pow(static_cast<double>(m), 1.5 * k);
      bool pass = rank == bound;
      all_pass = all_pass && pass;
      std::cout << k << ',' << m << ',' << bound << ',' << rank << ','
                << (pass ? "pass" : "fail") << ',' << norm << ',' << ratio
                << '\n';
    }
  }
  return all_pass ? 0 : 1;
}

struct BenchmarkArgs {
  std::string task = "detection";
  std::string out;
  std::string cache_dir;
  int datasets = 3;
  int runs = 5;
  int min_layers = 1;
  int max_layers = 6;
  int dim = 32;
  int epochs = 150;
  int batch = 32;
  int per_class = 300;
  int iters = 1;
  double alpha = 0.01;
  int threads = 1;
  uint64_t seed = 0;
};

int run_benchmark(const BenchmarkArgs& a) {
  BenchmarkConfig cfg;
  cfg.task = task_from_name(a.task);
  cfg.num_datasets = a.datasets;
  cfg.runs_per_dataset = a.runs;
  cfg.min_layers = a.min_layers;
  cfg.max_layers = a.max_layers;
  cfg.dim = a.dim;
  cfg.epochs = a.epochs;
  cfg.batch_size = a.batch;
  cfg.wl_iters = a.iters;
  cfg.alpha = a.alpha;
  cfg.threads = a.threads;
  cfg.seed = a.seed;
  cfg.cache_dir = a.cache_dir;
  cfg.generator.per_class = a.per_class;
  std::vector<BenchmarkCell> cells = wle::run_benchmark(cfg);
  std::ofstream file;
  std::ostream& out = open_output(a.out, file);
  write_benchmark_csv(cells, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weisfeiler-Lehman node embeddings for molecular graphs"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* cmd_gen = app.add_subcommand("gen", "generate a synthetic dataset");
  cmd_gen->add_option("--task", gen.task, "detection or counting");
  cmd_gen->add_option("--per-class", gen.per_class, "graphs per class");
  cmd_gen->add_option("--thin-prob", gen.thin_prob, "edge drop probability");
  cmd_gen->add_option("--cross-prob", gen.cross_prob, "cross-edge probability");
  cmd_gen->add_option("--labels", gen.num_labels, "node label alphabet size");
  cmd_gen->add_option("--max-attempts", gen.max_attempts, "rejection budget");
  cmd_gen->add_option("--seed", gen.seed, "generator seed");
  cmd_gen->add_option("-o,--out", gen.out, "output JSONL path (default stdout)");
  cmd_gen->add_flag("--verify", gen.verify, "re-check every record");

  ParseArgs parse;
  CLI::App* cmd_parse = app.add_subcommand("parse", "parse SMILES input");
  cmd_parse->add_option("--smiles", parse.smiles, "a single SMILES string");
  cmd_parse->add_option("--file", parse.file, "file with one SMILES per line");
  cmd_parse->add_option("-o,--out", parse.out, "output path (default stdout)");

  ExpandArgs expand;
  CLI::App* cmd_expand =
      app.add_subcommand("expand", "run label expansion and report J growth");
  cmd_expand->add_option("-i,--input", expand.input, "dataset JSONL");
  cmd_expand->add_option("--smiles", expand.smiles, "single SMILES input");
  cmd_expand->add_option("--iters", expand.iters, "refinement steps");

  TrainArgs train;
  CLI::App* cmd_train = app.add_subcommand("train", "train a model");
  cmd_train->add_option("-d,--data", train.data, "training JSONL")->required();
  cmd_train->add_option("-o,--out", train.out, "checkpoint path");
  cmd_train->add_option("--history", train.history,
                        "epoch,loss CSV path (default stdout)");
  cmd_train->add_option("--task", train.task, "detection or counting");
  cmd_train->add_option("--embedding", train.embedding,
                        "atomic, wl, cwl or gwl");
  cmd_train->add_option("--layers", train.layers, "graph-conv layers");
  cmd_train->add_option("--dim", train.dim, "embedding and hidden width");
  cmd_train->add_option("--iters", train.iters, "refinement steps");
  cmd_train->add_option("--epochs", train.epochs, "training epochs");
  cmd_train->add_option("--batch", train.batch, "minibatch size");
  cmd_train->add_option("--alpha", train.alpha, "learning rate");
  cmd_train->add_option("--labels", train.num_labels,
                        "alphabet size (default: largest in data)");
  cmd_train->add_option("--seed", train.seed, "model seed");

  EvalArgs eval;
  CLI::App* cmd_eval = app.add_subcommand("eval", "evaluate a checkpoint");
  cmd_eval->add_option("-m,--model", eval.model, "checkpoint path")->required();
  cmd_eval->add_option("-d,--data", eval.data, "dataset JSONL")->required();
  cmd_eval->add_option("--shuffle", eval.shuffle,
                       "importance probe: atom or nl");
  cmd_eval->add_option("--seed", eval.seed, "probe seed");

  InspectArgs inspect;
  CLI::App* cmd_inspect =
      app.add_subcommand("inspect-weights", "mix-matrix magnitude profile");
  cmd_inspect->add_option("-m,--model", inspect.model, "checkpoint path")
      ->required();
  cmd_inspect->add_flag("--summary", inspect.summary,
                        "per-half mean magnitudes instead of the matrix");

  TheoremArgs theorem;
  CLI::App* cmd_theorem = app.add_subcommand(
      "verify-theorem", "rank and norm checks for the ReLU construction");
  cmd_theorem->add_option("--kmax", theorem.kmax, "sweep K from 1 to this");
  cmd_theorem->add_option("--mmax", theorem.mmax, "sweep M from 1 to this");
  cmd_theorem->add_option("--alpha", theorem.alpha, "embedding scale");
  cmd_theorem->add_option("--graphs", theorem.graphs,
                          "JSONL dataset: span of its label histograms");
  cmd_theorem->add_option("--dim", theorem.dim, "width bound for --graphs");

  BenchmarkArgs bench;
  CLI::App* cmd_bench =
      app.add_subcommand("benchmark", "layer sweep over all embeddings");
  cmd_bench->add_option("--task", bench.task, "detection or counting");
  cmd_bench->add_option("-o,--out", bench.out, "CSV path (default stdout)");
  cmd_bench->add_option("--cache-dir", bench.cache_dir, "dataset cache directory");
  cmd_bench->add_option("--datasets", bench.datasets, "datasets per cell");
  cmd_bench->add_option("--runs", bench.runs, "runs per dataset");
  cmd_bench->add_option("--min-layers", bench.min_layers, "first depth");
  cmd_bench->add_option("--max-layers", bench.max_layers, "last depth");
  cmd_bench->add_option("--dim", bench.dim, "embedding and hidden width");
  cmd_bench->add_option("--epochs", bench.epochs, "training epochs");
  cmd_bench->add_option("--batch", bench.batch, "minibatch size");
  cmd_bench->add_option("--per-class", bench.per_class, "graphs per class");
  cmd_bench->add_option("--iters", bench.iters, "refinement steps");
  cmd_bench->add_option("--alpha", bench.alpha, "learning rate");
  cmd_bench->add_option("--threads", bench.threads, "worker threads");
  cmd_bench->add_option("--seed", bench.seed, "experiment seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_gen->parsed()) return run_gen(gen);
    if (cmd_parse->parsed()) return run_parse(parse);
    if (cmd_expand->parsed()) return run_expand(expand);
    if (cmd_train->parsed()) return run_train(train);
    if (cmd_eval->parsed()) return run_eval(eval);
    if (cmd_inspect->parsed()) return run_inspect(inspect);
    if (cmd_theorem->parsed()) return run_theorem(theorem);
    if (cmd_bench->parsed()) return run_benchmark(bench);
  } catch (const wle::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
