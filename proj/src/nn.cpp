#include "wle/nn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "wle/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace wle {

const char* task_name(Task t) {
  return t == Task::Classification ? "detection" : "counting";
}

Task task_from_name(const std::string& name) {
  if (name == "detection" || name == "classification")
    return Task::Classification;
  if (name == "counting" || name == "regression") return Task::Regression;
  throw FormatError("unknown task '" + name + "'");
}

ad::Tensor normalized_adjacency(const Graph& g) {
  const int n = g.num_nodes;
  std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double di = 1.0 / std::sqrt(g.degree(i) + 1.0);
    a[static_cast<size_t>(i) * n + i] = di * di;
    for (int j : g.adj[i])
      a[static_cast<size_t>(i) * n + j] =
          di / std::sqrt(g.degree(j) + 1.0);
  }
  return ad::Tensor::constant(n, n, a);
}

ad::Tensor gcn_layer(const Graph& g, const ad::Tensor& h,
                     const GcnLayerParams& p) {
  ad::Tensor agg = ad::matmul(normalized_adjacency(g), h);
  return ad::relu(ad::add_row_broadcast(ad::matmul(agg, p.weight), p.bias));
}

std::vector<ad::Tensor> Model::parameters() const {
  std::vector<ad::Tensor> out = embedding.parameters();
  for (const auto& layer : gcn) {
    out.push_back(layer.weight);
    out.push_back(layer.bias);
  }
  out.push_back(head_w);
  out.push_back(head_b);
  return out;
}

std::vector<std::string> Model::parameter_names() const {
  std::vector<std::string> out = embedding.parameter_names();
  for (size_t l = 0; l < gcn.size(); ++l) {
    out.push_back("gcn" + std::to_string(l) + ".weight");
    out.push_back("gcn" + std::to_string(l) + ".bias");
  }
  out.push_back("head.w");
  out.push_back("head.b");
  return out;
}

LabelRegistry build_registry(const Dataset& data, EmbeddingVariant variant,
                             int wl_iters, int num_labels) {
  LabelRegistry reg;
  // Alphabet labels first so that (l, {}) lands at index l.
  for (int l = 1; l <= num_labels; ++l) reg.intern(make_center_label(l));
  for (const auto& rec : data)
    intern_for_variant(rec.graph, variant, wl_iters, reg);
  return reg;
}

Model init_model(const ModelSpec& spec, LabelRegistry registry, int num_labels,
                 uint64_t seed) {
  Model m;
  m.spec = spec;
  m.num_labels = num_labels;
  m.registry = std::move(registry);

  std::mt19937_64 rng(seed);
  m.embedding = init_embedding(spec.variant, m.registry.size(), spec.dim,
                               spec.wl_iters, rng, spec.d1, spec.d2);
  m.spec.d1 = m.embedding.d1;
  m.spec.d2 = m.embedding.d2;

  std::uniform_real_distribution<double> dist(-1.0 / std::sqrt(spec.dim),
                                              1.0 / std::sqrt(spec.dim));
  auto uniform_param = [&](int rows, int cols) {
    std::vector<double> data(static_cast<size_t>(rows) * cols);
    for (double& v : data) v = dist(rng);
    return ad::Tensor::parameter(rows, cols, data);
  };

  for (int l = 0; l < spec.layers; ++l) {
    GcnLayerParams layer;
    layer.weight = uniform_param(spec.dim, spec.dim);
    layer.bias = ad::Tensor::zeros(1, spec.dim, true);
    m.gcn.push_back(layer);
  }
  m.head_w = uniform_param(spec.dim, m.head_out());
  m.head_b = ad::Tensor::zeros(1, m.head_out(), true);
  return m;
}

ad::Tensor model_output(const Model& m, const Graph& g) {
  ad::Tensor h = embed_nodes(m.embedding, m.registry, g);
  for (const auto& layer : m.gcn) h = gcn_layer(g, h, layer);
  ad::Tensor readout = ad::sum_rows(h);
  return ad::add(ad::matmul(readout, m.head_w), m.head_b);
}

double predict(const Model& m, const Graph& g) {
  ad::Tensor out = model_output(m, g);
  if (m.spec.task == Task::Regression) return out.at(0, 0);
  return out.at(0, 1) - out.at(0, 0);
}

ad::Tensor sample_loss(const Model& m, const Graph& g, double target) {
  ad::Tensor out = model_output(m, g);
  if (m.spec.task == Task::Regression) return ad::squared_loss(out, target);
  if (target != 0.0 && target != 1.0)
    throw TargetTypeMismatch("classification target must be 0 or 1, got " +
                             std::to_string(target));
  return ad::softmax_cross_entropy(out, static_cast<int>(target));
}

void adam_step(const std::vector<ad::Tensor>& params, AdamState& state,
               double alpha) {
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  if (state.m.empty()) {
    for (const auto& p : params) {
      state.m.emplace_back(p.values().size(), 0.0);
      state.v.emplace_back(p.values().size(), 0.0);
    }
  }
  ++state.step;
  double c1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
  double c2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
  for (size_t k = 0; k < params.size(); ++k) {
    auto& value = const_cast<ad::Tensor&>(params[k]).values();
    const auto& grad = params[k].grad();
    auto& mk = state.m[k];
    auto& vk = state.v[k];
    for (size_t i = 0; i < value.size(); ++i) {
      double g = grad[i];
      mk[i] = beta1 * mk[i] + (1.0 - beta1) * g;
      vk[i] = beta2 * vk[i] + (1.0 - beta2) * g * g;
      double mhat = mk[i] / c1;
      double vhat = vk[i] / c2;
      value[i] -= alpha * mhat / (std::sqrt(vhat) + eps);
    }
  }
}

std::vector<double> train_model(Model& m, const Dataset& data,
                                const TrainConfig& cfg) {
  if (data.empty()) throw EmptyDataset("cannot train on an empty dataset");
  if (m.spec.task == Task::Classification)
    for (const auto& rec : data)
      if (rec.target != 0.0 && rec.target != 1.0)
        throw TargetTypeMismatch("classification target must be 0 or 1");

  std::vector<ad::Tensor> params = m.parameters();
  AdamState state;
  std::mt19937_64 rng(cfg.seed);
  std::vector<int> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> history;
  history.reserve(cfg.epochs);
  const int n = static_cast<int>(data.size());
  const int bs = std::max(1, cfg.batch_size);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_sum = 0.0;
    for (int start = 0; start < n; start += bs) {
      int end = std::min(n, start + bs);
      std::vector<ad::Tensor> losses;
      losses.reserve(end - start);
      for (int k = start; k < end; ++k) {
        const auto& rec = data[order[k]];
        losses.push_back(sample_loss(m, rec.graph, rec.target));
      }
      ad::Tensor batch_loss = ad::mean_of(losses);
      epoch_sum += batch_loss.scalar_value() * (end - start);
      ad::gradient_of(batch_loss, params);
      adam_step(params, state, cfg.alpha);
    }
    history.push_back(epoch_sum / n);
  }
  return history;
}

double dataset_loss(const Model& m, const Dataset& data) {
  if (data.empty()) throw EmptyDataset("no samples");
  double sum = 0.0;
  for (const auto& rec : data)
    sum += sample_loss(m, rec.graph, rec.target).scalar_value();
  return sum / static_cast<double>(data.size());
}

// ---- checkpoint serialization ----
//
// Little-endian binary layout: an 8-byte magic, u64 header fields (variant,
// task, layers, dim, wl_iters, d1, d2, num_labels, J), the registry entries,
// then each parameter as (name, rows, cols, row-major f64 data).

namespace {

constexpr char kMagic[8] = {'W', 'L', 'E', 'C', 'K', 'P', 'T', '1'};

void put_u64(std::ostream& out, uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), 8);
}

void put_i64(std::ostream& out, int64_t v) {
  out.write(reinterpret_cast<const char*>(&v), 8);
}

uint64_t get_u64(std::istream& in) {
  uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), 8);
  if (!in) throw FormatError("truncated checkpoint");
  return v;
}

int64_t get_i64(std::istream& in) {
  int64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), 8);
  if (!in) throw FormatError("truncated checkpoint");
  return v;
}

}  // namespace

void save_model(const Model& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(kMagic, 8);
  put_u64(out, 1);  // format version
  put_u64(out, static_cast<uint64_t>(m.spec.variant));
  put_u64(out, static_cast<uint64_t>(m.spec.task));
  put_u64(out, static_cast<uint64_t>(m.spec.layers));
  put_u64(out, static_cast<uint64_t>(m.spec.dim));
  put_u64(out, static_cast<uint64_t>(m.spec.wl_iters));
  put_u64(out, static_cast<uint64_t>(m.embedding.d1));
  put_u64(out, static_cast<uint64_t>(m.embedding.d2));
  put_u64(out, static_cast<uint64_t>(m.num_labels));

  put_u64(out, static_cast<uint64_t>(m.registry.size()));
  for (const auto& e : m.registry.entries()) {
    put_i64(out, e.center);
    put_u64(out, e.multiset.size());
    for (int v : e.multiset) put_i64(out, v);
  }

  std::vector<ad::Tensor> params = m.parameters();
  std::vector<std::string> names = m.parameter_names();
  put_u64(out, params.size());
  for (size_t k = 0; k < params.size(); ++k) {
    put_u64(out, names[k].size());
    out.write(names[k].data(), static_cast<std::streamsize>(names[k].size()));
    put_u64(out, static_cast<uint64_t>(params[k].rows()));
    put_u64(out, static_cast<uint64_t>(params[k].cols()));
    const auto& v = params[k].values();
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
  }
  if (!out) throw IoError("write failed for " + path);
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || !std::equal(magic, magic + 8, kMagic))
    throw FormatError(path + " is not a model checkpoint");
  if (get_u64(in) != 1) throw FormatError("unsupported checkpoint version");

  ModelSpec spec;
  spec.variant = static_cast<EmbeddingVariant>(get_u64(in));
  spec.task = static_cast<Task>(get_u64(in));
  spec.layers = static_cast<int>(get_u64(in));
  spec.dim = static_cast<int>(get_u64(in));
  spec.wl_iters = static_cast<int>(get_u64(in));
  spec.d1 = static_cast<int>(get_u64(in));
  spec.d2 = static_cast<int>(get_u64(in));
  int num_labels = static_cast<int>(get_u64(in));

  LabelRegistry reg;
  uint64_t entries = get_u64(in);
  for (uint64_t j = 0; j < entries; ++j) {
    ExtendedLabel e;
    e.center = static_cast<int>(get_i64(in));
    uint64_t count = get_u64(in);
    e.multiset.resize(count);
    for (uint64_t k = 0; k < count; ++k)
      e.multiset[k] = static_cast<int>(get_i64(in));
    reg.intern(e);
  }

  Model m = init_model(spec, std::move(reg), num_labels, 0);
  std::vector<ad::Tensor> params = m.parameters();
  std::vector<std::string> names = m.parameter_names();
  uint64_t count = get_u64(in);
  if (count != params.size())
    throw FormatError("checkpoint parameter count mismatch");
  for (size_t k = 0; k < params.size(); ++k) {
    uint64_t len = get_u64(in);
    std::string name(len, '\0');
    in.read(name.data(), static_cast<std::streamsize>(len));
    if (name != names[k]) throw FormatError("unexpected parameter " + name);
    int rows = static_cast<int>(get_u64(in));
    int cols = static_cast<int>(get_u64(in));
    if (rows != params[k].rows() || cols != params[k].cols())
      throw FormatError("parameter shape mismatch for " + name);
    auto& v = params[k].values();
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!in) throw FormatError("truncated checkpoint");
  }
  return m;
}

}  // namespace wle
