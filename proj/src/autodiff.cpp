#include "wle/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "wle/errors.hpp"

namespace wle::ad {

using detail::Node;

namespace {

void check(bool ok, const std::string& what) {
  if (!ok) throw DimensionMismatch(what);
}

std::shared_ptr<Node> make_leaf(int rows, int cols, std::vector<double> data,
                                bool requires_grad) {
  check(rows >= 0 && cols >= 0, "negative tensor shape");
  check(static_cast<int>(data.size()) == rows * cols,
        "data length does not match shape");
  auto n = std::make_shared<Node>();
  n->rows = rows;
  n->cols = cols;
  n->value = std::move(data);
  n->grad.assign(n->value.size(), 0.0);
  n->requires_grad = requires_grad;
  return n;
}

}  // namespace

Tensor make_op(int rows, int cols, std::vector<double> value,
               std::vector<Tensor> parents,
               std::function<void(Node&)> backprop) {
  auto n = std::make_shared<Node>();
  n->rows = rows;
  n->cols = cols;
  n->value = std::move(value);
  n->grad.assign(n->value.size(), 0.0);
  for (const Tensor& p : parents)
    if (p.requires_grad()) n->requires_grad = true;
  if (n->requires_grad) {
    for (const Tensor& p : parents) n->parents.push_back(p.node_);
    n->backprop = std::move(backprop);
  }
  Tensor t;
  t.node_ = std::move(n);
  return t;
}

Tensor Tensor::zeros(int rows, int cols, bool requires_grad) {
  Tensor t;
  t.node_ = make_leaf(rows, cols, std::vector<double>(rows * cols, 0.0),
                      requires_grad);
  return t;
}

Tensor Tensor::constant(int rows, int cols, const std::vector<double>& data) {
  Tensor t;
  t.node_ = make_leaf(rows, cols, data, false);
  return t;
}

Tensor Tensor::scalar(double value) { return constant(1, 1, {value}); }

Tensor Tensor::parameter(int rows, int cols, const std::vector<double>& data) {
  Tensor t;
  t.node_ = make_leaf(rows, cols, data, true);
  return t;
}

int Tensor::rows() const { return node_ ? node_->rows : 0; }
int Tensor::cols() const { return node_ ? node_->cols : 0; }
bool Tensor::requires_grad() const { return node_ && node_->requires_grad; }

double Tensor::at(int r, int c) const {
  if (!node_ || r < 0 || r >= node_->rows || c < 0 || c >= node_->cols)
    throw IndexOutOfRange("tensor element out of range");
  return node_->value[static_cast<size_t>(r) * node_->cols + c];
}

double Tensor::scalar_value() const {
  if (!node_ || node_->rows != 1 || node_->cols != 1)
    throw NonScalarOutput("expected a 1x1 tensor");
  return node_->value[0];
}

std::vector<double>& Tensor::values() { return node_->value; }
const std::vector<double>& Tensor::values() const { return node_->value; }
std::vector<double>& Tensor::grad() { return node_->grad; }
const std::vector<double>& Tensor::grad() const { return node_->grad; }

namespace {

Tensor elementwise(const Tensor& a, const Tensor& b, const char* name,
                   double (*fwd)(double, double),
                   void (*bwd)(double, double, double, double&, double&)) {
  check(a.rows() == b.rows() && a.cols() == b.cols(),
        std::string(name) + ": shape mismatch");
  const auto& av = a.values();
  const auto& bv = b.values();
  std::vector<double> out(av.size());
  for (size_t i = 0; i < av.size(); ++i) out[i] = fwd(av[i], bv[i]);
  return make_op(a.rows(), a.cols(), std::move(out), {a, b}, [bwd](Node& n) {
    Node& pa = *n.parents[0];
    Node& pb = *n.parents[1];
    for (size_t i = 0; i < n.value.size(); ++i) {
      double ga = 0.0, gb = 0.0;
      bwd(pa.value[i], pb.value[i], n.grad[i], ga, gb);
      pa.grad[i] += ga;
      pb.grad[i] += gb;
    }
  });
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  return elementwise(
      a, b, "add", [](double x, double y) { return x + y; },
      [](double, double, double g, double& ga, double& gb) {
        ga = g;
        gb = g;
      });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return elementwise(
      a, b, "sub", [](double x, double y) { return x - y; },
      [](double, double, double g, double& ga, double& gb) {
        ga = g;
        gb = -g;
      });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  return elementwise(
      a, b, "mul", [](double x, double y) { return x * y; },
      [](double x, double y, double g, double& ga, double& gb) {
        ga = g * y;
        gb = g * x;
      });
}

Tensor scale(const Tensor& a, double s) {
  std::vector<double> out = a.values();
  for (double& v : out) v *= s;
  return make_op(a.rows(), a.cols(), std::move(out), {a}, [s](Node& n) {
    Node& p = *n.parents[0];
    for (size_t i = 0; i < n.value.size(); ++i) p.grad[i] += s * n.grad[i];
  });
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  check(a.cols() == b.rows(), "matmul: inner dimensions differ");
  const int m = a.rows(), k = a.cols(), n = b.cols();
  const auto& av = a.values();
  const auto& bv = b.values();
  std::vector<double> out(static_cast<size_t>(m) * n, 0.0);
  for (int i = 0; i < m; ++i)
    for (int p = 0; p < k; ++p) {
      double x = av[static_cast<size_t>(i) * k + p];
      if (x == 0.0) continue;
      const double* brow = &bv[static_cast<size_t>(p) * n];
      double* orow = &out[static_cast<size_t>(i) * n];
      for (int j = 0; j < n; ++j) orow[j] += x * brow[j];
    }
  return make_op(m, n, std::move(out), {a, b}, [m, k, n](Node& nd) {
    Node& pa = *nd.parents[0];
    Node& pb = *nd.parents[1];
    // dA = dC B^T, dB = A^T dC
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        double g = nd.grad[static_cast<size_t>(i) * n + j];
        if (g == 0.0) continue;
        for (int p = 0; p < k; ++p) {
          pa.grad[static_cast<size_t>(i) * k + p] +=
              g * pb.value[static_cast<size_t>(p) * n + j];
          pb.grad[static_cast<size_t>(p) * n + j] +=
              g * pa.value[static_cast<size_t>(i) * k + p];
        }
      }
  });
}

Tensor transpose(const Tensor& a) {
  const int m = a.rows(), n = a.cols();
  const auto& av = a.values();
  std::vector<double> out(av.size());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      out[static_cast<size_t>(j) * m + i] = av[static_cast<size_t>(i) * n + j];
  return make_op(n, m, std::move(out), {a}, [m, n](Node& nd) {
    Node& p = *nd.parents[0];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        p.grad[static_cast<size_t>(i) * n + j] +=
            nd.grad[static_cast<size_t>(j) * m + i];
  });
}

Tensor relu(const Tensor& a) {
  std::vector<double> out = a.values();
  for (double& v : out) v = v > 0.0 ? v : 0.0;
  return make_op(a.rows(), a.cols(), std::move(out), {a}, [](Node& n) {
    Node& p = *n.parents[0];
    for (size_t i = 0; i < n.value.size(); ++i)
      if (p.value[i] > 0.0) p.grad[i] += n.grad[i];
  });
}

Tensor sigmoid(const Tensor& a) {
  std::vector<double> out = a.values();
  for (double& v : out) v = 1.0 / (1.0 + std::exp(-v));
  return make_op(a.rows(), a.cols(), std::move(out), {a}, [](Node& n) {
    Node& p = *n.parents[0];
    for (size_t i = 0; i < n.value.size(); ++i) {
      double s = n.value[i];
      p.grad[i] += n.grad[i] * s * (1.0 - s);
    }
  });
}

Tensor one_minus(const Tensor& a) {
  std::vector<double> out = a.values();
  for (double& v : out) v = 1.0 - v;
  return make_op(a.rows(), a.cols(), std::move(out), {a}, [](Node& n) {
    Node& p = *n.parents[0];
    for (size_t i = 0; i < n.value.size(); ++i) p.grad[i] -= n.grad[i];
  });
}

Tensor gather_rows(const Tensor& table, const std::vector<int>& row_indices) {
  const int d = table.cols();
  const int out_rows = static_cast<int>(row_indices.size());
  for (int r : row_indices)
    if (r < 0 || r >= table.rows())
      throw IndexOutOfRange("gather_rows: row " + std::to_string(r) +
                            " outside table");
  const auto& tv = table.values();
  std::vector<double> out(static_cast<size_t>(out_rows) * d);
  for (int i = 0; i < out_rows; ++i)
    std::copy_n(&tv[static_cast<size_t>(row_indices[i]) * d], d,
                &out[static_cast<size_t>(i) * d]);
  auto idx = row_indices;
  return make_op(out_rows, d, std::move(out), {table},
                 [idx = std::move(idx), d](Node& n) {
                   Node& p = *n.parents[0];
                   for (size_t i = 0; i < idx.size(); ++i)
                     for (int c = 0; c < d; ++c)
                       p.grad[static_cast<size_t>(idx[i]) * d + c] +=
                           n.grad[i * d + c];
                 });
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
  check(a.rows() == b.rows(), "concat_cols: row counts differ");
  const int m = a.rows(), ca = a.cols(), cb = b.cols();
  std::vector<double> out(static_cast<size_t>(m) * (ca + cb));
  for (int i = 0; i < m; ++i) {
    std::copy_n(&a.values()[static_cast<size_t>(i) * ca], ca,
                &out[static_cast<size_t>(i) * (ca + cb)]);
    std::copy_n(&b.values()[static_cast<size_t>(i) * cb], cb,
                &out[static_cast<size_t>(i) * (ca + cb) + ca]);
  }
  return make_op(m, ca + cb, std::move(out), {a, b}, [m, ca, cb](Node& n) {
    Node& pa = *n.parents[0];
    Node& pb = *n.parents[1];
    for (int i = 0; i < m; ++i)
      for (int c = 0; c < ca + cb; ++c) {
        double g = n.grad[static_cast<size_t>(i) * (ca + cb) + c];
        if (c < ca)
          pa.grad[static_cast<size_t>(i) * ca + c] += g;
        else
          pb.grad[static_cast<size_t>(i) * cb + (c - ca)] += g;
      }
  });
}

Tensor sum_rows(const Tensor& a) {
  const int m = a.rows(), d = a.cols();
  std::vector<double> out(d, 0.0);
  for (int i = 0; i < m; ++i)
    for (int c = 0; c < d; ++c) out[c] += a.values()[static_cast<size_t>(i) * d + c];
  return make_op(1, d, std::move(out), {a}, [m, d](Node& n) {
    Node& p = *n.parents[0];
    for (int i = 0; i < m; ++i)
      for (int c = 0; c < d; ++c) p.grad[static_cast<size_t>(i) * d + c] += n.grad[c];
  });
}

Tensor add_row_broadcast(const Tensor& a, const Tensor& bias_row) {
  check(bias_row.rows() == 1 && bias_row.cols() == a.cols(),
        "add_row_broadcast: bias must be 1 x cols(a)");
  const int m = a.rows(), d = a.cols();
  std::vector<double> out = a.values();
  for (int i = 0; i < m; ++i)
    for (int c = 0; c < d; ++c) out[static_cast<size_t>(i) * d + c] += bias_row.values()[c];
  return make_op(m, d, std::move(out), {a, bias_row}, [m, d](Node& n) {
    Node& pa = *n.parents[0];
    Node& pb = *n.parents[1];
    for (int i = 0; i < m; ++i)
      for (int c = 0; c < d; ++c) {
        double g = n.grad[static_cast<size_t>(i) * d + c];
        pa.grad[static_cast<size_t>(i) * d + c] += g;
        pb.grad[c] += g;
      }
  });
}

Tensor squared_loss(const Tensor& pred, double target) {
  if (pred.rows() != 1 || pred.cols() != 1)
    throw NonScalarOutput("squared_loss needs a scalar prediction");
  double r = pred.values()[0] - target;
  return make_op(1, 1, {r * r}, {pred}, [target](Node& n) {
    Node& p = *n.parents[0];
    p.grad[0] += n.grad[0] * 2.0 * (p.value[0] - target);
  });
}

Tensor softmax_cross_entropy(const Tensor& logits, int target) {
  check(logits.rows() == 1 && logits.cols() >= 2,
        "softmax_cross_entropy: logits must be one row of >= 2 entries");
  if (target < 0 || target >= logits.cols())
    throw IndexOutOfRange("class index out of range");
  const auto& z = logits.values();
  double zmax = *std::max_element(z.begin(), z.end());
  double denom = 0.0;
  for (double v : z) denom += std::exp(v - zmax);
  double loss = std::log(denom) - (z[target] - zmax);
  return make_op(1, 1, {loss}, {logits}, [target, zmax, denom](Node& n) {
    Node& p = *n.parents[0];
    double g = n.grad[0];
    for (size_t c = 0; c < p.value.size(); ++c) {
      double soft = std::exp(p.value[c] - zmax) / denom;
      p.grad[c] += g * (soft - (static_cast<int>(c) == target ? 1.0 : 0.0));
    }
  });
}

Tensor mean_of(const std::vector<Tensor>& scalars) {
  if (scalars.empty()) throw EmptyMetricInput("mean_of: no terms");
  double sum = 0.0;
  for (const Tensor& t : scalars) {
    if (t.rows() != 1 || t.cols() != 1)
      throw NonScalarOutput("mean_of expects scalar terms");
    sum += t.values()[0];
  }
  const size_t n = scalars.size();
  return make_op(1, 1, {sum / static_cast<double>(n)}, scalars, [n](Node& nd) {
    double g = nd.grad[0] / static_cast<double>(n);
    for (auto& p : nd.parents) p->grad[0] += g;
  });
}

void backward(const Tensor& output) {
  if (!output.defined() || output.rows() != 1 || output.cols() != 1)
    throw NonScalarOutput("backward requires a 1x1 output");
  Node* root = output.node();

  // Iterative post-order DFS: children (parents in graph terms) first.
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, size_t>> stack{{root, 0}};
  seen.insert(root);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* p = node->parents[next++].get();
      if (seen.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  for (Node* n : order) std::fill(n->grad.begin(), n->grad.end(), 0.0);
  root->grad[0] = 1.0;
  // `order` is topological with the root last; walk it backwards so each
  // node's gradient is complete before its backprop runs (one visit each).
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if ((*it)->backprop) (*it)->backprop(**it);
}

std::vector<std::vector<double>> gradient_of(const Tensor& output,
                                             const std::vector<Tensor>& params) {
  for (const Tensor& p : params)
    std::fill(p.node()->grad.begin(), p.node()->grad.end(), 0.0);
  backward(output);
  std::vector<std::vector<double>> grads;
  grads.reserve(params.size());
  for (const Tensor& p : params) grads.push_back(p.grad());
  return grads;
}

}  // namespace wle::ad
