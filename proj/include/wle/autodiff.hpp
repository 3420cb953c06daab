#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace wle::ad {

namespace detail {
struct Node;
}

/**
 * Dense row-major matrix with reverse-mode differentiation.
 *
 * A Tensor is a cheap handle to a shared node in the computation DAG built by
 * the free-function ops below.  Scalars are 1x1, vectors are 1xN rows, and
 * everything is stored as 64-bit floats.  Gradients become valid after
 * backward() on a scalar output and accumulate until the next backward call
 * re-seeds them.
 */
class Tensor {
 public:
  Tensor() = default;

  // Leaf constructors.  Parameters participate in gradient accumulation;
  // constants do not.
  static Tensor zeros(int rows, int cols, bool requires_grad = false);
  static Tensor constant(int rows, int cols, const std::vector<double>& data);
  static Tensor scalar(double value);
  static Tensor parameter(int rows, int cols, const std::vector<double>& data);

  bool defined() const { return node_ != nullptr; }
  int rows() const;
  int cols() const;
  int size() const { return rows() * cols(); }
  bool requires_grad() const;

  double at(int r, int c) const;
  double scalar_value() const;  // throws NonScalarOutput unless 1x1

  // Leaf storage, used by optimizers and serialization.
  std::vector<double>& values();
  const std::vector<double>& values() const;
  std::vector<double>& grad();
  const std::vector<double>& grad() const;

  detail::Node* node() const { return node_.get(); }

 private:
  friend Tensor make_op(int, int, std::vector<double>,
                        std::vector<Tensor>, std::function<void(detail::Node&)>);
  std::shared_ptr<detail::Node> node_;
};

namespace detail {
struct Node {
  int rows = 0;
  int cols = 0;
  std::vector<double> value;
  std::vector<double> grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backprop;  // adds into parents' grads
};
}  // namespace detail

// ---- graph-building operations ----

Tensor add(const Tensor& a, const Tensor& b);        // same shape
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);        // elementwise
Tensor scale(const Tensor& a, double s);
Tensor matmul(const Tensor& a, const Tensor& b);     // (m,k) x (k,n)
Tensor transpose(const Tensor& a);
Tensor relu(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor one_minus(const Tensor& a);                   // 1 - a elementwise

// Selects rows of a table; duplicate indices accumulate gradient.
Tensor gather_rows(const Tensor& table, const std::vector<int>& row_indices);

Tensor concat_cols(const Tensor& a, const Tensor& b);

// Column sums collapsed to one row: (n,d) -> (1,d).
Tensor sum_rows(const Tensor& a);

// Adds a 1xN bias row to every row of a.
Tensor add_row_broadcast(const Tensor& a, const Tensor& bias_row);

// Squared error (pred - target)^2 for a scalar prediction.
Tensor squared_loss(const Tensor& pred, double target);

// Numerically stable -log softmax(logits)[target] for a 1xC logit row.
Tensor softmax_cross_entropy(const Tensor& logits, int target);

// Arithmetic mean of scalar tensors.
Tensor mean_of(const std::vector<Tensor>& scalars);

/**
 * Reverse sweep from a 1x1 output.  Zeroes the gradients of every node
 * reachable from `output`, then accumulates each node's gradient in one
 * visit (reverse topological order).  Throws NonScalarOutput otherwise.
 */
void backward(const Tensor& output);

// Convenience: backward() plus explicit zeroing of the listed parameters, so
// parameters that the output does not reach report zero gradients.
std::vector<std::vector<double>> gradient_of(const Tensor& output,
                                             const std::vector<Tensor>& params);

}  // namespace wle::ad
