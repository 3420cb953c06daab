#include "wle/theory.hpp"

#include <algorithm>
#include <cmath>

#include "wle/errors.hpp"
#include "wle/wl.hpp"

namespace wle {

int matrix_rank(Matrix m, double tol_scale) {
  if (m.empty() || m[0].empty()) return 0;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  double frob = 0.0;
  for (const auto& row : m)
    for (double v : row) frob += v * v;
  frob = std::sqrt(frob);
  if (frob == 0.0) return 0;
  const double tol = tol_scale * frob;

  int rank = 0;
  std::vector<int> col_order(cols);
  for (int c = 0; c < cols; ++c) col_order[c] = c;
  for (int step = 0; step < std::min(rows, cols); ++step) {
    // Complete pivoting over the remaining submatrix.
    int pr = -1, pc = -1;
    double best = tol;
    for (int r = step; r < rows; ++r)
      for (int c = step; c < cols; ++c)
        if (std::abs(m[r][col_order[c]]) > best) {
          best = std::abs(m[r][col_order[c]]);
          pr = r;
          pc = c;
        }
    if (pr < 0) break;
    std::swap(m[step], m[pr]);
    std::swap(col_order[step], col_order[pc]);
    ++rank;
    double pivot = m[step][col_order[step]];
    for (int r = step + 1; r < rows; ++r) {
      double f = m[r][col_order[step]] / pivot;
      if (f == 0.0) continue;
      for (int c = step; c < cols; ++c) m[r][col_order[c]] -= f * m[step][col_order[c]];
    }
  }
  return rank;
}

namespace {

long long checked_pow(int base, int exp, long long limit) {
  long long v = 1;
  for (int i = 0; i < exp; ++i) {
    v *= base;
    if (v > limit)
      throw SizeOverflow("lattice size " + std::to_string(base) + "^" +
                         std::to_string(exp) + " exceeds limit");
  }
  return v;
}

}  // namespace

std::vector<std::vector<int>> enumerate_lattice(int K, int M) {
  if (K < 1 || M < 0) throw SizeOverflow("need K >= 1 and M >= 0");
  long long total = checked_pow(M + 1, K, 1000000);
  std::vector<std::vector<int>> points;
  points.reserve(static_cast<size_t>(total));
  for (long long n = 0; n < total; ++n) {
    std::vector<int> m(K);
    long long rem = n;
    for (int k = K - 1; k >= 0; --k) {
      m[k] = static_cast<int>(rem % (M + 1));
      rem /= M + 1;
    }
    points.push_back(std::move(m));
  }
  return points;
}

ReluConstruction relu_construction(int K, int M, double alpha) {
  long long n = checked_pow(M + 1, K, 1000000);
  ReluConstruction c;
  c.num_labels = K;
  c.max_multiplicity = M;
  c.alpha = alpha;
  c.digit_weights.resize(K);
  double w = 1.0;
  for (int k = K - 1; k >= 0; --k) {
    c.digit_weights[k] = w;
    w *= M + 1;
  }
  c.bias.resize(static_cast<size_t>(n) + 1);
  for (long long j = 0; j <= n; ++j)
    c.bias[static_cast<size_t>(j)] = static_cast<double>(n - 1 - j);
  return c;
}

Matrix construction_block(const ReluConstruction& c) {
  auto lattice = enumerate_lattice(c.num_labels, c.max_multiplicity);
  Matrix h(lattice.size(), std::vector<double>(c.bias.size(), 0.0));
  for (size_t r = 0; r < lattice.size(); ++r) {
    double z = 0.0;
    for (int k = 0; k < c.num_labels; ++k)
      z += c.digit_weights[k] * lattice[r][k];
    for (size_t j = 0; j < c.bias.size(); ++j)
      h[r][j] = c.alpha * std::max(z - c.bias[j], 0.0);
  }
  return h;
}

Matrix construction_matrix(const ReluConstruction& c) {
  Matrix block = construction_block(c);
  const size_t br = block.size(), bc = block[0].size();
  const int K = c.num_labels;
  Matrix full(br * K, std::vector<double>(bc * K, 0.0));
  for (int k = 0; k < K; ++k)
    for (size_t r = 0; r < br; ++r)
      for (size_t col = 0; col < bc; ++col)
        full[k * br + r][k * bc + col] = block[r][col];
  return full;
}

int construction_rank(int K, int M, double alpha) {
  return matrix_rank(construction_matrix(relu_construction(K, M, alpha)));
}

std::vector<NormProfilePoint> norm_profile(int K, const std::vector<int>& Ms) {
  std::vector<NormProfilePoint> out;
  out.reserve(Ms.size());
  for (int M : Ms) {
    ReluConstruction c = relu_construction(K, M, 1.0);
    double sq = 0.0;
    for (double b : c.bias) sq += b * b;
    NormProfilePoint p;
    p.M = M;
    p.bias_norm = std::sqrt(sq);
    p.ratio = p.bias_norm / std::pow(static_cast<double>(M), 1.5 * K);
    out.push_back(p);
  }
  return out;
}

WleDimensionality wle_max_dimensionality(const std::vector<Graph>& graphs,
                                         int d) {
  LabelRegistry reg;
  std::vector<std::vector<int>> rows;
  rows.reserve(graphs.size());
  WleDimensionality res;
  for (const Graph& g : graphs) {
    res.num_labels = std::max(res.num_labels, g.num_labels);
    res.observed_m = std::max(res.observed_m, g.label_specific_max_degree());
    std::vector<int> counts;
    for (int i = 0; i < g.num_nodes; ++i) {
      int idx = reg.intern(extended_label(g, i));
      if (idx > static_cast<int>(counts.size())) counts.resize(idx, 0);
      ++counts[idx - 1];
    }
    rows.push_back(std::move(counts));
  }
  res.distinct_labels = reg.size();
  if (d < res.distinct_labels)
    throw DimensionTooSmall("need d >= " + std::to_string(res.distinct_labels) +
                            " one-hot rows, got " + std::to_string(d));

  Matrix hist(rows.size(), std::vector<double>(reg.size(), 0.0));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c)
      hist[r][c] = static_cast<double>(rows[r][c]);
  res.rank = matrix_rank(hist);
  res.bound = res.num_labels > 0
                  ? res.num_labels *
                        checked_pow(res.observed_m + 1, res.num_labels,
                                    1000000000000ll)
                  : 0;
  return res;
}

namespace {

// y += A x for a row-major (rows x cols) matrix.
void accumulate_matvec(const std::vector<double>& a, int rows, int cols,
                       const std::vector<double>& x, std::vector<double>& y) {
  for (int r = 0; r < rows; ++r) {
    double s = 0.0;
    for (int c = 0; c < cols; ++c) s += a[static_cast<size_t>(r) * cols + c] * x[c];
    y[r] += s;
  }
}

}  // namespace

std::vector<double> single_layer_readout(const Graph& g,
                                         const SingleLayerParams& p) {
  if (g.num_labels > p.num_labels)
    throw DimensionMismatch("graph labels exceed parameter tables");
  std::vector<double> readout(p.out_dim, 0.0);
  for (int i = 0; i < g.num_nodes; ++i) {
    int k = g.labels[i] - 1;
    // message = sum_j V_{k, l(j)} x_{l(j)}
    std::vector<double> message(p.in_dim, 0.0);
    for (int j : g.adj[i]) {
      int l = g.labels[j] - 1;
      accumulate_matvec(p.pair[static_cast<size_t>(k) * p.num_labels + l],
                        p.in_dim, p.in_dim, p.embed[l], message);
    }
    std::vector<double> h(p.out_dim, 0.0);
    accumulate_matvec(p.u[k], p.out_dim, p.in_dim, p.embed[k], h);
    accumulate_matvec(p.mix[k], p.out_dim, p.in_dim, message, h);
    for (int r = 0; r < p.out_dim; ++r) {
      double v = h[r];
      readout[r] += p.use_relu ? std::max(v, 0.0) : v;
    }
  }
  return readout;
}

SingleLayerParams construction_params(int K, int M, double alpha) {
  ReluConstruction c = relu_construction(K, M, alpha);
  const int block = static_cast<int>(c.bias.size());  // (M+1)^K + 1
  SingleLayerParams p;
  p.num_labels = K;
  p.in_dim = K;
  p.out_dim = K * block;
  p.use_relu = true;

  // x_k = alpha * e_k
  p.embed.assign(K, std::vector<double>(K, 0.0));
  for (int k = 0; k < K; ++k) p.embed[k][k] = alpha;

  // V_{kl} = identity, so each neighbor contributes alpha * e_{l(j)}.
  p.pair.assign(static_cast<size_t>(K) * K, std::vector<double>(K * K, 0.0));
  for (auto& v : p.pair)
    for (int i = 0; i < K; ++i) v[static_cast<size_t>(i) * K + i] = 1.0;

  // Block k of W_k carries the digit weights; U_k x_k supplies -alpha * bias
  // in the same block.  Rows outside the block stay zero.
  p.mix.assign(K, std::vector<double>(static_cast<size_t>(p.out_dim) * K, 0.0));
  p.u.assign(K, std::vector<double>(static_cast<size_t>(p.out_dim) * K, 0.0));
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < block; ++j) {
      int row = k * block + j;
      for (int col = 0; col < K; ++col)
        p.mix[k][static_cast<size_t>(row) * K + col] = c.digit_weights[col];
      p.u[k][static_cast<size_t>(row) * K + k] = -c.bias[j];
    }
  }
  return p;
}

}  // namespace wle
