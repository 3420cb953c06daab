#pragma once

#include <vector>

#include "wle/graph.hpp"

namespace wle {

using Matrix = std::vector<std::vector<double>>;

// Rank by Gaussian elimination with complete pivoting; entries below
// tol_scale * frobenius_norm count as zero.
int matrix_rank(Matrix m, double tol_scale = 1e-9);

// All neighborhood pattern vectors m in {0..M}^K in base-(M+1) counting
// order (first coordinate most significant).  Throws SizeOverflow when
// (M+1)^K exceeds 10^6.
std::vector<std::vector<int>> enumerate_lattice(int K, int M);

/**
 * The explicit ReLU network that realizes every neighborhood pattern:
 * per label block, a weight row of base-(M+1) digit weights replicated over
 * (M+1)^K + 1 hidden units and a bias ramp (M+1)^K - 1 down to -1.  Scaling
 * alpha multiplies the embeddings, hence the hidden activations.
 */
struct ReluConstruction {
  int num_labels = 0;       // K
  int max_multiplicity = 0; // M
  double alpha = 1.0;
  std::vector<double> digit_weights;  // length K: (M+1)^{K-1}, ..., M+1, 1
  std::vector<double> bias;           // length (M+1)^K + 1, descending to -1
};

ReluConstruction relu_construction(int K, int M, double alpha = 1.0);

// Hidden activations of one label block: row per lattice point m (counting
// order), column per hidden unit, entry alpha * max(<w, m> - bias_j, 0).
Matrix construction_block(const ReluConstruction& c);

// Block-diagonal stack over all K labels: the full matrix of distinct node
// states, of size K(M+1)^K x K((M+1)^K + 1).
Matrix construction_matrix(const ReluConstruction& c);

// Rank of construction_matrix; equals K(M+1)^K when the construction works.
int construction_rank(int K, int M, double alpha = 1.0);

struct NormProfilePoint {
  int M = 0;
  double bias_norm = 0.0;  // ||b||_2 of one block
  double ratio = 0.0;      // bias_norm / M^(3K/2)
};

// Growth of the bias norm against the M^(3K/2) rate.
std::vector<NormProfilePoint> norm_profile(int K, const std::vector<int>& Ms);

struct WleDimensionality {
  int rank = 0;             // dimension spanned by the readouts
  int distinct_labels = 0;  // J over the graph set
  int num_labels = 0;       // K observed
  int observed_m = 0;       // label-specific max degree observed
  long long bound = 0;      // K(M+1)^K at the observed values
};

// Span dimension of one-hot extended-label readouts over a graph set: each
// graph maps to its extended-label histogram; the rank of that matrix is the
// degrees of freedom a width-d WL embedding readout can realize.  Requires
// d >= number of distinct extended labels (DimensionTooSmall otherwise).
WleDimensionality wle_max_dimensionality(const std::vector<Graph>& graphs,
                                         int d);

/**
 * One nonlinear message-passing layer evaluated directly (no autodiff):
 *   h_i = sigma(U_{l(i)} x_{l(i)} + W_{l(i)} sum_{j in N(i)} V_{l(i) l(j)} x_{l(j)})
 * followed by a sum readout.  Matrices are row-major.
 */
struct SingleLayerParams {
  int num_labels = 0;  // K
  int in_dim = 0;      // columns of x, U, V
  int out_dim = 0;     // rows of U and W
  bool use_relu = true;
  std::vector<std::vector<double>> embed;  // K x in_dim rows: x_k
  std::vector<std::vector<double>> u;      // K matrices, out_dim x in_dim
  std::vector<std::vector<double>> mix;    // K matrices, out_dim x in_dim
  std::vector<std::vector<double>> pair;   // K*K matrices (k*K+l), in_dim x in_dim
};

std::vector<double> single_layer_readout(const Graph& g,
                                         const SingleLayerParams& p);

// Parameters that make single_layer_readout reproduce the construction: a
// node labeled k with pattern m contributes the (k, m) row of
// construction_matrix to the readout.
SingleLayerParams construction_params(int K, int M, double alpha = 1.0);

}  // namespace wle
