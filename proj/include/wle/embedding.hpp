#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wle/autodiff.hpp"
#include "wle/graph.hpp"
#include "wle/wl.hpp"

namespace wle {

enum class EmbeddingVariant { Atomic, NaiveWl, Cwl, Gwl };

const char* variant_name(EmbeddingVariant v);
EmbeddingVariant variant_from_name(const std::string& name);

/**
 * Trainable lookup tables and mixing weights for one embedding variant.
 *
 * Tables have registry_size + 1 rows; row 0 is the fallback for labels that
 * were never interned.  Output dimension is `dim` for every variant:
 *   Atomic / NaiveWl  one table (dim columns), plain row lookup
 *   Cwl               two tables (d1 / d2 columns) + mix matrix
 *                     W (dim x (d1 + d2)), x_i = W concat(z_center, z_nbrs)
 *   Gwl               two tables (dim columns) + gate matrices W1, W2,
 *                     x_i = (1 - G) * z_center + G * z_nbrs,
 *                     G = sigmoid(W1 z_center + W2 z_nbrs)
 */
struct EmbeddingParams {
  EmbeddingVariant variant = EmbeddingVariant::Atomic;
  int dim = 0;
  int d1 = 0, d2 = 0;  // concat halves, Cwl only
  int wl_iters = 1;    // refinement steps T feeding the lookups

  ad::Tensor table1;
  ad::Tensor table2;
  ad::Tensor mix_w;
  ad::Tensor gate_w1, gate_w2;

  std::vector<ad::Tensor> parameters() const;
  std::vector<std::string> parameter_names() const;
};

// Allocates tables sized to the registry and draws initial entries from
// U(-1/sqrt(cols), 1/sqrt(cols)).  d1/d2 default to dim when zero.
EmbeddingParams init_embedding(EmbeddingVariant variant, int registry_size,
                               int dim, int wl_iters, std::mt19937_64& rng,
                               int d1 = 0, int d2 = 0);

// Interns every label the variant will look up for this graph: original
// labels always, plus refinement labels (NaiveWl) or neighborhood multisets
// (Cwl / Gwl) at the configured iteration count.
void intern_for_variant(const Graph& g, EmbeddingVariant variant, int wl_iters,
                        LabelRegistry& registry);

// Node feature matrix, one row per node.  The registry is read-only here:
// lookups that miss resolve to the fallback row (Atomic instead requires its
// labels interned and throws UninternedLabel).
ad::Tensor embed_nodes(const EmbeddingParams& params,
                       const LabelRegistry& registry, const Graph& g);

// Table row index each variant uses per node, exposed for the importance
// analysis: center-side rows and neighborhood-side rows.
struct EmbeddingIndices {
  std::vector<int> center;     // rows into table1
  std::vector<int> neighbor;   // rows into table2 (empty for single-table)
};
EmbeddingIndices embedding_indices(const EmbeddingParams& params,
                                   const LabelRegistry& registry,
                                   const Graph& g);

// embed_nodes with per-node row overrides (index into the respective table);
// -1 entries keep the computed row.  Used by shuffle-based importance.
ad::Tensor embed_nodes_with_overrides(const EmbeddingParams& params,
                                      const LabelRegistry& registry,
                                      const Graph& g,
                                      const std::vector<int>& center_override,
                                      const std::vector<int>& neighbor_override);

}  // namespace wle
