#include "wle/embedding.hpp"

#include <cmath>
#include <string>

#include "wle/errors.hpp"

namespace wle {

const char* variant_name(EmbeddingVariant v) {
  switch (v) {
    case EmbeddingVariant::Atomic: return "atomic";
    case EmbeddingVariant::NaiveWl: return "wl";
    case EmbeddingVariant::Cwl: return "cwl";
    case EmbeddingVariant::Gwl: return "gwl";
  }
  return "?";
}

EmbeddingVariant variant_from_name(const std::string& name) {
  if (name == "atomic") return EmbeddingVariant::Atomic;
  if (name == "wl") return EmbeddingVariant::NaiveWl;
  if (name == "cwl") return EmbeddingVariant::Cwl;
  if (name == "gwl") return EmbeddingVariant::Gwl;
  throw FormatError("unknown embedding variant '" + name + "'");
}

std::vector<ad::Tensor> EmbeddingParams::parameters() const {
  switch (variant) {
    case EmbeddingVariant::Atomic:
    case EmbeddingVariant::NaiveWl:
      return {table1};
    case EmbeddingVariant::Cwl:
      return {table1, table2, mix_w};
    case EmbeddingVariant::Gwl:
      return {table1, table2, gate_w1, gate_w2};
  }
  return {};
}

std::vector<std::string> EmbeddingParams::parameter_names() const {
  switch (variant) {
    case EmbeddingVariant::Atomic:
    case EmbeddingVariant::NaiveWl:
      return {"embed.table"};
    case EmbeddingVariant::Cwl:
      return {"embed.center", "embed.nbrs", "embed.mix_w"};
    case EmbeddingVariant::Gwl:
      return {"embed.center", "embed.nbrs", "embed.gate_w1", "embed.gate_w2"};
  }
  return {};
}

namespace {

ad::Tensor uniform_tensor(int rows, int cols, double span,
                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-span, span);
  std::vector<double> data(static_cast<size_t>(rows) * cols);
  for (double& v : data) v = dist(rng);
  return ad::Tensor::parameter(rows, cols, data);
}

double row_scale(int cols) { return 1.0 / std::sqrt(static_cast<double>(cols)); }

}  // namespace

EmbeddingParams init_embedding(EmbeddingVariant variant, int registry_size,
                               int dim, int wl_iters, std::mt19937_64& rng,
                               int d1, int d2) {
  if (dim < 1) throw DimensionMismatch("embedding dim must be positive");
  if (wl_iters < 1) throw DimensionMismatch("wl_iters must be >= 1");
  EmbeddingParams p;
  p.variant = variant;
  p.dim = dim;
  p.d1 = d1 > 0 ? d1 : dim;
  p.d2 = d2 > 0 ? d2 : dim;
  p.wl_iters = wl_iters;
  const int table_rows = registry_size + 1;  // row 0 = fallback

  switch (variant) {
    case EmbeddingVariant::Atomic:
    case EmbeddingVariant::NaiveWl:
      p.table1 = uniform_tensor(table_rows, dim, row_scale(dim), rng);
      break;
    case EmbeddingVariant::Cwl:
      p.table1 = uniform_tensor(table_rows, p.d1, row_scale(p.d1), rng);
      p.table2 = uniform_tensor(table_rows, p.d2, row_scale(p.d2), rng);
      p.mix_w = uniform_tensor(dim, p.d1 + p.d2, row_scale(p.d1 + p.d2), rng);
      break;
    case EmbeddingVariant::Gwl:
      p.table1 = uniform_tensor(table_rows, dim, row_scale(dim), rng);
      p.table2 = uniform_tensor(table_rows, dim, row_scale(dim), rng);
      p.gate_w1 = uniform_tensor(dim, dim, row_scale(dim), rng);
      p.gate_w2 = uniform_tensor(dim, dim, row_scale(dim), rng);
      break;
  }
  return p;
}

void intern_for_variant(const Graph& g, EmbeddingVariant variant, int wl_iters,
                        LabelRegistry& registry) {
  for (int l = 1; l <= g.num_labels; ++l)
    registry.intern(make_center_label(l));
  switch (variant) {
    case EmbeddingVariant::Atomic:
      break;
    case EmbeddingVariant::NaiveWl:
      wl_refine(g, wl_iters, registry);
      break;
    case EmbeddingVariant::Cwl:
    case EmbeddingVariant::Gwl: {
      // Center side stays at step 0; neighborhood side is the step-T multiset
      // over step-(T-1) labels.
      RefinementResult r = wl_refine(g, wl_iters - 1, registry);
      const std::vector<int>& prev = r.labels[wl_iters - 1];
      for (int i = 0; i < g.num_nodes; ++i)
        registry.intern(neighborhood_key(g, prev, i));
      break;
    }
  }
}

EmbeddingIndices embedding_indices(const EmbeddingParams& params,
                                   const LabelRegistry& registry,
                                   const Graph& g) {
  EmbeddingIndices out;
  out.center.resize(g.num_nodes);
  switch (params.variant) {
    case EmbeddingVariant::Atomic:
      for (int i = 0; i < g.num_nodes; ++i)
        out.center[i] = registry.index_of(make_center_label(g.labels[i]));
      break;
    case EmbeddingVariant::NaiveWl: {
      RefinementResult r = wl_refine_frozen(g, params.wl_iters, registry);
      out.center = r.labels[params.wl_iters];
      break;
    }
    case EmbeddingVariant::Cwl:
    case EmbeddingVariant::Gwl: {
      RefinementResult r =
          wl_refine_frozen(g, params.wl_iters - 1, registry);
      const std::vector<int>& prev = r.labels[params.wl_iters - 1];
      out.neighbor.resize(g.num_nodes);
      for (int i = 0; i < g.num_nodes; ++i) {
        out.center[i] =
            registry.index_or_unknown(make_center_label(g.labels[i]));
        out.neighbor[i] =
            registry.index_or_unknown(neighborhood_key(g, prev, i));
      }
      break;
    }
  }
  return out;
}

namespace {

ad::Tensor assemble(const EmbeddingParams& p, const EmbeddingIndices& idx) {
  switch (p.variant) {
    case EmbeddingVariant::Atomic:
    case EmbeddingVariant::NaiveWl:
      return ad::gather_rows(p.table1, idx.center);
    case EmbeddingVariant::Cwl: {
      ad::Tensor z1 = ad::gather_rows(p.table1, idx.center);
      ad::Tensor z2 = ad::gather_rows(p.table2, idx.neighbor);
      return ad::matmul(ad::concat_cols(z1, z2), ad::transpose(p.mix_w));
    }
    case EmbeddingVariant::Gwl: {
      ad::Tensor zl = ad::gather_rows(p.table1, idx.center);
      ad::Tensor zm = ad::gather_rows(p.table2, idx.neighbor);
      ad::Tensor gate = ad::sigmoid(ad::add(ad::matmul(zl, ad::transpose(p.gate_w1)),
                                            ad::matmul(zm, ad::transpose(p.gate_w2))));
      return ad::add(ad::mul(ad::one_minus(gate), zl), ad::mul(gate, zm));
    }
  }
  throw DimensionMismatch("unreachable embedding variant");
}

}  // namespace

ad::Tensor embed_nodes(const EmbeddingParams& params,
                       const LabelRegistry& registry, const Graph& g) {
  return assemble(params, embedding_indices(params, registry, g));
}

ad::Tensor embed_nodes_with_overrides(const EmbeddingParams& params,
                                      const LabelRegistry& registry,
                                      const Graph& g,
                                      const std::vector<int>& center_override,
                                      const std::vector<int>& neighbor_override) {
  EmbeddingIndices idx = embedding_indices(params, registry, g);
  for (int i = 0; i < g.num_nodes; ++i) {
    if (!center_override.empty() && center_override[i] >= 0)
      idx.center[i] = center_override[i];
    if (!neighbor_override.empty() && !idx.neighbor.empty() &&
        neighbor_override[i] >= 0)
      idx.neighbor[i] = neighbor_override[i];
  }
  return assemble(params, idx);
}

}  // namespace wle
