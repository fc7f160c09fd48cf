#pragma once

#include <alcir/data.hpp>
#include <alcir/model.hpp>
#include <alcir/params.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace alcir {

struct Recommendation {
  std::size_t item = 0;  // catalog index
  double score = 0.0;
};

struct RecommendationList {
  std::string seed_id;
  std::vector<Recommendation> entries;
};

// Exact per-category index: every catalog item encoded once, grouped by
// category in catalog order.
struct CategoryIndex {
  std::size_t latent_dim = 0;
  std::vector<std::vector<std::size_t>> item_indices;
  std::vector<std::vector<double>> encodings;  // row-major |I_c| x latent_dim
  std::vector<std::vector<double>> norms;
};

CategoryIndex build_category_index(const Catalog& catalog, const ParamStore& params,
                                   const ModelConfig& cfg);

// Forward-only convenience wrappers (tape discarded).
Array encode_latent(const ParamStore& params, const ModelConfig& cfg, const ItemRecord& item);
Array translate_latent(const ParamStore& params, const ModelConfig& cfg, const ItemRecord& seed,
                       std::size_t target_category);

// Top-k by cosine between the translated seed embedding and the target
// category's rows; ties broken by item_id ascending.
RecommendationList recommend(const ItemRecord& seed, std::size_t target_category, std::size_t k,
                             const CategoryIndex& index, const ParamStore& params,
                             const ModelConfig& cfg, const Catalog& catalog);

// Round-robin interleave of per-category rankings, already ordered best-first.
// Pass p takes each list's p-th entry in list order; exhausted lists drop out.
RecommendationList round_robin_merge(const std::vector<RecommendationList>& per_category,
                                     std::size_t k);

// Category-unaware recommendation over the seed's complementary categories in
// map order. An empty complementary set yields an empty list with a warning.
RecommendationList recommend_multi(const ItemRecord& seed, const ComplementaryCategoryMap& cc_map,
                                   std::size_t k, const CategoryIndex& index,
                                   const ParamStore& params, const ModelConfig& cfg,
                                   const Catalog& catalog);

void write_recommendations_csv(std::ostream& os, const RecommendationList& list,
                               const Catalog& catalog);

}  // namespace alcir
