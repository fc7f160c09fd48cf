#include <alcir/kernels.hpp>
#include <alcir/retrieval.hpp>
#include <alcir/tape.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace alcir {

CategoryIndex build_category_index(const Catalog& catalog, const ParamStore& params,
                                   const ModelConfig& cfg) {
  cfg.validate();
  if (catalog.categories.size() != cfg.n_categories) {
    throw DimensionError("catalog and model disagree on the number of categories");
  }
  CategoryIndex index;
  index.latent_dim = cfg.latent_dim;
  index.item_indices = catalog.items_by_category;
  index.encodings.resize(catalog.categories.size());
  index.norms.resize(catalog.categories.size());
  for (std::size_t c = 0; c < catalog.categories.size(); ++c) {
    const std::vector<std::size_t>& members = index.item_indices[c];
    index.encodings[c].resize(members.size() * cfg.latent_dim);
    index.norms[c].resize(members.size());
    for (std::size_t r = 0; r < members.size(); ++r) {
      Tape tape;
      const Tape::Id v = encode_item(tape, params, cfg, catalog.items[members[r]]);
      const Array& latent = tape.value(v);
      check_finite(latent, "encoded item " + catalog.items[members[r]].item_id);
      double* row = index.encodings[c].data() + r * cfg.latent_dim;
      for (std::size_t i = 0; i < cfg.latent_dim; ++i) row[i] = latent[i];
      index.norms[c][r] = std::sqrt(kernels::dot(row, row, cfg.latent_dim));
    }
  }
  return index;
}

Array encode_latent(const ParamStore& params, const ModelConfig& cfg, const ItemRecord& item) {
  Tape tape;
  return tape.value(encode_item(tape, params, cfg, item));
}

Array translate_latent(const ParamStore& params, const ModelConfig& cfg, const ItemRecord& seed,
                       std::size_t target_category) {
  Tape tape;
  const Tape::Id v = encode_item(tape, params, cfg, seed);
  return tape.value(translate(tape, params, cfg, v, target_category));
}

RecommendationList recommend(const ItemRecord& seed, std::size_t target_category, std::size_t k,
                             const CategoryIndex& index, const ParamStore& params,
                             const ModelConfig& cfg, const Catalog& catalog) {
  if (k == 0) throw ConfigError("recommend needs a positive k");
  if (target_category >= catalog.categories.size()) {
    throw DataError("recommend: unknown target category index");
  }
  if (target_category == seed.category_id) {
    throw DataError("recommend: target category equals the seed's own category (" +
                    catalog.categories[target_category] + ")");
  }
  if (index.latent_dim != cfg.latent_dim) {
    throw DimensionError("index latent width does not match the model");
  }

  const Array query = translate_latent(params, cfg, seed, target_category);
  const double qnorm = std::sqrt(kernels::dot(query.data(), query.data(), query.size()));
  if (qnorm == 0.0) {
    throw DegenerateVectorError("translated seed embedding has zero norm for item " +
                                seed.item_id);
  }

  const std::vector<std::size_t>& members = index.item_indices[target_category];
  const std::vector<double>& rows = index.encodings[target_category];
  const std::vector<double>& norms = index.norms[target_category];

  std::vector<Recommendation> scored(members.size());
  for (std::size_t r = 0; r < members.size(); ++r) {
    if (norms[r] == 0.0) {
      throw DegenerateVectorError("indexed embedding has zero norm for item " +
                                  catalog.items[members[r]].item_id);
    }
    double cosine = kernels::dot(query.data(), rows.data() + r * index.latent_dim,
                                 index.latent_dim) /
                    (qnorm * norms[r]);
    if (cosine > 1.0) cosine = 1.0;
    if (cosine < -1.0) cosine = -1.0;
    scored[r] = {members[r], cosine};
  }
  std::sort(scored.begin(), scored.end(), [&](const Recommendation& a, const Recommendation& b) {
    if (a.score != b.score) return a.score > b.score;
    return catalog.items[a.item].item_id < catalog.items[b.item].item_id;
  });
  if (scored.size() > k) scored.resize(k);

  RecommendationList list;
  list.seed_id = seed.item_id;
  list.entries = std::move(scored);
  return list;
}

RecommendationList round_robin_merge(const std::vector<RecommendationList>& per_category,
                                     std::size_t k) {
  RecommendationList merged;
  if (!per_category.empty()) merged.seed_id = per_category.front().seed_id;
  std::size_t pass = 0;
  while (merged.entries.size() < k) {
    bool any = false;
    for (const RecommendationList& list : per_category) {
      if (pass < list.entries.size()) {
        any = true;
        merged.entries.push_back(list.entries[pass]);
        if (merged.entries.size() == k) break;
      }
    }
    if (!any) break;
    ++pass;
  }
  return merged;
}

RecommendationList recommend_multi(const ItemRecord& seed, const ComplementaryCategoryMap& cc_map,
                                   std::size_t k, const CategoryIndex& index,
                                   const ParamStore& params, const ModelConfig& cfg,
                                   const Catalog& catalog) {
  if (k == 0) throw ConfigError("recommend needs a positive k");
  const std::vector<CategoryCount>& complements = cc_map.complements_of(seed.category_id);
  if (complements.empty()) {
    static int warned = 0;
    if (warned < 3) {
      std::fprintf(stderr, "[alcir] warning: no complementary categories known for %s\n",
                   catalog.categories[seed.category_id].c_str());
      ++warned;
    }
    RecommendationList empty;
    empty.seed_id = seed.item_id;
    return empty;
  }
  std::vector<RecommendationList> per_category;
  per_category.reserve(complements.size());
  for (const CategoryCount& cc : complements) {
    const std::size_t available = index.item_indices[cc.category].size();
    if (available == 0) continue;
    per_category.push_back(recommend(seed, cc.category, available, index, params, cfg, catalog));
  }
  RecommendationList merged = round_robin_merge(per_category, k);
  merged.seed_id = seed.item_id;
  return merged;
}

void write_recommendations_csv(std::ostream& os, const RecommendationList& list,
                               const Catalog& catalog) {
  os << "seed_id,rank,item_id,category,score\n";
  char score[32];
  for (std::size_t i = 0; i < list.entries.size(); ++i) {
    const Recommendation& rec = list.entries[i];
    std::snprintf(score, sizeof(score), "%.6f", rec.score);
    os << list.seed_id << "," << (i + 1) << "," << catalog.items[rec.item].item_id << ","
       << catalog.categories[catalog.items[rec.item].category_id] << "," << score << "\n";
  }
}

}  // namespace alcir
