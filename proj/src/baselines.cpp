#include <alcir/baselines.hpp>

#include <algorithm>

namespace alcir {

PopularityTable build_popularity(const std::vector<LabeledPair>& train_pairs,
                                 std::size_t n_items) {
  PopularityTable table;
  table.counts.assign(n_items, 0);
  for (const LabeledPair& pair : train_pairs) {
    if (pair.target_item >= n_items) {
      throw DataError("popularity tally saw a pair outside the catalog");
    }
    ++table.counts[pair.target_item];
  }
  return table;
}

RecommendationList popularity_recommend(const ItemRecord& seed, std::size_t target_category,
                                        std::size_t k, const PopularityTable& table,
                                        const Catalog& catalog) {
  if (k == 0) throw ConfigError("recommend needs a positive k");
  if (target_category >= catalog.categories.size()) {
    throw DataError("popularity: unknown target category index");
  }
  if (table.counts.size() != catalog.items.size()) {
    throw DimensionError("popularity table does not match the catalog");
  }
  std::vector<Recommendation> scored;
  for (std::size_t idx : catalog.items_by_category[target_category]) {
    scored.push_back({idx, static_cast<double>(table.counts[idx])});
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

}  // namespace alcir
