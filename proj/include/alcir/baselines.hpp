#pragma once

#include <alcir/data.hpp>
#include <alcir/retrieval.hpp>

#include <vector>

namespace alcir {

// Target-occurrence counts over training pairs only. Seed-invariant by
// construction: the recommendation depends on the target category alone.
struct PopularityTable {
  std::vector<std::size_t> counts;  // indexed by catalog item position
};

PopularityTable build_popularity(const std::vector<LabeledPair>& train_pairs,
                                 std::size_t n_items);

// Items of the target category by count descending, ties and zero-count items
// by item_id ascending.
RecommendationList popularity_recommend(const ItemRecord& seed, std::size_t target_category,
                                        std::size_t k, const PopularityTable& table,
                                        const Catalog& catalog);

}  // namespace alcir
