#pragma once

#include <alcir/array.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace alcir {

struct ItemRecord {
  std::string item_id;
  std::size_t category_id = 0;
  double price = 0.0;
  int price_bin = -1;  // assigned by discretize_prices
  Array image_features;
};

struct Catalog {
  std::vector<ItemRecord> items;
  std::vector<std::string> categories;
  std::vector<std::vector<std::size_t>> items_by_category;
  std::unordered_map<std::string, std::size_t> index_by_id;
  std::size_t feature_dim = 0;

  void rebuild_index();
  std::size_t item_index(const std::string& id) const;  // throws DataError when missing
  std::size_t category_index(const std::string& name) const;
};

// Directed cross-category pair, referencing catalog item positions.
struct LabeledPair {
  std::size_t seed_item = 0;
  std::size_t target_item = 0;
  std::size_t target_category = 0;
};

struct DatasetSplit {
  std::vector<LabeledPair> train;
  std::vector<LabeledPair> validation;
  std::vector<LabeledPair> test;
};

struct CategoryCount {
  std::size_t category = 0;
  std::size_t count = 0;
};

// Seed category -> complementary categories, ordered by count descending with
// ties broken by category index ascending. Never maps a category to itself.
struct ComplementaryCategoryMap {
  std::vector<std::vector<CategoryCount>> by_category;

  const std::vector<CategoryCount>& complements_of(std::size_t category) const;
};

// item metadata CSV: header "item_id,category,price", one row per item.
// feature file: magic "ALCF", u32 version(=1), u32 rows, u32 width, then
// rows*width little-endian f32 values in CSV row order.
Catalog load_catalog(const std::string& items_csv, const std::string& features_bin);

// Variant for prepared catalogs whose metadata carries a price_bin column.
Catalog load_prepared_catalog(const std::string& items_csv, const std::string& features_bin);

void write_items_csv(const std::string& path, const Catalog& catalog, bool with_bin);
void write_features_bin(const std::string& path, const Catalog& catalog);

Catalog filter_rare_categories(Catalog catalog, std::size_t min_items = 5);

// Equal-depth bins over (price, item_id) order; identical prices share the bin
// of their first member so the bin is a function of the price.
Catalog discretize_prices(Catalog catalog, std::size_t bins = 20);

struct PairBuildResult {
  std::vector<LabeledPair> pairs;
  std::size_t dropped_unresolved = 0;
  std::size_t dropped_same_category = 0;
};

// raw_recs: (seed id, recommended id) rows, e.g. from "also bought" exports.
PairBuildResult build_labeled_pairs(
    const Catalog& catalog, const std::vector<std::pair<std::string, std::string>>& raw_recs);

ComplementaryCategoryMap derive_complementary_categories(const std::vector<LabeledPair>& pairs,
                                                         const Catalog& catalog);

// Cold split: distinct seed items are partitioned, every pair follows its seed
// item, and train pairs whose target is a held-out seed item are dropped so
// held-out ids never appear in training. Held-out pairs go half to validation,
// half (plus the odd one) to test.
DatasetSplit split_cold(const std::vector<LabeledPair>& pairs, double train_fraction,
                        std::uint64_t seed);

std::vector<std::pair<std::string, std::string>> read_recs_csv(const std::string& path);
void write_pairs_csv(const std::string& path, const std::vector<LabeledPair>& pairs,
                     const Catalog& catalog);
std::vector<LabeledPair> read_pairs_csv(const std::string& path, const Catalog& catalog);
void write_cc_map_csv(const std::string& path, const ComplementaryCategoryMap& map,
                      const Catalog& catalog);
ComplementaryCategoryMap read_cc_map_csv(const std::string& path, const Catalog& catalog);

struct DatasetStats {
  std::size_t n_items = 0;
  std::size_t n_pairs = 0;
  std::size_t n_categories = 0;
  std::size_t n_category_pairs = 0;
  double avg_items_per_category = 0.0;
  std::size_t max_items_per_category = 0;
  std::size_t min_items_per_category = 0;
};

DatasetStats dataset_stats(const Catalog& catalog, const std::vector<LabeledPair>& pairs);
void print_stats(std::ostream& os, const DatasetStats& stats);

}  // namespace alcir
