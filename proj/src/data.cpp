#include <alcir/data.hpp>
#include <alcir/errors.hpp>
#include <alcir/rng.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace alcir {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string read_line(std::istream& in, bool& ok) {
  std::string line;
  ok = static_cast<bool>(std::getline(in, line));
  if (ok && !line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  return static_cast<std::uint32_t>(buf[0]) | (static_cast<std::uint32_t>(buf[1]) << 8) |
         (static_cast<std::uint32_t>(buf[2]) << 16) | (static_cast<std::uint32_t>(buf[3]) << 24);
}

void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char buf[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(buf), 4);
}

// Position -> bin under floor boundaries; chunk sizes differ by at most one.
std::size_t chunk_bin(std::size_t position, std::size_t n, std::size_t bins) {
  return position * bins / n;
}

}  // namespace

void Catalog::rebuild_index() {
  index_by_id.clear();
  items_by_category.assign(categories.size(), {});
  for (std::size_t i = 0; i < items.size(); ++i) {
    const ItemRecord& item = items[i];
    if (!index_by_id.emplace(item.item_id, i).second) {
      throw DataError("duplicate item_id: " + item.item_id);
    }
    if (item.category_id >= categories.size()) {
      throw DataError("item " + item.item_id + " references an unknown category");
    }
    items_by_category[item.category_id].push_back(i);
  }
}

std::size_t Catalog::item_index(const std::string& id) const {
  auto it = index_by_id.find(id);
  if (it == index_by_id.end()) throw DataError("unknown item_id: " + id);
  return it->second;
}

std::size_t Catalog::category_index(const std::string& name) const {
  for (std::size_t i = 0; i < categories.size(); ++i) {
    if (categories[i] == name) return i;
  }
  throw DataError("unknown category: " + name);
}

const std::vector<CategoryCount>& ComplementaryCategoryMap::complements_of(
    std::size_t category) const {
  if (category >= by_category.size()) {
    throw DataError("complementary map has no entry for category index " +
                    std::to_string(category));
  }
  return by_category[category];
}

namespace {

Catalog load_catalog_impl(const std::string& items_csv, const std::string& features_bin,
                          bool with_bin) {
  std::ifstream in(items_csv);
  if (!in) throw DataError("cannot open item metadata: " + items_csv);
  const std::string expected_header =
      with_bin ? "item_id,category,price,price_bin" : "item_id,category,price";
  bool ok = false;
  std::string header = read_line(in, ok);
  if (!ok || header != expected_header) {
    throw DataError("item metadata must start with header " + expected_header + ": " + items_csv);
  }

  Catalog catalog;
  std::unordered_map<std::string, std::size_t> category_ids;
  const std::size_t n_fields = with_bin ? 4 : 3;
  std::size_t line_no = 1;
  while (true) {
    std::string line = read_line(in, ok);
    if (!ok) break;
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != n_fields || fields[0].empty() || fields[1].empty()) {
      throw DataError("malformed metadata row " + std::to_string(line_no) + " in " + items_csv);
    }
    ItemRecord item;
    item.item_id = fields[0];
    double price = 0.0;
    try {
      price = std::stod(fields[2]);
    } catch (const std::exception&) {
      throw DataError("item " + item.item_id + " has a non-numeric price");
    }
    if (!(price >= 0.0)) throw DataError("item " + item.item_id + " has a negative price");
    item.price = price;
    if (with_bin) {
      try {
        item.price_bin = std::stoi(fields[3]);
      } catch (const std::exception&) {
        throw DataError("item " + item.item_id + " has a non-numeric price bin");
      }
      if (item.price_bin < 0) {
        throw DataError("item " + item.item_id + " has a negative price bin");
      }
    }
    auto [it, inserted] = category_ids.emplace(fields[1], catalog.categories.size());
    if (inserted) catalog.categories.push_back(fields[1]);
    item.category_id = it->second;
    catalog.items.push_back(std::move(item));
  }

  std::ifstream feat(features_bin, std::ios::binary);
  if (!feat) throw DataError("cannot open feature file: " + features_bin);
  char magic[4];
  feat.read(magic, 4);
  if (feat.gcount() != 4 || std::memcmp(magic, "ALCF", 4) != 0) {
    throw DataError("feature file has a bad magic header: " + features_bin);
  }
  const std::uint32_t version = read_u32(feat);
  if (version != 1) {
    throw DataError("unsupported feature file version " + std::to_string(version));
  }
  const std::uint32_t rows = read_u32(feat);
  const std::uint32_t width = read_u32(feat);
  if (!feat) throw DataError("feature file header truncated: " + features_bin);
  if (width == 0) throw DataError("feature file declares zero width: " + features_bin);
  if (rows < catalog.items.size()) {
    throw DataError("item " + catalog.items[rows].item_id + " has no feature row in " +
                    features_bin);
  }
  if (rows > catalog.items.size()) {
    throw DataError("feature file has " + std::to_string(rows) + " rows but metadata lists " +
                    std::to_string(catalog.items.size()) + " items");
  }
  std::vector<float> buf(width);
  for (std::size_t r = 0; r < rows; ++r) {
    feat.read(reinterpret_cast<char*>(buf.data()),
              static_cast<std::streamsize>(width * sizeof(float)));
    if (feat.gcount() != static_cast<std::streamsize>(width * sizeof(float))) {
      throw DataError("feature row for item " + catalog.items[r].item_id +
                      " is shorter than the declared width " + std::to_string(width));
    }
    Array row = Array::zeros({width});
    for (std::size_t i = 0; i < width; ++i) row[i] = static_cast<double>(buf[i]);
    if (!row.all_finite()) {
      throw DataError("non-finite feature values for item " + catalog.items[r].item_id);
    }
    catalog.items[r].image_features = std::move(row);
  }
  feat.peek();
  if (!feat.eof()) throw DataError("feature file has trailing bytes: " + features_bin);

  catalog.feature_dim = width;
  catalog.rebuild_index();
  return catalog;
}

}  // namespace

Catalog load_catalog(const std::string& items_csv, const std::string& features_bin) {
  return load_catalog_impl(items_csv, features_bin, false);
}

Catalog load_prepared_catalog(const std::string& items_csv, const std::string& features_bin) {
  return load_catalog_impl(items_csv, features_bin, true);
}

void write_items_csv(const std::string& path, const Catalog& catalog, bool with_bin) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write item metadata: " + path);
  out << (with_bin ? "item_id,category,price,price_bin" : "item_id,category,price") << "\n";
  char price[64];
  for (const ItemRecord& item : catalog.items) {
    std::snprintf(price, sizeof(price), "%.17g", item.price);
    out << item.item_id << "," << catalog.categories[item.category_id] << "," << price;
    if (with_bin) out << "," << item.price_bin;
    out << "\n";
  }
  if (!out) throw DataError("failed writing item metadata: " + path);
}

void write_features_bin(const std::string& path, const Catalog& catalog) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write feature file: " + path);
  out.write("ALCF", 4);
  write_u32(out, 1);
  write_u32(out, static_cast<std::uint32_t>(catalog.items.size()));
  write_u32(out, static_cast<std::uint32_t>(catalog.feature_dim));
  std::vector<float> buf(catalog.feature_dim);
  for (const ItemRecord& item : catalog.items) {
    if (item.image_features.size() != catalog.feature_dim) {
      throw DimensionError("item " + item.item_id + " has an inconsistent feature width");
    }
    for (std::size_t i = 0; i < buf.size(); ++i) {
      buf[i] = static_cast<float>(item.image_features[i]);
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
  }
  if (!out) throw DataError("failed writing feature file: " + path);
}

Catalog filter_rare_categories(Catalog catalog, std::size_t min_items) {
  std::vector<std::size_t> counts(catalog.categories.size(), 0);
  for (const ItemRecord& item : catalog.items) ++counts[item.category_id];

  std::vector<std::size_t> remap(catalog.categories.size(), SIZE_MAX);
  std::vector<std::string> kept;
  for (std::size_t c = 0; c < catalog.categories.size(); ++c) {
    if (counts[c] >= min_items) {
      remap[c] = kept.size();
      kept.push_back(catalog.categories[c]);
    }
  }

  std::vector<ItemRecord> survivors;
  survivors.reserve(catalog.items.size());
  for (ItemRecord& item : catalog.items) {
    if (remap[item.category_id] == SIZE_MAX) continue;
    item.category_id = remap[item.category_id];
    survivors.push_back(std::move(item));
  }
  catalog.items = std::move(survivors);
  catalog.categories = std::move(kept);
  catalog.rebuild_index();
  return catalog;
}

Catalog discretize_prices(Catalog catalog, std::size_t bins) {
  if (bins == 0) throw ConfigError("price discretization needs at least one bin");
  const std::size_t n = catalog.items.size();
  if (n == 0) return catalog;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const ItemRecord& ia = catalog.items[a];
    const ItemRecord& ib = catalog.items[b];
    if (ia.price != ib.price) return ia.price < ib.price;
    return ia.item_id < ib.item_id;
  });

  double group_price = 0.0;
  std::size_t group_bin = 0;
  for (std::size_t pos = 0; pos < n; ++pos) {
    ItemRecord& item = catalog.items[order[pos]];
    if (pos == 0 || item.price != group_price) {
      group_price = item.price;
      group_bin = chunk_bin(pos, n, bins);
    }
    item.price_bin = static_cast<int>(group_bin);
  }
  return catalog;
}

PairBuildResult build_labeled_pairs(
    const Catalog& catalog, const std::vector<std::pair<std::string, std::string>>& raw_recs) {
  PairBuildResult result;
  for (const auto& [seed_id, target_id] : raw_recs) {
    const auto seed_it = catalog.index_by_id.find(seed_id);
    const auto target_it = catalog.index_by_id.find(target_id);
    if (seed_it == catalog.index_by_id.end() || target_it == catalog.index_by_id.end()) {
      ++result.dropped_unresolved;
      continue;
    }
    const ItemRecord& seed = catalog.items[seed_it->second];
    const ItemRecord& target = catalog.items[target_it->second];
    if (seed.category_id == target.category_id) {
      ++result.dropped_same_category;
      continue;
    }
    result.pairs.push_back({seed_it->second, target_it->second, target.category_id});
  }
  return result;
}

ComplementaryCategoryMap derive_complementary_categories(const std::vector<LabeledPair>& pairs,
                                                         const Catalog& catalog) {
  const std::size_t n = catalog.categories.size();
  std::vector<std::vector<std::size_t>> counts(n, std::vector<std::size_t>(n, 0));
  for (const LabeledPair& pair : pairs) {
    const std::size_t seed_cat = catalog.items[pair.seed_item].category_id;
    if (seed_cat == pair.target_category) {
      throw DataError("labeled pair maps a category to itself");
    }
    ++counts[seed_cat][pair.target_category];
  }
  ComplementaryCategoryMap map;
  map.by_category.assign(n, {});
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t t = 0; t < n; ++t) {
      if (counts[c][t] > 0) map.by_category[c].push_back({t, counts[c][t]});
    }
    std::sort(map.by_category[c].begin(), map.by_category[c].end(),
              [](const CategoryCount& a, const CategoryCount& b) {
                if (a.count != b.count) return a.count > b.count;
                return a.category < b.category;
              });
  }
  return map;
}

DatasetSplit split_cold(const std::vector<LabeledPair>& pairs, double train_fraction,
                        std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train_fraction must lie strictly between 0 and 1");
  }
  std::set<std::size_t> distinct;
  for (const LabeledPair& pair : pairs) distinct.insert(pair.seed_item);
  if (distinct.size() < 3) {
    throw DataError("cold split infeasible: need at least 3 distinct seed items, have " +
                    std::to_string(distinct.size()));
  }

  std::vector<std::size_t> seeds(distinct.begin(), distinct.end());
  Rng rng(seed);
  rng.shuffle(seeds);

  const std::size_t n_train =
      std::min(seeds.size() - 2,
               std::max<std::size_t>(1, static_cast<std::size_t>(
                                            train_fraction * static_cast<double>(seeds.size()))));
  std::unordered_set<std::size_t> train_seeds(seeds.begin(), seeds.begin() + n_train);
  std::unordered_set<std::size_t> heldout(seeds.begin() + n_train, seeds.end());

  // Held-out seed items alternate validation/test so the halves stay balanced;
  // test receives the odd one.
  std::unordered_set<std::size_t> validation_seeds, test_seeds;
  const std::size_t n_held = seeds.size() - n_train;
  const std::size_t n_val = n_held / 2;
  for (std::size_t i = 0; i < n_held; ++i) {
    if (i < n_val) {
      validation_seeds.insert(seeds[n_train + i]);
    } else {
      test_seeds.insert(seeds[n_train + i]);
    }
  }

  DatasetSplit split;
  for (const LabeledPair& pair : pairs) {
    if (train_seeds.count(pair.seed_item) != 0) {
      // Cold property: a held-out seed item may not appear anywhere in train,
      // including as a target.
      if (heldout.count(pair.target_item) != 0) continue;
      split.train.push_back(pair);
    } else if (validation_seeds.count(pair.seed_item) != 0) {
      split.validation.push_back(pair);
    } else {
      split.test.push_back(pair);
    }
  }
  if (split.train.empty()) {
    throw DataError("cold split produced an empty training set; more pairs are needed");
  }
  return split;
}

std::vector<std::pair<std::string, std::string>> read_recs_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open recommendation pairs: " + path);
  bool ok = false;
  std::string header = read_line(in, ok);
  if (!ok || header != "item_id,recommended_id") {
    throw DataError("recommendation pairs must start with header item_id,recommended_id: " +
                    path);
  }
  std::vector<std::pair<std::string, std::string>> out;
  while (true) {
    std::string line = read_line(in, ok);
    if (!ok) break;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw DataError("malformed recommendation row in " + path + ": " + line);
    }
    out.emplace_back(fields[0], fields[1]);
  }
  return out;
}

void write_pairs_csv(const std::string& path, const std::vector<LabeledPair>& pairs,
                     const Catalog& catalog) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write pairs: " + path);
  out << "seed_id,target_id,target_category\n";
  for (const LabeledPair& pair : pairs) {
    out << catalog.items[pair.seed_item].item_id << "," << catalog.items[pair.target_item].item_id
        << "," << catalog.categories[pair.target_category] << "\n";
  }
  if (!out) throw DataError("failed writing pairs: " + path);
}

std::vector<LabeledPair> read_pairs_csv(const std::string& path, const Catalog& catalog) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open pairs: " + path);
  bool ok = false;
  std::string header = read_line(in, ok);
  if (!ok || header != "seed_id,target_id,target_category") {
    throw DataError("pairs file must start with header seed_id,target_id,target_category: " +
                    path);
  }
  std::vector<LabeledPair> out;
  while (true) {
    std::string line = read_line(in, ok);
    if (!ok) break;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 3) throw DataError("malformed pair row in " + path + ": " + line);
    LabeledPair pair;
    pair.seed_item = catalog.item_index(fields[0]);
    pair.target_item = catalog.item_index(fields[1]);
    pair.target_category = catalog.category_index(fields[2]);
    if (catalog.items[pair.target_item].category_id != pair.target_category) {
      throw DataError("pair row disagrees with catalog categories: " + line);
    }
    out.push_back(pair);
  }
  return out;
}

void write_cc_map_csv(const std::string& path, const ComplementaryCategoryMap& map,
                      const Catalog& catalog) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write complementary map: " + path);
  out << "seed_category,complement_category,count\n";
  for (std::size_t c = 0; c < map.by_category.size(); ++c) {
    for (const CategoryCount& cc : map.by_category[c]) {
      out << catalog.categories[c] << "," << catalog.categories[cc.category] << "," << cc.count
          << "\n";
    }
  }
  if (!out) throw DataError("failed writing complementary map: " + path);
}

ComplementaryCategoryMap read_cc_map_csv(const std::string& path, const Catalog& catalog) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open complementary map: " + path);
  bool ok = false;
  std::string header = read_line(in, ok);
  if (!ok || header != "seed_category,complement_category,count") {
    throw DataError("complementary map must start with its standard header: " + path);
  }
  ComplementaryCategoryMap map;
  map.by_category.assign(catalog.categories.size(), {});
  while (true) {
    std::string line = read_line(in, ok);
    if (!ok) break;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 3) throw DataError("malformed complementary map row: " + line);
    const std::size_t seed_cat = catalog.category_index(fields[0]);
    const std::size_t comp_cat = catalog.category_index(fields[1]);
    map.by_category[seed_cat].push_back({comp_cat, std::stoull(fields[2])});
  }
  return map;
}

DatasetStats dataset_stats(const Catalog& catalog, const std::vector<LabeledPair>& pairs) {
  DatasetStats stats;
  stats.n_items = catalog.items.size();
  stats.n_pairs = pairs.size();
  stats.n_categories = catalog.categories.size();
  std::set<std::pair<std::size_t, std::size_t>> category_pairs;
  for (const LabeledPair& pair : pairs) {
    category_pairs.emplace(catalog.items[pair.seed_item].category_id, pair.target_category);
  }
  stats.n_category_pairs = category_pairs.size();
  if (!catalog.categories.empty()) {
    std::size_t mx = 0, mn = SIZE_MAX;
    for (const auto& members : catalog.items_by_category) {
      mx = std::max(mx, members.size());
      mn = std::min(mn, members.size());
    }
    stats.max_items_per_category = mx;
    stats.min_items_per_category = mn == SIZE_MAX ? 0 : mn;
    stats.avg_items_per_category =
        static_cast<double>(catalog.items.size()) / static_cast<double>(catalog.categories.size());
  }
  return stats;
}

void print_stats(std::ostream& os, const DatasetStats& stats) {
  char avg[32];
  std::snprintf(avg, sizeof(avg), "%.1f", stats.avg_items_per_category);
  os << "#items                  " << stats.n_items << "\n";
  os << "#item pairs             " << stats.n_pairs << "\n";
  os << "#categories             " << stats.n_categories << "\n";
  os << "#category pairs         " << stats.n_category_pairs << "\n";
  os << "Avg. items per category " << avg << "\n";
  os << "Max items per category  " << stats.max_items_per_category << "\n";
  os << "Min items per category  " << stats.min_items_per_category << "\n";
}

}  // namespace alcir
