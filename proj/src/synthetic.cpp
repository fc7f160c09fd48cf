#include <alcir/rng.hpp>
#include <alcir/synthetic.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace alcir {

void SyntheticSpec::validate() const {
  if (n_categories < 2) throw ConfigError("synthetic data needs at least two categories");
  if (items_per_category == 0) throw ConfigError("items_per_category must be positive");
  if (style_dim == 0 || feature_dim == 0) throw ConfigError("style/feature dims must be positive");
  if (pairs_per_item == 0) throw ConfigError("pairs_per_item must be positive");
  if (pairs_per_item > items_per_category) {
    throw ConfigError("pairs_per_item cannot exceed items_per_category");
  }
  if (!(noise_scale >= 0.0)) throw ConfigError("noise_scale must be nonnegative");
  if (!(label_fraction > 0.0 && label_fraction <= 1.0)) {
    throw ConfigError("label_fraction must lie in (0, 1]");
  }
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(splitmix64(spec.seed ^ 0xa1c19000dull));

  const std::size_t n_items = spec.n_categories * spec.items_per_category;
  const std::size_t map_cols = spec.style_dim + spec.n_categories;

  // Fixed mixing map, scaled so feature magnitudes stay near unit order.
  std::vector<double> mix(spec.feature_dim * map_cols);
  const double mix_scale = 1.0 / std::sqrt(static_cast<double>(map_cols));
  for (double& v : mix) v = rng.normal() * mix_scale;

  SyntheticData data;
  data.styles.resize(n_items);
  data.catalog.feature_dim = spec.feature_dim;
  for (std::size_t c = 0; c < spec.n_categories; ++c) {
    char name[32];
    std::snprintf(name, sizeof(name), "cat%02zu", c);
    data.catalog.categories.emplace_back(name);
  }

  for (std::size_t c = 0; c < spec.n_categories; ++c) {
    for (std::size_t j = 0; j < spec.items_per_category; ++j) {
      const std::size_t idx = c * spec.items_per_category + j;
      ItemRecord item;
      char id[48];
      std::snprintf(id, sizeof(id), "c%02zu_i%04zu", c, j);
      item.item_id = id;
      item.category_id = c;
      item.price = rng.uniform(1.0, 100.0);

      std::vector<double>& style = data.styles[idx];
      style.resize(spec.style_dim);
      for (double& v : style) v = rng.normal();

      Array features = Array::zeros({spec.feature_dim});
      for (std::size_t r = 0; r < spec.feature_dim; ++r) {
        double acc = 0.0;
        const double* row = mix.data() + r * map_cols;
        for (std::size_t s = 0; s < spec.style_dim; ++s) acc += row[s] * style[s];
        acc += row[spec.style_dim + c];  // one-hot category contribution
        features[r] = acc + spec.noise_scale * rng.normal();
      }
      item.image_features = std::move(features);
      data.catalog.items.push_back(std::move(item));
    }
  }
  data.catalog.rebuild_index();

  // Ground truth: nearest style neighbours in the designated complement
  // category, ties broken by item_id.
  data.ground_truth.resize(n_items);
  std::vector<LabeledPair> all_pairs;
  for (std::size_t idx = 0; idx < n_items; ++idx) {
    const std::size_t c = data.catalog.items[idx].category_id;
    const std::size_t complement = (c + 1) % spec.n_categories;
    const std::vector<std::size_t>& candidates = data.catalog.items_by_category[complement];
    std::vector<std::size_t> order(candidates);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double da = [&] {
        double acc = 0.0;
        for (std::size_t s = 0; s < spec.style_dim; ++s) {
          const double d = data.styles[idx][s] - data.styles[a][s];
          acc += d * d;
        }
        return acc;
      }();
      const double db = [&] {
        double acc = 0.0;
        for (std::size_t s = 0; s < spec.style_dim; ++s) {
          const double d = data.styles[idx][s] - data.styles[b][s];
          acc += d * d;
        }
        return acc;
      }();
      if (da != db) return da < db;
      return data.catalog.items[a].item_id < data.catalog.items[b].item_id;
    });
    for (std::size_t k = 0; k < spec.pairs_per_item && k < order.size(); ++k) {
      data.ground_truth[idx].push_back(order[k]);
      all_pairs.push_back({idx, order[k], complement});
    }
  }

  // Keep ceil(label_fraction * n) ground-truth pairs as the labeled set.
  // Label coverage is deliberately uneven across seed categories: quota for
  // category c follows a linear ramp (n-c), so the last categories' pair
  // directions stay label-poor. This plants a rarity gradient for the
  // label-paucity analyses; the global count stays exact via largest
  // remainder.
  const std::size_t keep = std::min(
      all_pairs.size(), static_cast<std::size_t>(std::ceil(
                            spec.label_fraction * static_cast<double>(all_pairs.size()))));
  std::vector<std::vector<std::size_t>> by_seed_cat(spec.n_categories);
  for (std::size_t i = 0; i < all_pairs.size(); ++i) {
    by_seed_cat[data.catalog.items[all_pairs[i].seed_item].category_id].push_back(i);
  }
  const double mean_ramp = static_cast<double>(spec.n_categories + 1) / 2.0;
  std::vector<std::size_t> quota(spec.n_categories);
  std::vector<double> remainder(spec.n_categories);
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < spec.n_categories; ++c) {
    const double ramp = static_cast<double>(spec.n_categories - c) / mean_ramp;
    const double want =
        std::min(static_cast<double>(by_seed_cat[c].size()),
                 spec.label_fraction * ramp * static_cast<double>(by_seed_cat[c].size()));
    quota[c] = static_cast<std::size_t>(want);
    remainder[c] = want - static_cast<double>(quota[c]);
    assigned += quota[c];
  }
  while (assigned < keep) {
    std::size_t best = spec.n_categories;
    for (std::size_t c = 0; c < spec.n_categories; ++c) {
      if (quota[c] >= by_seed_cat[c].size()) continue;
      if (best == spec.n_categories || remainder[c] > remainder[best]) best = c;
    }
    if (best == spec.n_categories) break;
    ++quota[best];
    remainder[best] = -1.0;
    ++assigned;
  }
  while (assigned > keep) {
    std::size_t best = spec.n_categories;
    for (std::size_t c = 0; c < spec.n_categories; ++c) {
      if (quota[c] == 0) continue;
      if (best == spec.n_categories || remainder[c] < remainder[best]) best = c;
    }
    --quota[best];
    remainder[best] = 2.0;
    --assigned;
  }
  std::vector<std::size_t> order;
  for (std::size_t c = 0; c < spec.n_categories; ++c) {
    std::vector<std::size_t>& group = by_seed_cat[c];
    rng.shuffle(group);
    order.insert(order.end(), group.begin(), group.begin() + quota[c]);
  }
  std::sort(order.begin(), order.end());
  for (std::size_t i : order) data.labeled_pairs.push_back(all_pairs[i]);

  return data;
}

}  // namespace alcir
