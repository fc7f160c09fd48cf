#pragma once

#include <alcir/data.hpp>

#include <cstdint>
#include <vector>

namespace alcir {

// Items carry a latent style vector; features are a fixed linear map of
// [style ; one-hot category] plus Gaussian noise. The designated complement of
// category c is category (c+1) mod n_categories, and ground-truth complements
// are style-nearest items there, so a learner that recovers style geometry can
// solve retrieval.
struct SyntheticSpec {
  std::size_t n_categories = 6;
  std::size_t items_per_category = 60;
  std::size_t style_dim = 8;
  std::size_t feature_dim = 16;
  double noise_scale = 0.1;
  std::size_t pairs_per_item = 1;
  double label_fraction = 1.0;  // kept share of ground-truth pairs
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticData {
  Catalog catalog;  // prices raw; run discretize_prices before encoding
  std::vector<LabeledPair> labeled_pairs;
  // item index -> its ground-truth complements, best first (pairs_per_item).
  std::vector<std::vector<std::size_t>> ground_truth;
  std::vector<std::vector<double>> styles;
};

SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace alcir
