#pragma once

#include <alcir/data.hpp>
#include <alcir/losses.hpp>
#include <alcir/model.hpp>
#include <alcir/params.hpp>
#include <alcir/rng.hpp>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace alcir {

struct TrainConfig {
  std::size_t epochs = 50;
  std::size_t batch_size = 32;
  double learning_rate = 0.05;
  LossWeights weights{};
  TripletConfig triplet{};
  OptimizerConfig optimizer{};
  std::size_t early_stop_patience = 5;
  double unlabeled_ratio = 1.0;  // ceil() unlabeled items per labeled triplet
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct LabeledExample {
  std::size_t seed_item = 0;
  std::size_t positive_item = 0;
  std::size_t negative_item = 0;
  std::size_t target_category = 0;
};

struct UnlabeledExample {
  std::size_t item = 0;
  std::size_t target_category = 0;
};

struct TrainBatch {
  std::vector<LabeledExample> labeled;
  std::vector<UnlabeledExample> unlabeled;
};

struct LossBreakdown {
  double triplet = 0.0;
  double cycle = 0.0;
  double classifier_genuine = 0.0;
  double classifier_translated = 0.0;
};

struct EpochRow {
  std::size_t epoch = 0;  // 1-based
  LossBreakdown losses;
  double val_hr10 = 0.0;
  double val_ndcg = 0.0;
};

struct TrainingLog {
  std::vector<EpochRow> rows;
  void write_csv(std::ostream& os) const;
};

struct FitResult {
  ParamStore params;
  TrainingLog log;
};

// Uniform draw from the target category excluding the target item itself.
std::size_t sample_negative(const LabeledPair& pair, const Catalog& catalog, Rng& rng);

// Shuffles the pairs, chunks them, samples negatives (skipping pairs whose
// target category cannot supply one) and attaches ceil(unlabeled_ratio)
// unlabeled items per labeled triplet, each aimed at a random complementary
// category of its own category (uniform other category when the map is empty).
std::vector<TrainBatch> build_batches(const std::vector<LabeledPair>& train_pairs,
                                      const Catalog& catalog,
                                      const ComplementaryCategoryMap& cc_map,
                                      const TrainConfig& cfg, Rng& rng);

// One optimizer step over the batch. Zero-weight objectives are skipped
// entirely, so their private parameters stay untouched.
LossBreakdown train_step(ParamStore& params, Optimizer& optimizer, const TrainBatch& batch,
                         const Catalog& catalog, const ModelConfig& model_cfg,
                         const TrainConfig& cfg);

// Epoch loop with per-epoch validation (HR@10, NDCG; category-aware), best
// checkpoint tracking and early stopping. Returns the parameters of the best
// validation HR@10 epoch; with epochs == 0, the freshly initialized model.
FitResult fit(const Catalog& catalog, const DatasetSplit& split,
              const ComplementaryCategoryMap& cc_map, const ModelConfig& model_cfg,
              const TrainConfig& cfg);

}  // namespace alcir
