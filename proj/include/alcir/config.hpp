#pragma once

#include <alcir/losses.hpp>
#include <alcir/model.hpp>
#include <alcir/synthetic.hpp>
#include <alcir/training.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace alcir {

// One flat key=value file drives every command; `--set key=value` overrides
// individual entries and `--print-config` dumps the merged result in a form
// that can be fed straight back in.
struct RunConfig {
  // Paths.
  std::string items_csv = "data/items.csv";
  std::string features_bin = "data/features.bin";
  std::string recs_csv = "data/recs.csv";
  std::string data_dir = "data";
  std::string out_dir = "out";

  // Pipeline.
  std::size_t min_items_per_category = 5;
  std::size_t price_bins = 20;
  double train_fraction = 0.8;
  std::uint64_t seed = 42;

  // Synthetic generator.
  std::size_t synth_categories = 6;
  std::size_t synth_items_per_category = 60;
  std::size_t synth_style_dim = 8;
  std::size_t synth_feature_dim = 16;
  double synth_noise_scale = 0.1;
  std::size_t synth_pairs_per_item = 1;
  double synth_label_fraction = 1.0;

  // Model sizes.
  std::size_t latent_dim = 32;
  std::size_t category_embedding_dim = 8;
  std::size_t price_embedding_dim = 8;
  std::vector<std::size_t> image_hidden = {64, 32};
  std::vector<std::size_t> fusion_hidden = {64};
  std::vector<std::size_t> translator_hidden = {64};
  std::vector<std::size_t> reconstructor_hidden = {64};
  std::vector<std::size_t> classifier_hidden = {64};

  // Training.
  std::string preset = "full";
  bool explicit_weights = false;  // set when any w_* key is given
  double w_triplet = 0.6;
  double w_cycle = 0.2;
  double w_classifier = 0.2;
  std::size_t epochs = 50;
  std::size_t batch_size = 32;
  double learning_rate = 0.05;
  double margin = 0.2;
  std::string distance = "neg_cosine";
  std::string optimizer = "sgd";
  double momentum = 0.9;
  std::size_t early_stop_patience = 5;
  double unlabeled_ratio = 1.0;

  // Evaluation.
  std::string eval_model = "alcir";
  std::string protocol = "category_aware";
  std::size_t label_bins = 0;
  std::vector<std::size_t> k_list = {1, 5, 10};

  void validate() const;

  SyntheticSpec synthetic_spec() const;
  ModelConfig model_config(std::size_t feature_dim, std::size_t n_categories) const;
  TrainConfig train_config() const;  // applies the preset unless weights are explicit
};

// Parses `key = value` lines; '#' starts a comment, blank lines are skipped.
RunConfig load_config(const std::string& path);

// Applies one override in the same syntax as a config line.
void apply_kv(RunConfig& config, const std::string& key, const std::string& value);

// Emits every key in load_config() syntax.
void print_config(std::ostream& os, const RunConfig& config);

}  // namespace alcir
