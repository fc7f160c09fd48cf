#pragma once

#include <alcir/data.hpp>
#include <alcir/mlp.hpp>
#include <alcir/params.hpp>
#include <alcir/tape.hpp>

#include <cstddef>
#include <vector>

namespace alcir {

struct EncoderConfig {
  MlpSpec image_mlp;  // feature_dim -> ... -> image output
  std::size_t category_embedding_dim = 8;
  std::size_t price_embedding_dim = 8;
  MlpSpec fusion_mlp;  // image output + both embeddings -> ... -> latent_dim
};

struct TranslatorConfig {
  std::size_t category_embedding_dim = 8;  // target category
  MlpSpec mlp;                             // latent + embedding -> ... -> latent_dim
};

struct ClassifierConfig {
  MlpSpec mlp;  // latent_dim -> ... -> n_categories
};

struct ReconstructorConfig {
  std::size_t category_embedding_dim = 8;  // origin category
  MlpSpec mlp;                             // latent + embedding -> ... -> latent_dim
};

struct ModelConfig {
  std::size_t feature_dim = 0;
  std::size_t n_categories = 0;
  std::size_t n_price_bins = 20;
  std::size_t latent_dim = 32;

  EncoderConfig encoder;
  TranslatorConfig translator;
  ClassifierConfig classifier;
  ReconstructorConfig reconstructor;

  // Fills the four sub-network specs from hidden-width lists; image_hidden's
  // last entry is the image tower output width.
  static ModelConfig make(std::size_t feature_dim, std::size_t n_categories,
                          std::size_t n_price_bins = 20, std::size_t latent_dim = 32,
                          std::vector<std::size_t> image_hidden = {64, 32},
                          std::vector<std::size_t> fusion_hidden = {64},
                          std::vector<std::size_t> translator_hidden = {64},
                          std::vector<std::size_t> reconstructor_hidden = {64},
                          std::vector<std::size_t> classifier_hidden = {64},
                          std::size_t category_embedding_dim = 8,
                          std::size_t price_embedding_dim = 8,
                          std::size_t translator_category_dim = 8,
                          std::size_t reconstructor_category_dim = 8);

  void validate() const;
};

// Parameter paths live under encoder/, translator/, classifier/ and
// reconstructor/ so the four sub-networks never share tensors.
void register_model(ParamStore& params, const ModelConfig& cfg);

Tape::Id encode_item(Tape& tape, const ParamStore& params, const ModelConfig& cfg,
                     const ItemRecord& item);
Tape::Id translate(Tape& tape, const ParamStore& params, const ModelConfig& cfg, Tape::Id latent,
                   std::size_t target_category);
Tape::Id classify_probabilities(Tape& tape, const ParamStore& params, const ModelConfig& cfg,
                                Tape::Id latent);
Tape::Id classify(Tape& tape, const ParamStore& params, const ModelConfig& cfg, Tape::Id latent,
                  std::size_t category);
Tape::Id reconstruct(Tape& tape, const ParamStore& params, const ModelConfig& cfg,
                     Tape::Id translated, std::size_t origin_category);

}  // namespace alcir
