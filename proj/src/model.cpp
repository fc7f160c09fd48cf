#include <alcir/model.hpp>

namespace alcir {

namespace {

MlpSpec chain(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out) {
  std::vector<std::size_t> widths;
  widths.push_back(in);
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(out);
  return MlpSpec(std::move(widths));
}

}  // namespace

ModelConfig ModelConfig::make(std::size_t feature_dim, std::size_t n_categories,
                              std::size_t n_price_bins, std::size_t latent_dim,
                              std::vector<std::size_t> image_hidden,
                              std::vector<std::size_t> fusion_hidden,
                              std::vector<std::size_t> translator_hidden,
                              std::vector<std::size_t> reconstructor_hidden,
                              std::vector<std::size_t> classifier_hidden,
                              std::size_t category_embedding_dim, std::size_t price_embedding_dim,
                              std::size_t translator_category_dim,
                              std::size_t reconstructor_category_dim) {
  if (image_hidden.empty()) throw ConfigError("image tower needs at least an output width");
  ModelConfig cfg;
  cfg.feature_dim = feature_dim;
  cfg.n_categories = n_categories;
  cfg.n_price_bins = n_price_bins;
  cfg.latent_dim = latent_dim;

  const std::size_t image_out = image_hidden.back();
  image_hidden.pop_back();
  cfg.encoder.image_mlp = chain(feature_dim, image_hidden, image_out);
  cfg.encoder.category_embedding_dim = category_embedding_dim;
  cfg.encoder.price_embedding_dim = price_embedding_dim;
  cfg.encoder.fusion_mlp =
      chain(image_out + category_embedding_dim + price_embedding_dim, fusion_hidden, latent_dim);

  cfg.translator.category_embedding_dim = translator_category_dim;
  cfg.translator.mlp = chain(latent_dim + translator_category_dim, translator_hidden, latent_dim);

  cfg.classifier.mlp = chain(latent_dim, classifier_hidden, n_categories);

  cfg.reconstructor.category_embedding_dim = reconstructor_category_dim;
  cfg.reconstructor.mlp =
      chain(latent_dim + reconstructor_category_dim, reconstructor_hidden, latent_dim);

  cfg.validate();
  return cfg;
}

void ModelConfig::validate() const {
  if (feature_dim == 0) throw ConfigError("feature_dim must be positive");
  if (n_categories < 2) throw ConfigError("model needs at least two categories");
  if (n_price_bins == 0) throw ConfigError("n_price_bins must be positive");
  if (latent_dim == 0) throw ConfigError("latent_dim must be positive");
  encoder.image_mlp.validate();
  encoder.fusion_mlp.validate();
  translator.mlp.validate();
  classifier.mlp.validate();
  reconstructor.mlp.validate();
  if (encoder.image_mlp.input_width() != feature_dim) {
    throw ConfigError("image tower input width must equal feature_dim");
  }
  const std::size_t fused = encoder.image_mlp.output_width() + encoder.category_embedding_dim +
                            encoder.price_embedding_dim;
  if (encoder.fusion_mlp.input_width() != fused) {
    throw ConfigError("fusion input width must equal image output plus both embeddings");
  }
  if (encoder.fusion_mlp.output_width() != latent_dim) {
    throw ConfigError("fusion output width must equal latent_dim");
  }
  if (translator.mlp.input_width() != latent_dim + translator.category_embedding_dim ||
      translator.mlp.output_width() != latent_dim) {
    throw ConfigError("translator widths do not agree with latent_dim");
  }
  if (classifier.mlp.input_width() != latent_dim ||
      classifier.mlp.output_width() != n_categories) {
    throw ConfigError("classifier widths do not agree with latent_dim / n_categories");
  }
  if (reconstructor.mlp.input_width() != latent_dim + reconstructor.category_embedding_dim ||
      reconstructor.mlp.output_width() != latent_dim) {
    throw ConfigError("reconstructor widths do not agree with latent_dim");
  }
}

void register_model(ParamStore& params, const ModelConfig& cfg) {
  cfg.validate();
  register_mlp(params, "encoder/image", cfg.encoder.image_mlp);
  params.create("encoder/category_table", {cfg.n_categories, cfg.encoder.category_embedding_dim},
                Init::glorot_uniform);
  params.create("encoder/price_table", {cfg.n_price_bins, cfg.encoder.price_embedding_dim},
                Init::glorot_uniform);
  register_mlp(params, "encoder/fusion", cfg.encoder.fusion_mlp);
  params.create("translator/category_table",
                {cfg.n_categories, cfg.translator.category_embedding_dim}, Init::glorot_uniform);
  register_mlp(params, "translator/mlp", cfg.translator.mlp);
  register_mlp(params, "classifier/mlp", cfg.classifier.mlp);
  params.create("reconstructor/category_table",
                {cfg.n_categories, cfg.reconstructor.category_embedding_dim},
                Init::glorot_uniform);
  register_mlp(params, "reconstructor/mlp", cfg.reconstructor.mlp);
}

Tape::Id encode_item(Tape& tape, const ParamStore& params, const ModelConfig& cfg,
                     const ItemRecord& item) {
  if (item.image_features.size() != cfg.feature_dim) {
    throw DimensionError("item " + item.item_id + " has feature width " +
                         std::to_string(item.image_features.size()) + ", expected " +
                         std::to_string(cfg.feature_dim));
  }
  if (item.category_id >= cfg.n_categories) {
    throw DataError("item " + item.item_id + " has an unknown category index");
  }
  if (item.price_bin < 0 || static_cast<std::size_t>(item.price_bin) >= cfg.n_price_bins) {
    throw DataError("item " + item.item_id + " has no assigned price bin");
  }
  const Tape::Id features = tape.input(item.image_features);
  const Tape::Id image = mlp_forward(tape, params, "encoder/image", cfg.encoder.image_mlp,
                                     features);
  const Tape::Id cat =
      tape.embedding(tape.param(params, "encoder/category_table"), item.category_id);
  const Tape::Id price = tape.embedding(tape.param(params, "encoder/price_table"),
                                        static_cast<std::size_t>(item.price_bin));
  const Tape::Id fused = tape.concat({image, cat, price});
  return mlp_forward(tape, params, "encoder/fusion", cfg.encoder.fusion_mlp, fused);
}

Tape::Id translate(Tape& tape, const ParamStore& params, const ModelConfig& cfg, Tape::Id latent,
                   std::size_t target_category) {
  if (tape.value(latent).size() != cfg.latent_dim) {
    throw DimensionError("translate expects a latent of width latent_dim");
  }
  if (target_category >= cfg.n_categories) {
    throw DataError("translate: unknown target category index");
  }
  const Tape::Id cat =
      tape.embedding(tape.param(params, "translator/category_table"), target_category);
  const Tape::Id joined = tape.concat({latent, cat});
  return mlp_forward(tape, params, "translator/mlp", cfg.translator.mlp, joined);
}

Tape::Id classify_probabilities(Tape& tape, const ParamStore& params, const ModelConfig& cfg,
                                Tape::Id latent) {
  if (tape.value(latent).size() != cfg.latent_dim) {
    throw DimensionError("classify expects a latent of width latent_dim");
  }
  const Tape::Id logits = mlp_forward(tape, params, "classifier/mlp", cfg.classifier.mlp, latent);
  return tape.softmax(logits);
}

Tape::Id classify(Tape& tape, const ParamStore& params, const ModelConfig& cfg, Tape::Id latent,
                  std::size_t category) {
  if (category >= cfg.n_categories) throw DataError("classify: unknown category index");
  return tape.pick(classify_probabilities(tape, params, cfg, latent), category);
}

Tape::Id reconstruct(Tape& tape, const ParamStore& params, const ModelConfig& cfg,
                     Tape::Id translated, std::size_t origin_category) {
  if (tape.value(translated).size() != cfg.latent_dim) {
    throw DimensionError("reconstruct expects a latent of width latent_dim");
  }
  if (origin_category >= cfg.n_categories) {
    throw DataError("reconstruct: unknown origin category index");
  }
  const Tape::Id cat =
      tape.embedding(tape.param(params, "reconstructor/category_table"), origin_category);
  const Tape::Id joined = tape.concat({translated, cat});
  return mlp_forward(tape, params, "reconstructor/mlp", cfg.reconstructor.mlp, joined);
}

}  // namespace alcir
