#include <alcir/config.hpp>

#include <alcir/errors.hpp>
#include <alcir/evaluation.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

namespace alcir {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": not a number: '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    if (!value.empty() && value[0] == '-') throw std::invalid_argument(value);
    std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": not a nonnegative integer: '" + value + "'");
  }
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  return static_cast<std::size_t>(parse_u64(key, value));
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& value) {
  std::vector<std::size_t> out;
  std::stringstream ss(value);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (part.empty()) continue;
    out.push_back(parse_size(key, part));
  }
  return out;
}

std::string format_size_list(const std::vector<std::size_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(values[i]);
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

void apply_kv(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "items_csv") c.items_csv = value;
  else if (key == "features_bin") c.features_bin = value;
  else if (key == "recs_csv") c.recs_csv = value;
  else if (key == "data_dir") c.data_dir = value;
  else if (key == "out_dir") c.out_dir = value;
  else if (key == "min_items_per_category") c.min_items_per_category = parse_size(key, value);
  else if (key == "price_bins") c.price_bins = parse_size(key, value);
  else if (key == "train_fraction") c.train_fraction = parse_double(key, value);
  else if (key == "seed") c.seed = parse_u64(key, value);
  else if (key == "synth_categories") c.synth_categories = parse_size(key, value);
  else if (key == "synth_items_per_category") c.synth_items_per_category = parse_size(key, value);
  else if (key == "synth_style_dim") c.synth_style_dim = parse_size(key, value);
  else if (key == "synth_feature_dim") c.synth_feature_dim = parse_size(key, value);
  else if (key == "synth_noise_scale") c.synth_noise_scale = parse_double(key, value);
  else if (key == "synth_pairs_per_item") c.synth_pairs_per_item = parse_size(key, value);
  else if (key == "synth_label_fraction") c.synth_label_fraction = parse_double(key, value);
  else if (key == "latent_dim") c.latent_dim = parse_size(key, value);
  else if (key == "category_embedding_dim") c.category_embedding_dim = parse_size(key, value);
  else if (key == "price_embedding_dim") c.price_embedding_dim = parse_size(key, value);
  else if (key == "image_hidden") c.image_hidden = parse_size_list(key, value);
  else if (key == "fusion_hidden") c.fusion_hidden = parse_size_list(key, value);
  else if (key == "translator_hidden") c.translator_hidden = parse_size_list(key, value);
  else if (key == "reconstructor_hidden") c.reconstructor_hidden = parse_size_list(key, value);
  else if (key == "classifier_hidden") c.classifier_hidden = parse_size_list(key, value);
  else if (key == "preset") c.preset = value;
  else if (key == "w_triplet") { c.w_triplet = parse_double(key, value); c.explicit_weights = true; }
  else if (key == "w_cycle") { c.w_cycle = parse_double(key, value); c.explicit_weights = true; }
  else if (key == "w_classifier") { c.w_classifier = parse_double(key, value); c.explicit_weights = true; }
  else if (key == "epochs") c.epochs = parse_size(key, value);
  else if (key == "batch_size") c.batch_size = parse_size(key, value);
  else if (key == "learning_rate") c.learning_rate = parse_double(key, value);
  else if (key == "margin") c.margin = parse_double(key, value);
  else if (key == "distance") c.distance = value;
  else if (key == "optimizer") c.optimizer = value;
  else if (key == "momentum") c.momentum = parse_double(key, value);
  else if (key == "early_stop_patience") c.early_stop_patience = parse_size(key, value);
  else if (key == "unlabeled_ratio") c.unlabeled_ratio = parse_double(key, value);
  else if (key == "eval_model") c.eval_model = value;
  else if (key == "protocol") c.protocol = value;
  else if (key == "label_bins") c.label_bins = parse_size(key, value);
  else if (key == "k_list") c.k_list = parse_size_list(key, value);
  else throw ConfigError("unknown config key: " + key);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  RunConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value, got '" +
                        line + "'");
    }
    apply_kv(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

void RunConfig::validate() const {
  if (train_fraction <= 0.0 || train_fraction >= 1.0) {
    throw ConfigError("train_fraction must lie in (0, 1)");
  }
  if (price_bins == 0) throw ConfigError("price_bins must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (k_list.empty()) throw ConfigError("k_list must not be empty");
  for (std::size_t k : k_list) {
    if (k == 0) throw ConfigError("k_list entries must be positive");
  }
  if (eval_model != "alcir" && eval_model != "popularity") {
    throw ConfigError("eval_model must be alcir or popularity, got: " + eval_model);
  }
  protocol_from_string(protocol);  // throws on bad value
  synthetic_spec().validate();
  train_config().validate();  // also checks preset/distance/optimizer names
}

SyntheticSpec RunConfig::synthetic_spec() const {
  SyntheticSpec spec;
  spec.n_categories = synth_categories;
  spec.items_per_category = synth_items_per_category;
  spec.style_dim = synth_style_dim;
  spec.feature_dim = synth_feature_dim;
  spec.noise_scale = synth_noise_scale;
  spec.pairs_per_item = synth_pairs_per_item;
  spec.label_fraction = synth_label_fraction;
  spec.seed = seed;
  return spec;
}

ModelConfig RunConfig::model_config(std::size_t feature_dim, std::size_t n_categories) const {
  return ModelConfig::make(feature_dim, n_categories, price_bins, latent_dim, image_hidden,
                           fusion_hidden, translator_hidden, reconstructor_hidden,
                           classifier_hidden, category_embedding_dim, price_embedding_dim,
                           category_embedding_dim, category_embedding_dim);
}

TrainConfig RunConfig::train_config() const {
  TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.batch_size = batch_size;
  cfg.learning_rate = learning_rate;
  cfg.triplet.margin = margin;
  if (distance == "neg_cosine") cfg.triplet.distance = TripletConfig::Distance::neg_cosine;
  else if (distance == "euclidean") cfg.triplet.distance = TripletConfig::Distance::euclidean;
  else throw ConfigError("distance must be neg_cosine or euclidean, got: " + distance);
  if (optimizer == "sgd") cfg.optimizer.kind = OptimizerConfig::Kind::sgd;
  else if (optimizer == "momentum") cfg.optimizer.kind = OptimizerConfig::Kind::momentum;
  else throw ConfigError("optimizer must be sgd or momentum, got: " + optimizer);
  cfg.optimizer.momentum = momentum;
  cfg.early_stop_patience = early_stop_patience;
  cfg.unlabeled_ratio = unlabeled_ratio;
  cfg.rng_seed = seed;
  if (explicit_weights) {
    if (preset != "full") {
      throw ConfigError("explicit w_* keys conflict with preset " + preset +
                        "; drop one or the other");
    }
    cfg.weights = {w_triplet, w_cycle, w_classifier};
  } else {
    LossPreset p = loss_preset(preset);
    cfg.weights = p.weights;
    if (!p.use_unlabeled) cfg.unlabeled_ratio = 0.0;
  }
  return cfg;
}

void print_config(std::ostream& os, const RunConfig& c) {
  os << "# paths\n";
  os << "items_csv = " << c.items_csv << "\n";
  os << "features_bin = " << c.features_bin << "\n";
  os << "recs_csv = " << c.recs_csv << "\n";
  os << "data_dir = " << c.data_dir << "\n";
  os << "out_dir = " << c.out_dir << "\n";
  os << "\n# pipeline\n";
  os << "min_items_per_category = " << c.min_items_per_category << "\n";
  os << "price_bins = " << c.price_bins << "\n";
  os << "train_fraction = " << format_double(c.train_fraction) << "\n";
  os << "seed = " << c.seed << "\n";
  os << "\n# synthetic generator\n";
  os << "synth_categories = " << c.synth_categories << "\n";
  os << "synth_items_per_category = " << c.synth_items_per_category << "\n";
  os << "synth_style_dim = " << c.synth_style_dim << "\n";
  os << "synth_feature_dim = " << c.synth_feature_dim << "\n";
  os << "synth_noise_scale = " << format_double(c.synth_noise_scale) << "\n";
  os << "synth_pairs_per_item = " << c.synth_pairs_per_item << "\n";
  os << "synth_label_fraction = " << format_double(c.synth_label_fraction) << "\n";
  os << "\n# model\n";
  os << "latent_dim = " << c.latent_dim << "\n";
  os << "category_embedding_dim = " << c.category_embedding_dim << "\n";
  os << "price_embedding_dim = " << c.price_embedding_dim << "\n";
  os << "image_hidden = " << format_size_list(c.image_hidden) << "\n";
  os << "fusion_hidden = " << format_size_list(c.fusion_hidden) << "\n";
  os << "translator_hidden = " << format_size_list(c.translator_hidden) << "\n";
  os << "reconstructor_hidden = " << format_size_list(c.reconstructor_hidden) << "\n";
  os << "classifier_hidden = " << format_size_list(c.classifier_hidden) << "\n";
  os << "\n# training\n";
  os << "preset = " << c.preset << "\n";
  if (c.explicit_weights) {
    os << "w_triplet = " << format_double(c.w_triplet) << "\n";
    os << "w_cycle = " << format_double(c.w_cycle) << "\n";
    os << "w_classifier = " << format_double(c.w_classifier) << "\n";
  }
  os << "epochs = " << c.epochs << "\n";
  os << "batch_size = " << c.batch_size << "\n";
  os << "learning_rate = " << format_double(c.learning_rate) << "\n";
  os << "margin = " << format_double(c.margin) << "\n";
  os << "distance = " << c.distance << "\n";
  os << "optimizer = " << c.optimizer << "\n";
  os << "momentum = " << format_double(c.momentum) << "\n";
  os << "early_stop_patience = " << c.early_stop_patience << "\n";
  os << "unlabeled_ratio = " << format_double(c.unlabeled_ratio) << "\n";
  os << "\n# evaluation\n";
  os << "eval_model = " << c.eval_model << "\n";
  os << "protocol = " << c.protocol << "\n";
  os << "label_bins = " << c.label_bins << "\n";
  os << "k_list = " << format_size_list(c.k_list) << "\n";
}

}  // namespace alcir
