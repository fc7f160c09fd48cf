#include <alcir/checkpoint.hpp>

#include <fstream>
#include <sstream>

namespace alcir {

namespace {

constexpr const char* kMagic = "alcir-checkpoint v1";

std::string join_widths(const std::vector<std::size_t>& widths) {
  std::string out;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(widths[i]);
  }
  return out;
}

std::vector<std::size_t> parse_widths(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) throw DataError("malformed width list in checkpoint manifest: " + s);
    out.push_back(static_cast<std::size_t>(std::stoull(part)));
  }
  return out;
}

}  // namespace

void save_checkpoint(const std::string& prefix, const ModelConfig& cfg, const ParamStore& params) {
  cfg.validate();
  std::ofstream manifest(prefix + ".manifest");
  if (!manifest) throw DataError("cannot write checkpoint manifest: " + prefix + ".manifest");
  manifest << kMagic << "\n";
  manifest << "feature_dim " << cfg.feature_dim << "\n";
  manifest << "n_categories " << cfg.n_categories << "\n";
  manifest << "n_price_bins " << cfg.n_price_bins << "\n";
  manifest << "latent_dim " << cfg.latent_dim << "\n";
  manifest << "category_embedding_dim " << cfg.encoder.category_embedding_dim << "\n";
  manifest << "price_embedding_dim " << cfg.encoder.price_embedding_dim << "\n";
  manifest << "translator_category_dim " << cfg.translator.category_embedding_dim << "\n";
  manifest << "reconstructor_category_dim " << cfg.reconstructor.category_embedding_dim << "\n";
  manifest << "image_widths " << join_widths(cfg.encoder.image_mlp.widths) << "\n";
  manifest << "fusion_widths " << join_widths(cfg.encoder.fusion_mlp.widths) << "\n";
  manifest << "translator_widths " << join_widths(cfg.translator.mlp.widths) << "\n";
  manifest << "classifier_widths " << join_widths(cfg.classifier.mlp.widths) << "\n";
  manifest << "reconstructor_widths " << join_widths(cfg.reconstructor.mlp.widths) << "\n";
  manifest << "rng_seed " << params.seed() << "\n";
  for (const auto& [path, tensor] : params.entries()) {
    manifest << "param " << path << " ";
    for (std::size_t i = 0; i < tensor.shape.size(); ++i) {
      if (i > 0) manifest << ",";
      manifest << tensor.shape[i];
    }
    manifest << "\n";
  }
  manifest.close();
  if (!manifest) throw DataError("failed writing checkpoint manifest: " + prefix + ".manifest");

  std::ofstream blob(prefix + ".blob", std::ios::binary);
  if (!blob) throw DataError("cannot write checkpoint blob: " + prefix + ".blob");
  for (const auto& [path, tensor] : params.entries()) {
    blob.write(reinterpret_cast<const char*>(tensor.data()),
               static_cast<std::streamsize>(tensor.size() * sizeof(double)));
  }
  blob.close();
  if (!blob) throw DataError("failed writing checkpoint blob: " + prefix + ".blob");
}

Checkpoint load_checkpoint(const std::string& prefix) {
  std::ifstream manifest(prefix + ".manifest");
  if (!manifest) throw DataError("cannot open checkpoint manifest: " + prefix + ".manifest");
  std::string line;
  if (!std::getline(manifest, line) || line != kMagic) {
    throw DataError("unrecognized checkpoint format in " + prefix + ".manifest");
  }

  ModelConfig cfg;
  std::uint64_t rng_seed = 0;
  std::vector<std::pair<std::string, std::vector<std::size_t>>> tensors;
  while (std::getline(manifest, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "param") {
      std::string path, dims;
      ss >> path >> dims;
      if (path.empty() || dims.empty()) {
        throw DataError("malformed param line in checkpoint manifest: " + line);
      }
      tensors.emplace_back(path, parse_widths(dims));
    } else {
      std::string value;
      ss >> value;
      if (value.empty()) throw DataError("malformed manifest line: " + line);
      if (key == "feature_dim") cfg.feature_dim = std::stoull(value);
      else if (key == "n_categories") cfg.n_categories = std::stoull(value);
      else if (key == "n_price_bins") cfg.n_price_bins = std::stoull(value);
      else if (key == "latent_dim") cfg.latent_dim = std::stoull(value);
      else if (key == "category_embedding_dim")
        cfg.encoder.category_embedding_dim = std::stoull(value);
      else if (key == "price_embedding_dim") cfg.encoder.price_embedding_dim = std::stoull(value);
      else if (key == "translator_category_dim")
        cfg.translator.category_embedding_dim = std::stoull(value);
      else if (key == "reconstructor_category_dim")
        cfg.reconstructor.category_embedding_dim = std::stoull(value);
      else if (key == "image_widths") cfg.encoder.image_mlp = MlpSpec(parse_widths(value));
      else if (key == "fusion_widths") cfg.encoder.fusion_mlp = MlpSpec(parse_widths(value));
      else if (key == "translator_widths") cfg.translator.mlp = MlpSpec(parse_widths(value));
      else if (key == "classifier_widths") cfg.classifier.mlp = MlpSpec(parse_widths(value));
      else if (key == "reconstructor_widths")
        cfg.reconstructor.mlp = MlpSpec(parse_widths(value));
      else if (key == "rng_seed") rng_seed = std::stoull(value);
      else throw DataError("unknown checkpoint manifest key: " + key);
    }
  }
  cfg.validate();

  Checkpoint ckpt{cfg, ParamStore(rng_seed)};
  std::ifstream blob(prefix + ".blob", std::ios::binary);
  if (!blob) throw DataError("cannot open checkpoint blob: " + prefix + ".blob");
  for (const auto& [path, shape] : tensors) {
    Array& tensor = ckpt.params.create(path, shape, Init::zeros);
    blob.read(reinterpret_cast<char*>(tensor.data()),
              static_cast<std::streamsize>(tensor.size() * sizeof(double)));
    if (blob.gcount() != static_cast<std::streamsize>(tensor.size() * sizeof(double))) {
      throw DataError("checkpoint blob truncated at parameter " + path);
    }
  }
  blob.peek();
  if (!blob.eof()) throw DataError("checkpoint blob has trailing bytes: " + prefix + ".blob");
  return ckpt;
}

}  // namespace alcir
