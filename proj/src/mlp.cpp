#include <alcir/mlp.hpp>

namespace alcir {

void MlpSpec::validate() const {
  if (widths.size() < 2) throw ConfigError("mlp needs at least an input and an output width");
  for (std::size_t w : widths) {
    if (w == 0) throw ConfigError("mlp widths must be positive");
  }
  if (hidden.size() != widths.size() - 2) {
    throw ConfigError("mlp hidden activation list does not match layer count");
  }
}

void register_mlp(ParamStore& params, const std::string& prefix, const MlpSpec& spec) {
  spec.validate();
  for (std::size_t l = 0; l + 1 < spec.widths.size(); ++l) {
    const std::string tag = std::to_string(l);
    params.create(prefix + "/w" + tag, {spec.widths[l + 1], spec.widths[l]},
                  Init::glorot_uniform);
    params.create(prefix + "/b" + tag, {spec.widths[l + 1]}, Init::zeros);
  }
}

Tape::Id mlp_forward(Tape& tape, const ParamStore& params, const std::string& prefix,
                     const MlpSpec& spec, Tape::Id input) {
  spec.validate();
  if (tape.value(input).size() != spec.input_width()) {
    throw DimensionError("mlp input width mismatch for " + prefix);
  }
  Tape::Id h = input;
  for (std::size_t l = 0; l + 1 < spec.widths.size(); ++l) {
    const std::string tag = std::to_string(l);
    const Tape::Id w = tape.param(params, prefix + "/w" + tag);
    const Tape::Id b = tape.param(params, prefix + "/b" + tag);
    h = tape.dense(w, b, h);
    const bool is_hidden = l + 2 < spec.widths.size();
    if (is_hidden && spec.hidden[l] == MlpSpec::Activation::relu) h = tape.relu(h);
  }
  return h;
}

}  // namespace alcir
