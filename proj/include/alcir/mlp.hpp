#pragma once

#include <alcir/params.hpp>
#include <alcir/tape.hpp>

#include <string>
#include <vector>

namespace alcir {

// Fully connected stack. widths runs input -> hidden... -> output; hidden
// layers default to relu, the output layer is always identity.
struct MlpSpec {
  enum class Activation { relu, identity };

  std::vector<std::size_t> widths;
  std::vector<Activation> hidden;  // one per hidden layer; defaulted to relu

  MlpSpec() = default;
  explicit MlpSpec(std::vector<std::size_t> w) : widths(std::move(w)) {
    if (widths.size() >= 3) hidden.assign(widths.size() - 2, Activation::relu);
  }

  std::size_t input_width() const { return widths.front(); }
  std::size_t output_width() const { return widths.back(); }
  std::size_t layer_count() const { return widths.size() - 1; }
  void validate() const;
};

// Creates "<prefix>/w<l>" and "<prefix>/b<l>" for every layer.
void register_mlp(ParamStore& params, const std::string& prefix, const MlpSpec& spec);

Tape::Id mlp_forward(Tape& tape, const ParamStore& params, const std::string& prefix,
                     const MlpSpec& spec, Tape::Id input);

}  // namespace alcir
