#pragma once

#include <alcir/model.hpp>
#include <alcir/params.hpp>

#include <string>

namespace alcir {

// A checkpoint is <prefix>.manifest (format version, config echo, one
// "param <path> <d0,d1,...>" line per tensor) plus <prefix>.blob holding the
// tensors as little-endian f64, concatenated in manifest order.
struct Checkpoint {
  ModelConfig config;
  ParamStore params;
};

void save_checkpoint(const std::string& prefix, const ModelConfig& cfg, const ParamStore& params);
Checkpoint load_checkpoint(const std::string& prefix);

}  // namespace alcir
