#pragma once

#include <alcir/array.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace alcir {

enum class Init { zeros, glorot_uniform };

// Flat parameter registry keyed by slash-separated paths ("encoder/image/w0").
// Initialization is a pure function of (store seed, path, shape), so creation
// order does not matter and rebuilding a store reproduces every tensor bit for
// bit.
class ParamStore {
 public:
  explicit ParamStore(std::uint64_t seed = 0) : seed_(seed) {}

  Array& create(const std::string& path, std::vector<std::size_t> shape, Init init);
  bool contains(const std::string& path) const { return entries_.count(path) != 0; }
  Array& at(const std::string& path);
  const Array& at(const std::string& path) const;
  std::uint64_t seed() const { return seed_; }
  const std::map<std::string, Array>& entries() const { return entries_; }
  std::map<std::string, Array>& entries() { return entries_; }
  std::size_t total_values() const;

 private:
  std::uint64_t seed_ = 0;
  std::map<std::string, Array> entries_;
};

struct OptimizerConfig {
  enum class Kind { sgd, momentum };
  Kind kind = Kind::sgd;
  double momentum = 0.9;  // only read for Kind::momentum
};

class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig cfg = {}) : cfg_(cfg) {}
  void step(ParamStore& params, const std::map<std::string, const Array*>& grads, double lr);

 private:
  OptimizerConfig cfg_;
  std::map<std::string, Array> velocity_;
};

// One plain-SGD step: p -= lr * g for every gradient entry.
void optimizer_step(ParamStore& params, const std::map<std::string, const Array*>& grads,
                    double lr);

}  // namespace alcir
