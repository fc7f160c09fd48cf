#include <alcir/kernels.hpp>
#include <alcir/params.hpp>
#include <alcir/rng.hpp>

#include <cmath>

namespace alcir {

Array& ParamStore::create(const std::string& path, std::vector<std::size_t> shape, Init init) {
  if (contains(path)) throw ConfigError("parameter already registered: " + path);
  Array a = Array::zeros(std::move(shape));
  if (init == Init::glorot_uniform) {
    if (a.rank() != 2) {
      throw DimensionError("glorot initialization requires a rank-2 parameter: " + path);
    }
    const double fan = static_cast<double>(a.shape[0] + a.shape[1]);
    const double limit = std::sqrt(6.0 / fan);
    Rng rng(splitmix64(seed_ ^ fnv1a64(path)));
    for (double& v : a.values) v = rng.uniform(-limit, limit);
  }
  return entries_.emplace(path, std::move(a)).first->second;
}

Array& ParamStore::at(const std::string& path) {
  auto it = entries_.find(path);
  if (it == entries_.end()) throw DataError("unknown parameter: " + path);
  return it->second;
}

const Array& ParamStore::at(const std::string& path) const {
  auto it = entries_.find(path);
  if (it == entries_.end()) throw DataError("unknown parameter: " + path);
  return it->second;
}

std::size_t ParamStore::total_values() const {
  std::size_t n = 0;
  for (const auto& [path, a] : entries_) n += a.size();
  return n;
}

void Optimizer::step(ParamStore& params, const std::map<std::string, const Array*>& grads,
                     double lr) {
  for (const auto& [path, grad] : grads) {
    Array& p = params.at(path);
    if (!p.same_shape(*grad)) {
      throw DimensionError("gradient shape mismatch for parameter: " + path);
    }
    if (!grad->all_finite()) {
      throw NumericError("training diverged: non-finite gradient for " + path);
    }
    if (cfg_.kind == OptimizerConfig::Kind::momentum) {
      auto [it, inserted] = velocity_.try_emplace(path, Array::zeros(p.shape));
      Array& v = it->second;
      kernels::scale(cfg_.momentum, v.data(), v.size());
      kernels::axpy(-lr, grad->data(), v.data(), v.size());
      kernels::axpy(1.0, v.data(), p.data(), p.size());
    } else {
      kernels::axpy(-lr, grad->data(), p.data(), p.size());
    }
  }
}

void optimizer_step(ParamStore& params, const std::map<std::string, const Array*>& grads,
                    double lr) {
  Optimizer opt;
  opt.step(params, grads, lr);
}

}  // namespace alcir
