#pragma once

#include <alcir/errors.hpp>

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace alcir {

// Row-major dense f64 array. Rank 1 covers vectors, rank 2 matrices and
// embedding tables; scalars are stored as shape {1}.
struct Array {
  std::vector<std::size_t> shape;
  std::vector<double> values;

  Array() = default;
  Array(std::vector<std::size_t> s, std::vector<double> v)
      : shape(std::move(s)), values(std::move(v)) {
    std::size_t expect = 1;
    for (std::size_t d : shape) expect *= d;
    if (shape.empty() || expect != values.size()) {
      throw DimensionError("array shape does not match value count");
    }
  }

  static Array zeros(std::vector<std::size_t> s) {
    std::size_t n = 1;
    for (std::size_t d : s) n *= d;
    return Array(std::move(s), std::vector<double>(n, 0.0));
  }

  static Array scalar(double v) { return Array({1}, {v}); }

  static Array vector(std::vector<double> v) {
    const std::size_t n = v.size();
    return Array({n}, std::move(v));
  }

  static Array vector(std::initializer_list<double> v) {
    return vector(std::vector<double>(v));
  }

  static Array matrix(std::size_t rows, std::size_t cols, std::vector<double> v) {
    return Array({rows, cols}, std::move(v));
  }

  std::size_t size() const { return values.size(); }
  std::size_t rank() const { return shape.size(); }

  std::size_t rows() const {
    if (rank() != 2) throw DimensionError("rows() requires a rank-2 array");
    return shape[0];
  }

  std::size_t cols() const {
    if (rank() != 2) throw DimensionError("cols() requires a rank-2 array");
    return shape[1];
  }

  double* data() { return values.data(); }
  const double* data() const { return values.data(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  bool same_shape(const Array& o) const { return shape == o.shape; }

  bool all_finite() const {
    for (double v : values) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  void fill(double v) {
    for (double& x : values) x = v;
  }
};

inline void check_finite(const Array& a, const std::string& what) {
  if (!a.all_finite()) throw NumericError("non-finite values in " + what);
}

}  // namespace alcir
