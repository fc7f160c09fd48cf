#include <alcir/errors.hpp>
#include <alcir/kernels.hpp>

#include <cstdlib>
#include <cstring>

namespace alcir::kernels {

namespace {

Isa detect() {
  const char* env = std::getenv("ALCIR_KERNELS");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_usable()) return Isa::avx2;
  }
  return avx2_usable() ? Isa::avx2 : Isa::scalar;
}

Isa& current() {
  static Isa isa = detect();
  return isa;
}

}  // namespace

bool avx2_compiled() {
#if defined(ALCIR_BUILD_AVX2)
  return true;
#else
  return false;
#endif
}

bool avx2_usable() {
#if defined(ALCIR_BUILD_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() { return current(); }

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2_usable()) {
    throw ConfigError("avx2 kernels are not usable on this machine");
  }
  current() = isa;
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double dot(const double* a, const double* b, std::size_t n) {
  return current() == Isa::avx2 ? detail::dot_avx2(a, b, n) : detail::dot_scalar(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  current() == Isa::avx2 ? detail::axpy_avx2(alpha, x, y, n) : detail::axpy_scalar(alpha, x, y, n);
}

void scale(double alpha, double* x, std::size_t n) {
  current() == Isa::avx2 ? detail::scale_avx2(alpha, x, n) : detail::scale_scalar(alpha, x, n);
}

void subtract(const double* a, const double* b, double* out, std::size_t n) {
  current() == Isa::avx2 ? detail::subtract_avx2(a, b, out, n)
                         : detail::subtract_scalar(a, b, out, n);
}

double sum(const double* x, std::size_t n) {
  return current() == Isa::avx2 ? detail::sum_avx2(x, n) : detail::sum_scalar(x, n);
}

double sum_squared_diff(const double* a, const double* b, std::size_t n) {
  return current() == Isa::avx2 ? detail::sum_squared_diff_avx2(a, b, n)
                                : detail::sum_squared_diff_scalar(a, b, n);
}

void relu_forward(const double* x, double* y, std::size_t n) {
  current() == Isa::avx2 ? detail::relu_forward_avx2(x, y, n)
                         : detail::relu_forward_scalar(x, y, n);
}

void relu_backward(const double* x, const double* gy, double* gx, std::size_t n) {
  current() == Isa::avx2 ? detail::relu_backward_avx2(x, gy, gx, n)
                         : detail::relu_backward_scalar(x, gy, gx, n);
}

void matvec(const double* w, const double* x, double* y, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot(w + r * cols, x, cols);
}

void matvec_transposed_accum(const double* w, const double* gy, double* gx, std::size_t rows,
                             std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) axpy(gy[r], w + r * cols, gx, cols);
}

void outer_accum(const double* gy, const double* x, double* gw, std::size_t rows,
                 std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) axpy(gy[r], x, gw + r * cols, cols);
}

}  // namespace alcir::kernels
