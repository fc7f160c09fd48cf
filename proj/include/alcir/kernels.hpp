#pragma once

#include <cstddef>

// Dense f64 primitives behind the tape and the retrieval scorer. Scalar
// reference implementations always exist; an AVX2 variant is selected at
// runtime on x86-64 when the CPU supports it. ALCIR_KERNELS=scalar|avx2
// overrides the choice (avx2 only honored when usable).
namespace alcir::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa();
void force_isa(Isa isa);  // test hook; throws if the ISA is unavailable
const char* isa_name(Isa isa);
bool avx2_compiled();
bool avx2_usable();  // compiled in and supported by this CPU

double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);  // y += alpha*x
void scale(double alpha, double* x, std::size_t n);
void subtract(const double* a, const double* b, double* out, std::size_t n);
double sum(const double* x, std::size_t n);
double sum_squared_diff(const double* a, const double* b, std::size_t n);
void relu_forward(const double* x, double* y, std::size_t n);
// gx += gy where x > 0
void relu_backward(const double* x, const double* gy, double* gx, std::size_t n);

// Composites layered on the dispatched primitives. w is row-major [rows, cols].
void matvec(const double* w, const double* x, double* y, std::size_t rows, std::size_t cols);
void matvec_transposed_accum(const double* w, const double* gy, double* gx, std::size_t rows,
                             std::size_t cols);  // gx += w^T gy
void outer_accum(const double* gy, const double* x, double* gw, std::size_t rows,
                 std::size_t cols);  // gw += gy x^T

namespace detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void scale_scalar(double alpha, double* x, std::size_t n);
void subtract_scalar(const double* a, const double* b, double* out, std::size_t n);
double sum_scalar(const double* x, std::size_t n);
double sum_squared_diff_scalar(const double* a, const double* b, std::size_t n);
void relu_forward_scalar(const double* x, double* y, std::size_t n);
void relu_backward_scalar(const double* x, const double* gy, double* gx, std::size_t n);

// Defined as scalar forwarders when AVX2 is not compiled in.
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void scale_avx2(double alpha, double* x, std::size_t n);
void subtract_avx2(const double* a, const double* b, double* out, std::size_t n);
double sum_avx2(const double* x, std::size_t n);
double sum_squared_diff_avx2(const double* a, const double* b, std::size_t n);
void relu_forward_avx2(const double* x, double* y, std::size_t n);
void relu_backward_avx2(const double* x, const double* gy, double* gx, std::size_t n);

}  // namespace detail

}  // namespace alcir::kernels
