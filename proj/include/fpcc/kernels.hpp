#pragma once

#include <cstddef>

// Low-level reduction kernels behind the norm and extension arithmetic.
//
// Every kernel has a scalar reference implementation; on x86-64 an AVX2
// variant is selected at runtime when the CPU supports it. The min/max
// kernels compute the exact same candidate values as the scalar lane and
// therefore return bit-identical results; the sum kernels reassociate and
// may differ by a few ulp.

namespace fpcc::kernels {

namespace scalar {
double sum_sq(const double* x, std::size_t n);
double sum_sq_diff(const double* a, const double* b, std::size_t n);
double max_abs(const double* x, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
// min over i of vals[i] + scale * dists[i]
double min_plus_scaled(const double* vals, const double* dists, std::size_t n,
                       double scale);
// sum over i of |a[i] - b[i]|^p (general finite p; no SIMD variant)
double sum_abs_pow_diff(const double* a, const double* b, std::size_t n,
                        double p);
double sum_abs_pow(const double* x, std::size_t n, double p);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double sum_sq(const double* x, std::size_t n);
double sum_sq_diff(const double* a, const double* b, std::size_t n);
double max_abs(const double* x, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
double min_plus_scaled(const double* vals, const double* dists, std::size_t n,
                       double scale);
}  // namespace avx2
#endif

// Runtime-dispatched entry points.
double sum_sq(const double* x, std::size_t n);
double sum_sq_diff(const double* a, const double* b, std::size_t n);
double max_abs(const double* x, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
double min_plus_scaled(const double* vals, const double* dists, std::size_t n,
                       double scale);
double sum_abs_pow_diff(const double* a, const double* b, std::size_t n,
                        double p);
double sum_abs_pow(const double* x, std::size_t n, double p);

// "avx2" or "scalar"
const char* active_backend();

}  // namespace fpcc::kernels
