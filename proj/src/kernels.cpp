#include "fpcc/kernels.hpp"

#include <cmath>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define FPCC_X86 1
#else
#define FPCC_X86 0
#endif

namespace fpcc::kernels {

namespace scalar {

double sum_sq(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::fabs(x[i]);
    if (v > m) m = v;
  }
  return m;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::fabs(a[i] - b[i]);
    if (v > m) m = v;
  }
  return m;
}

double min_plus_scaled(const double* vals, const double* dists, std::size_t n,
                       double scale) {
  double m = vals[0] + scale * dists[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double c = vals[i] + scale * dists[i];
    if (c < m) m = c;
  }
  return m;
}

double sum_abs_pow_diff(const double* a, const double* b, std::size_t n,
                        double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += std::pow(std::fabs(a[i] - b[i]), p);
  return acc;
}

double sum_abs_pow(const double* x, std::size_t n, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::pow(std::fabs(x[i]), p);
  return acc;
}

}  // namespace scalar

#if FPCC_X86

namespace avx2 {

namespace {

__attribute__((target("avx2"))) inline double hsum(__m256d v) {
  double buf[4];
  _mm256_storeu_pd(buf, v);
  return (buf[0] + buf[1]) + (buf[2] + buf[3]);
}

__attribute__((target("avx2"))) inline double hmax(__m256d v) {
  double buf[4];
  _mm256_storeu_pd(buf, v);
  double m = buf[0];
  if (buf[1] > m) m = buf[1];
  if (buf[2] > m) m = buf[2];
  if (buf[3] > m) m = buf[3];
  return m;
}

__attribute__((target("avx2"))) inline double hmin(__m256d v) {
  double buf[4];
  _mm256_storeu_pd(buf, v);
  double m = buf[0];
  if (buf[1] < m) m = buf[1];
  if (buf[2] < m) m = buf[2];
  if (buf[3] < m) m = buf[3];
  return m;
}

__attribute__((target("avx2"))) inline __m256d abs_pd(__m256d v) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  return _mm256_andnot_pd(sign, v);
}

}  // namespace

__attribute__((target("avx2"))) double sum_sq(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

__attribute__((target("avx2"))) double sum_sq_diff(const double* a,
                                                   const double* b,
                                                   std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                    _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

__attribute__((target("avx2"))) double max_abs(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
  double m = hmax(acc);
  for (; i < n; ++i) {
    const double v = std::fabs(x[i]);
    if (v > m) m = v;
  }
  return m;
}

__attribute__((target("avx2"))) double max_abs_diff(const double* a,
                                                    const double* b,
                                                    std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                    _mm256_loadu_pd(b + i));
    acc = _mm256_max_pd(acc, abs_pd(d));
  }
  double m = hmax(acc);
  for (; i < n; ++i) {
    const double v = std::fabs(a[i] - b[i]);
    if (v > m) m = v;
  }
  return m;
}

// Deliberately mul+add (no FMA) so candidates match the scalar lane bit for
// bit; min is order-insensitive, so the result is identical.
__attribute__((target("avx2"))) double min_plus_scaled(const double* vals,
                                                       const double* dists,
                                                       std::size_t n,
                                                       double scale) {
  const __m256d sc = _mm256_set1_pd(scale);
  __m256d acc = _mm256_set1_pd(vals[0] + scale * dists[0]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d c = _mm256_add_pd(
        _mm256_loadu_pd(vals + i),
        _mm256_mul_pd(sc, _mm256_loadu_pd(dists + i)));
    acc = _mm256_min_pd(acc, c);
  }
  double m = hmin(acc);
  for (; i < n; ++i) {
    const double c = vals[i] + scale * dists[i];
    if (c < m) m = c;
  }
  return m;
}

}  // namespace avx2

#endif  // FPCC_X86

namespace {

bool cpu_has_avx2() {
#if FPCC_X86
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const bool g_avx2 = cpu_has_avx2();

}  // namespace

double sum_sq(const double* x, std::size_t n) {
#if FPCC_X86
  if (g_avx2) return avx2::sum_sq(x, n);
#endif
  return scalar::sum_sq(x, n);
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
#if FPCC_X86
  if (g_avx2) return avx2::sum_sq_diff(a, b, n);
#endif
  return scalar::sum_sq_diff(a, b, n);
}

double max_abs(const double* x, std::size_t n) {
#if FPCC_X86
  if (g_avx2) return avx2::max_abs(x, n);
#endif
  return scalar::max_abs(x, n);
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
#if FPCC_X86
  if (g_avx2) return avx2::max_abs_diff(a, b, n);
#endif
  return scalar::max_abs_diff(a, b, n);
}

double min_plus_scaled(const double* vals, const double* dists, std::size_t n,
                       double scale) {
#if FPCC_X86
  if (g_avx2) return avx2::min_plus_scaled(vals, dists, n, scale);
#endif
  return scalar::min_plus_scaled(vals, dists, n, scale);
}

double sum_abs_pow_diff(const double* a, const double* b, std::size_t n,
                        double p) {
  return scalar::sum_abs_pow_diff(a, b, n, p);
}

double sum_abs_pow(const double* x, std::size_t n, double p) {
  return scalar::sum_abs_pow(x, n, p);
}

const char* active_backend() { return g_avx2 ? "avx2" : "scalar"; }

}  // namespace fpcc::kernels
