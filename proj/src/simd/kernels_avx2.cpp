// AVX2 + FMA variants. This file is compiled with -mavx2 -mfma and must only
// be entered after the runtime CPU check in dispatch.cpp.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "rankfair/simd/kernels.hpp"

namespace rankfair::simd {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum(std::span<const double> x) {
  const std::size_t n = x.size();
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x.data() + i));
    a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x.data() + i + 4));
  }
  for (; i + 4 <= n; i += 4) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x.data() + i));
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += x[i];
  return s;
}

double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x.data() + i + 4), _mm256_loadu_pd(y.data() + i + 4), a1);
  }
  for (; i + 4 <= n; i += 4)
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i), a0);
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double l1_distance(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i + 4), _mm256_loadu_pd(y.data() + i + 4));
    a0 = _mm256_add_pd(a0, _mm256_andnot_pd(sign, d0));
    a1 = _mm256_add_pd(a1, _mm256_andnot_pd(sign, d1));
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i));
    a0 = _mm256_add_pd(a0, _mm256_andnot_pd(sign, d));
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += std::abs(x[i] - y[i]);
  return s;
}

void multiply(std::span<const double> x, std::span<const double> w, std::span<double> out) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(w.data() + i)));
  for (; i < n; ++i) out[i] = x[i] * w[i];
}

void scale_shift(std::span<double> y, double a, double b) {
  const std::size_t n = y.size();
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y.data() + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(y.data() + i), vb));
  for (; i < n; ++i) y[i] = std::fma(a, y[i], b);
}

// Four rows per step, one row per lane. Each lane accumulates its own row in
// index order, so the result matches the scalar kernel bit for bit.
void gather_sum(std::span<const std::uint32_t> offsets, std::span<const std::uint32_t> indices,
                std::span<const double> x, std::span<double> y) {
  const std::size_t rows = offsets.empty() ? 0 : offsets.size() - 1;
  const auto* idx = reinterpret_cast<const int*>(indices.data());
  std::size_t i = 0;
  for (; i + 4 <= rows; i += 4) {
    const __m128i begin = _mm_loadu_si128(reinterpret_cast<const __m128i*>(offsets.data() + i));
    const __m128i end = _mm_loadu_si128(reinterpret_cast<const __m128i*>(offsets.data() + i + 1));
    const __m128i len = _mm_sub_epi32(end, begin);
    const std::uint32_t longest =
        std::max(std::max(offsets[i + 1] - offsets[i], offsets[i + 2] - offsets[i + 1]),
                 std::max(offsets[i + 3] - offsets[i + 2], offsets[i + 4] - offsets[i + 3]));
    __m256d acc = _mm256_setzero_pd();
    for (std::uint32_t t = 0; t < longest; ++t) {
      const __m128i step = _mm_set1_epi32(static_cast<int>(t));
      const __m128i live32 = _mm_cmpgt_epi32(len, step);
      const __m128i pos = _mm_add_epi32(begin, step);
      const __m128i col = _mm_mask_i32gather_epi32(_mm_setzero_si128(), idx, pos, live32, 4);
      const __m256d live64 = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(live32));
      const __m256d vals = _mm256_mask_i32gather_pd(_mm256_setzero_pd(), x.data(), col, live64, 8);
      acc = _mm256_add_pd(acc, vals);
    }
    _mm256_storeu_pd(y.data() + i, acc);
  }
  for (; i < rows; ++i) {
    double s = 0.0;
    for (std::uint32_t p = offsets[i]; p < offsets[i + 1]; ++p) s += x[indices[p]];
    y[i] = s;
  }
}

double rank_weighted_sum(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  const double nn = static_cast<double>(n);
  __m256d weight = _mm256_set_pd(8.0 - nn - 1.0, 6.0 - nn - 1.0, 4.0 - nn - 1.0, 2.0 - nn - 1.0);
  const __m256d stride = _mm256_set1_pd(8.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(weight, _mm256_loadu_pd(sorted.data() + i), acc);
    weight = _mm256_add_pd(weight, stride);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += (2.0 * static_cast<double>(i + 1) - nn - 1.0) * sorted[i];
  return s;
}

}  // namespace

const KernelTable& avx2_kernel_table() noexcept {
  static const KernelTable table{"avx2", sum, dot, l1_distance, multiply, scale_shift, gather_sum,
                                 rank_weighted_sum};
  return table;
}

}  // namespace rankfair::simd
