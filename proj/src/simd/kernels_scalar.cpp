#include <cmath>

#include "rankfair/simd/kernels.hpp"

namespace rankfair::simd {

namespace {

double sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double l1_distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
  return s;
}

void multiply(std::span<const double> x, std::span<const double> w, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * w[i];
}

void scale_shift(std::span<double> y, double a, double b) {
  for (auto& v : y) v = std::fma(a, v, b);
}

void gather_sum(std::span<const std::uint32_t> offsets, std::span<const std::uint32_t> indices,
                std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i + 1 < offsets.size(); ++i) {
    double s = 0.0;
    for (std::uint32_t p = offsets[i]; p < offsets[i + 1]; ++p) s += x[indices[p]];
    y[i] = s;
  }
}

double rank_weighted_sum(std::span<const double> sorted) {
  const double n = static_cast<double>(sorted.size());
  double s = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    s += (2.0 * static_cast<double>(i + 1) - n - 1.0) * sorted[i];
  return s;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{"scalar", sum, dot, l1_distance, multiply, scale_shift, gather_sum,
                                 rank_weighted_sum};
  return table;
}

}  // namespace rankfair::simd
