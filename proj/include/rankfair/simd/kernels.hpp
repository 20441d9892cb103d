#pragma once

// Dense vector kernels behind the power iterations and the Gini sum.
// Every kernel has a scalar reference implementation; an AVX2 variant is
// compiled separately and chosen at runtime when the CPU supports it.
//
// Element-wise kernels (multiply, scale_shift, gather_sum) give bit-identical
// results across variants. Reductions (sum, dot, l1_distance,
// rank_weighted_sum) reassociate and agree to rounding only.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace rankfair::simd {

struct KernelTable {
  std::string_view name;

  double (*sum)(std::span<const double> x);
  double (*dot)(std::span<const double> x, std::span<const double> y);
  double (*l1_distance)(std::span<const double> x, std::span<const double> y);

  /// out[i] = x[i] * w[i]
  void (*multiply)(std::span<const double> x, std::span<const double> w, std::span<double> out);

  /// y[i] = a * y[i] + b, evaluated as one fused multiply-add.
  void (*scale_shift)(std::span<double> y, double a, double b);

  /// Pull-style sparse product: y[i] = sum of x[indices[p]] for p in [offsets[i], offsets[i+1]).
  /// Terms are added in index order so every variant rounds identically.
  void (*gather_sum)(std::span<const std::uint32_t> offsets, std::span<const std::uint32_t> indices,
                     std::span<const double> x, std::span<double> y);

  /// sum over i of (2(i+1) - n - 1) * x[i]; numerator of the sorted Gini identity.
  double (*rank_weighted_sum)(std::span<const double> sorted);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the AVX2 variant was not built or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels() noexcept;

/// Best supported table. Setting RANKFAIR_SIMD=scalar in the environment
/// forces the reference kernels.
const KernelTable& active_kernels() noexcept;

}  // namespace rankfair::simd
