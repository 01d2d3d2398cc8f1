#pragma once

// Data-parallel inner loops of the walk engines. Every kernel has a scalar
// reference implementation; an AVX2 variant is compiled on x86-64 and picked
// at runtime when the CPU supports it. Reductions use four interleaved partial
// sums combined as (s0 + s1) + (s2 + s3) in both variants, so results are
// bit-identical across backends.

#include <cstdint>
#include <span>

namespace qwalk::kernels {

enum class Backend { scalar, avx2 };

const char* to_string(Backend backend);

struct KernelTable {
  Backend backend;

  /// out[g] = sum over j in [offsets[g], offsets[g+1]) of coeff[j] * x[index[j]],
  /// accumulated in increasing j. This is CSR sparse matrix-vector product.
  void (*gather_dot)(std::span<const std::uint32_t> offsets,
                     std::span<const std::int32_t> index, std::span<const double> coeff,
                     std::span<const double> x, std::span<double> out);

  /// out[e] = 2 * scale[e] * sums[group[e]] - x[e]
  void (*reflect_update)(std::span<const std::int32_t> group, std::span<const double> scale,
                         std::span<const double> sums, std::span<const double> x,
                         std::span<double> out);

  double (*sum_squares)(std::span<const double> x);
  double (*max_abs_diff)(std::span<const double> a, std::span<const double> b);
  /// max over e of | |x[e]| - |ref[e]| |
  double (*max_magnitude_diff)(std::span<const double> x, std::span<const double> ref);
  /// acc[i] += x[i]
  void (*accumulate)(std::span<double> acc, std::span<const double> x);
  /// 0.5 * sum_i | sums[i] * scale - target |
  double (*tv_to_constant)(std::span<const double> sums, double scale, double target);

  /// Sign pairs (s[2p], s[2p+1]) with entries in {-1, +1}. A pair whose mask
  /// byte is -1 (all bits) is negated; any other pair is negated iff its two
  /// signs differ. Mask bytes come in equal pairs.
  void (*pair_flip)(std::span<std::int8_t> signs, std::span<const std::int8_t> mask);
};

const KernelTable& scalar();
/// nullptr when the AVX2 variant is not compiled in or the CPU lacks AVX2.
const KernelTable* avx2();
/// The fastest supported table. QWALK_BACKEND=scalar in the environment
/// forces the reference kernels.
const KernelTable& best();

}  // namespace qwalk::kernels
