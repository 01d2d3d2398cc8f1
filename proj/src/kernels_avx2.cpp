// Compiled with -mavx2 only; reached through kernels::avx2() after a CPUID
// check. Operation order mirrors kernels_scalar.cpp exactly.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"

namespace qwalk::kernels::detail {

namespace {

inline double combine_lanes(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

inline double max_lanes(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
}

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// Four groups per iteration, one per lane. Each lane walks its own group in
// increasing j; lanes whose group is exhausted keep their accumulator.
void gather_dot(std::span<const std::uint32_t> offsets, std::span<const std::int32_t> index,
                std::span<const double> coeff, std::span<const double> x,
                std::span<double> out) {
  const std::size_t groups = offsets.size() - 1;
  std::size_t g = 0;
  for (; g + 4 <= groups; g += 4) {
    const __m128i begin = _mm_loadu_si128(reinterpret_cast<const __m128i*>(offsets.data() + g));
    const __m128i end =
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(offsets.data() + g + 1));
    const __m128i len = _mm_sub_epi32(end, begin);
    alignas(16) std::int32_t lens[4];
    _mm_store_si128(reinterpret_cast<__m128i*>(lens), len);
    const std::int32_t longest = std::max(std::max(lens[0], lens[1]), std::max(lens[2], lens[3]));

    __m256d acc = _mm256_setzero_pd();
    for (std::int32_t j = 0; j < longest; ++j) {
      const __m128i jv = _mm_set1_epi32(j);
      const __m128i live32 = _mm_cmpgt_epi32(len, jv);
      const __m256d live = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(live32));
      const __m128i pos = _mm_add_epi32(begin, jv);
      const __m128i idx = _mm_mask_i32gather_epi32(_mm_setzero_si128(), index.data(), pos,
                                                   live32, 4);
      const __m256d c =
          _mm256_mask_i32gather_pd(_mm256_setzero_pd(), coeff.data(), pos, live, 8);
      const __m256d v = _mm256_mask_i32gather_pd(_mm256_setzero_pd(), x.data(), idx, live, 8);
      const __m256d next = _mm256_add_pd(acc, _mm256_mul_pd(c, v));
      acc = _mm256_blendv_pd(acc, next, live);
    }
    _mm256_storeu_pd(out.data() + g, acc);
  }
  for (; g < groups; ++g) {
    double acc = 0.0;
    for (std::uint32_t j = offsets[g]; j < offsets[g + 1]; ++j) {
      const double prod = coeff[j] * x[static_cast<std::size_t>(index[j])];
      acc = acc + prod;
    }
    out[g] = acc;
  }
}

void reflect_update(std::span<const std::int32_t> group, std::span<const double> scale,
                    std::span<const double> sums, std::span<const double> x,
                    std::span<double> out) {
  const std::size_t n = x.size();
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t e = 0;
  for (; e + 4 <= n; e += 4) {
    const __m128i gi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(group.data() + e));
    const __m256d s = _mm256_i32gather_pd(sums.data(), gi, 8);
    const __m256d twice = _mm256_mul_pd(two, _mm256_loadu_pd(scale.data() + e));
    const __m256d proj = _mm256_mul_pd(twice, s);
    _mm256_storeu_pd(out.data() + e, _mm256_sub_pd(proj, _mm256_loadu_pd(x.data() + e)));
  }
  for (; e < n; ++e) {
    const double twice = 2.0 * scale[e];
    const double proj = twice * sums[static_cast<std::size_t>(group[e])];
    out[e] = proj - x[e];
  }
}

double sum_squares(std::span<const double> x) {
  const std::size_t n = x.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x.data() + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  double total = combine_lanes(acc);
  for (; i < n; ++i) total = total + x[i] * x[i];
  return total;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    m = _mm256_max_pd(m, abs_pd(d));
  }
  double result = max_lanes(m);
  for (; i < n; ++i) result = std::max(result, std::abs(a[i] - b[i]));
  return result;
}

double max_magnitude_diff(std::span<const double> x, std::span<const double> ref) {
  const std::size_t n = x.size();
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(abs_pd(_mm256_loadu_pd(x.data() + i)),
                                    abs_pd(_mm256_loadu_pd(ref.data() + i)));
    m = _mm256_max_pd(m, abs_pd(d));
  }
  double result = max_lanes(m);
  for (; i < n; ++i) result = std::max(result, std::abs(std::abs(x[i]) - std::abs(ref[i])));
  return result;
}

void accumulate(std::span<double> acc, std::span<const double> x) {
  const std::size_t n = acc.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(acc.data() + i, _mm256_add_pd(_mm256_loadu_pd(acc.data() + i),
                                                   _mm256_loadu_pd(x.data() + i)));
  }
  for (; i < n; ++i) acc[i] = acc[i] + x[i];
}

double tv_to_constant(std::span<const double> sums, double scale, double target) {
  const std::size_t n = sums.size();
  const __m256d sv = _mm256_set1_pd(scale);
  const __m256d tv = _mm256_set1_pd(target);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_mul_pd(_mm256_loadu_pd(sums.data() + i), sv);
    acc = _mm256_add_pd(acc, abs_pd(_mm256_sub_pd(v, tv)));
  }
  double total = combine_lanes(acc);
  for (; i < n; ++i) total = total + std::abs(sums[i] * scale - target);
  return 0.5 * total;
}

void pair_flip(std::span<std::int8_t> signs, std::span<const std::int8_t> mask) {
  const std::size_t n = signs.size() & ~std::size_t{1};
  // Swaps the two bytes of every adjacent pair within each 128-bit lane.
  const __m256i swap = _mm256_setr_epi8(1, 0, 3, 2, 5, 4, 7, 6, 9, 8, 11, 10, 13, 12, 15, 14,
                                        1, 0, 3, 2, 5, 4, 7, 6, 9, 8, 11, 10, 13, 12, 15, 14);
  const __m256i minus_one = _mm256_set1_epi8(-1);
  std::size_t p = 0;
  for (; p + 32 <= n; p += 32) {
    const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(signs.data() + p));
    const __m256i m = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(mask.data() + p));
    const __m256i partner = _mm256_shuffle_epi8(s, swap);
    const __m256i product = _mm256_sign_epi8(s, partner);
    const __m256i is_marked = _mm256_cmpeq_epi8(m, minus_one);
    const __m256i factor = _mm256_blendv_epi8(product, minus_one, is_marked);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(signs.data() + p),
                        _mm256_sign_epi8(s, factor));
  }
  for (; p + 1 < signs.size(); p += 2) {
    const int product = signs[p] * signs[p + 1];
    const int factor = mask[p] == -1 ? -1 : product;
    signs[p] = static_cast<std::int8_t>(signs[p] * factor);
    signs[p + 1] = static_cast<std::int8_t>(signs[p + 1] * factor);
  }
}

constexpr KernelTable kAvx2{
    Backend::avx2, gather_dot, reflect_update, sum_squares,   max_abs_diff,
    max_magnitude_diff, accumulate, tv_to_constant, pair_flip,
};

}  // namespace

const KernelTable& avx2_table() { return kAvx2; }

}  // namespace qwalk::kernels::detail
