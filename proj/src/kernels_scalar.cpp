#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>

#include "kernels_impl.hpp"

namespace qwalk::kernels {

namespace {

void gather_dot(std::span<const std::uint32_t> offsets, std::span<const std::int32_t> index,
                std::span<const double> coeff, std::span<const double> x,
                std::span<double> out) {
  const std::size_t groups = offsets.size() - 1;
  for (std::size_t g = 0; g < groups; ++g) {
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
  for (std::size_t e = 0; e < x.size(); ++e) {
    const double twice = 2.0 * scale[e];
    const double proj = twice * sums[static_cast<std::size_t>(group[e])];
    out[e] = proj - x[e];
  }
}

template <class Term>
double blocked_sum(std::size_t n, Term term) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int l = 0; l < 4; ++l) s[l] = s[l] + term(i + l);
  }
  double total = (s[0] + s[1]) + (s[2] + s[3]);
  for (; i < n; ++i) total = total + term(i);
  return total;
}

double sum_squares(std::span<const double> x) {
  return blocked_sum(x.size(), [&](std::size_t i) { return x[i] * x[i]; });
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_magnitude_diff(std::span<const double> x, std::span<const double> ref) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    m = std::max(m, std::abs(std::abs(x[i]) - std::abs(ref[i])));
  return m;
}

void accumulate(std::span<double> acc, std::span<const double> x) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = acc[i] + x[i];
}

double tv_to_constant(std::span<const double> sums, double scale, double target) {
  const double total = blocked_sum(sums.size(), [&](std::size_t i) {
    const double v = sums[i] * scale;
    return std::abs(v - target);
  });
  return 0.5 * total;
}

void pair_flip(std::span<std::int8_t> signs, std::span<const std::int8_t> mask) {
  for (std::size_t p = 0; p + 1 < signs.size(); p += 2) {
    const int product = signs[p] * signs[p + 1];
    const int factor = mask[p] == -1 ? -1 : product;
    signs[p] = static_cast<std::int8_t>(signs[p] * factor);
    signs[p + 1] = static_cast<std::int8_t>(signs[p + 1] * factor);
  }
}

constexpr KernelTable kScalar{
    Backend::scalar, gather_dot, reflect_update, sum_squares,   max_abs_diff,
    max_magnitude_diff, accumulate, tv_to_constant, pair_flip,
};

}  // namespace

const char* to_string(Backend backend) {
  return backend == Backend::avx2 ? "avx2" : "scalar";
}

const KernelTable& scalar() { return kScalar; }

const KernelTable* avx2() {
#if defined(QWALK_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& best() {
  static const KernelTable* chosen = [] {
    const char* forced = std::getenv("QWALK_BACKEND");
    if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return &kScalar;
    const KernelTable* fast = avx2();
    return fast != nullptr ? fast : &kScalar;
  }();
  return *chosen;
}

}  // namespace qwalk::kernels
