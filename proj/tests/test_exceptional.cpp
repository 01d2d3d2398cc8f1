#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qwalk/error.hpp"
#include "qwalk/exceptional.hpp"

using namespace qwalk;

namespace {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += std::log(x[i]), my += std::log(y[i]);
  mx /= x.size(), my /= x.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

bool within_3se(const SamplingReport& r, double expect) {
  return std::abs(r.mean - expect) <= 3 * r.stderr_samples;
}

}  // namespace

TEST_CASE("verify_exceptional on the reference cycle") {
  const auto r = verify_exceptional(cycle_graph(6), MarkedSet(6, {0, 1, 3}), 200, 1e-10);
  CHECK(r.verdict);
  CHECK(r.n == 6);
  CHECK(r.steps == 200);
  CHECK(r.marked == std::vector<Vertex>{0, 1, 3});
  CHECK(r.max_magnitude_deviation < 1e-10);
  CHECK(r.max_selfloop < 1e-12);
  CHECK(r.max_distribution_deviation < 1e-10);
}

TEST_CASE("verify_exceptional on tori") {
  for (std::size_t side : {3u, 4u, 5u}) {
    const auto r = verify_exceptional(torus_grid_graph(side), diagonal_marked_set(side), 100, 1e-10);
    CHECK(r.verdict);
  }
  const auto single = verify_exceptional(torus_grid_graph(5), MarkedSet(25, {0}), 100, 1e-10);
  CHECK_FALSE(single.verdict);
  CHECK(single.max_distribution_deviation ==
        doctest::Approx(oracle::kTorus5SingleMarkedDeviation).epsilon(1e-9));
}

TEST_CASE("verdict is the conjunction of the three maxima") {
  std::mt19937_64 gen(3);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t s = 3 + rep % 3;
    const auto r = verify_exceptional(torus_grid_graph(s), random_marked_set(s * s, gen), 20, 1e-10);
    CHECK(r.verdict == (r.max_magnitude_deviation < r.tolerance && r.max_selfloop < r.tolerance &&
                        r.max_distribution_deviation < r.tolerance));
  }
}

TEST_CASE("property: every cycle configuration is exceptional") {
  std::mt19937_64 gen(101);
  for (std::size_t n = 3; n <= 24; ++n) {
    std::vector<MarkedSet> sets = {MarkedSet::none(n), MarkedSet::all(n), MarkedSet::arc(n, n / 2, 1)};
    for (int i = 0; i < 10; ++i) sets.push_back(random_marked_set(n, gen));
    for (const MarkedSet& m : sets) {
      const auto r = verify_exceptional(cycle_graph(n), m, 50, 1e-10);
      CHECK(r.verdict);
      CHECK(r.max_selfloop < 1e-12);
    }
  }
}

TEST_CASE("random_marked_set is reproducible and in range") {
  Engine a = substream(1, 2), b = substream(1, 2);
  for (int i = 0; i < 50; ++i) {
    const MarkedSet x = random_marked_set(12, a);
    CHECK(x == random_marked_set(12, b));
    CHECK(x.k() <= 12);
  }
}

TEST_CASE("sampling_search_cost") {
  const auto r = sampling_search_cost(9, 3, 100000, 1);
  CHECK(r.success_probability == doctest::Approx(1.0 / 3.0));
  CHECK(within_3se(r, 3.0));
  const auto full = sampling_search_cost(7, 7, 1000, 1);
  CHECK(full.mean == 1.0);
  CHECK(full.stderr_samples == 0.0);
  CHECK(within_3se(sampling_search_cost(100, 10, 100000, 2), 10.0));
  try {
    sampling_search_cost(9, 0, 10, 1);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_marked);
  }
  CHECK_THROWS_AS(sampling_search_cost(9, 10, 10, 1), Error);
  const auto again = sampling_search_cost(9, 3, 100000, 1);
  CHECK(again.mean == r.mean);
}

TEST_CASE("property: sampling cost depends only on k/n") {
  const auto arc = sampling_search_cost(MarkedSet::arc(12, 3, 4), 100000, 8);
  const auto spread = sampling_search_cost(MarkedSet(12, {0, 5, 9}), 100000, 9);
  CHECK(std::abs(arc.mean - spread.mean) <=
        3 * std::hypot(arc.stderr_samples, spread.stderr_samples));
  CHECK(within_3se(arc, 4.0));
  CHECK(within_3se(spread, 4.0));
}

TEST_CASE("measured sampling cost is independent of the walk length") {
  const auto w = SearchWalk::for_graph(cycle_graph(9), MarkedSet::arc(9, 3));
  for (std::uint64_t steps : {1u, 4u, 13u}) {
    const auto r = measured_sampling_cost(w, steps, 50000, 4);
    CHECK(r.walk_steps == steps);
    CHECK(r.success_probability == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(within_3se(r, 3.0));
  }
}

TEST_CASE("separation_report") {
  const auto r = separation_report(16, 4);
  CHECK(r.quantum_samples == 4.0);
  CHECK(r.classical_ht == Rational(91, 4));
  CHECK(r.ratio == 5.6875);
  CHECK(r.quantum_total_with_mixing == doctest::Approx(16 * std::log(16.0) * 4));
  CHECK(r.classical_total_with_mixing == 256 + 22.75);

  const auto near_full = separation_report(10, 9);
  CHECK(near_full.ratio < 1.0);
  CHECK(near_full.ratio > 0.0);
  CHECK_THROWS_AS(separation_report(10, 10), Error);
  CHECK_THROWS_AS(separation_report(10, 0), Error);
}

TEST_CASE("property: separation ratio grows as n^1.5 with k = sqrt(n)") {
  std::vector<double> ns, ratios;
  for (std::size_t n : {16u, 64u, 256u}) {
    const auto k = static_cast<std::size_t>(std::llround(std::sqrt(n)));
    ns.push_back(static_cast<double>(n));
    ratios.push_back(separation_report(n, k).ratio);
  }
  const double slope = loglog_slope(ns, ratios);
  MESSAGE("separation slope " << slope);
  CHECK(std::abs(slope - 1.5) <= 0.2);
}

TEST_CASE("property: ratio-of-ratios n -> 4n is about 8") {
  // Finite-size corrections push 16 -> 64 to ~10.6; the asymptotic regime starts around n = 64.
  for (std::size_t n : {64u, 256u, 1024u}) {
    const auto k = static_cast<std::size_t>(std::llround(std::sqrt(n)));
    const double rr = separation_report(4 * n, 2 * k).ratio / separation_report(n, k).ratio;
    MESSAGE("n=" << n << " ratio-of-ratios " << rr);
    CHECK(std::abs(rr - 8.0) <= 0.2 * 8.0);
  }
}

TEST_CASE("verify_grid_reduction") {
  const auto r = verify_grid_reduction(5, 50, 1e-10);
  CHECK(r.verdict);
  CHECK(r.side == 5);
  CHECK(r.max_symmetry_deviation < 1e-10);
  CHECK(r.max_distribution_deviation < 1e-10);
  CHECK(r.max_class_deviation < 1e-10);
  CHECK(r.expected_guesses == 5.0);

  const auto r0 = verify_grid_reduction(3, 0, 1e-10);
  CHECK(r0.verdict);
  CHECK(r0.max_symmetry_deviation == 0.0);

  for (std::size_t side : {3u, 4u, 6u, 7u}) CHECK(verify_grid_reduction(side, 40, 1e-10).verdict);
  CHECK_THROWS_AS(verify_grid_reduction(2, 10, 1e-10), Error);
}
