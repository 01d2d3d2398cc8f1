#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qwalk/classical.hpp"
#include "qwalk/error.hpp"
#include "qwalk/rng.hpp"

using namespace qwalk;

namespace {

SolveResult single_marked_solve(std::int64_t L) {
  const auto p = transition_matrix(cycle_graph(static_cast<std::size_t>(L)));
  const MarkedSet m(L, {0});
  return hitting_time_linear_solve(absorbing_matrix(p, m), m, StartDistribution::uniform(L));
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) mx += std::log(x[i]), my += std::log(y[i]);
  mx /= n, my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace

TEST_CASE("h_step_expectation") {
  CHECK(h_step_expectation(10, 5) == 1);
  CHECK(h_step_expectation(9, 4) == 2);
  CHECK(h_step_expectation(10, 3) == 5);
  CHECK_THROWS_AS(h_step_expectation(10, 0), Error);
  CHECK_THROWS_AS(h_step_expectation(10, 6), Error);
  CHECK_THROWS_AS(h_step_expectation(2, 1), Error);
}

TEST_CASE("hitting_from_distance") {
  CHECK(hitting_from_distance(7, 0) == 0);
  CHECK(hitting_from_distance(5, 2) == 6);
  CHECK(hitting_from_distance(8, 4) == 16);
  CHECK_THROWS_AS(hitting_from_distance(8, 5), Error);
  CHECK_THROWS_AS(hitting_from_distance(8, -1), Error);
}

TEST_CASE("property: H_i is the sum of h_j for both parities") {
  for (std::int64_t L = 3; L <= 60; ++L)
    for (std::int64_t i = 0; i <= L / 2; ++i) {
      double s = 0;
      for (std::int64_t j = 1; j <= i; ++j) s += h_step_expectation(L, j);
      CHECK(hitting_from_distance(L, i) == s);
    }
}

TEST_CASE("hitting_time_exact_cycle") {
  CHECK(hitting_time_exact_cycle(1) == Rational(0));
  CHECK(hitting_time_exact_cycle(2) == Rational(1, 2));
  CHECK(hitting_time_exact_cycle(6) == Rational(35, 6));
  CHECK(hitting_time_exact_cycle(31) == Rational(160));
  CHECK(to_fraction_string(hitting_time_exact_cycle(6)) == "35/6");
  CHECK_THROWS_AS(hitting_time_exact_cycle(0), Error);
}

TEST_CASE("clustered_hitting_time_exact") {
  CHECK(clustered_hitting_time_exact(9, 3) == Rational(56, 9));
  CHECK(clustered_hitting_time_exact(16, 4) == Rational(91, 4));
  for (std::int64_t N = 2; N <= 20; ++N) CHECK(clustered_hitting_time_exact(N, N - 1) == Rational(1, N));
  CHECK_THROWS_AS(clustered_hitting_time_exact(9, 9), Error);
  CHECK_THROWS_AS(clustered_hitting_time_exact(9, 0), Error);
}

TEST_CASE("linear solve oracle values") {
  const auto r6 = single_marked_solve(6);
  REQUIRE(r6.exact.has_value());
  CHECK(*r6.exact == Rational(35, 6));
  const auto r31 = single_marked_solve(31);
  REQUIRE(r31.exact.has_value());
  CHECK(*r31.exact == Rational(160));

  const auto p = transition_matrix(cycle_graph(6));
  const MarkedSet m(6, {0, 1, 3});
  const auto pp = absorbing_matrix(p, m);
  CHECK(*hitting_time_linear_solve(pp, m, StartDistribution::point(6, 1)).exact == Rational(0));
  // Vertex 2 escapes in 1 step; 4 and 5 sit in a 2-vertex gap.
  const auto fig3 = hitting_time_linear_solve(pp, m, StartDistribution::uniform(6));
  REQUIRE(fig3.exact.has_value());
  CHECK(*fig3.exact == Rational(1 + 2 + 2, 6));
}

TEST_CASE("property: closed form equals exact linear solve for L in [3, 200]") {
  for (std::int64_t L = 3; L <= 200; ++L) {
    const auto r = single_marked_solve(L);
    REQUIRE(r.exact.has_value());
    CHECK(*r.exact == hitting_time_exact_cycle(L));
  }
}

TEST_CASE("floating solve above the exact limit") {
  const std::int64_t L = 301;
  const auto r = single_marked_solve(L);
  CHECK_FALSE(r.exact.has_value());
  const double expect = to_double(hitting_time_exact_cycle(L));
  CHECK(std::abs(r.value - expect) <= 1e-9 * expect);
}

TEST_CASE("clustered closed form equals linear solve") {
  for (std::int64_t N = 3; N <= 30; ++N)
    for (std::int64_t k = 1; k < N; ++k) {
      const auto p = transition_matrix(cycle_graph(N));
      const MarkedSet m = MarkedSet::arc(N, k, static_cast<Vertex>(N / 2));
      const auto r = hitting_time_linear_solve(absorbing_matrix(p, m), m, StartDistribution::uniform(N));
      REQUIRE(r.exact.has_value());
      CHECK(*r.exact == clustered_hitting_time_exact(N, k));
    }
}

TEST_CASE("linear solve errors") {
  const auto p = transition_matrix(cycle_graph(6));
  CHECK_THROWS_AS(hitting_time_linear_solve(p, MarkedSet::none(6), StartDistribution::uniform(6)),
                  Error);
  try {
    hitting_time_linear_solve(p, MarkedSet(6, {0}), StartDistribution::uniform(6));
    FAIL("non-absorbing marked row accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::inconsistency);
  }
  const Graph split = Graph::from_adjacency({{1, 2}, {0, 2}, {0, 1}, {4, 5}, {3, 5}, {3, 4}});
  const MarkedSet m(6, {0});
  try {
    hitting_time_linear_solve(absorbing_matrix(transition_matrix(split), m), m,
                              StartDistribution::uniform(6));
    FAIL("unreachable marked set accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_absorption);
  }
}

TEST_CASE("Monte Carlo hitting time") {
  const auto r = simulate_hitting_time(cycle_graph(6), MarkedSet(6, {0}), 200000, 11);
  CHECK(r.trials == 200000);
  CHECK(r.seed == 11);
  CHECK(r.mc_stderr > 0.0);
  CHECK(r.exact_rational == Rational(35, 6));
  CHECK(std::abs(r.mc_estimate - 35.0 / 6.0) <= 3 * r.mc_stderr);

  const auto all = simulate_hitting_time(cycle_graph(5), MarkedSet::all(5), 1000, 3);
  CHECK(all.mc_estimate == 0.0);
  CHECK(all.mc_stderr == 0.0);
  CHECK(all.exact_value == 0.0);

  const auto c = simulate_hitting_time(cycle_graph(9), MarkedSet::arc(9, 3), 200000, 5);
  CHECK(c.exact_rational == Rational(56, 9));
  CHECK(std::abs(c.mc_estimate - 56.0 / 9.0) <= 3 * c.mc_stderr);

  CHECK_THROWS_AS(simulate_hitting_time(cycle_graph(5), MarkedSet::none(5), 10, 1), Error);
  CHECK_THROWS_AS(simulate_hitting_time(cycle_graph(5), MarkedSet(5, {0}), 0, 1), Error);
}

TEST_CASE("Monte Carlo is reproducible and independent of thread count") {
  const Graph g = cycle_graph(10);
  const MarkedSet m(10, {3});
  const auto a = simulate_hitting_time(g, m, 20000, 77, 1);
  const auto b = simulate_hitting_time(g, m, 20000, 77, 7);
  const auto c = simulate_hitting_time(g, m, 20000, 77, 0);
  CHECK(a.mc_estimate == b.mc_estimate);
  CHECK(a.mc_stderr == b.mc_stderr);
  CHECK(a.mc_estimate == c.mc_estimate);
  const auto d = simulate_hitting_time(g, m, 20000, 78, 1);
  CHECK(a.mc_estimate != d.mc_estimate);
}

TEST_CASE("property: Monte Carlo agrees with linear solve within 3 stderr in >= 99% of seeds") {
  // 1000 seeds: an exactly calibrated estimator misses 3 sigma ~2.7 times.
  const Graph g = cycle_graph(6);
  const MarkedSet m(6, {0, 1, 3});
  int within = 0;
  double exact = 0.0;
  const int seeds = 1000;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    const auto r = simulate_hitting_time(g, m, 4000, seed, 1);
    exact = r.exact_value;
    within += std::abs(r.mc_estimate - r.exact_value) <= 3 * r.mc_stderr;
  }
  MESSAGE(within << " of " << seeds << " seeds within 3 stderr");
  CHECK(exact == doctest::Approx(5.0 / 6.0));
  CHECK(within >= 990);
}

TEST_CASE("run_trials reports the lowest failing trial") {
  auto trial = [](std::uint64_t i, Engine&) -> std::uint64_t {
    if (i == 37 || i == 900) throw std::runtime_error("trial " + std::to_string(i));
    return i;
  };
  for (unsigned threads : {1u, 4u}) {
    try {
      run_trials(1000, 1, trial, threads);
      FAIL("no exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "trial 37");
    }
  }
  const auto out = run_trials(100, 9, [](std::uint64_t i, Engine&) { return i * i; }, 3);
  for (std::uint64_t i = 0; i < 100; ++i) CHECK(out[i] == i * i);
  const SampleStats s = summarize({1, 2, 3, 4});
  CHECK(s.mean == 2.5);
  CHECK(s.standard_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("cesaro_mixing_time") {
  const auto r3 = cesaro_mixing_time(transition_matrix(cycle_graph(3)), 0, 0.5);
  CHECK(r3.time_steps == 1);
  CHECK(r3.final_tv_distance <= 0.5);

  const auto p11 = transition_matrix(cycle_graph(11));
  const auto a = cesaro_mixing_time(p11, 0, 0.01);
  const auto b = cesaro_mixing_time(p11, 0, 0.01);
  CHECK(a.time_steps == b.time_steps);
  CHECK(a.final_tv_distance == b.final_tv_distance);
  CHECK(a.final_tv_distance <= 0.01);
  CHECK(a.epsilon == 0.01);

  // Even cycles are periodic; the average still converges.
  const auto even = cesaro_mixing_time(transition_matrix(cycle_graph(10)), 0, 0.05);
  CHECK(even.final_tv_distance <= 0.05);

  CHECK_THROWS_AS(cesaro_mixing_time(p11, 0, 0.0), Error);
  CHECK_THROWS_AS(cesaro_mixing_time(p11, 0, 1.0), Error);
  CHECK_THROWS_AS(cesaro_mixing_time(p11, 11, 0.1), Error);
  const MarkedSet m(11, {2});
  CHECK_THROWS_AS(cesaro_mixing_time(absorbing_matrix(p11, m), 0, 0.1), Error);
  const Graph split = Graph::from_adjacency({{1, 2}, {0, 2}, {0, 1}, {4, 5}, {3, 5}, {3, 4}});
  CHECK_THROWS_AS(cesaro_mixing_time(transition_matrix(split), 0, 0.1), Error);
}

TEST_CASE("property: Cesaro average is a distribution at every step") {
  for (std::size_t n : {5u, 8u, 13u}) {
    std::uint64_t calls = 0;
    cesaro_mixing_time(transition_matrix(cycle_graph(n)), 1, 0.02,
                       [&](std::uint64_t t, std::span<const double> sums) {
                         double total = 0.0;
                         for (double s : sums) {
                           CHECK(s >= 0.0);
                           total += s / static_cast<double>(t + 1);
                         }
                         CHECK(std::abs(total - 1.0) <= 1e-12);
                         ++calls;
                       });
    CHECK(calls > 1);
  }
}

TEST_CASE("property: Cesaro mixing time on odd cycles scales as n^2") {
  std::vector<double> ns, ts;
  for (std::size_t n : {11u, 21u, 41u, 81u}) {
    ns.push_back(static_cast<double>(n));
    ts.push_back(static_cast<double>(
        cesaro_mixing_time(transition_matrix(cycle_graph(n)), 0, 0.01).time_steps));
  }
  const double slope = loglog_slope(ns, ts);
  MESSAGE("mixing slope " << slope);
  CHECK(std::abs(slope - 2.0) <= 0.3);
}

TEST_CASE("oresme_partial_sum") {
  CHECK(oresme_partial_sum(1) == 0.5);
  CHECK(oresme_partial_sum(3) == 1.375);
  CHECK(std::abs(oresme_partial_sum(50) - 2.0) <= 1e-12);
  CHECK_THROWS_AS(oresme_partial_sum(0), Error);
}

TEST_CASE("rational helpers") {
  CHECK(to_fraction_string(Rational(160)) == "160/1");
  CHECK(to_fraction_string(Rational(0)) == "0/1");
  CHECK(parse_fraction("35/6") == Rational(35, 6));
  CHECK(parse_fraction("-3/9") == Rational(-1, 3));
  CHECK_THROWS_AS(parse_fraction("x/2"), Error);
  CHECK_THROWS_AS(parse_fraction("1/0"), Error);
  Rational r;
  CHECK(rationalize(0.25, r));
  CHECK(r == Rational(1, 4));
  CHECK(rationalize(1.0 / 3.0, r));
  CHECK(r == Rational(1, 3));
  CHECK_FALSE(rationalize(std::sqrt(2.0), r));
}
