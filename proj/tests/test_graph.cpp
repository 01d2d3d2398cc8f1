#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "qwalk/classical.hpp"
#include "qwalk/error.hpp"
#include "qwalk/graph.hpp"

using namespace qwalk;

namespace {

std::vector<Vertex> nbrs(const Graph& g, Vertex v) {
  auto s = g.neighbors(v);
  return {s.begin(), s.end()};
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::usage;
}

}  // namespace

TEST_CASE("cycle_graph adjacency") {
  const Graph g = cycle_graph(6);
  CHECK(g.size() == 6);
  CHECK(g.kind() == GraphKind::cycle);
  CHECK(nbrs(g, 0) == std::vector<Vertex>{1, 5});
  CHECK(nbrs(g, 3) == std::vector<Vertex>{2, 4});

  const Graph g3 = cycle_graph(3);
  for (Vertex v = 0; v < 3; ++v) CHECK(g3.degree(v) == 2);

  const Graph g9 = cycle_graph(9);
  for (Vertex v = 0; v < 9; ++v) {
    CHECK(g9.adjacent(v, (v + 1) % 9));
    CHECK(g9.adjacent(v, (v + 8) % 9));
  }
  CHECK(g9.connected());

  CHECK(code_of([] { cycle_graph(2); }) == ErrorCode::invalid_size);
  CHECK(code_of([] { cycle_graph(0); }) == ErrorCode::invalid_size);
}

TEST_CASE("torus_grid_graph adjacency") {
  const Graph t3 = torus_grid_graph(3);
  CHECK(t3.size() == 9);
  CHECK(t3.kind() == GraphKind::torus_grid);
  CHECK(t3.side() == 3);
  for (Vertex v = 0; v < 9; ++v) CHECK(t3.degree(v) == 4);
  const std::set<Vertex> expect = {torus_vertex(3, 1, 0), torus_vertex(3, 2, 0),
                                   torus_vertex(3, 0, 1), torus_vertex(3, 0, 2)};
  const auto got = nbrs(t3, torus_vertex(3, 0, 0));
  CHECK(std::set<Vertex>(got.begin(), got.end()) == expect);

  const Graph t5 = torus_grid_graph(5);
  CHECK(t5.size() == 25);
  for (Vertex v = 0; v < 25; ++v) CHECK(t5.degree(v) == 4);

  CHECK(code_of([] { torus_grid_graph(2); }) == ErrorCode::invalid_size);
}

TEST_CASE("from_adjacency validates") {
  CHECK_NOTHROW(Graph::from_adjacency({{1, 2}, {0}, {0}}));
  CHECK_THROWS_AS(Graph::from_adjacency({{1}, {}}), Error);         // asymmetric
  CHECK_THROWS_AS(Graph::from_adjacency({{0, 1}, {0}}), Error);     // self-loop
  CHECK_THROWS_AS(Graph::from_adjacency({{1, 1}, {0, 0}}), Error);  // duplicate
  CHECK_THROWS_AS(Graph::from_adjacency({{5}, {0}}), Error);        // out of range
  const Graph two_parts = Graph::from_adjacency({{1}, {0}, {3}, {2}});
  CHECK_FALSE(two_parts.connected());
}

TEST_CASE("MarkedSet") {
  const MarkedSet m(6, {3, 0, 1, 3});
  CHECK(m.k() == 3);
  CHECK(std::vector<Vertex>(m.vertices().begin(), m.vertices().end()) ==
        std::vector<Vertex>{0, 1, 3});
  CHECK(m.contains(3));
  CHECK_FALSE(m.contains(2));
  CHECK_FALSE(m.contains(99));
  CHECK(MarkedSet::none(4).k() == 0);
  CHECK(MarkedSet::all(4).k() == 4);
  CHECK(MarkedSet::arc(9, 3, 7) == MarkedSet(9, {7, 8, 0}));
  CHECK(code_of([] { MarkedSet(4, {4}); }) == ErrorCode::domain);
}

TEST_CASE("transition_matrix") {
  const auto p = transition_matrix(cycle_graph(6));
  CHECK(p.dim() == 6);
  CHECK(p.at(0, 1) == 0.5);
  CHECK(p.at(0, 5) == 0.5);
  CHECK(p.at(0, 0) == 0.0);
  CHECK(p.at(0, 2) == 0.0);

  const auto p3 = transition_matrix(cycle_graph(3));
  for (Vertex r = 0; r < 3; ++r)
    for (Vertex c = 0; c < 3; ++c) CHECK(p3.at(r, c) == (r == c ? 0.0 : 0.5));

  const auto t3 = transition_matrix(torus_grid_graph(3));
  for (double v : t3.values()) CHECK(v == 0.25);
}

TEST_CASE("StochasticMatrix::from_rows validates") {
  using E = StochasticMatrix::Entry;
  CHECK_NOTHROW(StochasticMatrix::from_rows({{E{1, 1.0}}, {E{0, 0.5}, E{1, 0.5}}}));
  CHECK_THROWS_AS(StochasticMatrix::from_rows({{E{1, 0.9}}, {E{0, 1.0}}}), Error);
  CHECK_THROWS_AS(StochasticMatrix::from_rows({{E{2, 1.0}}, {E{0, 1.0}}}), Error);
  CHECK_THROWS_AS(StochasticMatrix::from_rows({{E{1, 1.5}, E{0, -0.5}}, {E{0, 1.0}}}), Error);
}

TEST_CASE("absorbing_matrix") {
  const auto p = transition_matrix(cycle_graph(6));
  const MarkedSet m(6, {0, 1, 3});
  const auto pp = absorbing_matrix(p, m);
  for (Vertex r : {0u, 1u, 3u}) {
    CHECK(pp.absorbing(r));
    CHECK(pp.at(r, r) == 1.0);
    CHECK(pp.row_columns(r).size() == 1);
  }
  for (Vertex r : {2u, 4u, 5u}) {
    CHECK_FALSE(pp.absorbing(r));
    CHECK(pp.at(r, (r + 1) % 6) == 0.5);
    CHECK(pp.at(r, (r + 5) % 6) == 0.5);
  }
  CHECK(absorbing_matrix(p, MarkedSet::none(6)) == p);
  const auto id = absorbing_matrix(p, MarkedSet::all(6));
  for (Vertex r = 0; r < 6; ++r)
    for (Vertex c = 0; c < 6; ++c) CHECK(id.at(r, c) == (r == c ? 1.0 : 0.0));
  CHECK(absorbing_matrix(pp, m) == pp);
}

TEST_CASE("EdgeBasis sizes and ordering") {
  const auto p = transition_matrix(cycle_graph(6));
  CHECK(EdgeBasis::build(p, p).size() == 12);

  const auto pp = absorbing_matrix(p, MarkedSet(6, {0, 1, 3}));
  const auto b = EdgeBasis::build(p, pp);
  CHECK(b.size() == 15);
  CHECK(b.self_loop_count() == 3);
  CHECK(std::is_sorted(b.pairs().begin(), b.pairs().end()));
  CHECK(b.pair_at(0) == std::pair<Vertex, Vertex>{0, 0});
  CHECK(b.pair_at(1) == std::pair<Vertex, Vertex>{0, 1});
  CHECK(b.pair_at(2) == std::pair<Vertex, Vertex>{0, 5});

  const auto p3 = transition_matrix(cycle_graph(3));
  const auto all3 = EdgeBasis::build(p3, absorbing_matrix(p3, MarkedSet::all(3)));
  CHECK(all3.self_loop_count() == 3);
  CHECK(all3.size() == 9);

  CHECK_FALSE(b.index_of(0, 2).has_value());
}

TEST_CASE("property: EdgeBasis index round trip") {
  for (std::size_t n = 3; n <= 40; ++n) {
    const auto p = transition_matrix(cycle_graph(n));
    const auto b = EdgeBasis::build(p, absorbing_matrix(p, MarkedSet::arc(n, n / 3, 1)));
    CHECK(b.size() == 2 * n + n / 3);
    for (std::size_t i = 0; i < b.size(); ++i) {
      const auto [x, y] = b.pair_at(i);
      REQUIRE(b.index_of(x, y).has_value());
      CHECK(*b.index_of(x, y) == i);
    }
  }
  for (std::size_t side = 3; side <= 7; ++side) {
    const auto p = transition_matrix(torus_grid_graph(side));
    const auto b = EdgeBasis::build(p, absorbing_matrix(p, diagonal_marked_set(side)));
    CHECK(b.size() == 4 * side * side + side);
    for (std::size_t i = 0; i < b.size(); ++i) {
      const auto [x, y] = b.pair_at(i);
      CHECK(b.index_of(x, y) == i);
    }
  }
}

TEST_CASE("property: transition matrices are row-stochastic") {
  auto check_rows = [](const StochasticMatrix& p) {
    for (Vertex r = 0; r < p.dim(); ++r) {
      double s = 0.0;
      for (double v : p.row_values(r)) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        s += v;
      }
      CHECK(std::abs(s - 1.0) <= 1e-12);
    }
  };
  for (std::size_t n = 3; n <= 200; ++n) check_rows(transition_matrix(cycle_graph(n)));
  for (std::size_t s = 3; s <= 14; ++s) check_rows(transition_matrix(torus_grid_graph(s)));
}

TEST_CASE("diagonal_marked_set") {
  const MarkedSet d3 = diagonal_marked_set(3);
  CHECK(d3.k() == 3);
  const MarkedSet d5 = diagonal_marked_set(5);
  CHECK(d5.k() == 5);
  CHECK(d5.universe() == 25);
  for (std::size_t i = 0; i < 5; ++i) CHECK(d5.contains(torus_vertex(5, i, i)));
  const Graph t3 = torus_grid_graph(3);
  for (Vertex a : d3.vertices())
    for (Vertex b : d3.vertices()) CHECK_FALSE(t3.adjacent(a, b));
  CHECK_THROWS_AS(diagonal_marked_set(2), Error);
}

TEST_CASE("grid_to_cycle_reduction") {
  const ReductionMap r5 = grid_to_cycle_reduction(5);
  CHECK(r5.class_count() == 5);
  for (std::size_t c = 0; c < 5; ++c) CHECK(r5.members(c).size() == 5);
  const MarkedSet diag = diagonal_marked_set(5);
  for (Vertex v : diag.vertices()) CHECK(r5.class_of(v) == 0);
  CHECK(grid_to_cycle_reduction(3).class_of(1, 2) == 2);
  CHECK_THROWS_AS(grid_to_cycle_reduction(2), Error);
}

TEST_CASE("property: reduction classes partition the torus and follow cycle adjacency") {
  for (std::size_t s = 3; s <= 9; ++s) {
    const ReductionMap r = grid_to_cycle_reduction(s);
    const Graph g = torus_grid_graph(s);
    std::vector<int> seen(s * s, 0);
    for (std::size_t c = 0; c < s; ++c) {
      CHECK(r.members(c).size() == s);
      for (Vertex v : r.members(c)) {
        ++seen[v];
        CHECK(r.class_of(v) == c);
        for (Vertex w : g.neighbors(v)) {
          const std::size_t d = r.class_of(w);
          CHECK((d == (c + 1) % s || d == (c + s - 1) % s));
        }
      }
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](int x) { return x == 1; }));
  }
}

TEST_CASE("diagonal torus hitting time equals the quotient cycle") {
  CHECK(hitting_time_exact_cycle(5) == Rational(4));
  const auto p = transition_matrix(torus_grid_graph(5));
  const MarkedSet d = diagonal_marked_set(5);
  const auto res = hitting_time_linear_solve(absorbing_matrix(p, d), d, StartDistribution::uniform(25));
  REQUIRE(res.exact.has_value());
  CHECK(*res.exact == Rational(4));
}
