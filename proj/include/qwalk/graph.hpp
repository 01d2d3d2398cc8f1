#pragma once

// Graphs, transition matrices, marked-vertex overlays and the directed-edge
// basis of the bipartite double cover.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace qwalk {

using Vertex = std::uint32_t;

enum class GraphKind { cycle, torus_grid, general };

const char* to_string(GraphKind kind);

/// Undirected simple graph. Neighbor lists are sorted; no self-loops, no
/// duplicate neighbors, symmetric adjacency.
class Graph {
 public:
  /// Validates the adjacency and throws Error(invalid_size / inconsistency).
  static Graph from_adjacency(std::vector<std::vector<Vertex>> adjacency,
                              GraphKind kind = GraphKind::general,
                              std::size_t side = 0);

  std::size_t size() const { return adjacency_.size(); }
  GraphKind kind() const { return kind_; }
  /// Torus side length; zero unless kind() == torus_grid.
  std::size_t side() const { return side_; }

  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
  std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
  bool adjacent(Vertex u, Vertex v) const;
  bool connected() const;

 private:
  Graph() = default;

  std::vector<std::vector<Vertex>> adjacency_;
  GraphKind kind_ = GraphKind::general;
  std::size_t side_ = 0;
};

Graph cycle_graph(std::size_t n);
Graph torus_grid_graph(std::size_t side);

inline Vertex torus_vertex(std::size_t side, std::size_t i, std::size_t j) {
  return static_cast<Vertex>((i % side) * side + (j % side));
}

/// Sorted set of marked vertices inside [0, n).
class MarkedSet {
 public:
  MarkedSet() = default;
  /// Sorts and deduplicates; throws Error(domain) for out-of-range indices.
  MarkedSet(std::size_t n, std::vector<Vertex> marked);

  static MarkedSet none(std::size_t n) { return MarkedSet(n, {}); }
  static MarkedSet all(std::size_t n);
  /// The contiguous arc {first, first+1, ..., first+k-1} (mod n).
  static MarkedSet arc(std::size_t n, std::size_t k, Vertex first = 0);

  std::size_t universe() const { return n_; }
  std::size_t k() const { return marked_.size(); }
  bool empty() const { return marked_.empty(); }
  bool contains(Vertex v) const { return v < n_ && flags_[v] != 0; }
  std::span<const Vertex> vertices() const { return marked_; }

  bool operator==(const MarkedSet& other) const {
    return n_ == other.n_ && marked_ == other.marked_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Vertex> marked_;
  std::vector<std::uint8_t> flags_;
};

MarkedSet diagonal_marked_set(std::size_t side);

/// Row-stochastic matrix in compressed sparse row form. Column indices within
/// each row are strictly increasing.
class StochasticMatrix {
 public:
  struct Entry {
    Vertex column;
    double probability;
  };

  /// Validates row sums (1e-12), entry range and column order.
  static StochasticMatrix from_rows(std::vector<std::vector<Entry>> rows);

  std::size_t dim() const { return offsets_.size() - 1; }
  std::size_t nonzeros() const { return columns_.size(); }

  std::span<const Vertex> row_columns(Vertex row) const;
  std::span<const double> row_values(Vertex row) const;
  double at(Vertex row, Vertex column) const;

  std::span<const std::uint32_t> offsets() const { return offsets_; }
  std::span<const Vertex> columns() const { return columns_; }
  std::span<const double> values() const { return values_; }

  /// True when row `row` is the identity row (absorbing state).
  bool absorbing(Vertex row) const;

  bool operator==(const StochasticMatrix&) const = default;

 private:
  std::vector<std::uint32_t> offsets_{0};
  std::vector<Vertex> columns_;
  std::vector<double> values_;
};

StochasticMatrix transition_matrix(const Graph& g);
StochasticMatrix absorbing_matrix(const StochasticMatrix& p, const MarkedSet& m);

/// Ordered directed pairs (x, y) spanning the walk's edge space: the union of
/// the supports of P and P'. For a marked vertex this is its original edges in
/// both directions plus the self-loop (i, i).
class EdgeBasis {
 public:
  static EdgeBasis build(const StochasticMatrix& p, const StochasticMatrix& pprime);

  std::size_t size() const { return pairs_.size(); }
  std::size_t vertex_count() const { return x_offsets_.size() - 1; }

  std::pair<Vertex, Vertex> pair_at(std::size_t index) const { return pairs_[index]; }
  std::optional<std::size_t> index_of(Vertex x, Vertex y) const;
  bool is_self_loop(std::size_t index) const {
    return pairs_[index].first == pairs_[index].second;
  }
  std::size_t self_loop_count() const;

  /// Basis elements with first coordinate x occupy [x_offsets[x], x_offsets[x+1]).
  std::span<const std::uint32_t> x_offsets() const { return x_offsets_; }
  /// Basis indices sorted by (y, x); elements with second coordinate y occupy
  /// [y_offsets[y], y_offsets[y+1]) of y_order().
  std::span<const std::uint32_t> y_offsets() const { return y_offsets_; }
  std::span<const std::int32_t> y_order() const { return y_order_; }

  std::span<const std::pair<Vertex, Vertex>> pairs() const { return pairs_; }

  bool operator==(const EdgeBasis& other) const { return pairs_ == other.pairs_; }

 private:
  std::vector<std::pair<Vertex, Vertex>> pairs_;
  std::vector<std::uint32_t> x_offsets_;
  std::vector<std::uint32_t> y_offsets_;
  std::vector<std::int32_t> y_order_;
};

/// Partition of the side x side torus into the classes (i - j) mod side. The
/// marked diagonal is class 0 and class adjacency is the cycle of length side.
class ReductionMap {
 public:
  explicit ReductionMap(std::size_t side);

  std::size_t side() const { return side_; }
  std::size_t class_count() const { return side_; }
  std::size_t class_of(std::size_t i, std::size_t j) const {
    return (i + side_ - (j % side_)) % side_;
  }
  std::size_t class_of(Vertex v) const { return class_of(v / side_, v % side_); }
  std::span<const Vertex> members(std::size_t cls) const { return classes_[cls]; }

 private:
  std::size_t side_;
  std::vector<std::vector<Vertex>> classes_;
};

ReductionMap grid_to_cycle_reduction(std::size_t side);

}  // namespace qwalk
