#include "qwalk/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qwalk/error.hpp"

namespace qwalk {

const char* to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::cycle: return "cycle";
    case GraphKind::torus_grid: return "torus";
    case GraphKind::general: return "general";
  }
  return "general";
}

Graph Graph::from_adjacency(std::vector<std::vector<Vertex>> adjacency, GraphKind kind,
                            std::size_t side) {
  const std::size_t n = adjacency.size();
  if (n == 0) throw Error(ErrorCode::invalid_size, "graph must have at least one vertex");
  for (std::size_t v = 0; v < n; ++v) {
    auto& nb = adjacency[v];
    std::sort(nb.begin(), nb.end());
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
      throw Error(ErrorCode::inconsistency,
                  "duplicate neighbor at vertex " + std::to_string(v));
    for (Vertex u : nb) {
      if (u >= n)
        throw Error(ErrorCode::inconsistency,
                    "neighbor " + std::to_string(u) + " out of range at vertex " +
                        std::to_string(v));
      if (u == v)
        throw Error(ErrorCode::inconsistency, "self-loop at vertex " + std::to_string(v));
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (Vertex u : adjacency[v]) {
      if (!std::binary_search(adjacency[u].begin(), adjacency[u].end(),
                              static_cast<Vertex>(v)))
        throw Error(ErrorCode::inconsistency, "asymmetric edge " + std::to_string(v) +
                                                  " -> " + std::to_string(u));
    }
  }
  Graph g;
  g.adjacency_ = std::move(adjacency);
  g.kind_ = kind;
  g.side_ = kind == GraphKind::torus_grid ? side : 0;
  return g;
}

bool Graph::adjacent(Vertex u, Vertex v) const {
  const auto& nb = adjacency_[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

bool Graph::connected() const {
  std::vector<std::uint8_t> seen(size(), 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t visited = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (Vertex u : adjacency_[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++visited;
        stack.push_back(u);
      }
    }
  }
  return visited == size();
}

Graph cycle_graph(std::size_t n) {
  if (n < 3)
    throw Error(ErrorCode::invalid_size,
                "cycle needs at least 3 vertices, got " + std::to_string(n));
  std::vector<std::vector<Vertex>> adj(n);
  for (std::size_t v = 0; v < n; ++v) {
    adj[v] = {static_cast<Vertex>((v + n - 1) % n), static_cast<Vertex>((v + 1) % n)};
  }
  return Graph::from_adjacency(std::move(adj), GraphKind::cycle);
}

Graph torus_grid_graph(std::size_t side) {
  if (side < 3)
    throw Error(ErrorCode::invalid_size,
                "torus side must be at least 3, got " + std::to_string(side));
  std::vector<std::vector<Vertex>> adj(side * side);
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = 0; j < side; ++j) {
      adj[torus_vertex(side, i, j)] = {
          torus_vertex(side, i + 1, j), torus_vertex(side, i + side - 1, j),
          torus_vertex(side, i, j + 1), torus_vertex(side, i, j + side - 1)};
    }
  }
  return Graph::from_adjacency(std::move(adj), GraphKind::torus_grid, side);
}

// ---------------------------------------------------------------------------

MarkedSet::MarkedSet(std::size_t n, std::vector<Vertex> marked)
    : n_(n), marked_(std::move(marked)), flags_(n, 0) {
  std::sort(marked_.begin(), marked_.end());
  marked_.erase(std::unique(marked_.begin(), marked_.end()), marked_.end());
  for (Vertex v : marked_) {
    if (v >= n)
      throw Error(ErrorCode::domain, "marked vertex " + std::to_string(v) +
                                         " outside [0, " + std::to_string(n) + ")");
    flags_[v] = 1;
  }
}

MarkedSet MarkedSet::all(std::size_t n) {
  std::vector<Vertex> v(n);
  std::iota(v.begin(), v.end(), Vertex{0});
  return MarkedSet(n, std::move(v));
}

MarkedSet MarkedSet::arc(std::size_t n, std::size_t k, Vertex first) {
  if (k > n) throw Error(ErrorCode::domain, "arc longer than the cycle");
  std::vector<Vertex> v(k);
  for (std::size_t i = 0; i < k; ++i) v[i] = static_cast<Vertex>((first + i) % n);
  return MarkedSet(n, std::move(v));
}

MarkedSet diagonal_marked_set(std::size_t side) {
  if (side < 3)
    throw Error(ErrorCode::invalid_size,
                "torus side must be at least 3, got " + std::to_string(side));
  std::vector<Vertex> v(side);
  for (std::size_t i = 0; i < side; ++i) v[i] = torus_vertex(side, i, i);
  return MarkedSet(side * side, std::move(v));
}

// ---------------------------------------------------------------------------

StochasticMatrix StochasticMatrix::from_rows(std::vector<std::vector<Entry>> rows) {
  StochasticMatrix m;
  m.offsets_.reserve(rows.size() + 1);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double sum = 0.0;
    for (std::size_t k = 0; k < rows[r].size(); ++k) {
      const Entry& e = rows[r][k];
      if (e.column >= rows.size())
        throw Error(ErrorCode::inconsistency, "column out of range in row " + std::to_string(r));
      if (k > 0 && rows[r][k - 1].column >= e.column)
        throw Error(ErrorCode::inconsistency, "row " + std::to_string(r) + " is not sorted");
      if (!(e.probability >= 0.0 && e.probability <= 1.0))
        throw Error(ErrorCode::inconsistency,
                    "entry outside [0,1] in row " + std::to_string(r));
      if (e.probability == 0.0) continue;
      sum += e.probability;
      m.columns_.push_back(e.column);
      m.values_.push_back(e.probability);
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw Error(ErrorCode::inconsistency, "row " + std::to_string(r) + " sums to " +
                                                std::to_string(sum));
    m.offsets_.push_back(static_cast<std::uint32_t>(m.columns_.size()));
  }
  return m;
}

std::span<const Vertex> StochasticMatrix::row_columns(Vertex row) const {
  return std::span<const Vertex>(columns_).subspan(offsets_[row],
                                                   offsets_[row + 1] - offsets_[row]);
}

std::span<const double> StochasticMatrix::row_values(Vertex row) const {
  return std::span<const double>(values_).subspan(offsets_[row],
                                                  offsets_[row + 1] - offsets_[row]);
}

double StochasticMatrix::at(Vertex row, Vertex column) const {
  const auto cols = row_columns(row);
  const auto it = std::lower_bound(cols.begin(), cols.end(), column);
  if (it == cols.end() || *it != column) return 0.0;
  return row_values(row)[static_cast<std::size_t>(it - cols.begin())];
}

bool StochasticMatrix::absorbing(Vertex row) const {
  const auto cols = row_columns(row);
  return cols.size() == 1 && cols[0] == row && row_values(row)[0] == 1.0;
}

StochasticMatrix transition_matrix(const Graph& g) {
  std::vector<std::vector<StochasticMatrix::Entry>> rows(g.size());
  for (Vertex v = 0; v < g.size(); ++v) {
    const auto nb = g.neighbors(v);
    if (nb.empty())
      throw Error(ErrorCode::inconsistency,
                  "isolated vertex " + std::to_string(v) + " has no transitions");
    const double p = 1.0 / static_cast<double>(nb.size());
    for (Vertex u : nb) rows[v].push_back({u, p});
  }
  return StochasticMatrix::from_rows(std::move(rows));
}

StochasticMatrix absorbing_matrix(const StochasticMatrix& p, const MarkedSet& m) {
  if (m.universe() != p.dim())
    throw Error(ErrorCode::inconsistency, "marked set universe does not match matrix");
  std::vector<std::vector<StochasticMatrix::Entry>> rows(p.dim());
  for (Vertex r = 0; r < p.dim(); ++r) {
    if (m.contains(r)) {
      rows[r] = {{r, 1.0}};
      continue;
    }
    const auto cols = p.row_columns(r);
    const auto vals = p.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) rows[r].push_back({cols[k], vals[k]});
  }
  return StochasticMatrix::from_rows(std::move(rows));
}

// ---------------------------------------------------------------------------

EdgeBasis EdgeBasis::build(const StochasticMatrix& p, const StochasticMatrix& pprime) {
  if (p.dim() != pprime.dim())
    throw Error(ErrorCode::inconsistency, "P and P' have different dimensions");
  const std::size_t n = p.dim();
  EdgeBasis b;
  b.x_offsets_.reserve(n + 1);
  b.x_offsets_.push_back(0);
  for (Vertex x = 0; x < n; ++x) {
    const auto a = p.row_columns(x);
    const auto c = pprime.row_columns(x);
    std::vector<Vertex> merged;
    std::set_union(a.begin(), a.end(), c.begin(), c.end(), std::back_inserter(merged));
    for (Vertex y : merged) b.pairs_.emplace_back(x, y);
    b.x_offsets_.push_back(static_cast<std::uint32_t>(b.pairs_.size()));
  }

  std::vector<std::uint32_t> counts(n, 0);
  for (const auto& [x, y] : b.pairs_) ++counts[y];
  b.y_offsets_.assign(n + 1, 0);
  for (std::size_t y = 0; y < n; ++y) b.y_offsets_[y + 1] = b.y_offsets_[y] + counts[y];
  b.y_order_.resize(b.pairs_.size());
  std::vector<std::uint32_t> cursor(b.y_offsets_.begin(), b.y_offsets_.end() - 1);
  // Scanning in (x, y) order fills each y-bucket in increasing x.
  for (std::size_t e = 0; e < b.pairs_.size(); ++e)
    b.y_order_[cursor[b.pairs_[e].second]++] = static_cast<std::int32_t>(e);
  return b;
}

std::optional<std::size_t> EdgeBasis::index_of(Vertex x, Vertex y) const {
  if (x >= vertex_count()) return std::nullopt;
  const auto first = pairs_.begin() + x_offsets_[x];
  const auto last = pairs_.begin() + x_offsets_[x + 1];
  const auto it = std::lower_bound(first, last, std::pair<Vertex, Vertex>{x, y});
  if (it == last || it->second != y) return std::nullopt;
  return static_cast<std::size_t>(it - pairs_.begin());
}

std::size_t EdgeBasis::self_loop_count() const {
  return static_cast<std::size_t>(std::count_if(
      pairs_.begin(), pairs_.end(), [](const auto& p) { return p.first == p.second; }));
}

// ---------------------------------------------------------------------------

ReductionMap::ReductionMap(std::size_t side) : side_(side), classes_(side) {
  if (side < 3)
    throw Error(ErrorCode::invalid_size,
                "torus side must be at least 3, got " + std::to_string(side));
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j)
      classes_[class_of(i, j)].push_back(torus_vertex(side, i, j));
}

ReductionMap grid_to_cycle_reduction(std::size_t side) { return ReductionMap(side); }

}  // namespace qwalk
