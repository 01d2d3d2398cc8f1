#include "qwalk/classical.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

#include "qwalk/error.hpp"
#include "qwalk/kernels.hpp"
#include "qwalk/rng.hpp"

namespace qwalk {

namespace {

template <class T>
bool is_zero(const T& v) {
  if constexpr (std::is_floating_point_v<T>) {
    return v == T(0);
  } else {
    return boost::multiprecision::numerator(v).is_zero();
  }
}

// Gaussian elimination that only touches nonzero entries of each pivot row and
// column. Exact types take the first nonzero pivot; doubles use threshold
// partial pivoting, which keeps the band structure of diagonally dominant
// systems such as I - Q.
template <class T>
std::vector<T> solve_linear(std::vector<std::vector<T>> a, std::vector<T> b) {
  const std::size_t n = b.size();
  std::vector<std::size_t> nz;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t pivot = n;
    if constexpr (std::is_floating_point_v<T>) {
      double best = 0.0;
      for (std::size_t r = i; r < n; ++r) best = std::max(best, std::abs(a[r][i]));
      if (best == 0.0) throw Error(ErrorCode::no_absorption, "singular hitting-time system");
      pivot = std::abs(a[i][i]) >= 0.1 * best ? i : n;
      for (std::size_t r = i; pivot == n && r < n; ++r)
        if (std::abs(a[r][i]) == best) pivot = r;
    } else {
      for (std::size_t r = i; r < n && pivot == n; ++r)
        if (!is_zero(a[r][i])) pivot = r;
      if (pivot == n) throw Error(ErrorCode::no_absorption, "singular hitting-time system");
    }
    if (pivot != i) {
      std::swap(a[pivot], a[i]);
      std::swap(b[pivot], b[i]);
    }

    nz.clear();
    for (std::size_t c = i + 1; c < n; ++c)
      if (!is_zero(a[i][c])) nz.push_back(c);

    for (std::size_t r = i + 1; r < n; ++r) {
      if (is_zero(a[r][i])) continue;
      const T factor = a[r][i] / a[i][i];
      a[r][i] = T(0);
      for (std::size_t c : nz) a[r][c] -= factor * a[i][c];
      b[r] -= factor * b[i];
    }
  }
  std::vector<T> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    T acc = b[ii];
    for (std::size_t c = ii + 1; c < n; ++c)
      if (!is_zero(a[ii][c])) acc -= a[ii][c] * x[c];
    x[ii] = acc / a[ii][ii];
  }
  return x;
}

// Vertices from which some marked vertex is reachable under P'.
std::vector<std::uint8_t> reaches_marked(const StochasticMatrix& pprime, const MarkedSet& m) {
  const std::size_t n = pprime.dim();
  std::vector<std::vector<Vertex>> reverse(n);
  for (Vertex v = 0; v < n; ++v)
    for (Vertex w : pprime.row_columns(v))
      if (w != v) reverse[w].push_back(v);
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<Vertex> stack(m.vertices().begin(), m.vertices().end());
  for (Vertex v : stack) seen[v] = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (Vertex u : reverse[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        stack.push_back(u);
      }
    }
  }
  return seen;
}

void check_absorbing_system(const StochasticMatrix& pprime, const MarkedSet& m) {
  if (m.universe() != pprime.dim())
    throw Error(ErrorCode::inconsistency, "marked set universe does not match matrix");
  if (m.empty()) throw Error(ErrorCode::no_marked, "hitting time needs at least one marked vertex");
  for (Vertex v : m.vertices())
    if (!pprime.absorbing(v))
      throw Error(ErrorCode::inconsistency,
                  "marked vertex " + std::to_string(v) + " is not absorbing in P'");
  const auto ok = reaches_marked(pprime, m);
  for (Vertex v = 0; v < pprime.dim(); ++v)
    if (!ok[v])
      throw Error(ErrorCode::no_absorption,
                  "vertex " + std::to_string(v) + " cannot reach the marked set");
}

// entry(j) returns the j-th stored value of P' (CSR order) as a T.
template <class T, class Entry>
std::vector<T> absorption_system(const StochasticMatrix& pprime, const MarkedSet& m,
                                 Entry entry) {
  const std::size_t n = pprime.dim();
  std::vector<std::size_t> slot(n, n);
  std::vector<Vertex> unknowns;
  for (Vertex v = 0; v < n; ++v) {
    if (!m.contains(v)) {
      slot[v] = unknowns.size();
      unknowns.push_back(v);
    }
  }
  const std::size_t u = unknowns.size();
  std::vector<std::vector<T>> a(u, std::vector<T>(u, T(0)));
  std::vector<T> b(u, T(1));
  for (std::size_t r = 0; r < u; ++r) {
    const Vertex v = unknowns[r];
    a[r][r] += T(1);
    const auto cols = pprime.row_columns(v);
    const std::size_t base = pprime.offsets()[v];
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (m.contains(cols[k])) continue;
      a[r][slot[cols[k]]] -= entry(base + k);
    }
  }
  const std::vector<T> x = u == 0 ? std::vector<T>{} : solve_linear(std::move(a), std::move(b));
  std::vector<T> times(n, T(0));
  for (std::size_t r = 0; r < u; ++r) times[unknowns[r]] = x[r];
  return times;
}

}  // namespace

double h_step_expectation(std::int64_t L, std::int64_t i) {
  if (L < 3) throw Error(ErrorCode::domain, "cycle length must be at least 3");
  if (i < 1 || i > L / 2)
    throw Error(ErrorCode::domain, "distance " + std::to_string(i) + " outside [1, " +
                                       std::to_string(L / 2) + "]");
  return static_cast<double>(L - 2 * i + 1);
}

double hitting_from_distance(std::int64_t L, std::int64_t i) {
  if (L < 3) throw Error(ErrorCode::domain, "cycle length must be at least 3");
  if (i < 0 || i > L / 2)
    throw Error(ErrorCode::domain, "distance " + std::to_string(i) + " outside [0, " +
                                       std::to_string(L / 2) + "]");
  return static_cast<double>(i * (L - i));
}

Rational hitting_time_exact_cycle(std::int64_t L) {
  if (L < 1) throw Error(ErrorCode::domain, "cycle length must be at least 1");
  return Rational(BigInt(L) * L - 1, 6);
}

Rational clustered_hitting_time_exact(std::int64_t N, std::int64_t k) {
  if (k < 1 || k >= N)
    throw Error(ErrorCode::domain, "clustered hitting time needs 1 <= k < N (N=" +
                                       std::to_string(N) + ", k=" + std::to_string(k) + ")");
  const BigInt m = N - k;
  return Rational(m * (m + 1) * (m + 2), BigInt(6) * N);
}

StartDistribution StartDistribution::uniform(std::size_t n) {
  StartDistribution d;
  d.weights_.assign(n, Rational(1, static_cast<long long>(n)));
  return d;
}

StartDistribution StartDistribution::point(std::size_t n, Vertex v) {
  if (v >= n) throw Error(ErrorCode::domain, "start vertex out of range");
  StartDistribution d;
  d.weights_.assign(n, Rational(0));
  d.weights_[v] = 1;
  return d;
}

StartDistribution StartDistribution::from_probabilities(const std::vector<double>& probs) {
  StartDistribution d;
  d.weights_.reserve(probs.size());
  for (double p : probs) {
    if (!(p >= 0.0)) throw Error(ErrorCode::domain, "negative start probability");
    d.weights_.emplace_back(p);
  }
  return d;
}

SolveResult hitting_time_linear_solve(const StochasticMatrix& pprime, const MarkedSet& m,
                                      const StartDistribution& start) {
  if (start.size() != pprime.dim())
    throw Error(ErrorCode::inconsistency, "start distribution has the wrong dimension");
  check_absorbing_system(pprime, m);

  bool exact = pprime.dim() <= kExactSolveLimit;
  std::vector<Rational> entries;
  if (exact) {
    entries.reserve(pprime.nonzeros());
    for (double v : pprime.values()) {
      Rational r;
      if (!rationalize(v, r)) {
        exact = false;
        break;
      }
      entries.push_back(std::move(r));
    }
  }

  SolveResult result;
  if (exact) {
    const auto times =
        absorption_system<Rational>(pprime, m, [&](std::size_t j) { return entries[j]; });
    Rational total = 0;
    for (std::size_t v = 0; v < times.size(); ++v)
      if (!is_zero(start.weights()[v])) total += start.weights()[v] * times[v];
    result.value = to_double(total);
    result.exact = std::move(total);
  } else {
    const auto times = absorption_times(pprime, m);
    double total = 0.0;
    for (std::size_t v = 0; v < times.size(); ++v)
      total += to_double(start.weights()[v]) * times[v];
    result.value = total;
  }
  return result;
}

std::vector<double> absorption_times(const StochasticMatrix& pprime, const MarkedSet& m) {
  check_absorbing_system(pprime, m);
  const auto values = pprime.values();
  return absorption_system<double>(pprime, m, [&](std::size_t j) { return values[j]; });
}

HittingReport simulate_hitting_time(const Graph& g, const MarkedSet& m, std::uint64_t trials,
                                    std::uint64_t seed, unsigned threads) {
  if (trials < 1) throw Error(ErrorCode::domain, "trials must be at least 1");
  const StochasticMatrix p = transition_matrix(g);
  const StochasticMatrix pprime = absorbing_matrix(p, m);
  const SolveResult exact = hitting_time_linear_solve(pprime, m, StartDistribution::uniform(g.size()));

  const std::uint64_t n = g.size();
  const std::uint64_t cap = 100 * n * n;
  auto trial = [&](std::uint64_t index, Engine& gen) -> std::uint64_t {
    std::uniform_int_distribution<Vertex> pick_start(0, static_cast<Vertex>(n - 1));
    Vertex v = pick_start(gen);
    std::uint64_t steps = 0;
    while (!m.contains(v)) {
      if (steps == cap)
        throw Error(ErrorCode::cap_exceeded, "trial " + std::to_string(index) +
                                                 " exceeded the step cap of " +
                                                 std::to_string(cap));
      const auto nb = g.neighbors(v);
      std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
      v = nb[pick(gen)];
      ++steps;
    }
    return steps;
  };
  const auto samples = run_trials(trials, seed, trial, threads);
  const SampleStats stats = summarize(samples);

  HittingReport report;
  report.exact_value = exact.value;
  report.exact_rational = exact.exact;
  report.mc_estimate = stats.mean;
  report.mc_stderr = stats.standard_error;
  report.trials = trials;
  report.seed = seed;
  return report;
}

MixingReport cesaro_mixing_time(const StochasticMatrix& p, Vertex start_vertex, double epsilon,
                                const CesaroObserver& observe) {
  const std::size_t n = p.dim();
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorCode::domain, "epsilon must lie in (0, 1)");
  if (start_vertex >= n) throw Error(ErrorCode::domain, "start vertex out of range");
  for (Vertex v = 0; v < n; ++v)
    if (n > 1 && p.absorbing(v))
      throw Error(ErrorCode::domain, "mixing time needs an irreducible chain; row " +
                                         std::to_string(v) + " is absorbing");
  {
    const MarkedSet root(n, {0});
    const auto back = reaches_marked(p, root);
    std::vector<std::uint8_t> fwd(n, 0);
    std::vector<Vertex> stack{0};
    fwd[0] = 1;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : p.row_columns(v))
        if (!fwd[w]) fwd[w] = 1, stack.push_back(w);
    }
    for (Vertex v = 0; v < n; ++v)
      if (!back[v] || !fwd[v])
        throw Error(ErrorCode::domain, "mixing time needs an irreducible chain");
  }

  // Column-major copy of P so one propagation step is a CSR product.
  std::vector<std::uint32_t> offsets(n + 1, 0);
  for (Vertex c : p.columns()) ++offsets[c + 1];
  for (std::size_t c = 0; c < n; ++c) offsets[c + 1] += offsets[c];
  std::vector<std::int32_t> rows(p.nonzeros());
  std::vector<double> vals(p.nonzeros());
  {
    std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
    for (Vertex r = 0; r < n; ++r) {
      const auto cols = p.row_columns(r);
      const auto rv = p.row_values(r);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        const std::uint32_t at = cursor[cols[k]]++;
        rows[at] = static_cast<std::int32_t>(r);
        vals[at] = rv[k];
      }
    }
  }

  const kernels::KernelTable& kt = kernels::best();
  std::vector<double> dist(n, 0.0), next(n, 0.0), sums(n, 0.0);
  dist[start_vertex] = 1.0;
  sums[start_vertex] = 1.0;
  const double uniform = 1.0 / static_cast<double>(n);
  const std::uint64_t cap = 1'000'000ull * n;

  for (std::uint64_t t = 0;; ++t) {
    if (observe) observe(t, sums);
    const double tv = kt.tv_to_constant(sums, 1.0 / static_cast<double>(t + 1), uniform);
    if (tv <= epsilon) return MixingReport{epsilon, t, tv};
    if (t == cap)
      throw Error(ErrorCode::cap_exceeded,
                  "Cesaro average did not reach epsilon within " + std::to_string(cap) + " steps");
    kt.gather_dot(offsets, rows, vals, dist, next);
    dist.swap(next);
    kt.accumulate(sums, dist);
  }
}

double oresme_partial_sum(std::int64_t terms) {
  if (terms < 1) throw Error(ErrorCode::domain, "terms must be at least 1");
  double total = 0.0;
  for (std::int64_t i = 1; i <= terms; ++i) total += std::ldexp(static_cast<double>(i), static_cast<int>(-i));
  return total;
}

}  // namespace qwalk
