#include "qwalk/exceptional.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qwalk/error.hpp"

namespace qwalk {

ExceptionalReport verify_exceptional(const SearchWalk& walk, std::uint64_t steps, double tol) {
  if (steps < 1) throw Error(ErrorCode::domain, "steps must be at least 1");
  const kernels::KernelTable& kt = walk.kernels();
  const EdgeBasis& basis = walk.basis();
  const std::size_t n = walk.vertex_count();
  const double uniform = 1.0 / static_cast<double>(n);

  std::vector<std::size_t> loops;
  for (std::size_t e = 0; e < basis.size(); ++e)
    if (basis.is_self_loop(e)) loops.push_back(e);

  ExceptionalReport report;
  report.n = n;
  report.marked.assign(walk.marked().vertices().begin(), walk.marked().vertices().end());
  report.steps = steps;
  report.tolerance = tol;

  const EdgeState psi0 = walk.initial_state();
  std::vector<double> amps(psi0.amplitudes().begin(), psi0.amplitudes().end()), scratch;
  std::vector<double> probs(n);
  auto inspect = [&] {
    report.max_magnitude_deviation = std::max(report.max_magnitude_deviation,
                                              kt.max_magnitude_diff(amps, psi0.amplitudes()));
    for (std::size_t e : loops)
      report.max_selfloop = std::max(report.max_selfloop, std::abs(amps[e]));
    walk.measure_x(amps, probs);
    for (double p : probs)
      report.max_distribution_deviation =
          std::max(report.max_distribution_deviation, std::abs(p - uniform));
  };

  inspect();
  for (std::uint64_t t = 0; t < steps; ++t) {
    walk.reflect_a_inplace(amps, scratch);
    inspect();
    walk.reflect_b_inplace(amps, scratch);
    inspect();
  }
  report.verdict = report.max_magnitude_deviation < tol && report.max_selfloop < tol &&
                   report.max_distribution_deviation < tol;
  return report;
}

ExceptionalReport verify_exceptional(const Graph& g, const MarkedSet& m, std::uint64_t steps,
                                     double tol) {
  return verify_exceptional(SearchWalk::for_graph(g, m), steps, tol);
}

// ---------------------------------------------------------------------------

namespace {

SamplingReport sample_until_marked(const std::vector<double>& probs, const MarkedSet& m,
                                   std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  if (m.empty()) throw Error(ErrorCode::no_marked, "sampling needs at least one marked vertex");
  if (trials < 1) throw Error(ErrorCode::domain, "trials must be at least 1");
  double success = 0.0;
  for (Vertex v : m.vertices()) success += probs[v];
  if (!(success > 0.0))
    throw Error(ErrorCode::no_marked, "marked vertices carry no probability");

  const bool uniform = std::all_of(probs.begin(), probs.end(),
                                   [&](double p) { return p == probs.front(); });
  const std::discrete_distribution<Vertex> weighted =
      uniform ? std::discrete_distribution<Vertex>{}
              : std::discrete_distribution<Vertex>(probs.begin(), probs.end());
  auto trial = [&](std::uint64_t, Engine& gen) -> std::uint64_t {
    std::uniform_int_distribution<Vertex> pick_uniform(0, static_cast<Vertex>(probs.size() - 1));
    std::discrete_distribution<Vertex> pick_weighted = weighted;
    std::uint64_t guesses = 0;
    for (;;) {
      ++guesses;
      const Vertex v = uniform ? pick_uniform(gen) : pick_weighted(gen);
      if (m.contains(v)) return guesses;
    }
  };
  const SampleStats stats = summarize(run_trials(trials, seed, trial, threads));

  SamplingReport r;
  r.n = probs.size();
  r.k = m.k();
  r.trials = trials;
  r.seed = seed;
  r.success_probability = success;
  r.mean = stats.mean;
  r.stderr_samples = stats.standard_error;
  return r;
}

}  // namespace

SamplingReport sampling_search_cost(const MarkedSet& m, std::uint64_t trials, std::uint64_t seed,
                                    unsigned threads) {
  const std::size_t n = m.universe();
  if (n == 0) throw Error(ErrorCode::invalid_size, "sampling needs at least one vertex");
  return sample_until_marked(std::vector<double>(n, 1.0 / static_cast<double>(n)), m, trials,
                             seed, threads);
}

SamplingReport sampling_search_cost(std::size_t n, std::size_t k, std::uint64_t trials,
                                    std::uint64_t seed, unsigned threads) {
  if (k == 0) throw Error(ErrorCode::no_marked, "sampling needs k >= 1");
  if (k > n) throw Error(ErrorCode::domain, "k exceeds n");
  std::vector<Vertex> marked(k);
  std::iota(marked.begin(), marked.end(), Vertex{0});
  return sampling_search_cost(MarkedSet(n, std::move(marked)), trials, seed, threads);
}

SamplingReport measured_sampling_cost(const SearchWalk& walk, std::uint64_t walk_steps,
                                      std::uint64_t trials, std::uint64_t seed,
                                      unsigned threads) {
  const EdgeState psi0 = walk.initial_state();
  std::vector<double> amps(psi0.amplitudes().begin(), psi0.amplitudes().end()), scratch;
  for (std::uint64_t t = 0; t < walk_steps; ++t) {
    walk.reflect_a_inplace(amps, scratch);
    walk.reflect_b_inplace(amps, scratch);
  }
  std::vector<double> probs(walk.vertex_count());
  walk.measure_x(amps, probs);
  SamplingReport r = sample_until_marked(probs, walk.marked(), trials, seed, threads);
  r.walk_steps = walk_steps;
  return r;
}

// ---------------------------------------------------------------------------

SeparationReport separation_report(std::size_t n, std::size_t k) {
  if (k < 1 || k >= n)
    throw Error(ErrorCode::domain, "separation needs 1 <= k < n");
  SeparationReport r;
  r.n = n;
  r.k = k;
  const double nd = static_cast<double>(n);
  r.quantum_samples = nd / static_cast<double>(k);
  r.classical_ht = clustered_hitting_time_exact(static_cast<std::int64_t>(n),
                                                static_cast<std::int64_t>(k));
  const double ht = to_double(r.classical_ht);
  r.ratio = ht / r.quantum_samples;
  r.quantum_total_with_mixing = nd * std::log(nd) * r.quantum_samples;
  r.classical_total_with_mixing = nd * nd + ht;
  return r;
}

// ---------------------------------------------------------------------------

GridReductionReport verify_grid_reduction(std::size_t side, std::uint64_t steps, double tol) {
  const Graph g = torus_grid_graph(side);
  const MarkedSet diagonal = diagonal_marked_set(side);
  const ReductionMap classes = grid_to_cycle_reduction(side);
  const SearchWalk walk = SearchWalk::for_graph(g, diagonal);
  const EdgeBasis& basis = walk.basis();
  const std::size_t n = g.size();

  // Image of every basis element under (i, j) -> (i+1, j+1).
  auto shift = [&](Vertex v) {
    return torus_vertex(side, v / side + 1, v % side + 1);
  };
  std::vector<std::size_t> image(basis.size());
  for (std::size_t e = 0; e < basis.size(); ++e) {
    const auto [x, y] = basis.pair_at(e);
    const auto to = basis.index_of(shift(x), shift(y));
    if (!to) throw Error(ErrorCode::inconsistency, "basis is not shift invariant");
    image[e] = *to;
  }

  GridReductionReport report;
  report.side = side;
  report.steps = steps;
  report.tolerance = tol;
  report.expected_guesses = static_cast<double>(n) / static_cast<double>(diagonal.k());

  const EdgeState psi0 = walk.initial_state();
  std::vector<double> amps(psi0.amplitudes().begin(), psi0.amplitudes().end()), scratch;
  std::vector<double> probs(n);
  const double uniform = 1.0 / static_cast<double>(n);
  const double class_mass = 1.0 / static_cast<double>(side);
  auto inspect = [&] {
    for (std::size_t e = 0; e < basis.size(); ++e)
      report.max_symmetry_deviation =
          std::max(report.max_symmetry_deviation, std::abs(amps[e] - amps[image[e]]));
    walk.measure_x(amps, probs);
    for (double p : probs)
      report.max_distribution_deviation =
          std::max(report.max_distribution_deviation, std::abs(p - uniform));
    for (std::size_t c = 0; c < classes.class_count(); ++c) {
      double mass = 0.0;
      for (Vertex v : classes.members(c)) mass += probs[v];
      report.max_class_deviation = std::max(report.max_class_deviation, std::abs(mass - class_mass));
    }
  };

  inspect();
  for (std::uint64_t t = 0; t < steps; ++t) {
    walk.reflect_a_inplace(amps, scratch);
    inspect();
    walk.reflect_b_inplace(amps, scratch);
    inspect();
  }
  report.verdict = report.max_symmetry_deviation < tol &&
                   report.max_distribution_deviation < tol && report.max_class_deviation < tol;
  return report;
}

MarkedSet random_marked_set(std::size_t n, Engine& gen) {
  std::uniform_int_distribution<std::size_t> pick_k(0, n);
  const std::size_t k = pick_k(gen);
  std::vector<Vertex> all(n);
  std::iota(all.begin(), all.end(), Vertex{0});
  std::vector<Vertex> chosen;
  std::sample(all.begin(), all.end(), std::back_inserter(chosen), k, gen);
  return MarkedSet(n, std::move(chosen));
}

}  // namespace qwalk
