#pragma once

// Experiments on top of the walk engine: exceptional-configuration checks,
// sampling cost, hitting-time separation and the torus-diagonal reduction.

#include <cstdint>
#include <vector>

#include "qwalk/classical.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/szegedy.hpp"

namespace qwalk {

struct ExceptionalReport {
  std::size_t n = 0;
  std::vector<Vertex> marked;  // 0-based
  std::uint64_t steps = 0;
  double max_magnitude_deviation = 0.0;  // worst | |c_e| - |psi0_e| |
  double max_selfloop = 0.0;
  double max_distribution_deviation = 0.0;  // worst |prob - 1/n|
  double tolerance = 0.0;
  bool verdict = false;
};

/// Evolves for `steps` applications of W' and tracks the three deviations
/// over every half-step. On the cycle |psi0_e| = 1/sqrt(2n).
ExceptionalReport verify_exceptional(const SearchWalk& walk, std::uint64_t steps, double tol);
ExceptionalReport verify_exceptional(const Graph& g, const MarkedSet& m, std::uint64_t steps,
                                     double tol);

struct SamplingReport {
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t walk_steps = 0;  // 0 when sampling uniformly without a walk
  double success_probability = 0.0;
  double mean = 0.0;
  double stderr_samples = 0.0;
};

/// Repeated uniform guessing until a marked vertex is drawn; counts guesses.
SamplingReport sampling_search_cost(const MarkedSet& m, std::uint64_t trials, std::uint64_t seed,
                                    unsigned threads = 0);
/// Marks vertices {0, ..., k-1}; only k/n matters for the distribution.
SamplingReport sampling_search_cost(std::size_t n, std::size_t k, std::uint64_t trials,
                                    std::uint64_t seed, unsigned threads = 0);
/// Runs the walk for walk_steps, then guesses from the measured X distribution
/// until a marked vertex is drawn.
SamplingReport measured_sampling_cost(const SearchWalk& walk, std::uint64_t walk_steps,
                                      std::uint64_t trials, std::uint64_t seed,
                                      unsigned threads = 0);

/// Leading-order cost model for k contiguous marked vertices on the n-cycle.
/// The *_with_mixing fields use unit constants (n log n quantum mixing per
/// repetition, n^2 classical mixing); classical_ht is exact.
struct SeparationReport {
  std::size_t n = 0;
  std::size_t k = 0;
  double quantum_samples = 0.0;
  Rational classical_ht;
  double ratio = 0.0;
  double quantum_total_with_mixing = 0.0;
  double classical_total_with_mixing = 0.0;
};

SeparationReport separation_report(std::size_t n, std::size_t k);

struct GridReductionReport {
  std::size_t side = 0;
  std::uint64_t steps = 0;
  double max_symmetry_deviation = 0.0;      // |c(e) - c(shift e)| under (i,j) -> (i+1,j+1)
  double max_distribution_deviation = 0.0;  // |prob - 1/side^2|
  double max_class_deviation = 0.0;         // |class mass - 1/side|
  double expected_guesses = 0.0;            // side^2 / side
  double tolerance = 0.0;
  bool verdict = false;
};

GridReductionReport verify_grid_reduction(std::size_t side, std::uint64_t steps, double tol);

/// Uniformly random subset: size uniform in [0, n], then a uniform subset.
MarkedSet random_marked_set(std::size_t n, Engine& gen);

}  // namespace qwalk
