#pragma once

// Classical random-walk quantities: closed-form hitting times on the cycle,
// an exact linear-solve oracle, Monte Carlo estimators and Cesaro mixing time.

#include <cstdint>
#include <functional>
#include <span>
#include <optional>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/rational.hpp"

namespace qwalk {

struct HittingReport {
  double exact_value = 0.0;
  std::optional<Rational> exact_rational;  // present when solved exactly
  double mc_estimate = 0.0;
  double mc_stderr = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Time-averaged mixing: the running mean of the occupancy distributions.
struct MixingReport {
  double epsilon = 0.0;
  std::uint64_t time_steps = 0;
  double final_tv_distance = 0.0;
};

/// Expected steps to move one step closer to the marked vertex from distance i
/// on the L-cycle: L - 2i + 1, for both parities of L.
double h_step_expectation(std::int64_t L, std::int64_t i);

/// Expected absorption time from distance i: i (L - i).
double hitting_from_distance(std::int64_t L, std::int64_t i);

/// (L^2 - 1) / 6, the uniform-start hitting time of the L-cycle with one
/// marked vertex. L = 2 has no simple-graph realization but the formula value
/// 1/2 is still returned so that clustered_hitting_time_exact stays total.
Rational hitting_time_exact_cycle(std::int64_t L);

/// Uniform-start hitting time of the N-cycle with k contiguous marked
/// vertices: (N-k)(N-k+1)(N-k+2) / (6N).
Rational clustered_hitting_time_exact(std::int64_t N, std::int64_t k);

/// Exact start weights over vertices.
class StartDistribution {
 public:
  static StartDistribution uniform(std::size_t n);
  static StartDistribution point(std::size_t n, Vertex v);
  /// Doubles are converted exactly to rationals.
  static StartDistribution from_probabilities(const std::vector<double>& probs);

  std::size_t size() const { return weights_.size(); }
  const std::vector<Rational>& weights() const { return weights_; }

 private:
  std::vector<Rational> weights_;
};

struct SolveResult {
  std::optional<Rational> exact;
  double value = 0.0;
};

/// Dimension up to which hitting_time_linear_solve runs in exact arithmetic.
inline constexpr std::size_t kExactSolveLimit = 256;

/// Solves t_v = 0 on marked v and t_v = 1 + sum_w P'_vw t_w elsewhere, and
/// returns sum_v start_v t_v. Exact for dim <= kExactSolveLimit when every
/// entry of P' is a small-denominator rational; floating point otherwise.
/// Throws Error(no_absorption) when some unmarked vertex cannot reach m.
SolveResult hitting_time_linear_solve(const StochasticMatrix& pprime, const MarkedSet& m,
                                      const StartDistribution& start);

/// Per-vertex expected absorption times (floating point, any size).
std::vector<double> absorption_times(const StochasticMatrix& pprime, const MarkedSet& m);

/// Monte Carlo hitting time from a uniformly random start. Each trial is capped
/// at 100 n^2 steps; exceeding the cap throws Error(cap_exceeded). The exact
/// fields are filled by the linear solve.
HittingReport simulate_hitting_time(const Graph& g, const MarkedSet& m, std::uint64_t trials,
                                    std::uint64_t seed, unsigned threads = 0);

/// First t at which the Cesaro average (1/(t+1)) sum_{s<=t} dist_s started from
/// a point mass is within epsilon of uniform in total variation.
/// Receives (t, running sum of dist_0..dist_t); the Cesaro average is sum/(t+1).
using CesaroObserver = std::function<void(std::uint64_t, std::span<const double>)>;
MixingReport cesaro_mixing_time(const StochasticMatrix& p, Vertex start_vertex,
                                double epsilon, const CesaroObserver& observe = {});

/// sum_{i=1}^{terms} i / 2^i
double oresme_partial_sum(std::int64_t terms);

}  // namespace qwalk
