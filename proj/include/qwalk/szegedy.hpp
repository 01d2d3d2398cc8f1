#pragma once

// Szegedy's search walk W' = R_b' R_a' on the directed-edge space of the
// bipartite double cover. States are real: the initial state and both
// reflections have real matrix elements.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/kernels.hpp"

namespace qwalk {

/// Real amplitudes over an EdgeBasis.
class EdgeState {
 public:
  EdgeState(std::shared_ptr<const EdgeBasis> basis, std::vector<double> amplitudes);

  static EdgeState basis_state(std::shared_ptr<const EdgeBasis> basis, std::size_t index);

  const EdgeBasis& basis() const { return *basis_; }
  const std::shared_ptr<const EdgeBasis>& basis_ptr() const { return basis_; }
  std::span<const double> amplitudes() const { return amplitudes_; }
  std::span<double> amplitudes() { return amplitudes_; }
  double amplitude(std::size_t index) const { return amplitudes_[index]; }
  std::size_t size() const { return amplitudes_.size(); }

  double norm_squared() const;

 private:
  std::shared_ptr<const EdgeBasis> basis_;
  std::vector<double> amplitudes_;
};

/// Probability over original vertices.
struct Distribution {
  std::vector<double> probs;
};

enum class Side { x, y };

/// One reflection expressed for the data-parallel kernels: group sums
/// s_g = sum coeff * c over members, then c_e <- 2 * scale_e * s_{group(e)} - c_e.
struct ReflectionPlan {
  std::vector<std::uint32_t> offsets;
  std::vector<std::int32_t> members;
  std::vector<double> coeff;
  std::vector<std::int32_t> group_of;
  std::vector<double> scale;
};

/// Per-vertex form. At an absorbing vertex i the self-loop amplitude is kept
/// and every other edge at i is negated; at any other vertex the edges are
/// inverted about their mean (weighted mean when the row is not uniform).
ReflectionPlan inversion_plan(const EdgeBasis& basis, const StochasticMatrix& pprime, Side side);

/// Textbook projector form 2 sum |phi><phi| - I with weights sqrt(P'). Agrees
/// with inversion_plan up to rounding; kept as an independent cross-check.
ReflectionPlan projector_plan(const EdgeBasis& basis, const StochasticMatrix& pprime, Side side);

/// Applies plan to in, writing out. sums must hold one entry per group.
void apply_reflection(const kernels::KernelTable& kt, const ReflectionPlan& plan,
                      std::span<const double> in, std::span<double> out, std::span<double> sums);

/// Search walk for a classical chain P with absorbing version P'. Holds the
/// basis and both reflection plans; all operations are const and thread-safe.
class SearchWalk {
 public:
  SearchWalk(StochasticMatrix p, StochasticMatrix pprime,
             const kernels::KernelTable& kt = kernels::best());

  static SearchWalk for_graph(const Graph& g, const MarkedSet& m,
                              const kernels::KernelTable& kt = kernels::best());

  const StochasticMatrix& p() const { return p_; }
  const StochasticMatrix& pprime() const { return pprime_; }
  const EdgeBasis& basis() const { return *basis_; }
  const std::shared_ptr<const EdgeBasis>& basis_ptr() const { return basis_; }
  const MarkedSet& marked() const { return marked_; }
  std::size_t vertex_count() const { return p_.dim(); }
  const kernels::KernelTable& kernels() const { return *kt_; }

  /// psi_0 = N^{-1/2} sum sqrt(P_xy) |x,y>, built from P rather than P'.
  EdgeState initial_state() const;

  EdgeState reflect_a(const EdgeState& s) const;
  EdgeState reflect_b(const EdgeState& s) const;
  EdgeState step(const EdgeState& s) const;

  /// In-place variants; scratch is resized as needed.
  void reflect_a_inplace(std::vector<double>& amps, std::vector<double>& scratch) const;
  void reflect_b_inplace(std::vector<double>& amps, std::vector<double>& scratch) const;

  Distribution measure_x(const EdgeState& s) const;
  void measure_x(std::span<const double> amps, std::span<double> probs) const;

 private:
  void check_basis(const EdgeState& s) const;

  StochasticMatrix p_;
  StochasticMatrix pprime_;
  MarkedSet marked_;
  std::shared_ptr<const EdgeBasis> basis_;
  ReflectionPlan plan_a_;
  ReflectionPlan plan_b_;
  std::vector<std::int32_t> identity_;
  const kernels::KernelTable* kt_;
};

// Stateless forms. Each call rebuilds the plans from P'.

/// Throws Error(inconsistency) when the basis misses part of P's support.
EdgeState uniform_initial_state(const StochasticMatrix& p,
                                std::shared_ptr<const EdgeBasis> basis);
EdgeState reflect_a(const StochasticMatrix& pprime, const EdgeState& s);
EdgeState reflect_b(const StochasticMatrix& pprime, const EdgeState& s);
EdgeState walk_step(const StochasticMatrix& pprime, const EdgeState& s);
Distribution measure_x(const EdgeState& s);

/// Trajectory stage: (W')^power, or R_a'(W')^power when post_ra is set.
struct Stage {
  std::uint32_t power = 0;
  bool post_ra = false;

  std::string label() const;
  bool operator==(const Stage&) const = default;
};

struct TrajectoryPoint {
  Stage stage;
  EdgeState state;
};

/// [psi_0, ..., (W')^steps psi_0]. With half-steps, R_a'(W')^t psi_0 is
/// recorded between (W')^t and (W')^{t+1}, giving 2 steps + 1 states.
std::vector<TrajectoryPoint> evolve(const SearchWalk& walk, std::uint32_t steps,
                                    bool record_half_steps);

struct PeriodResult {
  std::uint32_t period = 0;
  double residual = 0.0;  // infinity norm of psi_period - psi_0
};

/// Smallest t in [1, max_steps] with ||psi_t - psi_0||_inf < tol.
std::optional<PeriodResult> detect_period(const SearchWalk& walk, std::uint32_t max_steps,
                                          double tol);

}  // namespace qwalk
