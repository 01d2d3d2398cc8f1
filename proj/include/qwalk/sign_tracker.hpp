#pragma once

// Exact evolution of sign-only states on the cycle. Every vertex has two
// edges in the double cover; inversion about their average keeps a pair with
// equal signs and negates a pair with opposite signs, and the oracle negates
// the pair at a marked vertex. So W' acts on +-1 patterns and the amplitude
// magnitude 1/sqrt(2N) never changes.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/kernels.hpp"
#include "qwalk/szegedy.hpp"

namespace qwalk {

/// Signs over the 2N original directed edges, in basis order with the marked
/// self-loops skipped (their amplitude is identically zero).
struct SignState {
  std::shared_ptr<const EdgeBasis> basis;
  std::vector<std::int8_t> signs;

  bool operator==(const SignState& other) const { return signs == other.signs; }
};

class CycleSignTracker {
 public:
  /// Throws Error(unsupported_structure) unless every vertex has exactly two
  /// non-loop edges on each side of the double cover.
  CycleSignTracker(std::shared_ptr<const EdgeBasis> basis, const MarkedSet& marked,
                   const kernels::KernelTable& kt = kernels::best());

  SignState initial_state() const;
  void reflect_a(SignState& s) const;
  void reflect_b(SignState& s) const;
  void step(SignState& s) const;

  EdgeState to_edge_state(const SignState& s) const;
  /// Signs of the non-loop amplitudes of a dense state (+1 for values >= 0).
  SignState from_edge_state(const EdgeState& s) const;

  std::size_t edge_count() const { return edge_of_slot_.size(); }
  /// Basis index of sign slot k.
  std::size_t basis_index(std::size_t slot) const { return edge_of_slot_[slot]; }
  std::size_t slot_of(Vertex x, Vertex y) const;

 private:
  std::shared_ptr<const EdgeBasis> basis_;
  std::vector<std::size_t> edge_of_slot_;
  std::vector<std::int32_t> slot_of_edge_;
  std::vector<std::int32_t> y_slots_;  // slots grouped in pairs by second coordinate
  std::vector<std::int8_t> x_mask_;
  std::vector<std::int8_t> y_mask_;
  const kernels::KernelTable* kt_;
};

/// One W' step on a cycle sign state.
SignState sign_step(const MarkedSet& marked, const SignState& s);

struct SignTable {
  std::vector<std::string> stages;       // column headers, e.g. "R_a'(W')^2"
  std::vector<std::string> edges;        // 1-based row labels "|1,6>"
  std::vector<std::vector<std::int8_t>> entries;  // [row][column], +1 or -1
};

/// Signs of the stages (W')^t and R_a'(W')^t for t in [first_power, last_power]
/// on the n-cycle. Rows run around the ring: |x,x-1>, |x,x+1> for x = 1..n.
SignTable sign_table(std::size_t n, const MarkedSet& marked, std::uint32_t last_power,
                     std::uint32_t first_power = 0);

std::string sign_table_csv(const SignTable& table);
std::string sign_table_text(const SignTable& table);

}  // namespace qwalk
