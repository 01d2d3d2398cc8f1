#include "qwalk/sign_tracker.hpp"

#include <cmath>
#include <sstream>

#include "qwalk/error.hpp"

namespace qwalk {

CycleSignTracker::CycleSignTracker(std::shared_ptr<const EdgeBasis> basis,
                                   const MarkedSet& marked, const kernels::KernelTable& kt)
    : basis_(std::move(basis)), kt_(&kt) {
  const std::size_t n = basis_->vertex_count();
  if (marked.universe() != n)
    throw Error(ErrorCode::inconsistency, "marked set universe does not match the basis");
  slot_of_edge_.assign(basis_->size(), -1);
  for (std::size_t e = 0; e < basis_->size(); ++e) {
    if (basis_->is_self_loop(e)) {
      if (!marked.contains(basis_->pair_at(e).first))
        throw Error(ErrorCode::unsupported_structure, "self-loop at an unmarked vertex");
      continue;
    }
    slot_of_edge_[e] = static_cast<std::int32_t>(edge_of_slot_.size());
    edge_of_slot_.push_back(e);
  }
  if (edge_of_slot_.size() != 2 * n)
    throw Error(ErrorCode::unsupported_structure,
                "sign tracking needs a cycle: expected " + std::to_string(2 * n) +
                    " directed edges, found " + std::to_string(edge_of_slot_.size()));

  x_mask_.assign(2 * n, 0);
  y_mask_.assign(2 * n, 0);
  for (Vertex v = 0; v < n; ++v) {
    std::size_t out_count = 0;
    for (std::uint32_t e = basis_->x_offsets()[v]; e < basis_->x_offsets()[v + 1]; ++e) {
      if (slot_of_edge_[e] < 0) continue;
      if (static_cast<std::size_t>(slot_of_edge_[e]) != 2 * v + out_count)
        throw Error(ErrorCode::unsupported_structure, "vertex degree is not 2");
      ++out_count;
    }
    if (out_count != 2)
      throw Error(ErrorCode::unsupported_structure,
                  "vertex " + std::to_string(v) + " has degree " + std::to_string(out_count));
    std::size_t in_count = 0;
    for (std::uint32_t j = basis_->y_offsets()[v]; j < basis_->y_offsets()[v + 1]; ++j) {
      const std::int32_t slot = slot_of_edge_[static_cast<std::size_t>(basis_->y_order()[j])];
      if (slot < 0) continue;
      y_slots_.push_back(slot);
      ++in_count;
    }
    if (in_count != 2)
      throw Error(ErrorCode::unsupported_structure,
                  "vertex " + std::to_string(v) + " has in-degree " + std::to_string(in_count));
    const std::int8_t m = marked.contains(v) ? std::int8_t{-1} : std::int8_t{0};
    x_mask_[2 * v] = x_mask_[2 * v + 1] = m;
    y_mask_[2 * v] = y_mask_[2 * v + 1] = m;
  }
}

SignState CycleSignTracker::initial_state() const {
  return SignState{basis_, std::vector<std::int8_t>(edge_of_slot_.size(), 1)};
}

void CycleSignTracker::reflect_a(SignState& s) const { kt_->pair_flip(s.signs, x_mask_); }

void CycleSignTracker::reflect_b(SignState& s) const {
  std::vector<std::int8_t> grouped(y_slots_.size());
  for (std::size_t k = 0; k < y_slots_.size(); ++k)
    grouped[k] = s.signs[static_cast<std::size_t>(y_slots_[k])];
  kt_->pair_flip(grouped, y_mask_);
  for (std::size_t k = 0; k < y_slots_.size(); ++k)
    s.signs[static_cast<std::size_t>(y_slots_[k])] = grouped[k];
}

void CycleSignTracker::step(SignState& s) const {
  reflect_a(s);
  reflect_b(s);
}

EdgeState CycleSignTracker::to_edge_state(const SignState& s) const {
  const double magnitude = 1.0 / std::sqrt(static_cast<double>(edge_of_slot_.size()));
  std::vector<double> amps(basis_->size(), 0.0);
  for (std::size_t k = 0; k < edge_of_slot_.size(); ++k)
    amps[edge_of_slot_[k]] = s.signs[k] * magnitude;
  return EdgeState(basis_, std::move(amps));
}

SignState CycleSignTracker::from_edge_state(const EdgeState& s) const {
  SignState out{basis_, std::vector<std::int8_t>(edge_of_slot_.size())};
  for (std::size_t k = 0; k < edge_of_slot_.size(); ++k)
    out.signs[k] = s.amplitude(edge_of_slot_[k]) >= 0.0 ? std::int8_t{1} : std::int8_t{-1};
  return out;
}

std::size_t CycleSignTracker::slot_of(Vertex x, Vertex y) const {
  const auto e = basis_->index_of(x, y);
  if (!e || slot_of_edge_[*e] < 0)
    throw Error(ErrorCode::domain,
                "(" + std::to_string(x) + "," + std::to_string(y) + ") is not a cycle edge");
  return static_cast<std::size_t>(slot_of_edge_[*e]);
}

SignState sign_step(const MarkedSet& marked, const SignState& s) {
  const CycleSignTracker tracker(s.basis, marked);
  SignState next = s;
  tracker.step(next);
  return next;
}

// ---------------------------------------------------------------------------

SignTable sign_table(std::size_t n, const MarkedSet& marked, std::uint32_t last_power,
                     std::uint32_t first_power) {
  if (first_power > last_power)
    throw Error(ErrorCode::domain, "first stage after last stage");
  const SearchWalk walk = SearchWalk::for_graph(cycle_graph(n), marked);
  const CycleSignTracker tracker(walk.basis_ptr(), marked);

  SignTable table;
  std::vector<std::size_t> row_slots;
  for (Vertex x = 0; x < n; ++x) {
    const auto prev = static_cast<Vertex>((x + n - 1) % n);
    const auto next = static_cast<Vertex>((x + 1) % n);
    for (Vertex y : {prev, next}) {
      row_slots.push_back(tracker.slot_of(x, y));
      table.edges.push_back("|" + std::to_string(x + 1) + "," + std::to_string(y + 1) + ">");
    }
  }
  table.entries.assign(row_slots.size(), {});

  auto record = [&](const SignState& s, Stage stage) {
    if (stage.power < first_power) return;
    table.stages.push_back(stage.label());
    for (std::size_t r = 0; r < row_slots.size(); ++r)
      table.entries[r].push_back(s.signs[row_slots[r]]);
  };

  SignState s = tracker.initial_state();
  for (std::uint32_t t = 0; t <= last_power; ++t) {
    record(s, Stage{t, false});
    tracker.reflect_a(s);
    record(s, Stage{t, true});
    tracker.reflect_b(s);
  }
  return table;
}

std::string sign_table_csv(const SignTable& table) {
  std::ostringstream os;
  os << "edge";
  for (const auto& stage : table.stages) os << ',' << stage;
  os << '\n';
  for (std::size_t r = 0; r < table.edges.size(); ++r) {
    os << '"' << table.edges[r] << '"';  // labels contain a comma
    for (std::int8_t v : table.entries[r]) os << ',' << (v > 0 ? '+' : '-');
    os << '\n';
  }
  return os.str();
}

std::string sign_table_text(const SignTable& table) {
  std::size_t edge_width = 4;
  for (const auto& e : table.edges) edge_width = std::max(edge_width, e.size());
  std::vector<std::size_t> widths;
  for (const auto& stage : table.stages) widths.push_back(stage.size());

  std::ostringstream os;
  auto pad = [&](const std::string& text, std::size_t width) {
    os << text << std::string(width - std::min(width, text.size()), ' ');
  };
  pad("Edge", edge_width);
  for (std::size_t c = 0; c < table.stages.size(); ++c) {
    os << "  ";
    pad(table.stages[c], widths[c]);
  }
  os << '\n';
  for (std::size_t r = 0; r < table.edges.size(); ++r) {
    pad(table.edges[r], edge_width);
    for (std::size_t c = 0; c < table.stages.size(); ++c) {
      os << "  ";
      const std::size_t left = (widths[c] - 1) / 2;
      pad(std::string(left, ' ') + (table.entries[r][c] > 0 ? "+" : "-"), widths[c]);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace qwalk
