#include "qwalk/szegedy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qwalk/error.hpp"

namespace qwalk {

EdgeState::EdgeState(std::shared_ptr<const EdgeBasis> basis, std::vector<double> amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (!basis_ || basis_->size() != amplitudes_.size())
    throw Error(ErrorCode::inconsistency, "amplitude count does not match the edge basis");
}

EdgeState EdgeState::basis_state(std::shared_ptr<const EdgeBasis> basis, std::size_t index) {
  std::vector<double> amps(basis->size(), 0.0);
  amps.at(index) = 1.0;
  return EdgeState(std::move(basis), std::move(amps));
}

double EdgeState::norm_squared() const { return kernels::best().sum_squares(amplitudes_); }

namespace {

// Members of vertex v's group on the given side, in basis-index order.
template <class Fn>
void for_each_group(const EdgeBasis& basis, Side side, Fn fn) {
  const std::size_t n = basis.vertex_count();
  for (Vertex v = 0; v < n; ++v) {
    std::vector<std::int32_t> members;
    if (side == Side::x) {
      for (std::uint32_t e = basis.x_offsets()[v]; e < basis.x_offsets()[v + 1]; ++e)
        members.push_back(static_cast<std::int32_t>(e));
    } else {
      for (std::uint32_t j = basis.y_offsets()[v]; j < basis.y_offsets()[v + 1]; ++j)
        members.push_back(basis.y_order()[j]);
    }
    fn(v, members);
  }
}

// P' weight attached to member e of vertex v's group.
double group_weight(const EdgeBasis& basis, const StochasticMatrix& pprime, Side side, Vertex v,
                    std::int32_t e) {
  const auto [x, y] = basis.pair_at(static_cast<std::size_t>(e));
  return side == Side::x ? pprime.at(v, y) : pprime.at(v, x);
}

ReflectionPlan empty_plan(const EdgeBasis& basis, const StochasticMatrix& pprime) {
  if (basis.vertex_count() != pprime.dim())
    throw Error(ErrorCode::inconsistency, "edge basis and P' have different dimensions");
  ReflectionPlan plan;
  plan.offsets.push_back(0);
  plan.group_of.assign(basis.size(), 0);
  plan.scale.assign(basis.size(), 0.0);
  return plan;
}

void append_member(ReflectionPlan& plan, Vertex group, std::int32_t e, double coeff,
                   double scale) {
  plan.members.push_back(e);
  plan.coeff.push_back(coeff);
  plan.group_of[static_cast<std::size_t>(e)] = static_cast<std::int32_t>(group);
  plan.scale[static_cast<std::size_t>(e)] = scale;
}

}  // namespace

ReflectionPlan inversion_plan(const EdgeBasis& basis, const StochasticMatrix& pprime, Side side) {
  ReflectionPlan plan = empty_plan(basis, pprime);
  for_each_group(basis, side, [&](Vertex v, const std::vector<std::int32_t>& members) {
    if (pprime.absorbing(v)) {
      // Marked vertex: the self-loop is the whole reflection axis.
      for (std::int32_t e : members) {
        const double keep = basis.is_self_loop(static_cast<std::size_t>(e)) ? 1.0 : 0.0;
        append_member(plan, v, e, keep, keep);
      }
    } else {
      std::vector<double> w;
      for (std::int32_t e : members) w.push_back(group_weight(basis, pprime, side, v, e));
      double common = 0.0;
      bool uniform = true;
      for (double x : w) {
        if (x == 0.0) continue;
        if (common == 0.0) common = x;
        uniform = uniform && x == common;
      }
      for (std::size_t k = 0; k < members.size(); ++k) {
        if (w[k] == 0.0) {
          append_member(plan, v, members[k], 0.0, 0.0);
        } else if (uniform) {
          append_member(plan, v, members[k], common, 1.0);
        } else {
          const double r = std::sqrt(w[k]);
          append_member(plan, v, members[k], r, r);
        }
      }
    }
    plan.offsets.push_back(static_cast<std::uint32_t>(plan.members.size()));
  });
  return plan;
}

ReflectionPlan projector_plan(const EdgeBasis& basis, const StochasticMatrix& pprime, Side side) {
  ReflectionPlan plan = empty_plan(basis, pprime);
  for_each_group(basis, side, [&](Vertex v, const std::vector<std::int32_t>& members) {
    for (std::int32_t e : members) {
      const double r = std::sqrt(group_weight(basis, pprime, side, v, e));
      append_member(plan, v, e, r, r);
    }
    plan.offsets.push_back(static_cast<std::uint32_t>(plan.members.size()));
  });
  return plan;
}

void apply_reflection(const kernels::KernelTable& kt, const ReflectionPlan& plan,
                      std::span<const double> in, std::span<double> out,
                      std::span<double> sums) {
  kt.gather_dot(plan.offsets, plan.members, plan.coeff, in, sums);
  kt.reflect_update(plan.group_of, plan.scale, sums, in, out);
}

// ---------------------------------------------------------------------------

namespace {

MarkedSet absorbing_rows(const StochasticMatrix& pprime) {
  std::vector<Vertex> rows;
  for (Vertex v = 0; v < pprime.dim(); ++v)
    if (pprime.absorbing(v)) rows.push_back(v);
  return MarkedSet(pprime.dim(), std::move(rows));
}

}  // namespace

SearchWalk::SearchWalk(StochasticMatrix p, StochasticMatrix pprime,
                       const kernels::KernelTable& kt)
    : p_(std::move(p)),
      pprime_(std::move(pprime)),
      marked_(absorbing_rows(pprime_)),
      basis_(std::make_shared<const EdgeBasis>(EdgeBasis::build(p_, pprime_))),
      plan_a_(inversion_plan(*basis_, pprime_, Side::x)),
      plan_b_(inversion_plan(*basis_, pprime_, Side::y)),
      identity_(basis_->size()),
      kt_(&kt) {
  std::iota(identity_.begin(), identity_.end(), 0);
}

SearchWalk SearchWalk::for_graph(const Graph& g, const MarkedSet& m,
                                 const kernels::KernelTable& kt) {
  StochasticMatrix p = transition_matrix(g);
  StochasticMatrix pprime = absorbing_matrix(p, m);
  return SearchWalk(std::move(p), std::move(pprime), kt);
}

void SearchWalk::check_basis(const EdgeState& s) const {
  if (s.basis_ptr() != basis_ && !(s.basis() == *basis_))
    throw Error(ErrorCode::inconsistency, "state belongs to a different edge basis");
}

EdgeState SearchWalk::initial_state() const { return uniform_initial_state(p_, basis_); }

void SearchWalk::reflect_a_inplace(std::vector<double>& amps, std::vector<double>& scratch) const {
  scratch.resize(amps.size());
  std::vector<double> sums(vertex_count());
  apply_reflection(*kt_, plan_a_, amps, scratch, sums);
  amps.swap(scratch);
}

void SearchWalk::reflect_b_inplace(std::vector<double>& amps, std::vector<double>& scratch) const {
  scratch.resize(amps.size());
  std::vector<double> sums(vertex_count());
  apply_reflection(*kt_, plan_b_, amps, scratch, sums);
  amps.swap(scratch);
}

EdgeState SearchWalk::reflect_a(const EdgeState& s) const {
  check_basis(s);
  std::vector<double> amps(s.amplitudes().begin(), s.amplitudes().end()), scratch;
  reflect_a_inplace(amps, scratch);
  return EdgeState(basis_, std::move(amps));
}

EdgeState SearchWalk::reflect_b(const EdgeState& s) const {
  check_basis(s);
  std::vector<double> amps(s.amplitudes().begin(), s.amplitudes().end()), scratch;
  reflect_b_inplace(amps, scratch);
  return EdgeState(basis_, std::move(amps));
}

EdgeState SearchWalk::step(const EdgeState& s) const {
  check_basis(s);
  std::vector<double> amps(s.amplitudes().begin(), s.amplitudes().end()), scratch;
  reflect_a_inplace(amps, scratch);
  reflect_b_inplace(amps, scratch);
  return EdgeState(basis_, std::move(amps));
}

void SearchWalk::measure_x(std::span<const double> amps, std::span<double> probs) const {
  kt_->gather_dot(basis_->x_offsets(), identity_, amps, amps, probs);
}

Distribution SearchWalk::measure_x(const EdgeState& s) const {
  check_basis(s);
  Distribution d{std::vector<double>(vertex_count())};
  measure_x(s.amplitudes(), d.probs);
  return d;
}

// ---------------------------------------------------------------------------

EdgeState uniform_initial_state(const StochasticMatrix& p,
                                std::shared_ptr<const EdgeBasis> basis) {
  if (basis->vertex_count() != p.dim())
    throw Error(ErrorCode::inconsistency, "edge basis and P have different dimensions");
  std::vector<double> amps(basis->size(), 0.0);
  const double n = static_cast<double>(p.dim());
  for (Vertex x = 0; x < p.dim(); ++x) {
    const auto cols = p.row_columns(x);
    const auto vals = p.row_values(x);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const auto e = basis->index_of(x, cols[k]);
      if (!e)
        throw Error(ErrorCode::inconsistency, "edge (" + std::to_string(x) + "," +
                                                  std::to_string(cols[k]) +
                                                  ") of P is missing from the basis");
      amps[*e] = std::sqrt(vals[k] / n);
    }
  }
  return EdgeState(std::move(basis), std::move(amps));
}

namespace {

EdgeState reflect_with(const StochasticMatrix& pprime, const EdgeState& s, Side side) {
  const ReflectionPlan plan = inversion_plan(s.basis(), pprime, side);
  std::vector<double> out(s.size()), sums(pprime.dim());
  apply_reflection(kernels::best(), plan, s.amplitudes(), out, sums);
  return EdgeState(s.basis_ptr(), std::move(out));
}

}  // namespace

EdgeState reflect_a(const StochasticMatrix& pprime, const EdgeState& s) {
  return reflect_with(pprime, s, Side::x);
}

EdgeState reflect_b(const StochasticMatrix& pprime, const EdgeState& s) {
  return reflect_with(pprime, s, Side::y);
}

EdgeState walk_step(const StochasticMatrix& pprime, const EdgeState& s) {
  return reflect_b(pprime, reflect_a(pprime, s));
}

Distribution measure_x(const EdgeState& s) {
  const EdgeBasis& b = s.basis();
  Distribution d{std::vector<double>(b.vertex_count(), 0.0)};
  for (Vertex x = 0; x < b.vertex_count(); ++x) {
    double acc = 0.0;
    for (std::uint32_t e = b.x_offsets()[x]; e < b.x_offsets()[x + 1]; ++e)
      acc += s.amplitude(e) * s.amplitude(e);
    d.probs[x] = acc;
  }
  return d;
}

// ---------------------------------------------------------------------------

std::string Stage::label() const {
  const std::string power_label = "(W')^" + std::to_string(power);
  return post_ra ? "R_a'" + power_label : power_label;
}

std::vector<TrajectoryPoint> evolve(const SearchWalk& walk, std::uint32_t steps,
                                    bool record_half_steps) {
  std::vector<TrajectoryPoint> out;
  out.reserve(record_half_steps ? 2 * steps + 1 : steps + 1);
  std::vector<double> amps;
  {
    EdgeState psi0 = walk.initial_state();
    amps.assign(psi0.amplitudes().begin(), psi0.amplitudes().end());
    out.push_back({Stage{0, false}, std::move(psi0)});
  }
  std::vector<double> scratch;
  for (std::uint32_t t = 0; t < steps; ++t) {
    walk.reflect_a_inplace(amps, scratch);
    if (record_half_steps) out.push_back({Stage{t, true}, EdgeState(walk.basis_ptr(), amps)});
    walk.reflect_b_inplace(amps, scratch);
    out.push_back({Stage{t + 1, false}, EdgeState(walk.basis_ptr(), amps)});
  }
  return out;
}

std::optional<PeriodResult> detect_period(const SearchWalk& walk, std::uint32_t max_steps,
                                          double tol) {
  if (max_steps < 1) throw Error(ErrorCode::domain, "max_steps must be at least 1");
  const EdgeState psi0 = walk.initial_state();
  std::vector<double> amps(psi0.amplitudes().begin(), psi0.amplitudes().end()), scratch;
  for (std::uint32_t t = 1; t <= max_steps; ++t) {
    walk.reflect_a_inplace(amps, scratch);
    walk.reflect_b_inplace(amps, scratch);
    const double residual = walk.kernels().max_abs_diff(amps, psi0.amplitudes());
    if (residual < tol) return PeriodResult{t, residual};
  }
  return std::nullopt;
}

}  // namespace qwalk
