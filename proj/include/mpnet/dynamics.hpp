#pragma once

// Departure-epoch evolution d(0..K) by three equivalent routes:
//   Implicit  solve d(k) = U ⊗ d(k) ⊕ v(k) each step, U = 𝒯_k ⊗ G_0^T
//   Explicit  d(k) = ⊕_{m=1..M} T_m(k) ⊗ d(k-m)
//   Extended  d̂(k) = T̂(k) ⊗ d̂(k-1) on the stacked state
// d(0) = e and d(k) = ε for k < 0 in every route.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mpnet/maxplus.hpp"
#include "mpnet/network.hpp"
#include "mpnet/system.hpp"

namespace mpnet {

enum class Method { Implicit, Explicit, Extended };

inline std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::Implicit: return "implicit";
    case Method::Explicit: return "explicit";
    case Method::Extended: return "extended";
  }
  return "implicit";
}

// The last `depth` departure vectors, newest first.
class DepartureHistory {
 public:
  DepartureHistory(std::size_t node_count, std::size_t depth)
      : slots_(depth, null_vector<std::int64_t>(node_count)) {
    if (depth == 0) throw std::invalid_argument("departure history: depth must be positive");
    slots_[0] = unit_vector<std::int64_t>(node_count);  // d(0) = e
  }

  std::size_t depth() const noexcept { return slots_.size(); }

  // d(k - m) relative to the step being computed, 1 <= m <= depth.
  const TimeVector& lag(std::size_t m) const {
    if (m == 0 || m > slots_.size()) throw std::out_of_range("departure history: lag out of range");
    return slots_[(head_ + m - 1) % slots_.size()];
  }

  void push(TimeVector d) {
    head_ = (head_ + slots_.size() - 1) % slots_.size();
    slots_[head_] = std::move(d);
  }

 private:
  std::vector<TimeVector> slots_;
  std::size_t head_ = 0;
};

// Right-hand side of the implicit step without the U ⊗ d(k) term.
inline TimeVector implicit_offset(const DepartureHistory& history, const NetworkSpec& spec, const DelayedAdjacency& da,
                                  const TimeMatrix& tau) {
  const auto n = da.node_count;
  auto v = tau * history.lag(1);
  TimeVector delayed = null_vector<std::int64_t>(n);
  for (std::size_t m = 1; m <= da.horizon; ++m) {
    const auto& past = history.lag(m);
    const auto gt = transpose(da.G(m));
    switch (spec.blocking) {
      case Blocking::None: delayed = delayed + gt * past; break;
      case Blocking::Manufacturing: delayed = delayed + (tau * gt + da.H(m)) * past; break;
      case Blocking::Communication: delayed = delayed + (gt + da.H(m)) * past; break;
    }
  }
  if (spec.blocking == Blocking::Manufacturing) return v + delayed;
  return v + tau * delayed;
}

// One implicit step. With `depth` unset the implicit solver rechecks U.
inline TimeVector step_implicit(const DepartureHistory& history, const NetworkSpec& spec, const DelayedAdjacency& da,
                                const TimeMatrix& tau, std::optional<std::size_t> depth = std::nullopt) {
  const auto u = tau * transpose(da.G(0));
  const auto v = implicit_offset(history, spec, da, tau);
  return depth ? solve_implicit(u, v, *depth) : solve_implicit(u, v);
}

inline TimeVector step_explicit(const DepartureHistory& history, const TransitionSet& ts) {
  if (history.depth() < ts.horizon()) throw std::invalid_argument("step_explicit: history shorter than M");
  auto d = ts.T(1) * history.lag(1);
  for (std::size_t m = 2; m <= ts.horizon(); ++m) d = d + ts.T(m) * history.lag(m);
  return d;
}

// d̂(k) = T̂(k) ⊗ d̂(k-1)
inline TimeVector step_extended(const TimeVector& stacked, const TimeMatrix& extended) {
  return extended * stacked;
}

// [d(0); d(-1); …; d(1-M)] = [e; ε; …; ε]
inline TimeVector initial_stacked_state(std::size_t node_count, std::size_t depth) {
  TimeVector out = null_vector<std::int64_t>(node_count * depth);
  for (std::size_t i = 0; i < node_count; ++i) out[i] = TimeValue::unit();
  return out;
}

// a, b, c per step; entry 0 of each is the ε-vector.
struct StateTrace {
  std::vector<TimeVector> a;
  std::vector<TimeVector> b;
  std::vector<TimeVector> c;
};

struct Trajectory {
  std::size_t node_count = 0;
  std::size_t steps = 0;
  std::optional<Method> method;  // unset for trajectories read off the simulator
  std::vector<TimeVector> d;     // d(0)..d(K)
  std::optional<StateTrace> trace;
};

// Raised by run() when G_0 has a circuit.
class UnsolvableNetwork : public CyclicSystem {
 public:
  explicit UnsolvableNetwork(SolvabilityReport report)
      : CyclicSystem(report.circuit, "network: G_0 has a circuit, no explicit state equation exists"),
        report_(std::move(report)) {}
  const SolvabilityReport& report() const noexcept { return report_; }

 private:
  SolvabilityReport report_;
};

namespace detail {

inline TimeValue lagged(const std::vector<TimeVector>& d, std::size_t k, std::size_t shift, std::size_t node) {
  return k >= shift ? d[k - shift][node] : TimeValue::epsilon();
}

// 𝒟_i(k) = ⊕_{j ∈ S(i)} d_j(k - s_j - 1); infinite s_j contributes ε.
inline TimeValue downstream_release(const NetworkSpec& spec, const std::vector<TimeVector>& d, std::size_t i,
                                    std::size_t k) {
  TimeValue out;
  for (auto j : successors(spec, i))
    if (spec.capacity[j].is_finite()) out += lagged(d, k, spec.capacity[j].value() + 1, j);
  return out;
}

}  // namespace detail

// Node-level a, b, c from a known departure history, straight from the
// per-node equations rather than the matrices.
inline StateTrace reconstruct_trace(const NetworkSpec& spec, const ServiceTimeSource& src,
                                    const std::vector<TimeVector>& d) {
  const auto n = spec.node_count;
  StateTrace tr;
  tr.a.assign(d.size(), null_vector<std::int64_t>(n));
  tr.b = tr.a;
  tr.c = tr.a;
  for (std::size_t k = 1; k < d.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      TimeValue a;
      const auto preds = predecessors(spec, i);
      if (!preds.empty() && spec.initial[i].is_finite())
        for (auto j : preds) a += detail::lagged(d, k, spec.initial[i].value(), j);
      auto b = a + d[k - 1][i];
      if (spec.blocking == Blocking::Communication) b += detail::downstream_release(spec, d, i, k);
      tr.a[k][i] = a;
      tr.b[k][i] = b;
      tr.c[k][i] = src(i, k) * b;
    }
  }
  return tr;
}

// d(k) implied by a trace: c, or c ⊕ 𝒟 under manufacturing blocking.
inline TimeVector departures_from_trace(const NetworkSpec& spec, const StateTrace& tr,
                                        const std::vector<TimeVector>& d, std::size_t k) {
  auto out = tr.c[k];
  if (spec.blocking == Blocking::Manufacturing)
    for (std::size_t i = 0; i < spec.node_count; ++i) out[i] += detail::downstream_release(spec, d, i, k);
  return out;
}

inline Trajectory run(const NetworkSpec& spec, const ServiceTimeSource& src, std::size_t steps, Method method,
                      bool with_trace = false) {
  validate(spec);
  const auto da = build_delayed_adjacency(spec);
  auto solvability = check_solvability(da);
  if (!solvability.solvable) throw UnsolvableNetwork(std::move(solvability));

  const auto n = spec.node_count;
  const auto depth = da.transition_horizon();
  Trajectory traj;
  traj.node_count = n;
  traj.steps = steps;
  traj.method = method;
  traj.d.reserve(steps + 1);
  traj.d.push_back(unit_vector<std::int64_t>(n));

  DepartureHistory history(n, depth);
  auto stacked = initial_stacked_state(n, depth);
  for (std::size_t k = 1; k <= steps; ++k) {
    const auto tau = service_matrix(src, n, k);
    TimeVector d;
    switch (method) {
      case Method::Implicit:
        d = step_implicit(history, spec, da, tau, solvability.longest_path);
        break;
      case Method::Explicit:
        d = step_explicit(history, build_transition_matrices(da, spec, tau, k, solvability));
        break;
      case Method::Extended: {
        const auto ext = build_extended_transition(build_transition_matrices(da, spec, tau, k, solvability));
        stacked = step_extended(stacked, ext);
        d.assign(stacked.begin(), stacked.begin() + static_cast<std::ptrdiff_t>(n));
        break;
      }
    }
    history.push(d);
    traj.d.push_back(std::move(d));
  }
  if (with_trace) traj.trace = reconstruct_trace(spec, src, traj.d);
  return traj;
}

}  // namespace mpnet
