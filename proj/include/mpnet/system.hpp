#pragma once

// Topology-derived matrices and state transition matrices.
//
//   G_m  (m = 0..M):  g_ij = e  iff  (i, j) ∈ A and r_j = m
//   H_m  (m = 1..M):  h_ij = e  iff  (i, j) ∈ A and s_j + 1 = m
//
// The explicit recursion d(k) = ⊕_m T_m(k) ⊗ d(k-m) exists exactly when
// the graph of G_0 is acyclic.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mpnet/maxplus.hpp"
#include "mpnet/network.hpp"

namespace mpnet {

using TimeMatrix = Matrix<std::int64_t>;
using TimeVector = Vector<std::int64_t>;

struct DelayedAdjacency {
  std::size_t node_count = 0;
  std::size_t initial_horizon = 0;   // M_r
  std::size_t capacity_horizon = 0;  // M_s
  std::size_t horizon = 0;           // M = max(M_r, M_s)
  std::vector<TimeMatrix> g;         // G_0..G_M
  std::vector<TimeMatrix> h;         // H_1..H_M at h[m - 1]

  // ℰ past the stored range.
  TimeMatrix G(std::size_t m) const { return m < g.size() ? g[m] : TimeMatrix::null(node_count); }
  TimeMatrix H(std::size_t m) const {
    return (m >= 1 && m <= h.size()) ? h[m - 1] : TimeMatrix::null(node_count);
  }

  // Depth of the explicit recursion. A network with M = 0 still couples
  // d(k) to d(k-1) through its servers, so the recursion is promoted to M = 1.
  std::size_t transition_horizon() const noexcept { return std::max<std::size_t>(1, horizon); }
};

// Expects a validated spec.
inline DelayedAdjacency build_delayed_adjacency(const NetworkSpec& spec) {
  const auto n = spec.node_count;
  DelayedAdjacency da;
  da.node_count = n;

  std::size_t argmax_r = n;
  for (std::size_t j = 0; j < n; ++j) {
    if (spec.initial[j].is_finite() && (argmax_r == n || spec.initial[j].value() > da.initial_horizon)) {
      da.initial_horizon = spec.initial[j].value();
      argmax_r = j;
    }
    if (spec.capacity[j].is_finite())
      da.capacity_horizon = std::max(da.capacity_horizon, spec.capacity[j].value() + 1);
  }
  // With both r_j and s_j finite, r_j <= s_j < s_j + 1 forces M_r <= M_s.
  // M_r > M_s is only legitimate when the node attaining M_r has s = inf.
  if (da.initial_horizon > da.capacity_horizon && argmax_r < n &&
      spec.capacity[argmax_r].is_finite())
    throw std::logic_error("delayed adjacency: M_r > M_s at node " + std::to_string(argmax_r + 1) +
                           " is contradictory to the initial conditions");
  da.horizon = std::max(da.initial_horizon, da.capacity_horizon);

  da.g.assign(da.horizon + 1, TimeMatrix::null(n));
  da.h.assign(da.horizon, TimeMatrix::null(n));
  for (const auto& [i, j] : spec.arcs) {
    if (spec.initial[j].is_finite()) da.g[spec.initial[j].value()](i, j) = TimeValue::unit();
    if (spec.capacity[j].is_finite()) da.h[spec.capacity[j].value()](i, j) = TimeValue::unit();
  }
  return da;
}

struct Remediation {
  std::size_t node = 0;         // 0-based
  std::size_t min_initial = 1;  // smallest r that removes the node's incoming G_0 arcs
  friend bool operator==(const Remediation&, const Remediation&) = default;
};

struct SolvabilityReport {
  bool solvable = true;
  std::size_t longest_path = 0;              // p, when solvable
  std::vector<std::size_t> circuit;          // closed walk in G_0, when not
  std::vector<Remediation> remediation;
};

inline SolvabilityReport check_solvability(const DelayedAdjacency& da) {
  const auto acyclicity = analyze_acyclicity(associated_graph(da.G(0)));
  SolvabilityReport report;
  report.solvable = acyclicity.acyclic;
  if (acyclicity.acyclic) {
    report.longest_path = acyclicity.longest_path_length;
    return report;
  }
  report.circuit = acyclicity.witness_cycle;
  // Every node on a G_0 circuit has r = 0; raising it to 1 moves all its
  // incoming arcs into G_1.
  std::vector<std::size_t> nodes(report.circuit.begin(), report.circuit.end() - 1);
  std::sort(nodes.begin(), nodes.end());
  for (auto j : nodes) report.remediation.push_back({j, 1});
  return report;
}

// 𝒯_k: τ_ik on the diagonal, ε elsewhere.
inline TimeMatrix service_matrix(const ServiceTimeSource& src, std::size_t node_count, std::size_t k) {
  TimeVector diag(node_count);
  for (std::size_t i = 0; i < node_count; ++i) diag[i] = src(i, k);
  return TimeMatrix::diagonal(diag);
}

struct TransitionSet {
  std::size_t k = 0;
  std::vector<TimeMatrix> t;  // T_1(k)..T_M(k) at t[m - 1]

  std::size_t horizon() const noexcept { return t.size(); }
  const TimeMatrix& T(std::size_t m) const { return t.at(m - 1); }
};

// Q = (E ⊕ 𝒯_k ⊗ G_0^T)^p
inline TimeMatrix closure_factor(const DelayedAdjacency& da, const TimeMatrix& tau, std::size_t p) {
  const auto e = TimeMatrix::identity(da.node_count);
  return power(e + tau * transpose(da.G(0)), p);
}

inline TransitionSet build_transition_matrices(const DelayedAdjacency& da, const NetworkSpec& spec,
                                               const TimeMatrix& tau, std::size_t k,
                                               const SolvabilityReport& solvability) {
  if (!solvability.solvable)
    throw CyclicSystem(solvability.circuit, "transition matrices: G_0 has a circuit, no explicit equation exists");
  if (tau.rows() != da.node_count || !tau.is_square()) throw ShapeError("transition matrices: 𝒯_k has the wrong shape");

  const auto e = TimeMatrix::identity(da.node_count);
  const auto q = closure_factor(da, tau, solvability.longest_path);

  TransitionSet ts;
  ts.k = k;
  for (std::size_t m = 1; m <= da.transition_horizon(); ++m) {
    const auto gt = transpose(da.G(m));
    const auto hm = da.H(m);
    switch (spec.blocking) {
      case Blocking::None:
        ts.t.push_back(m == 1 ? q * tau * (e + gt) : q * tau * gt);
        break;
      case Blocking::Manufacturing:
        ts.t.push_back(m == 1 ? q * (tau + tau * gt + hm) : q * (tau * gt + hm));
        break;
      case Blocking::Communication:
        ts.t.push_back(m == 1 ? q * tau * (e + gt + hm) : q * tau * (gt + hm));
        break;
    }
  }
  return ts;
}

// T̂(k): first block row [T_1 … T_M], E on the block sub-diagonal, ℰ elsewhere.
inline TimeMatrix build_extended_transition(const TransitionSet& ts) {
  const auto depth = ts.horizon();
  if (depth == 0) throw std::invalid_argument("extended transition: empty transition set");
  const auto n = ts.t.front().rows();
  TimeMatrix out(n * depth, n * depth);
  for (std::size_t m = 0; m < depth; ++m)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, m * n + j) = ts.t[m](i, j);
  for (std::size_t b = 1; b < depth; ++b)
    for (std::size_t i = 0; i < n; ++i) out(b * n + i, (b - 1) * n + i) = TimeValue::unit();
  return out;
}

}  // namespace mpnet
