#pragma once

// Brute-force discrete-event simulator of the physical fork-join network.
// It never touches the max-plus matrices: customers are counted, servers
// hold state, and time jumps from one service completion to the next.
//
// Semantics:
//  * Sources (and any node with r = inf) have an unlimited backlog.
//  * Node i starts with r_i customers in its buffer.
//  * Join: one staged customer from every predecessor merges into one
//    buffered customer. Staging areas are unbounded.
//  * Service is FCFS; the k-th service at node i lasts τ_ik.
//  * Departure forks one customer into each successor's staging area.
//  * Buffer occupancy of successor j as seen by node i is the number of
//    customers i has forked to j minus the number that have left j. A
//    transfer to j is admitted while that count is at most s_j.
//      manufacturing: a served customer holds the server until admitted
//      communication: service does not start until admitted
//  * Fork, join and transfers take zero time. Everything enabled at one
//    instant fires before the clock advances.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mpnet/dynamics.hpp"
#include "mpnet/maxplus.hpp"
#include "mpnet/network.hpp"

namespace mpnet {

// Per node, the k-th epoch at index k - 1.
struct EventLog {
  std::size_t node_count = 0;
  std::size_t steps = 0;
  std::vector<std::vector<TimeValue>> arrival;  // ε for customers present from the start
  std::vector<std::vector<TimeValue>> start;
  std::vector<std::vector<TimeValue>> completion;
  std::vector<std::vector<TimeValue>> departure;
};

class Deadlock : public std::runtime_error {
 public:
  Deadlock(std::vector<std::size_t> blocked, EventLog partial)
      : std::runtime_error("simulation deadlocked"), blocked_(std::move(blocked)), partial_(std::move(partial)) {}
  // Nodes short of the requested departures, ascending, 0-based.
  const std::vector<std::size_t>& blocked() const noexcept { return blocked_; }
  const EventLog& partial() const noexcept { return partial_; }

 private:
  std::vector<std::size_t> blocked_;
  EventLog partial_;
};

enum class ScanOrder { Ascending, Descending };

namespace detail {

class Simulator {
 public:
  Simulator(const NetworkSpec& spec, const ServiceTimeSource& src, std::size_t steps)
      : spec_(spec), src_(src), steps_(steps), nodes_(spec.node_count) {
    const auto n = spec.node_count;
    log_.node_count = n;
    log_.steps = steps;
    log_.arrival.assign(n, {});
    log_.start.assign(n, {});
    log_.completion.assign(n, {});
    log_.departure.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      auto& node = nodes_[i];
      node.preds = predecessors(spec, i);
      node.succs = successors(spec, i);
      node.staged.assign(node.preds.size(), 0);
      node.unlimited = node.preds.empty() || spec.initial[i].is_infinite();
      if (!node.unlimited) {
        node.ready = spec.initial[i].value();
        for (std::size_t k = 0; k < std::min(node.ready, steps); ++k) log_.arrival[i].push_back(TimeValue::epsilon());
      }
    }
  }

  EventLog run(ScanOrder order) {
    std::int64_t now = 0;
    for (;;) {
      settle(now, order);
      if (std::all_of(nodes_.begin(), nodes_.end(), [&](const Node& s) { return s.departed == steps_; })) break;
      std::optional<std::int64_t> next;
      for (const auto& node : nodes_)
        if (node.server == Server::Busy) next = next ? std::min(*next, node.busy_until) : node.busy_until;
      if (!next) {
        std::vector<std::size_t> blocked;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
          if (nodes_[i].departed < steps_) blocked.push_back(i);
        throw Deadlock(std::move(blocked), log_);
      }
      now = *next;
    }
    return log_;
  }

 private:
  enum class Server { Idle, Busy, Holding };

  struct Node {
    std::vector<std::size_t> preds;
    std::vector<std::size_t> succs;
    std::vector<std::size_t> staged;  // parallel to preds
    bool unlimited = false;
    std::size_t ready = 0;  // buffered, not yet in service
    std::size_t joined = 0;
    std::size_t started = 0;
    std::size_t departed = 0;
    Server server = Server::Idle;
    std::int64_t busy_until = 0;
  };

  // Fire everything enabled at `now` until nothing changes.
  void settle(std::int64_t now, ScanOrder order) {
    const auto n = nodes_.size();
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t step = 0; step < n; ++step) {
        const auto i = order == ScanOrder::Ascending ? step : n - 1 - step;
        changed |= fire_joins(i, now);
        changed |= fire_completion(i, now);
        changed |= fire_departure(i, now);
        changed |= fire_start(i, now);
      }
    }
  }

  bool fire_joins(std::size_t i, std::int64_t now) {
    auto& node = nodes_[i];
    if (node.unlimited) return false;
    bool fired = false;
    while (std::all_of(node.staged.begin(), node.staged.end(), [](std::size_t c) { return c > 0; })) {
      for (auto& c : node.staged) --c;
      ++node.ready;
      ++node.joined;
      if (log_.arrival[i].size() < steps_) log_.arrival[i].push_back(TimeValue{now});
      fired = true;
    }
    return fired;
  }

  bool fire_completion(std::size_t i, std::int64_t now) {
    auto& node = nodes_[i];
    if (node.server != Server::Busy || node.busy_until != now) return false;
    node.server = Server::Holding;
    return true;
  }

  // Every finite-buffer successor can take the node's next transfer.
  bool admitted(std::size_t i) const {
    const auto& node = nodes_[i];
    for (auto j : node.succs) {
      if (spec_.capacity[j].is_infinite()) continue;
      if (node.departed > nodes_[j].departed + spec_.capacity[j].value()) return false;
    }
    return true;
  }

  bool fire_departure(std::size_t i, std::int64_t now) {
    auto& node = nodes_[i];
    if (node.server != Server::Holding) return false;
    if (spec_.blocking == Blocking::Manufacturing && !admitted(i)) return false;
    node.server = Server::Idle;
    ++node.departed;
    log_.departure[i].push_back(TimeValue{now});
    for (auto j : node.succs) {
      auto& succ = nodes_[j];
      if (succ.unlimited) continue;
      const auto pos = std::find(succ.preds.begin(), succ.preds.end(), i) - succ.preds.begin();
      ++succ.staged[static_cast<std::size_t>(pos)];
    }
    return true;
  }

  bool fire_start(std::size_t i, std::int64_t now) {
    auto& node = nodes_[i];
    if (node.server != Server::Idle || node.started == steps_) return false;
    if (!node.unlimited && node.ready == 0) return false;
    if (spec_.blocking == Blocking::Communication && !admitted(i)) return false;
    if (!node.unlimited) --node.ready;
    ++node.started;
    const auto tau = src_.raw(i, node.started);
    node.server = Server::Busy;
    node.busy_until = now + tau;
    log_.start[i].push_back(TimeValue{now});
    log_.completion[i].push_back(TimeValue{now + tau});
    return true;
  }

  const NetworkSpec& spec_;
  const ServiceTimeSource& src_;
  std::size_t steps_;
  std::vector<Node> nodes_;
  EventLog log_;
};

}  // namespace detail

// Simulates until every node has `steps` departures. Throws Deadlock when
// no event can fire before that.
inline EventLog simulate(const NetworkSpec& spec, const ServiceTimeSource& src, std::size_t steps,
                         ScanOrder order = ScanOrder::Ascending) {
  validate(spec);
  return detail::Simulator(spec, src, steps).run(order);
}

// Departure epochs as a trajectory, d(0) = e prepended.
inline Trajectory to_trajectory(const EventLog& log, bool with_trace = false) {
  Trajectory traj;
  traj.node_count = log.node_count;
  traj.steps = log.steps;
  auto column = [&](const std::vector<std::vector<TimeValue>>& src, std::size_t k) {
    TimeVector v(log.node_count);
    for (std::size_t i = 0; i < log.node_count; ++i)
      if (k >= 1 && k <= src[i].size()) v[i] = src[i][k - 1];
    return v;
  };
  traj.d.push_back(unit_vector<std::int64_t>(log.node_count));
  for (std::size_t k = 1; k <= log.steps; ++k) traj.d.push_back(column(log.departure, k));
  if (with_trace) {
    StateTrace tr;
    for (std::size_t k = 0; k <= log.steps; ++k) {
      tr.a.push_back(column(log.arrival, k));
      tr.b.push_back(column(log.start, k));
      tr.c.push_back(column(log.completion, k));
    }
    traj.trace = std::move(tr);
  }
  return traj;
}

struct Mismatch {
  std::size_t node = 0;  // 0-based
  std::size_t k = 0;
  TimeValue engine;
  TimeValue oracle;
};

struct MatchReport {
  std::size_t engine_steps = 0;
  std::size_t oracle_steps = 0;
  bool shape_mismatch = false;  // node counts or step counts differ
  std::vector<Mismatch> mismatches;

  bool ok() const noexcept { return !shape_mismatch && mismatches.empty(); }
  std::optional<Mismatch> first() const {
    if (mismatches.empty()) return std::nullopt;
    return mismatches.front();
  }
};

// Exact comparison of d(1..K) against the simulator's departure epochs.
inline MatchReport compare(const Trajectory& traj, const EventLog& log) {
  MatchReport report;
  report.engine_steps = traj.steps;
  report.oracle_steps = log.steps;
  report.shape_mismatch = traj.node_count != log.node_count || traj.steps != log.steps;
  const auto n = std::min(traj.node_count, log.node_count);
  const auto steps = std::min(traj.steps, log.steps);
  for (std::size_t k = 1; k <= steps; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const auto oracle = k <= log.departure[i].size() ? log.departure[i][k - 1] : TimeValue::epsilon();
      if (traj.d[k][i] != oracle) report.mismatches.push_back({i, k, traj.d[k][i], oracle});
    }
  return report;
}

}  // namespace mpnet
