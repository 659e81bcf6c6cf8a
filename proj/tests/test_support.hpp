#pragma once

// Test-only generators and brute-force oracles. Nothing here calls into the
// library code paths it is used to check.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "mpnet/mpnet.hpp"

namespace mpnet::testing {

using Rng = std::mt19937_64;

inline const TimeValue eps = TimeValue::epsilon();

inline TimeValue random_value(Rng& rng, double eps_probability = 0.25, std::int64_t lo = -20, std::int64_t hi = 20) {
  if (std::bernoulli_distribution(eps_probability)(rng)) return eps;
  return TimeValue{std::uniform_int_distribution<std::int64_t>(lo, hi)(rng)};
}

inline TimeMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double eps_probability = 0.3) {
  TimeMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_value(rng, eps_probability);
  return m;
}

inline TimeVector random_vector(Rng& rng, std::size_t n, double eps_probability = 0.2) {
  TimeVector v(n);
  for (auto& x : v) x = random_value(rng, eps_probability);
  return v;
}

inline std::size_t random_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Square matrix with positive-or-ε entries whose graph is a DAG: arcs only
// go from a lower to a higher position of a random permutation.
inline TimeMatrix random_acyclic_positive(Rng& rng, std::size_t n, double arc_probability = 0.4) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  TimeMatrix u(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (std::bernoulli_distribution(arc_probability)(rng))
        u(perm[a], perm[b]) = TimeValue{std::uniform_int_distribution<std::int64_t>(1, 9)(rng)};
  return u;
}

// Entry (i, j) = max_l x_il + y_lj, written as a plain triple loop over
// optional<int64>.
inline TimeMatrix naive_product(const TimeMatrix& x, const TimeMatrix& y) {
  TimeMatrix out(x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < y.cols(); ++j) {
      std::optional<std::int64_t> best;
      for (std::size_t l = 0; l < x.cols(); ++l) {
        if (x(i, l).is_epsilon() || y(l, j).is_epsilon()) continue;
        const auto s = x(i, l).value() + y(l, j).value();
        if (!best || s > *best) best = s;
      }
      if (best) out(i, j) = TimeValue{*best};
    }
  return out;
}

inline TimeVector naive_apply(const TimeMatrix& x, const TimeVector& v) {
  TimeMatrix column(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) column(i, 0) = v[i];
  const auto product = naive_product(x, column);
  TimeVector out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = product(i, 0);
  return out;
}

// Longest simple path (arc count) by exhaustive DFS over simple paths, and
// whether any circuit exists. Exponential; fine for n <= 8.
struct PathCensus {
  bool has_cycle = false;
  std::size_t longest = 0;
};

inline PathCensus enumerate_paths(std::size_t n, const std::function<bool(std::size_t, std::size_t)>& arc) {
  PathCensus census;
  std::vector<bool> on_path(n, false);
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t node, std::size_t length) {
    census.longest = std::max(census.longest, length);
    on_path[node] = true;
    for (std::size_t next = 0; next < n; ++next) {
      if (!arc(node, next)) continue;
      if (on_path[next]) {
        census.has_cycle = true;
        continue;
      }
      walk(next, length + 1);
    }
    on_path[node] = false;
  };
  for (std::size_t start = 0; start < n; ++start) walk(start, 0);
  return census;
}

inline PathCensus enumerate_paths(const TimeMatrix& x) {
  return enumerate_paths(x.rows(), [&](std::size_t i, std::size_t j) { return x(i, j).is_finite(); });
}

struct SpecOptions {
  std::size_t max_nodes = 6;
  double arc_probability = 0.35;
  std::size_t max_initial = 2;
  std::size_t max_extra_capacity = 2;
  double infinite_capacity_probability = 0.25;
  double infinite_initial_probability = 0.05;
};

// Random valid spec with the given blocking rule. Not necessarily solvable.
inline NetworkSpec random_spec(Rng& rng, Blocking blocking, const SpecOptions& opt = {}) {
  NetworkSpec spec;
  spec.blocking = blocking;
  spec.node_count = random_size(rng, 1, opt.max_nodes);
  const auto n = spec.node_count;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && std::bernoulli_distribution(opt.arc_probability)(rng)) spec.arcs.insert({i, j});
  std::vector<bool> has_pred(n, false);
  for (const auto& a : spec.arcs) has_pred[a.to] = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!has_pred[i] || std::bernoulli_distribution(opt.infinite_initial_probability)(rng)) {
      spec.initial.push_back(kInfinite);
      spec.capacity.push_back(kInfinite);
      continue;
    }
    const auto r = random_size(rng, 0, opt.max_initial);
    spec.initial.push_back(r);
    if (blocking == Blocking::None || std::bernoulli_distribution(opt.infinite_capacity_probability)(rng))
      spec.capacity.push_back(kInfinite);
    else
      spec.capacity.push_back(r + random_size(rng, 0, opt.max_extra_capacity));
  }
  return spec;
}

inline bool is_solvable(const NetworkSpec& spec) {
  return check_solvability(build_delayed_adjacency(spec)).solvable;
}

inline NetworkSpec random_solvable_spec(Rng& rng, Blocking blocking, const SpecOptions& opt = {}) {
  for (;;) {
    auto spec = random_spec(rng, blocking, opt);
    if (is_solvable(spec)) return spec;
  }
}

inline NetworkSpec random_unsolvable_spec(Rng& rng, Blocking blocking) {
  SpecOptions opt;
  opt.arc_probability = 0.5;
  opt.max_initial = 1;
  for (;;) {
    auto spec = random_spec(rng, blocking, opt);
    if (!is_solvable(spec)) return spec;
  }
}

inline Blocking blocking_for(std::size_t index) {
  static constexpr Blocking all[] = {Blocking::None, Blocking::Manufacturing, Blocking::Communication};
  return all[index % 3];
}

// Same topology and r, every buffer infinite, no blocking.
inline NetworkSpec with_infinite_buffers(NetworkSpec spec) {
  spec.blocking = Blocking::None;
  std::fill(spec.capacity.begin(), spec.capacity.end(), kInfinite);
  return spec;
}

inline NetworkSpec make_spec(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> arcs_1based,
                             std::vector<Count> r, std::vector<Count> s, Blocking blocking) {
  NetworkSpec spec;
  spec.node_count = n;
  for (auto [i, j] : arcs_1based) spec.arcs.insert({i - 1, j - 1});
  spec.initial = std::move(r);
  spec.capacity = std::move(s);
  spec.blocking = blocking;
  return spec;
}

// Six-node fork-join network with one feedback loop: 1→2, 2→3, 2→5,
// 3→4, 3→6, 4→2, 5→6. r_5 = r_6 = 0 and s_i = 2 are arbitrary choices.
inline NetworkSpec six_node_spec(std::size_t r2, std::size_t r3, std::size_t r4,
                                 Blocking blocking = Blocking::Manufacturing) {
  const bool finite = blocking != Blocking::None;
  const Count s = finite ? Count{2} : kInfinite;
  return make_spec(6, {{1, 2}, {2, 3}, {2, 5}, {3, 4}, {3, 6}, {4, 2}, {5, 6}},
                   {kInfinite, r2, r3, r4, 0, 0}, {kInfinite, s, s, s, s, s}, blocking);
}

// Table source where node i always takes `per_node[i]`, for k = 1..steps.
inline ServiceTimeSource constant_table(const std::vector<std::int64_t>& per_node, std::size_t steps) {
  std::vector<std::vector<std::int64_t>> rows;
  for (auto t : per_node) rows.emplace_back(steps, t);
  return ServiceTimeSource::table(std::move(rows));
}

inline ServiceTimeSource random_source(Rng& rng) {
  return ServiceTimeSource::seeded(rng(), 9);
}

// Entrywise x <= y over every d(k).
inline bool dominated(const std::vector<TimeVector>& x, const std::vector<TimeVector>& y) {
  if (x.size() != y.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k)
    for (std::size_t i = 0; i < x[k].size(); ++i)
      if (y[k][i] < x[k][i]) return false;
  return true;
}

}  // namespace mpnet::testing
