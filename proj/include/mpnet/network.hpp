#pragma once

// Fork-join queueing network description: topology, initial buffer
// contents r_i, buffer capacities s_i, blocking rule, and service times.
//
// Nodes are 0-based in the C++ API. Files, CLI output and diagnostic
// messages use 1-based numbering.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mpnet/maxplus.hpp"

namespace mpnet {

// Non-negative integer or INFINITE (a tagged top element).
class Count {
 public:
  constexpr Count() noexcept = default;
  constexpr Count(std::size_t value) noexcept : value_{value} {}  // NOLINT

  static constexpr Count infinite() noexcept {
    Count c;
    c.infinite_ = true;
    return c;
  }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  constexpr bool is_finite() const noexcept { return !infinite_; }
  constexpr std::size_t value() const {
    if (infinite_) throw std::logic_error("count: value() of infinite count");
    return value_;
  }

  friend constexpr bool operator==(const Count&, const Count&) = default;
  friend constexpr std::strong_ordering operator<=>(const Count& x, const Count& y) noexcept {
    if (x.infinite_ != y.infinite_) return x.infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
    if (x.infinite_) return std::strong_ordering::equal;
    return x.value_ <=> y.value_;
  }

  std::string to_string() const { return infinite_ ? "inf" : std::to_string(value_); }

 private:
  bool infinite_ = false;
  std::size_t value_ = 0;
};

inline constexpr Count kInfinite = Count::infinite();

enum class Blocking { None, Manufacturing, Communication };

inline std::string_view to_string(Blocking b) noexcept {
  switch (b) {
    case Blocking::None: return "none";
    case Blocking::Manufacturing: return "manufacturing";
    case Blocking::Communication: return "communication";
  }
  return "none";
}

inline std::optional<Blocking> parse_blocking(std::string_view text) noexcept {
  if (text == "none") return Blocking::None;
  if (text == "manufacturing") return Blocking::Manufacturing;
  if (text == "communication") return Blocking::Communication;
  return std::nullopt;
}

struct Arc {
  std::size_t from = 0;
  std::size_t to = 0;
  friend constexpr auto operator<=>(const Arc&, const Arc&) = default;
};

struct NetworkSpec {
  std::size_t node_count = 0;
  std::set<Arc> arcs;           // parallel arcs collapse
  std::vector<Count> initial;   // r_i
  std::vector<Count> capacity;  // s_i
  Blocking blocking = Blocking::None;

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

inline void check_node(const NetworkSpec& spec, std::size_t i) {
  if (i >= spec.node_count) throw std::out_of_range("network: node " + std::to_string(i + 1) + " out of range");
}

// P(i), ascending.
inline std::vector<std::size_t> predecessors(const NetworkSpec& spec, std::size_t i) {
  check_node(spec, i);
  std::vector<std::size_t> out;
  for (const auto& a : spec.arcs)
    if (a.to == i) out.push_back(a.from);
  std::sort(out.begin(), out.end());
  return out;
}

// S(i), ascending.
inline std::vector<std::size_t> successors(const NetworkSpec& spec, std::size_t i) {
  check_node(spec, i);
  std::vector<std::size_t> out;
  for (const auto& a : spec.arcs)
    if (a.from == i) out.push_back(a.to);
  return out;  // set order is already ascending by (from, to)
}

struct Violation {
  std::optional<std::size_t> node;  // 0-based
  std::string message;
};

class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : std::invalid_argument(summarize(violations)), violations_(std::move(violations)) {}
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  static std::string summarize(const std::vector<Violation>& vs) {
    std::string out = "invalid network:";
    for (const auto& v : vs) out += "\n  " + v.message;
    return out;
  }
  std::vector<Violation> violations_;
};

// Every broken constraint, in a stable order. Empty means valid.
inline std::vector<Violation> violations(const NetworkSpec& spec) {
  std::vector<Violation> out;
  const auto n = spec.node_count;
  auto label = [](std::size_t i) { return std::to_string(i + 1); };

  if (n == 0) out.push_back({std::nullopt, "network has no nodes"});
  if (spec.initial.size() != n)
    out.push_back({std::nullopt, "r has " + std::to_string(spec.initial.size()) + " entries, expected " + std::to_string(n)});
  if (spec.capacity.size() != n)
    out.push_back({std::nullopt, "s has " + std::to_string(spec.capacity.size()) + " entries, expected " + std::to_string(n)});

  std::vector<bool> has_pred(n, false);
  for (const auto& a : spec.arcs) {
    if (a.from >= n || a.to >= n) {
      out.push_back({std::nullopt, "arc (" + label(a.from) + "," + label(a.to) + ") references a node outside 1.." + std::to_string(n)});
      continue;
    }
    if (a.from == a.to) out.push_back({a.from, "self-loop arc at node " + label(a.from)});
    has_pred[a.to] = true;
  }

  if (spec.initial.size() != n || spec.capacity.size() != n) return out;

  for (std::size_t i = 0; i < n; ++i) {
    if (spec.initial[i] > spec.capacity[i]) out.push_back({i, "r exceeds s at node " + label(i)});
    if (!has_pred[i] && (spec.initial[i].is_finite() || spec.capacity[i].is_finite()))
      out.push_back({i, "source node " + label(i) + " must have r = s = inf"});
    if (spec.blocking == Blocking::None && spec.capacity[i].is_finite())
      out.push_back({i, "blocking 'none' requires s = inf at node " + label(i)});
  }
  return out;
}

inline const NetworkSpec& validate(const NetworkSpec& spec) {
  auto vs = violations(spec);
  if (!vs.empty()) throw ValidationError(std::move(vs));
  return spec;
}

class TableExhausted : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// τ_ik provider: an explicit table, or a pure function of (seed, i, k).
class ServiceTimeSource {
 public:
  struct Table {
    std::vector<std::vector<std::int64_t>> rows;  // rows[i][k-1]
    friend bool operator==(const Table&, const Table&) = default;
  };
  struct Seeded {
    std::uint64_t seed = 0;
    std::int64_t min = 1;
    std::int64_t max = 9;
    friend bool operator==(const Seeded&, const Seeded&) = default;
  };

  static ServiceTimeSource table(std::vector<std::vector<std::int64_t>> rows) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (auto t : rows[i])
        if (t <= 0) throw std::invalid_argument("service table: non-positive time at node " + std::to_string(i + 1));
    return ServiceTimeSource(Table{std::move(rows)});
  }

  static ServiceTimeSource seeded(std::uint64_t seed, std::int64_t max, std::int64_t min = 1) {
    if (min < 1 || max < min) throw std::invalid_argument("seeded service: need 1 <= min <= max");
    return ServiceTimeSource(Seeded{seed, min, max});
  }

  bool is_table() const noexcept { return std::holds_alternative<Table>(mode_); }
  const std::variant<Table, Seeded>& mode() const noexcept { return mode_; }

  // Same distribution, different seed. Tables are returned unchanged.
  ServiceTimeSource with_seed(std::uint64_t seed) const {
    auto copy = *this;
    if (auto* s = std::get_if<Seeded>(&copy.mode_)) s->seed = seed;
    return copy;
  }

  // τ_ik for 0-based node i and 1-based customer index k.
  std::int64_t raw(std::size_t i, std::size_t k) const {
    if (k == 0) throw std::invalid_argument("service time: customer index starts at 1");
    if (const auto* t = std::get_if<Table>(&mode_)) {
      if (i >= t->rows.size()) throw std::out_of_range("service table: no row for node " + std::to_string(i + 1));
      if (k > t->rows[i].size())
        throw TableExhausted("service table: node " + std::to_string(i + 1) + " has no entry for k = " + std::to_string(k));
      return t->rows[i][k - 1];
    }
    const auto& s = std::get<Seeded>(mode_);
    std::seed_seq seq{static_cast<std::uint32_t>(s.seed), static_cast<std::uint32_t>(s.seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k)};
    std::mt19937_64 engine(seq);
    return std::uniform_int_distribution<std::int64_t>(s.min, s.max)(engine);
  }

  TimeValue operator()(std::size_t i, std::size_t k) const { return TimeValue{raw(i, k)}; }

  friend bool operator==(const ServiceTimeSource&, const ServiceTimeSource&) = default;

 private:
  explicit ServiceTimeSource(std::variant<Table, Seeded> mode) : mode_(std::move(mode)) {}
  std::variant<Table, Seeded> mode_;
};

inline TimeValue service_time(const ServiceTimeSource& src, std::size_t i, std::size_t k) { return src(i, k); }

}  // namespace mpnet
