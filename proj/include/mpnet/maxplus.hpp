#pragma once

// Max-plus (tropical) scalars and dense matrices.
//
// Operator convention, as in most semiring libraries:
//   x + y   is  x ⊕ y = max(x, y)
//   x * y   is  x ⊗ y = x + y   (ordinary sum of the carriers)
// The null element ε is a tagged value, never a finite sentinel, so that
// absorption (x ⊗ ε = ε) is exact and cannot overflow.

#include <algorithm>
#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace mpnet {

template <typename T>
concept TimeCarrier = std::is_arithmetic_v<T> && std::is_signed_v<T>;

// Element of R ∪ {ε}.
template <TimeCarrier T>
class MaxPlus {
 public:
  using carrier_type = T;

  constexpr MaxPlus() noexcept = default;  // ε
  constexpr MaxPlus(T value) noexcept : finite_{true}, value_{value} {}  // NOLINT

  static constexpr MaxPlus epsilon() noexcept { return MaxPlus{}; }
  static constexpr MaxPlus unit() noexcept { return MaxPlus{T{0}}; }

  constexpr bool is_epsilon() const noexcept { return !finite_; }
  constexpr bool is_finite() const noexcept { return finite_; }

  constexpr T value() const {
    if (!finite_) throw std::logic_error("max-plus: value() of epsilon");
    return value_;
  }
  constexpr T value_or(T fallback) const noexcept { return finite_ ? value_ : fallback; }

  friend constexpr bool operator==(const MaxPlus&, const MaxPlus&) = default;

  // ε sits below every finite value.
  friend constexpr std::strong_ordering operator<=>(const MaxPlus& x, const MaxPlus& y) noexcept
    requires std::integral<T>
  {
    if (x.finite_ != y.finite_) return x.finite_ ? std::strong_ordering::greater : std::strong_ordering::less;
    if (!x.finite_) return std::strong_ordering::equal;
    return x.value_ <=> y.value_;
  }
  friend constexpr std::partial_ordering operator<=>(const MaxPlus& x, const MaxPlus& y) noexcept
    requires std::floating_point<T>
  {
    if (x.finite_ != y.finite_) return x.finite_ ? std::partial_ordering::greater : std::partial_ordering::less;
    if (!x.finite_) return std::partial_ordering::equivalent;
    return x.value_ <=> y.value_;
  }

  // ⊕
  friend constexpr MaxPlus operator+(const MaxPlus& x, const MaxPlus& y) noexcept {
    if (!x.finite_) return y;
    if (!y.finite_) return x;
    return MaxPlus{std::max(x.value_, y.value_)};
  }
  // ⊗
  friend constexpr MaxPlus operator*(const MaxPlus& x, const MaxPlus& y) noexcept {
    if (!x.finite_ || !y.finite_) return MaxPlus{};
    return MaxPlus{x.value_ + y.value_};
  }
  constexpr MaxPlus& operator+=(const MaxPlus& y) noexcept { return *this = *this + y; }
  constexpr MaxPlus& operator*=(const MaxPlus& y) noexcept { return *this = *this * y; }

  friend std::ostream& operator<<(std::ostream& os, const MaxPlus& x) {
    if (!x.finite_) return os << "eps";
    return os << x.value_;
  }

 private:
  bool finite_ = false;
  T value_{};  // zero whenever ε, so defaulted == is exact
};

template <TimeCarrier T>
constexpr MaxPlus<T> oplus(MaxPlus<T> x, MaxPlus<T> y) noexcept { return x + y; }
template <TimeCarrier T>
constexpr MaxPlus<T> otimes(MaxPlus<T> x, MaxPlus<T> y) noexcept { return x * y; }

template <TimeCarrier T>
std::string to_string(const MaxPlus<T>& x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

using TimeValue = MaxPlus<std::int64_t>;

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <TimeCarrier T>
using Vector = std::vector<MaxPlus<T>>;

template <TimeCarrier T>
Vector<T> null_vector(std::size_t n) { return Vector<T>(n); }

template <TimeCarrier T>
Vector<T> unit_vector(std::size_t n) { return Vector<T>(n, MaxPlus<T>::unit()); }

template <TimeCarrier T>
Vector<T> operator+(const Vector<T>& x, const Vector<T>& y) {
  if (x.size() != y.size()) throw ShapeError("max-plus: vector sizes differ");
  Vector<T> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
  return out;
}

// Dense row-major max-plus matrix.
template <TimeCarrier T>
class Matrix {
 public:
  using scalar_type = MaxPlus<T>;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_{rows}, cols_{cols}, data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<scalar_type>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw ShapeError("max-plus: ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  // ℰ
  static Matrix null(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  static Matrix null(std::size_t n) { return Matrix(n, n); }
  // E
  static Matrix identity(std::size_t n) {
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = scalar_type::unit();
    return out;
  }
  static Matrix diagonal(const Vector<T>& diag) {
    Matrix out(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) out(i, i) = diag[i];
    return out;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  scalar_type& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const scalar_type& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  scalar_type& at(std::size_t i, std::size_t j) {
    check_index(i, j);
    return (*this)(i, j);
  }
  const scalar_type& at(std::size_t i, std::size_t j) const {
    check_index(i, j);
    return (*this)(i, j);
  }

  bool is_null() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](const scalar_type& x) { return x.is_epsilon(); });
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? ", [" : "[");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? ", " : "") << m(i, j);
      os << ']';
    }
    return os << ']';
  }

 private:
  void check_index(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("max-plus: matrix index out of range");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<scalar_type> data_;
};

// X ⊕ Y
template <TimeCarrier T>
Matrix<T> operator+(const Matrix<T>& x, const Matrix<T>& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw ShapeError("max-plus: matrix sum of different shapes");
  Matrix<T> out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(i, j) + y(i, j);
  return out;
}

// X ⊗ Y; ε entries of X are skipped.
template <TimeCarrier T>
Matrix<T> operator*(const Matrix<T>& x, const Matrix<T>& y) {
  if (x.cols() != y.rows()) throw ShapeError("max-plus: inner dimensions do not agree");
  Matrix<T> out(x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t l = 0; l < x.cols(); ++l) {
      const auto& xil = x(i, l);
      if (xil.is_epsilon()) continue;
      for (std::size_t j = 0; j < y.cols(); ++j) out(i, j) += xil * y(l, j);
    }
  return out;
}

template <TimeCarrier T>
Vector<T> operator*(const Matrix<T>& x, const Vector<T>& v) {
  if (x.cols() != v.size()) throw ShapeError("max-plus: matrix-vector dimensions do not agree");
  Vector<T> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out[i] += x(i, j) * v[j];
  return out;
}

template <TimeCarrier T>
Matrix<T> transpose(const Matrix<T>& x) {
  Matrix<T> out(x.cols(), x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(j, i) = x(i, j);
  return out;
}

// X^q, with X^0 = E.
template <TimeCarrier T>
Matrix<T> power(const Matrix<T>& x, std::size_t q) {
  if (!x.is_square()) throw ShapeError("max-plus: power of a non-square matrix");
  auto out = Matrix<T>::identity(x.rows());
  for (std::size_t i = 0; i < q; ++i) out = out * x;
  return out;
}

// Graph on nodes 0..n-1 with arc (i, j) exactly where x_ij ≠ ε.
class AssociatedGraph {
 public:
  AssociatedGraph() = default;
  explicit AssociatedGraph(std::size_t node_count) : successors_(node_count) {}

  std::size_t node_count() const noexcept { return successors_.size(); }

  void add_arc(std::size_t from, std::size_t to) {
    if (from >= node_count() || to >= node_count()) throw std::out_of_range("graph: arc endpoint out of range");
    auto& out = successors_[from];
    auto it = std::lower_bound(out.begin(), out.end(), to);
    if (it == out.end() || *it != to) out.insert(it, to);
  }

  bool has_arc(std::size_t from, std::size_t to) const {
    const auto& out = successors_.at(from);
    return std::binary_search(out.begin(), out.end(), to);
  }

  // Sorted ascending.
  const std::vector<std::size_t>& successors(std::size_t node) const { return successors_.at(node); }

  std::vector<std::pair<std::size_t, std::size_t>> arcs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < node_count(); ++i)
      for (auto j : successors_[i]) out.emplace_back(i, j);
    return out;
  }

  std::size_t arc_count() const noexcept {
    std::size_t total = 0;
    for (const auto& out : successors_) total += out.size();
    return total;
  }

  friend bool operator==(const AssociatedGraph&, const AssociatedGraph&) = default;

 private:
  std::vector<std::vector<std::size_t>> successors_;
};

template <TimeCarrier T>
AssociatedGraph associated_graph(const Matrix<T>& x) {
  if (!x.is_square()) throw ShapeError("max-plus: associated graph of a non-square matrix");
  AssociatedGraph g(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      if (x(i, j).is_finite()) g.add_arc(i, j);
  return g;
}

struct AcyclicityReport {
  bool acyclic = true;
  // Arc count of the longest path; meaningful only when acyclic.
  std::size_t longest_path_length = 0;
  // Closed walk, first node repeated at the end; empty when acyclic.
  std::vector<std::size_t> witness_cycle;
};

namespace detail {

// First back edge met by a DFS rooted at the lowest-numbered unvisited node,
// visiting successors in ascending order.
inline std::vector<std::size_t> find_cycle(const AssociatedGraph& g) {
  enum class Color : unsigned char { white, grey, black };
  const auto n = g.node_count();
  std::vector<Color> color(n, Color::white);
  std::vector<std::size_t> path;
  struct Frame {
    std::size_t node;
    std::size_t next;
  };
  std::vector<Frame> stack;

  for (std::size_t root = 0; root < n; ++root) {
    if (color[root] != Color::white) continue;
    stack.push_back({root, 0});
    color[root] = Color::grey;
    path.push_back(root);
    while (!stack.empty()) {
      auto& top = stack.back();
      const auto& succ = g.successors(top.node);
      if (top.next == succ.size()) {
        color[top.node] = Color::black;
        path.pop_back();
        stack.pop_back();
        continue;
      }
      const auto v = succ[top.next++];
      if (color[v] == Color::grey) {
        auto from = std::find(path.begin(), path.end(), v);
        std::vector<std::size_t> cycle(from, path.end());
        cycle.push_back(v);
        return cycle;
      }
      if (color[v] == Color::white) {
        color[v] = Color::grey;
        path.push_back(v);
        stack.push_back({v, 0});
      }
    }
  }
  return {};
}

}  // namespace detail

inline AcyclicityReport analyze_acyclicity(const AssociatedGraph& g) {
  AcyclicityReport report;
  report.witness_cycle = detail::find_cycle(g);
  if (!report.witness_cycle.empty()) {
    report.acyclic = false;
    return report;
  }

  // Kahn order, then longest path by relaxation along it.
  const auto n = g.node_count();
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (auto j : g.successors(i)) ++indegree[j];
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) order.push_back(i);
  for (std::size_t head = 0; head < order.size(); ++head)
    for (auto j : g.successors(order[head]))
      if (--indegree[j] == 0) order.push_back(j);

  std::vector<std::size_t> depth(n, 0);
  for (auto i : order)
    for (auto j : g.successors(i)) depth[j] = std::max(depth[j], depth[i] + 1);
  report.longest_path_length = n == 0 ? 0 : *std::max_element(depth.begin(), depth.end());
  return report;
}

// Raised when x = U ⊗ x ⊕ v has no unique bounded solution.
class CyclicSystem : public std::runtime_error {
 public:
  explicit CyclicSystem(std::vector<std::size_t> cycle, const std::string& what = "max-plus: associated graph has a circuit")
      : std::runtime_error(what), cycle_(std::move(cycle)) {}
  const std::vector<std::size_t>& cycle() const noexcept { return cycle_; }

 private:
  std::vector<std::size_t> cycle_;
};

// Raised when U has a finite entry that is not strictly positive.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// (E ⊕ U)^depth ⊗ v, for a caller that already knows the longest path length.
template <TimeCarrier T>
Vector<T> solve_implicit(const Matrix<T>& u, const Vector<T>& v, std::size_t depth) {
  if (!u.is_square()) throw ShapeError("solve_implicit: U must be square");
  if (v.size() != u.rows()) throw ShapeError("solve_implicit: v length differs from U");
  return power(Matrix<T>::identity(u.rows()) + u, depth) * v;
}

// Unique bounded solution of x = U ⊗ x ⊕ v, for U with entries positive or ε
// and an acyclic associated graph.
template <TimeCarrier T>
Vector<T> solve_implicit(const Matrix<T>& u, const Vector<T>& v) {
  if (!u.is_square()) throw ShapeError("solve_implicit: U must be square");
  if (v.size() != u.rows()) throw ShapeError("solve_implicit: v length differs from U");
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t j = 0; j < u.cols(); ++j)
      if (u(i, j).is_finite() && !(u(i, j).value() > T{0}))
        throw PreconditionError("solve_implicit: U has a finite entry that is not positive");
  const auto report = analyze_acyclicity(associated_graph(u));
  if (!report.acyclic) throw CyclicSystem(report.witness_cycle);
  return solve_implicit(u, v, report.longest_path_length);
}

}  // namespace mpnet
