#pragma once

#include "cellwork/errors.hpp"
#include "cellwork/integer.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace cellwork {

using IntVector = std::vector<Integer>;

/// Dense integer matrix, row-major, exact arithmetic.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
      throw InputError("IntMatrix: " + std::to_string(data_.size()) + " entries for a " + std::to_string(rows_) +
                       "x" + std::to_string(cols_) + " matrix");
  }

  /// Row-list literal. An empty list gives 0x0; use the sized constructor for n x 0 or 0 x n.
  static IntMatrix from_rows(std::initializer_list<std::initializer_list<Integer>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<Integer> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
      if (row.size() != c) throw InputError("IntMatrix::from_rows: ragged rows");
      data.insert(data.end(), row.begin(), row.end());
    }
    return IntMatrix(r, c, std::move(data));
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix diagonal(std::size_t rows, std::size_t cols, const IntVector& diag) {
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < diag.size() && i < rows && i < cols; ++i) m(i, i) = diag[i];
    return m;
  }

  static IntMatrix column(const IntVector& v) { return IntMatrix(v.size(), 1, v); }

  static IntMatrix from_columns(std::size_t rows, const std::vector<IntVector>& columns) {
    IntMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) throw InputError("IntMatrix::from_columns: column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<Integer>& entries() const noexcept { return data_; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntVector column_at(std::size_t j) const {
    IntVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  IntVector row_at(std::size_t i) const {
    return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x.is_zero(); });
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Rows [begin, end).
  IntMatrix row_range(std::size_t begin, std::size_t end) const {
    IntMatrix m(end - begin, cols_);
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i - begin, j) = (*this)(i, j);
    return m;
  }

  /// Columns [begin, end).
  IntMatrix col_range(std::size_t begin, std::size_t end) const {
    IntMatrix m(rows_, end - begin);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = begin; j < end; ++j) m(i, j - begin) = (*this)(i, j);
    return m;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_)
      throw InputError("IntMatrix product: " + a.shape() + " times " + b.shape());
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Integer& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  IntVector apply(const IntVector& x) const {
    if (x.size() != cols_) throw InputError("IntMatrix::apply: vector length mismatch");
    IntVector y(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!x[j].is_zero()) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    a.require_same_shape(b, "sum");
    IntMatrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
    return c;
  }
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
    a.require_same_shape(b, "difference");
    IntMatrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
    return c;
  }
  IntMatrix operator-() const {
    IntMatrix c = *this;
    for (auto& x : c.data_) x = -x;
    return c;
  }
  friend IntMatrix operator*(const Integer& s, const IntMatrix& a) {
    IntMatrix c = a;
    for (auto& x : c.data_) x *= s;
    return c;
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void require_same_shape(const IntMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw InputError(std::string("IntMatrix ") + op + ": " + shape() + " vs " + o.shape());
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// [a | b]
inline IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw InputError("hstack: row counts " + a.shape() + " vs " + b.shape());
  IntMatrix m(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  return m;
}

/// [a ; b]
inline IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.cols()) throw InputError("vstack: column counts " + a.shape() + " vs " + b.shape());
  IntMatrix m(a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, j) = b(i, j);
  return m;
}

inline IntMatrix block_diag(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

/// s = u * input * v with u, v unimodular and s in Smith normal form.
/// u_inv and v_inv are filled only when requested.
struct SnfResult {
  IntMatrix u;
  IntMatrix s;
  IntMatrix v;
  IntMatrix u_inv;
  IntMatrix v_inv;

  /// min(rows, cols) diagonal entries d_1 | d_2 | ..., all >= 0.
  IntVector diagonal() const {
    IntVector d(std::min(s.rows(), s.cols()));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = s(i, i);
    return d;
  }
  std::size_t rank() const {
    std::size_t r = 0;
    while (r < std::min(s.rows(), s.cols()) && !s(r, r).is_zero()) ++r;
    return r;
  }
};

namespace detail {

// Scalar adaptors so one elimination kernel serves both int64 (overflow
// checked, bails out) and Integer (exact, never overflows).
struct Overflow {};

inline bool is_zero(std::int64_t x) noexcept { return x == 0; }
inline bool is_zero(const Integer& x) noexcept { return x.is_zero(); }
inline bool is_negative(std::int64_t x) noexcept { return x < 0; }
inline bool is_negative(const Integer& x) noexcept { return x.sign() < 0; }

inline int compare_magnitude(std::int64_t a, std::int64_t b) noexcept {
  const std::uint64_t x = a < 0 ? 0 - static_cast<std::uint64_t>(a) : static_cast<std::uint64_t>(a);
  const std::uint64_t y = b < 0 ? 0 - static_cast<std::uint64_t>(b) : static_cast<std::uint64_t>(b);
  return (x > y) - (x < y);
}
inline int compare_magnitude(const Integer& a, const Integer& b) { return compare_abs(a, b); }

inline std::int64_t quotient(std::int64_t a, std::int64_t b) {
  if (b == -1) {
    if (a == std::numeric_limits<std::int64_t>::min()) throw Overflow{};
    return -a;
  }
  return a / b;
}
inline Integer quotient(const Integer& a, const Integer& b) { return a / b; }

inline bool is_unit(std::int64_t x) noexcept { return x == 1 || x == -1; }
inline bool is_unit(const Integer& x) noexcept { return x == Integer(1) || x == Integer(-1); }

inline bool divisible(std::int64_t d, std::int64_t a) noexcept { return d == -1 || a % d == 0; }
inline bool divisible(const Integer& d, const Integer& a) { return divides(d, a); }

inline void sub_mul(std::int64_t& a, std::int64_t q, std::int64_t b) {
  std::int64_t p;
  if (__builtin_mul_overflow(q, b, &p) || __builtin_sub_overflow(a, p, &a)) throw Overflow{};
}
inline void sub_mul(Integer& a, const Integer& q, const Integer& b) { a.sub_mul(q, b); }

inline void add_to(std::int64_t& a, std::int64_t b) {
  if (__builtin_add_overflow(a, b, &a)) throw Overflow{};
}
inline void add_to(Integer& a, const Integer& b) { a += b; }
inline void sub_from(std::int64_t& a, std::int64_t b) {
  if (__builtin_sub_overflow(a, b, &a)) throw Overflow{};
}
inline void sub_from(Integer& a, const Integer& b) { a -= b; }
inline void negate(std::int64_t& a) {
  if (a == std::numeric_limits<std::int64_t>::min()) throw Overflow{};
  a = -a;
}
inline void negate(Integer& a) { a = -a; }

template <class T>
class SnfKernel {
 public:
  template <class Source>
  SnfKernel(std::size_t rows, std::size_t cols, const Source* entries, bool with_inverses, bool track = true)
      : rows_(rows), cols_(cols), inv_(with_inverses && track), track_(track) {
    // One buffer holds s, u, v and optionally u_inv, v_inv.
    const std::size_t ns = rows * cols, nu = track ? rows * rows : 0, nv = track ? cols * cols : 0;
    buf_.assign(ns + (nu + nv) * (inv_ ? 2 : 1), T(0));
    s_ = buf_.data();
    u_ = s_ + ns;
    v_ = u_ + nu;
    ui_ = v_ + nv;
    vi_ = ui_ + (inv_ ? nu : 0);
    for (std::size_t k = 0; k < ns; ++k) {
      if constexpr (std::is_same_v<T, Source>)
        s_[k] = entries[k];
      else
        s_[k] = *entries[k].to_int64();
    }
    if (track_) {
      for (std::size_t i = 0; i < rows; ++i) U(i, i) = T(1);
      for (std::size_t i = 0; i < cols; ++i) V(i, i) = T(1);
    }
    if (inv_) {
      for (std::size_t i = 0; i < rows; ++i) UI(i, i) = T(1);
      for (std::size_t i = 0; i < cols; ++i) VI(i, i) = T(1);
    }
  }

  void run() {
    const std::size_t n = std::min(rows_, cols_);
    for (std::size_t t = 0; t < n; ++t) {
      if (!move_smallest_to_pivot(t)) break;
      while (true) {
        eliminate(t);
        if (bring_remainder_to_pivot(t)) continue;
        if (fix_divisibility(t)) continue;
        break;
      }
      if (is_negative(S(t, t))) negate_row(t);
    }
  }

  IntVector diagonal() const {
    IntVector d(std::min(rows_, cols_));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = s_[i * cols_ + i];
    return d;
  }

  SnfResult result() const {
    SnfResult r;
    r.s = to_matrix(s_, rows_, cols_);
    r.u = to_matrix(u_, rows_, rows_);
    r.v = to_matrix(v_, cols_, cols_);
    if (inv_) {
      r.u_inv = to_matrix(ui_, rows_, rows_);
      r.v_inv = to_matrix(vi_, cols_, cols_);
    }
    return r;
  }

 private:
  static IntMatrix to_matrix(const T* m, std::size_t r, std::size_t c) {
    return IntMatrix(r, c, std::vector<Integer>(m, m + r * c));
  }

  T& S(std::size_t i, std::size_t j) { return s_[i * cols_ + j]; }
  T& U(std::size_t i, std::size_t j) { return u_[i * rows_ + j]; }
  T& V(std::size_t i, std::size_t j) { return v_[i * cols_ + j]; }
  T& UI(std::size_t i, std::size_t j) { return ui_[i * rows_ + j]; }
  T& VI(std::size_t i, std::size_t j) { return vi_[i * cols_ + j]; }

  // Smallest |entry| in the active block, ties broken row-major.
  bool move_smallest_to_pivot(std::size_t t) {
    std::size_t bi = 0, bj = 0;
    const T* best = nullptr;
    for (std::size_t i = t; i < rows_; ++i)
      for (std::size_t j = t; j < cols_; ++j) {
        const T& x = S(i, j);
        if (is_zero(x)) continue;
        if (!best || compare_magnitude(x, *best) < 0) {
          best = &x;
          bi = i;
          bj = j;
        }
      }
    if (!best) return false;
    swap_rows(t, bi);
    swap_cols(t, bj);
    return true;
  }

  void eliminate(std::size_t t) {
    for (std::size_t i = t + 1; i < rows_; ++i) {
      if (is_zero(S(i, t))) continue;
      const T q = quotient(S(i, t), S(t, t));
      if (!is_zero(q)) row_sub(i, t, q);
    }
    for (std::size_t j = t + 1; j < cols_; ++j) {
      if (is_zero(S(t, j))) continue;
      const T q = quotient(S(t, j), S(t, t));
      if (!is_zero(q)) col_sub(j, t, q);
    }
  }

  bool bring_remainder_to_pivot(std::size_t t) {
    std::size_t best_idx = 0;
    bool in_column = false;
    const T* best = nullptr;
    for (std::size_t i = t + 1; i < rows_; ++i) {
      const T& x = S(i, t);
      if (is_zero(x)) continue;
      if (!best || compare_magnitude(x, *best) < 0) {
        best = &x;
        best_idx = i;
        in_column = true;
      }
    }
    for (std::size_t j = t + 1; j < cols_; ++j) {
      const T& x = S(t, j);
      if (is_zero(x)) continue;
      if (!best || compare_magnitude(x, *best) < 0) {
        best = &x;
        best_idx = j;
        in_column = false;
      }
    }
    if (!best) return false;
    if (in_column)
      swap_rows(t, best_idx);
    else
      swap_cols(t, best_idx);
    return true;
  }

  bool fix_divisibility(std::size_t t) {
    const T& p = S(t, t);
    if (is_unit(p)) return false;
    for (std::size_t i = t + 1; i < rows_; ++i)
      for (std::size_t j = t + 1; j < cols_; ++j)
        if (!divisible(p, S(i, j))) {
          row_add(t, i);
          return true;
        }
    return false;
  }

  // row i -= q * row t
  void row_sub(std::size_t i, std::size_t t, const T& q) {
    for (std::size_t k = t; k < cols_; ++k)
      if (!is_zero(S(t, k))) sub_mul(S(i, k), q, S(t, k));
    if (track_)
      for (std::size_t k = 0; k < rows_; ++k)
        if (!is_zero(U(t, k))) sub_mul(U(i, k), q, U(t, k));
    if (inv_) {
      T mq = q;
      negate(mq);
      for (std::size_t k = 0; k < rows_; ++k)
        if (!is_zero(UI(k, i))) sub_mul(UI(k, t), mq, UI(k, i));
    }
  }

  // col j -= q * col t
  void col_sub(std::size_t j, std::size_t t, const T& q) {
    for (std::size_t k = t; k < rows_; ++k)
      if (!is_zero(S(k, t))) sub_mul(S(k, j), q, S(k, t));
    if (track_)
      for (std::size_t k = 0; k < cols_; ++k)
        if (!is_zero(V(k, t))) sub_mul(V(k, j), q, V(k, t));
    if (inv_) {
      T mq = q;
      negate(mq);
      for (std::size_t k = 0; k < cols_; ++k)
        if (!is_zero(VI(j, k))) sub_mul(VI(t, k), mq, VI(j, k));
    }
  }

  // row t += row i
  void row_add(std::size_t t, std::size_t i) {
    for (std::size_t k = 0; k < cols_; ++k) add_to(S(t, k), S(i, k));
    if (track_)
      for (std::size_t k = 0; k < rows_; ++k) add_to(U(t, k), U(i, k));
    if (inv_)
      for (std::size_t k = 0; k < rows_; ++k) sub_from(UI(k, i), UI(k, t));
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t k = 0; k < cols_; ++k) std::swap(S(a, k), S(b, k));
    if (track_)
      for (std::size_t k = 0; k < rows_; ++k) std::swap(U(a, k), U(b, k));
    if (inv_)
      for (std::size_t k = 0; k < rows_; ++k) std::swap(UI(k, a), UI(k, b));
  }

  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t k = 0; k < rows_; ++k) std::swap(S(k, a), S(k, b));
    if (track_)
      for (std::size_t k = 0; k < cols_; ++k) std::swap(V(k, a), V(k, b));
    if (inv_)
      for (std::size_t k = 0; k < cols_; ++k) std::swap(VI(a, k), VI(b, k));
  }

  void negate_row(std::size_t t) {
    for (std::size_t k = 0; k < cols_; ++k) negate(S(t, k));
    if (track_)
      for (std::size_t k = 0; k < rows_; ++k) negate(U(t, k));
    if (inv_)
      for (std::size_t k = 0; k < rows_; ++k) negate(UI(k, t));
  }

  std::size_t rows_;
  std::size_t cols_;
  bool inv_;
  bool track_;
  std::vector<T> buf_;
  T *s_, *u_, *v_, *ui_, *vi_;
};

}  // namespace detail

/// Smith normal form by smallest-magnitude pivoting. Deterministic.
///
/// Runs an overflow-checked int64 pass first and repeats the identical pivot
/// sequence in exact arithmetic if any intermediate value leaves 64 bits, so
/// the result never depends on which pass finished.
inline SnfResult smith_normal_form(const IntMatrix& m, bool with_inverses = false) {
  const auto& e = m.entries();
  if (std::all_of(e.begin(), e.end(), [](const Integer& x) { return x.is_small(); })) {
    try {
      detail::SnfKernel<std::int64_t> kernel(m.rows(), m.cols(), e.data(), with_inverses);
      kernel.run();
      return kernel.result();
    } catch (const detail::Overflow&) {
    }
  }
  detail::SnfKernel<Integer> kernel(m.rows(), m.cols(), e.data(), with_inverses);
  kernel.run();
  return kernel.result();
}

/// Diagonal of smith_normal_form(m) without building the transforms.
inline IntVector invariant_factors(const IntMatrix& m) {
  const auto& e = m.entries();
  if (std::all_of(e.begin(), e.end(), [](const Integer& x) { return x.is_small(); })) {
    try {
      detail::SnfKernel<std::int64_t> kernel(m.rows(), m.cols(), e.data(), false, false);
      kernel.run();
      return kernel.diagonal();
    } catch (const detail::Overflow&) {
    }
  }
  detail::SnfKernel<Integer> kernel(m.rows(), m.cols(), e.data(), false, false);
  kernel.run();
  return kernel.diagonal();
}

/// Reusable solver for m * x = b against a fixed m.
class SpanSolver {
 public:
  explicit SpanSolver(const IntMatrix& m, bool with_inverses = false)
      : snf_(smith_normal_form(m, with_inverses)), rank_(snf_.rank()) {}

  std::size_t rows() const noexcept { return snf_.s.rows(); }
  std::size_t cols() const noexcept { return snf_.s.cols(); }
  std::size_t rank() const noexcept { return rank_; }
  const SnfResult& snf() const noexcept { return snf_; }

  std::optional<IntVector> solve(const IntVector& b) const {
    if (b.size() != rows())
      throw InputError("solve: right-hand side has length " + std::to_string(b.size()) + ", expected " +
                       std::to_string(rows()));
    IntVector y = snf_.u.apply(b);
    IntVector z(cols());
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (i < rank_) {
        const Integer& d = snf_.s(i, i);
        if (!divides(d, y[i])) return std::nullopt;
        z[i] = y[i] / d;
      } else if (!y[i].is_zero()) {
        return std::nullopt;
      }
    }
    return snf_.v.apply(z);
  }

  bool contains(const IntVector& b) const {
    if (b.size() != rows())
      throw InputError("in_span: vector has length " + std::to_string(b.size()) + ", expected " +
                       std::to_string(rows()));
    IntVector y = snf_.u.apply(b);
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (i < rank_) {
        if (!divides(snf_.s(i, i), y[i])) return false;
      } else if (!y[i].is_zero()) {
        return false;
      }
    }
    return true;
  }

  /// Every column of b lies in the span.
  bool contains_columns(const IntMatrix& b) const {
    for (std::size_t j = 0; j < b.cols(); ++j)
      if (!contains(b.column_at(j))) return false;
    return true;
  }

  /// Column-wise solve; nullopt if any column is outside the span.
  std::optional<IntMatrix> solve_columns(const IntMatrix& b) const {
    IntMatrix x(cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
      auto col = solve(b.column_at(j));
      if (!col) return std::nullopt;
      for (std::size_t i = 0; i < cols(); ++i) x(i, j) = std::move((*col)[i]);
    }
    return x;
  }

 private:
  SnfResult snf_;
  std::size_t rank_;
};

/// Columns form a lattice basis of {x : m x = 0}.
inline IntMatrix kernel_basis(const IntMatrix& m) {
  SnfResult r = smith_normal_form(m);
  return r.v.col_range(r.rank(), m.cols());
}

inline std::optional<IntVector> solve(const IntMatrix& m, const IntVector& b) { return SpanSolver(m).solve(b); }

inline bool in_span(const IntMatrix& m, const IntVector& v) { return SpanSolver(m).contains(v); }

/// Lattice basis (as columns) of the integer column span of m.
inline IntMatrix image_basis(const IntMatrix& m) {
  SnfResult r = smith_normal_form(m, true);
  const std::size_t k = r.rank();
  IntMatrix b(m.rows(), k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) b(i, j) = r.u_inv(i, j) * r.s(j, j);
  return b;
}

inline std::size_t rank(const IntMatrix& m) { return smith_normal_form(m).rank(); }

/// Fraction-free Bareiss elimination.
inline Integer determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw InputError("determinant of non-square " + m.shape() + " matrix");
  const std::size_t n = m.rows();
  if (n == 0) return Integer(1);
  IntMatrix a = m;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k).is_zero()) {
      std::size_t p = k + 1;
      while (p < n && a(p, k).is_zero()) ++p;
      if (p == n) return Integer(0);
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

inline bool is_unimodular(const IntMatrix& m) {
  if (m.rows() != m.cols()) return false;
  return abs(determinant(m)) == Integer(1);
}

}  // namespace cellwork
