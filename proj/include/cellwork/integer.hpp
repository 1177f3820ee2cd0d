#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <concepts>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cellwork {

/// Exact integer with an int64 fast path.
///
/// Values that fit in 64 bits are held inline; any operation whose result
/// overflows transparently promotes to an arbitrary-precision representation.
/// Results that fit back into 64 bits are always demoted again, so two equal
/// values have identical internal state.
class Integer {
 public:
  using Big = boost::multiprecision::cpp_int;

  Integer() noexcept = default;
  template <std::integral T>
  Integer(T v) noexcept : small_(static_cast<std::int64_t>(v)) {}  // NOLINT: implicit by intent
  explicit Integer(const Big& v) { assign_big(Big(v)); }
  explicit Integer(Big&& v) { assign_big(std::move(v)); }

  Integer(const Integer& o) : small_(o.small_), big_(o.big_ ? std::make_unique<Big>(*o.big_) : nullptr) {}
  Integer(Integer&&) noexcept = default;
  Integer& operator=(const Integer& o) {
    if (this != &o) {
      small_ = o.small_;
      big_ = o.big_ ? std::make_unique<Big>(*o.big_) : nullptr;
    }
    return *this;
  }
  Integer& operator=(Integer&&) noexcept = default;
  ~Integer() = default;

  static Integer parse(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty integer literal");
    std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (i == text.size()) throw std::invalid_argument("malformed integer literal '" + std::string(text) + "'");
    for (std::size_t k = i; k < text.size(); ++k) {
      if (text[k] < '0' || text[k] > '9')
        throw std::invalid_argument("malformed integer literal '" + std::string(text) + "'");
    }
    std::string digits(text[0] == '+' ? text.substr(1) : text);
    return Integer(Big(digits));
  }

  bool is_small() const noexcept { return !big_; }
  bool is_zero() const noexcept { return !big_ && small_ == 0; }
  int sign() const noexcept {
    if (big_) return big_->sign();
    return (small_ > 0) - (small_ < 0);
  }
  std::optional<std::int64_t> to_int64() const noexcept {
    if (big_) return std::nullopt;
    return small_;
  }
  Big to_big() const { return big_ ? *big_ : Big(small_); }
  std::string str() const { return big_ ? big_->str() : std::to_string(small_); }

  friend Integer operator+(const Integer& a, const Integer& b) {
    std::int64_t r;
    if (!a.big_ && !b.big_ && !__builtin_add_overflow(a.small_, b.small_, &r)) return Integer(r);
    return Integer(Big(a.to_big() + b.to_big()));
  }
  friend Integer operator-(const Integer& a, const Integer& b) {
    std::int64_t r;
    if (!a.big_ && !b.big_ && !__builtin_sub_overflow(a.small_, b.small_, &r)) return Integer(r);
    return Integer(Big(a.to_big() - b.to_big()));
  }
  friend Integer operator*(const Integer& a, const Integer& b) {
    std::int64_t r;
    if (!a.big_ && !b.big_ && !__builtin_mul_overflow(a.small_, b.small_, &r)) return Integer(r);
    return Integer(Big(a.to_big() * b.to_big()));
  }
  /// Truncating division (rounds toward zero), matching C++ semantics.
  friend Integer operator/(const Integer& a, const Integer& b) {
    if (b.is_zero()) throw std::domain_error("Integer division by zero");
    if (!a.big_ && !b.big_ && !(a.small_ == kMin && b.small_ == -1)) return Integer(a.small_ / b.small_);
    return Integer(Big(a.to_big() / b.to_big()));
  }
  friend Integer operator%(const Integer& a, const Integer& b) {
    if (b.is_zero()) throw std::domain_error("Integer modulo by zero");
    if (!a.big_ && !b.big_) {
      if (b.small_ == -1) return Integer(0);
      return Integer(a.small_ % b.small_);
    }
    return Integer(Big(a.to_big() % b.to_big()));
  }
  Integer operator-() const {
    if (!big_ && small_ != kMin) return Integer(-small_);
    return Integer(Big(-to_big()));
  }

  Integer& operator+=(const Integer& o) { return *this = *this + o; }
  Integer& operator-=(const Integer& o) { return *this = *this - o; }
  Integer& operator*=(const Integer& o) { return *this = *this * o; }

  /// this -= q * o, the inner step of every elimination loop.
  void sub_mul(const Integer& q, const Integer& o) {
    std::int64_t p, r;
    if (!big_ && !q.big_ && !o.big_ && !__builtin_mul_overflow(q.small_, o.small_, &p) &&
        !__builtin_sub_overflow(small_, p, &r)) {
      small_ = r;
      return;
    }
    *this = Integer(Big(to_big() - q.to_big() * o.to_big()));
  }

  friend bool operator==(const Integer& a, const Integer& b) noexcept {
    if (!a.big_ && !b.big_) return a.small_ == b.small_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // normalized: a big value never fits in int64
  }
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
    const int c = a.to_big().compare(b.to_big());
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// Three-way comparison of |a| and |b| without materializing either.
  friend int compare_abs(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_ && a.small_ != kMin && b.small_ != kMin) {
      const std::int64_t x = a.small_ < 0 ? -a.small_ : a.small_;
      const std::int64_t y = b.small_ < 0 ? -b.small_ : b.small_;
      return (x > y) - (x < y);
    }
    const Big x = boost::multiprecision::abs(a.to_big());
    const Big y = boost::multiprecision::abs(b.to_big());
    return x.compare(y);
  }

  friend std::ostream& operator<<(std::ostream& os, const Integer& v) { return os << v.str(); }

 private:
  static constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();

  void assign_big(Big&& v) {
    if (v >= Big(kMin) && v <= Big(std::numeric_limits<std::int64_t>::max())) {
      small_ = static_cast<std::int64_t>(v);
      big_.reset();
    } else {
      small_ = 0;
      big_ = std::make_unique<Big>(std::move(v));
    }
  }

  std::int64_t small_ = 0;
  std::unique_ptr<Big> big_;
};

inline Integer abs(const Integer& v) { return v.sign() < 0 ? -v : v; }

inline Integer gcd(Integer a, Integer b) {
  a = abs(a);
  b = abs(b);
  while (!b.is_zero()) {
    Integer r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a.is_zero() || b.is_zero()) return Integer(0);
  return abs(a / gcd(a, b) * b);
}

/// Floor division; the remainder a - q*b has the sign of b.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if (!(q * b == a) && ((a.sign() < 0) != (b.sign() < 0))) q -= 1;
  return q;
}

/// Least nonnegative residue of a modulo |m| (m != 0).
inline Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r.sign() < 0) r += abs(m);
  return r;
}

inline bool divides(const Integer& d, const Integer& a) {
  if (d.is_zero()) return a.is_zero();
  return (a % d).is_zero();
}

}  // namespace cellwork

template <>
struct std::hash<cellwork::Integer> {
  std::size_t operator()(const cellwork::Integer& v) const noexcept {
    if (auto s = v.to_int64()) return std::hash<std::int64_t>{}(*s);
    return std::hash<std::string>{}(v.str());
  }
};
