#pragma once

// Exact non-negative counts with 128-bit range and checked arithmetic.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tdcount/errors.hpp"

namespace tdc {

class Count {
 public:
  using Raw = unsigned __int128;

  constexpr Count() = default;
  constexpr Count(std::uint64_t v) : value_(v) {}  // NOLINT: implicit by intent

  static constexpr Count from_raw(Raw v) {
    Count c;
    c.value_ = v;
    return c;
  }

  constexpr Raw raw() const { return value_; }

  bool fits_u64() const { return value_ <= UINT64_MAX; }
  std::uint64_t to_u64() const;

  std::string to_string() const;
  static Count parse(std::string_view text);

  friend Count operator+(Count x, Count y) {
    Raw out;
    if (__builtin_add_overflow(x.value_, y.value_, &out)) throw OverflowError("count addition overflow");
    return from_raw(out);
  }
  friend Count operator-(Count x, Count y) {
    if (y.value_ > x.value_) throw OverflowError("count subtraction underflow");
    return from_raw(x.value_ - y.value_);
  }
  friend Count operator*(Count x, Count y) {
    Raw out;
    if (__builtin_mul_overflow(x.value_, y.value_, &out)) throw OverflowError("count multiplication overflow");
    return from_raw(out);
  }
  // Exact division; throws if y does not divide x.
  friend Count exact_div(Count x, Count y);

  Count& operator+=(Count y) { return *this = *this + y; }
  Count& operator-=(Count y) { return *this = *this - y; }
  Count& operator*=(Count y) { return *this = *this * y; }

  friend constexpr bool operator==(Count x, Count y) { return x.value_ == y.value_; }
  friend constexpr std::strong_ordering operator<=>(Count x, Count y) { return x.value_ <=> y.value_; }

  friend std::ostream& operator<<(std::ostream& os, Count c) { return os << c.to_string(); }

 private:
  Raw value_ = 0;
};

/// Binomial coefficient C(n, k); zero when k > n.
Count binomial(std::uint64_t n, std::uint64_t k);

/// Multinomial (sum parts)! / prod(parts!).
Count multinomial(std::span<const std::uint64_t> parts);
inline Count multinomial(std::initializer_list<std::uint64_t> parts) {
  return multinomial(std::span<const std::uint64_t>(parts.begin(), parts.size()));
}

/// 4^k - (2k + 1)
Count evolution_factor(unsigned k);

}  // namespace tdc
