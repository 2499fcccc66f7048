#include "tdcount/errors.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "tdcount/count.hpp"

namespace tdc {

ParseError::ParseError(const std::string& what, std::size_t pos)
    : Error(what + " (at offset " + std::to_string(pos) + ")"), position(pos) {}

std::uint64_t Count::to_u64() const {
  if (!fits_u64()) throw OverflowError("count exceeds 64 bits: " + to_string());
  return static_cast<std::uint64_t>(value_);
}

std::string Count::to_string() const {
  if (value_ == 0) return "0";
  std::string out;
  Raw v = value_;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Count Count::parse(std::string_view text) {
  if (text.empty()) throw ParseError("empty count", 0);
  Count out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char ch = text[i];
    if (ch == ',' || ch == '_') continue;
    if (ch < '0' || ch > '9') throw ParseError("bad digit in count", i);
    out = out * Count(10) + Count(static_cast<std::uint64_t>(ch - '0'));
  }
  return out;
}

Count exact_div(Count x, Count y) {
  if (y.value_ == 0 || x.value_ % y.value_ != 0) throw OverflowError("inexact count division");
  return Count::from_raw(x.value_ / y.value_);
}

Count binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return Count(0);
  k = std::min(k, n - k);
  // Running product stays an integer: C(n-k+i, i) at step i.
  Count::Raw acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    Count::Raw num = n - k + i;
    Count::Raw g = std::gcd(acc, static_cast<Count::Raw>(i));
    Count::Raw den = i / g;
    Count::Raw reduced = acc / g;
    Count::Raw num_r = num / den;  // den | num * reduced and gcd(reduced, den) = 1
    Count::Raw out;
    if (__builtin_mul_overflow(reduced, num_r, &out)) throw OverflowError("binomial overflow");
    acc = out;
  }
  return Count::from_raw(acc);
}

Count multinomial(std::span<const std::uint64_t> parts) {
  Count out(1);
  std::uint64_t total = 0;
  for (std::uint64_t p : parts) {
    total += p;
    out *= binomial(total, p);
  }
  return out;
}

Count evolution_factor(unsigned k) {
  Count pow4(1);
  for (unsigned i = 0; i < k; ++i) pow4 *= Count(4);
  return pow4 - Count(2ULL * k + 1);
}

}  // namespace tdc
