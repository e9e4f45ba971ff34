#pragma once

// Unsigned arbitrary-precision integers on 64-bit limbs, little-endian.
// Reduced denominators of reciprocal sums grow to thousands of bits at
// desk scale; schoolbook multiplication and Knuth-style long division are
// comfortably fast there, so no asymptotically fancier kernels are used.

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "apfree/errors.hpp"

namespace apfree {

class Natural {
 public:
  using limb = std::uint64_t;

  Natural() = default;  // zero

  Natural(limb v) {  // NOLINT(google-explicit-constructor): numeric literal ergonomics
    if (v != 0) limbs_.push_back(v);
  }

  [[nodiscard]] bool is_zero() const noexcept { return limbs_.empty(); }
  [[nodiscard]] bool is_one() const noexcept { return limbs_.size() == 1 && limbs_[0] == 1; }
  [[nodiscard]] bool is_even() const noexcept { return limbs_.empty() || (limbs_[0] & 1) == 0; }

  [[nodiscard]] std::size_t limb_count() const noexcept { return limbs_.size(); }

  [[nodiscard]] std::size_t bit_width() const noexcept {
    if (limbs_.empty()) return 0;
    return 64 * (limbs_.size() - 1) +
           static_cast<std::size_t>(std::bit_width(limbs_.back()));
  }

  [[nodiscard]] bool fits_u64() const noexcept { return limbs_.size() <= 1; }

  [[nodiscard]] limb to_u64() const {
    if (!fits_u64()) throw OverflowError("value exceeds 64 bits");
    return limbs_.empty() ? 0 : limbs_[0];
  }

  [[nodiscard]] static int compare(const Natural& a, const Natural& b) noexcept {
    if (a.limbs_.size() != b.limbs_.size())
      return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (std::size_t i = a.limbs_.size(); i-- > 0;) {
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    }
    return 0;
  }

  friend bool operator==(const Natural& a, const Natural& b) noexcept {
    return a.limbs_ == b.limbs_;
  }
  friend std::strong_ordering operator<=>(const Natural& a, const Natural& b) noexcept {
    const int c = compare(a, b);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  Natural& operator+=(const Natural& o) {
    const std::size_t n = std::max(limbs_.size(), o.limbs_.size());
    limbs_.resize(n, 0);
    u128 carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
      carry += limbs_[i];
      if (i < o.limbs_.size()) carry += o.limbs_[i];
      limbs_[i] = static_cast<limb>(carry);
      carry >>= 64;
    }
    if (carry != 0) limbs_.push_back(static_cast<limb>(carry));
    return *this;
  }

  friend Natural operator+(Natural a, const Natural& b) { return a += b; }

  /// Requires *this >= o.
  Natural& operator-=(const Natural& o) {
    if (compare(*this, o) < 0)
      throw std::logic_error("Natural subtraction would go negative");
    limb borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      const u128 rhs = static_cast<u128>(i < o.limbs_.size() ? o.limbs_[i] : 0) + borrow;
      const u128 d = static_cast<u128>(limbs_[i]) - rhs;
      limbs_[i] = static_cast<limb>(d);
      borrow = (d >> 64) != 0 ? 1 : 0;
      if (i >= o.limbs_.size() && borrow == 0) break;
    }
    trim();
    return *this;
  }

  friend Natural operator-(Natural a, const Natural& b) { return a -= b; }

  friend Natural operator*(const Natural& a, const Natural& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Natural r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
      limb carry = 0;
      for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
        const u128 cur = static_cast<u128>(r.limbs_[i + j]) +
                         static_cast<u128>(a.limbs_[i]) * b.limbs_[j] + carry;
        r.limbs_[i + j] = static_cast<limb>(cur);
        carry = static_cast<limb>(cur >> 64);
      }
      r.limbs_[i + b.limbs_.size()] = carry;
    }
    r.trim();
    return r;
  }

  Natural& operator*=(const Natural& o) { return *this = *this * o; }

  Natural& mul_u64(limb m) {
    if (m == 0 || is_zero()) {
      limbs_.clear();
      return *this;
    }
    limb carry = 0;
    for (auto& l : limbs_) {
      const u128 cur = static_cast<u128>(l) * m + carry;
      l = static_cast<limb>(cur);
      carry = static_cast<limb>(cur >> 64);
    }
    if (carry != 0) limbs_.push_back(carry);
    return *this;
  }

  /// Quotient and remainder; den must be nonzero.
  [[nodiscard]] static std::pair<Natural, Natural> divmod(const Natural& num,
                                                          const Natural& den) {
    if (den.is_zero()) throw std::logic_error("division by zero");
    if (compare(num, den) < 0) return {Natural{}, num};
    if (den.limbs_.size() == 1) {
      auto [q, r] = divmod_u64(num, den.limbs_[0]);
      return {std::move(q), Natural{r}};
    }
    return divmod_knuth(num, den);
  }

  [[nodiscard]] static std::pair<Natural, limb> divmod_u64(const Natural& num, limb den) {
    if (den == 0) throw std::logic_error("division by zero");
    Natural q;
    q.limbs_.assign(num.limbs_.size(), 0);
    u128 rem = 0;
    for (std::size_t i = num.limbs_.size(); i-- > 0;) {
      const u128 cur = (rem << 64) | num.limbs_[i];
      q.limbs_[i] = static_cast<limb>(cur / den);
      rem = cur % den;
    }
    q.trim();
    return {std::move(q), static_cast<limb>(rem)};
  }

  friend Natural operator/(const Natural& a, const Natural& b) {
    return divmod(a, b).first;
  }
  friend Natural operator%(const Natural& a, const Natural& b) {
    return divmod(a, b).second;
  }

  Natural& shift_left(std::size_t bits) {
    if (is_zero() || bits == 0) return *this;
    const std::size_t whole = bits / 64, part = bits % 64;
    const std::size_t old = limbs_.size();
    limbs_.resize(old + whole + (part != 0 ? 1 : 0), 0);
    for (std::size_t i = old; i-- > 0;) {
      const limb v = limbs_[i];
      limbs_[i] = 0;
      if (part == 0) {
        limbs_[i + whole] = v;
      } else {
        limbs_[i + whole + 1] |= v >> (64 - part);
        limbs_[i + whole] |= v << part;
      }
    }
    trim();
    return *this;
  }

  Natural& shift_right(std::size_t bits) {
    const std::size_t whole = bits / 64, part = bits % 64;
    if (whole >= limbs_.size()) {
      limbs_.clear();
      return *this;
    }
    if (whole != 0) limbs_.erase(limbs_.begin(), limbs_.begin() + static_cast<std::ptrdiff_t>(whole));
    if (part != 0) {
      for (std::size_t i = 0; i < limbs_.size(); ++i) {
        limbs_[i] >>= part;
        if (i + 1 < limbs_.size()) limbs_[i] |= limbs_[i + 1] << (64 - part);
      }
    }
    trim();
    return *this;
  }

  [[nodiscard]] std::size_t trailing_zero_bits() const {
    if (is_zero()) return 0;
    std::size_t i = 0;
    while (limbs_[i] == 0) ++i;
    return 64 * i + static_cast<std::size_t>(std::countr_zero(limbs_[i]));
  }

  // Binary GCD; only shifts and subtraction, no division.
  [[nodiscard]] static Natural gcd(Natural a, Natural b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const std::size_t za = a.trailing_zero_bits();
    const std::size_t zb = b.trailing_zero_bits();
    const std::size_t common = std::min(za, zb);
    a.shift_right(za);
    b.shift_right(zb);
    while (true) {
      const int c = compare(a, b);
      if (c == 0) break;
      if (c < 0) a.limbs_.swap(b.limbs_);
      a -= b;  // even: both operands odd
      a.shift_right(a.trailing_zero_bits());
    }
    return a.shift_left(common);
  }

  [[nodiscard]] static Natural from_decimal(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty decimal string");
    Natural r;
    std::size_t i = 0;
    while (i < s.size()) {
      const std::size_t take = std::min<std::size_t>(19, s.size() - i);
      limb chunk = 0, pow = 1;
      for (std::size_t k = 0; k < take; ++k) {
        const char c = s[i + k];
        if (c < '0' || c > '9') throw std::invalid_argument("non-digit in decimal string");
        chunk = chunk * 10 + static_cast<limb>(c - '0');
        pow *= 10;
      }
      r.mul_u64(pow);
      r += Natural{chunk};
      i += take;
    }
    return r;
  }

  [[nodiscard]] std::string to_decimal() const {
    if (is_zero()) return "0";
    constexpr limb chunk_div = 10'000'000'000'000'000'000ULL;  // 10^19
    std::vector<limb> groups;
    Natural cur = *this;
    while (!cur.is_zero()) {
      auto [q, r] = divmod_u64(cur, chunk_div);
      groups.push_back(r);
      cur = std::move(q);
    }
    std::string out = std::to_string(groups.back());
    for (std::size_t i = groups.size() - 1; i-- > 0;) {
      std::string part = std::to_string(groups[i]);
      out.append(19 - part.size(), '0');
      out += part;
    }
    return out;
  }

  /// Value as m * 2^e with m in [0.5, 1); (0, 0) for zero.
  [[nodiscard]] std::pair<double, std::int64_t> to_double_exp() const {
    if (is_zero()) return {0.0, 0};
    const std::size_t bw = bit_width();
    // Top 64 bits of the value, MSB-aligned.
    std::uint64_t top;
    if (bw <= 64) {
      top = limbs_[0] << (64 - bw);
    } else {
      const std::size_t shift = bw - 64;
      Natural t = *this;
      t.shift_right(shift);
      top = t.limbs_[0];
    }
    return {std::ldexp(static_cast<double>(top), -64), static_cast<std::int64_t>(bw)};
  }

  [[nodiscard]] double to_double() const {
    const auto [m, e] = to_double_exp();
    return std::ldexp(m, static_cast<int>(e));
  }

 private:
  using u128 = unsigned __int128;

  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }

  // Knuth algorithm D; den has >= 2 limbs and num >= den.
  static std::pair<Natural, Natural> divmod_knuth(const Natural& num, const Natural& den) {
    const std::size_t n = den.limbs_.size();
    const std::size_t m = num.limbs_.size() - n;
    const int shift = std::countl_zero(den.limbs_.back());

    Natural vn = den;
    vn.shift_left(static_cast<std::size_t>(shift));
    Natural un = num;
    un.shift_left(static_cast<std::size_t>(shift));
    un.limbs_.resize(num.limbs_.size() + 1, 0);  // room for the extra high limb

    const auto& v = vn.limbs_;
    auto& u = un.limbs_;

    Natural q;
    q.limbs_.assign(m + 1, 0);

    for (std::size_t j = m + 1; j-- > 0;) {
      const u128 head = (static_cast<u128>(u[j + n]) << 64) | u[j + n - 1];
      u128 qhat = head / v[n - 1];
      u128 rhat = head % v[n - 1];
      constexpr u128 base = static_cast<u128>(1) << 64;
      while (qhat >= base ||
             qhat * v[n - 2] > ((rhat << 64) | u[j + n - 2])) {
        --qhat;
        rhat += v[n - 1];
        if (rhat >= base) break;
      }

      // Multiply-subtract qhat * v from u[j .. j+n].
      limb q64 = static_cast<limb>(qhat);
      limb mul_carry = 0, borrow = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const u128 p = static_cast<u128>(q64) * v[i] + mul_carry;
        mul_carry = static_cast<limb>(p >> 64);
        const u128 d = static_cast<u128>(u[j + i]) - static_cast<limb>(p) - borrow;
        u[j + i] = static_cast<limb>(d);
        borrow = (d >> 64) != 0 ? 1 : 0;
      }
      const u128 d = static_cast<u128>(u[j + n]) - mul_carry - borrow;
      u[j + n] = static_cast<limb>(d);

      if ((d >> 64) != 0) {  // qhat was one too large; add back
        --q64;
        limb carry = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const u128 s = static_cast<u128>(u[j + i]) + v[i] + carry;
          u[j + i] = static_cast<limb>(s);
          carry = static_cast<limb>(s >> 64);
        }
        u[j + n] += carry;
      }
      q.limbs_[j] = q64;
    }

    q.trim();
    un.limbs_.resize(n);
    un.trim();
    un.shift_right(static_cast<std::size_t>(shift));
    return {std::move(q), std::move(un)};
  }

  std::vector<limb> limbs_;
};

}  // namespace apfree
