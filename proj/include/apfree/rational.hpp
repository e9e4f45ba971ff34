#pragma once

// Exact rationals on Natural magnitudes with a sign, kept reduced at all
// times. Addition uses the split-gcd scheme so intermediates stay near the
// size of the reduced result.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "apfree/bigint.hpp"
#include "apfree/errors.hpp"

namespace apfree {

class Rational {
 public:
  Rational() : sign_(0), num_(), den_(1) {}

  Rational(std::int64_t v)  // NOLINT(google-explicit-constructor)
      : sign_(v == 0 ? 0 : (v < 0 ? -1 : 1)),
        num_(magnitude(v)),
        den_(1) {}

  Rational(std::int64_t num, std::int64_t den) : Rational() {
    if (den == 0) throw std::logic_error("rational with zero denominator");
    int s = 1;
    if (num < 0) s = -s;
    if (den < 0) s = -s;
    assign_reduced(s, Natural{magnitude(num)}, Natural{magnitude(den)});
  }

  [[nodiscard]] static Rational from_ratio(Natural num, Natural den, int sign = 1) {
    if (den.is_zero()) throw std::logic_error("rational with zero denominator");
    Rational r;
    r.assign_reduced(sign < 0 ? -1 : 1, std::move(num), std::move(den));
    return r;
  }

  [[nodiscard]] static Rational reciprocal_of(std::uint64_t n) {
    if (n == 0) throw std::logic_error("reciprocal of zero");
    Rational r;
    r.sign_ = 1;
    r.num_ = Natural{1};
    r.den_ = Natural{n};
    return r;
  }

  /// Accepts "n", "-n", "n/d", and decimal forms like "0.125".
  [[nodiscard]] static Rational parse(std::string_view s) {
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
      neg = s[0] == '-';
      s.remove_prefix(1);
    }
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    Rational r;
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
      r = from_ratio(Natural::from_decimal(s.substr(0, slash)),
                     Natural::from_decimal(s.substr(slash + 1)));
    } else if (const auto dot = s.find('.'); dot != std::string_view::npos) {
      const auto whole = s.substr(0, dot), frac = s.substr(dot + 1);
      Natural num = whole.empty() ? Natural{} : Natural::from_decimal(whole);
      Natural den{1};
      for (std::size_t i = 0; i < frac.size(); ++i) den.mul_u64(10);
      num *= den;
      if (!frac.empty()) num += Natural::from_decimal(frac);
      r = from_ratio(std::move(num), std::move(den));
    } else {
      r = from_ratio(Natural::from_decimal(s), Natural{1});
    }
    if (neg) r.sign_ = -r.sign_;
    return r;
  }

  [[nodiscard]] bool is_zero() const noexcept { return sign_ == 0; }
  [[nodiscard]] int sign() const noexcept { return sign_; }
  [[nodiscard]] const Natural& numerator() const noexcept { return num_; }
  [[nodiscard]] const Natural& denominator() const noexcept { return den_; }

  [[nodiscard]] Rational abs() const {
    Rational r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
  }

  friend Rational operator-(Rational r) {
    r.sign_ = -r.sign_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.sign_ == b.sign_) {
      Rational r = add_magnitudes(a, b);
      r.sign_ = a.sign_;
      return r;
    }
    // Opposite signs: subtract the smaller magnitude from the larger.
    const int c = compare_magnitudes(a, b);
    if (c == 0) return {};
    const Rational& big = c > 0 ? a : b;
    const Rational& small = c > 0 ? b : a;
    Rational r = sub_magnitudes(big, small);
    r.sign_ = big.sign_;
    return r;
  }

  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.is_zero() || b.is_zero()) return {};
    // Cross-reduce before multiplying.
    const Natural g1 = Natural::gcd(a.num_, b.den_);
    const Natural g2 = Natural::gcd(b.num_, a.den_);
    Rational r;
    r.sign_ = a.sign_ * b.sign_;
    r.num_ = (a.num_ / g1) * (b.num_ / g2);
    r.den_ = (a.den_ / g2) * (b.den_ / g1);
    return r;
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::logic_error("rational division by zero");
    Rational inv;
    inv.sign_ = b.sign_;
    inv.num_ = b.den_;
    inv.den_ = b.num_;
    return a * inv;
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  [[nodiscard]] static int compare(const Rational& a, const Rational& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
    if (a.sign_ == 0) return 0;
    const int m = compare_magnitudes(a, b);
    return a.sign_ > 0 ? m : -m;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.sign_ == b.sign_ && a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = compare(a, b);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// Always "num/den" (reduced), e.g. "7/4", "0/1", "-3/2".
  [[nodiscard]] std::string to_string() const {
    std::string s;
    if (sign_ < 0) s += '-';
    s += num_.to_decimal();
    s += '/';
    s += den_.to_decimal();
    return s;
  }

  [[nodiscard]] double to_double() const {
    if (sign_ == 0) return 0.0;
    const auto [mn, en] = num_.to_double_exp();
    const auto [md, ed] = den_.to_double_exp();
    const double v = std::ldexp(mn / md, static_cast<int>(en - ed));
    return sign_ < 0 ? -v : v;
  }

 private:
  static std::uint64_t magnitude(std::int64_t v) {
    return v < 0 ? ~static_cast<std::uint64_t>(v) + 1 : static_cast<std::uint64_t>(v);
  }

  void assign_reduced(int sign, Natural num, Natural den) {
    if (num.is_zero()) {
      sign_ = 0;
      num_ = Natural{};
      den_ = Natural{1};
      return;
    }
    const Natural g = Natural::gcd(num, den);
    sign_ = sign;
    num_ = g.is_one() ? std::move(num) : num / g;
    den_ = g.is_one() ? std::move(den) : den / g;
  }

  static int compare_magnitudes(const Rational& a, const Rational& b) {
    // a.num/a.den vs b.num/b.den  <=>  a.num*b.den vs b.num*a.den
    return Natural::compare(a.num_ * b.den_, b.num_ * a.den_);
  }

  // |a| + |b| with the split-gcd scheme (Knuth 4.5.1): g = gcd(da, db),
  // t = na*(db/g) + nb*(da/g); the residual gcd of (t, g) is all that is
  // left to cancel.
  static Rational add_magnitudes(const Rational& a, const Rational& b) {
    Rational r;
    r.sign_ = 1;
    const Natural g = Natural::gcd(a.den_, b.den_);
    if (g.is_one()) {
      r.num_ = a.num_ * b.den_ + b.num_ * a.den_;
      r.den_ = a.den_ * b.den_;
      return r;
    }
    const Natural db_red = b.den_ / g;
    const Natural da_red = a.den_ / g;
    Natural t = a.num_ * db_red + b.num_ * da_red;
    const Natural g2 = Natural::gcd(t, g);
    r.num_ = g2.is_one() ? std::move(t) : t / g2;
    r.den_ = da_red * (b.den_ / g2);
    return r;
  }

  // |a| - |b| for |a| > |b|; same cancellation structure as addition.
  static Rational sub_magnitudes(const Rational& a, const Rational& b) {
    Rational r;
    r.sign_ = 1;
    const Natural g = Natural::gcd(a.den_, b.den_);
    if (g.is_one()) {
      r.num_ = a.num_ * b.den_ - b.num_ * a.den_;
      r.den_ = a.den_ * b.den_;
      return r;
    }
    const Natural db_red = b.den_ / g;
    const Natural da_red = a.den_ / g;
    Natural t = a.num_ * db_red - b.num_ * da_red;
    const Natural g2 = Natural::gcd(t, g);
    r.num_ = g2.is_one() ? std::move(t) : t / g2;
    r.den_ = da_red * (b.den_ / g2);
    return r;
    // t can be zero only for equal values, which the caller excludes.
  }

  int sign_;     // -1, 0, +1
  Natural num_;  // reduced magnitude; 0 has num 0, den 1
  Natural den_;  // >= 1
};

}  // namespace apfree
