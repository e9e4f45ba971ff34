#pragma once

// Reciprocal sums: exact rationals up to a configurable element cap, and a
// compensated float approximation alongside. The exact sum is assembled by
// halving recursion so intermediate denominators stay near the size of the
// reduced result.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>

#include "apfree/errors.hpp"
#include "apfree/integer_set.hpp"
#include "apfree/rational.hpp"

namespace apfree {

struct ReciprocalSum {
  /// Absent when the element count exceeded the exact-arithmetic cap.
  std::optional<Rational> exact;
  double approx = 0.0;

  [[nodiscard]] bool exact_omitted() const noexcept { return !exact.has_value(); }
};

/// Reduced denominators grow super-exponentially with the element count;
/// past this many elements only the float approximation is produced.
inline constexpr std::size_t default_exact_cap = 10'000;

/// Neumaier-compensated sum of 1/v over the span.
inline double compensated_reciprocal_sum(std::span<const std::uint64_t> values) {
  double sum = 0.0, comp = 0.0;
  for (const auto v : values) {
    const double term = 1.0 / static_cast<double>(v);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

/// Exact sum of 1/v over the span.
inline Rational exact_reciprocal_sum(std::span<const std::uint64_t> values) {
  if (values.empty()) return Rational{};
  if (values.size() == 1) return Rational::reciprocal_of(values[0]);
  const std::size_t half = values.size() / 2;
  return exact_reciprocal_sum(values.subspan(0, half)) +
         exact_reciprocal_sum(values.subspan(half));
}

inline ReciprocalSum mu(const IntegerSet& s, std::size_t exact_cap = default_exact_cap) {
  ReciprocalSum r;
  r.approx = compensated_reciprocal_sum(s.elements());
  if (s.size() <= exact_cap) r.exact = exact_reciprocal_sum(s.elements());
  return r;
}

/// Sum over elements at 1-based positions >= from_index; from_index may be
/// size+1 (empty suffix).
inline ReciprocalSum mu_tail(const IntegerSet& s, std::size_t from_index,
                             std::size_t exact_cap = default_exact_cap) {
  if (from_index < 1 || from_index > s.size() + 1)
    throw IndexOutOfRange(from_index, s.size() + 1);
  const auto suffix = s.elements().subspan(from_index - 1);
  ReciprocalSum r;
  r.approx = compensated_reciprocal_sum(suffix);
  if (suffix.size() <= exact_cap) r.exact = exact_reciprocal_sum(suffix);
  return r;
}

/// The p*log(p) level quoted next to partial sums; natural logarithm (the
/// base is flagged as "e" wherever this value is reported).
inline double gerver_reference(int p) {
  if (p < 3) throw InvalidP(p);
  return static_cast<double>(p) * std::log(static_cast<double>(p));
}

/// Compensated float value of H_b = sum_{k<=b} 1/k.
inline double harmonic_approx(std::uint64_t b) {
  double sum = 0.0, comp = 0.0;
  for (std::uint64_t k = 1; k <= b; ++k) {
    const double term = 1.0 / static_cast<double>(k);
    const double t = sum + term;
    if (sum >= term) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

/// Certified upper bound for H_b: H_b <= 1 + ln b, padded by one float ulp
/// step so rounding cannot understate it. Any subset of [1, b] has
/// reciprocal sum at most H_b, so exceeding this bound proves infeasibility.
inline double harmonic_ceiling(std::uint64_t b) {
  if (b == 0) return 0.0;
  const double bound = 1.0 + std::log(static_cast<double>(b));
  return bound + std::ldexp(bound, -40);
}

}  // namespace apfree
