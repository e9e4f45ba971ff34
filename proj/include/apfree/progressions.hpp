#pragma once

// Detection of p-term arithmetic progressions: a full pair-driven scan for
// arbitrary sets, and an incremental check for extending an already clean
// set past its maximum.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apfree/errors.hpp"
#include "apfree/integer_set.hpp"

namespace apfree {

struct ApWitness {
  std::uint64_t start = 0;
  std::uint64_t diff = 0;
  int length = 0;

  [[nodiscard]] std::vector<std::uint64_t> terms() const {
    std::vector<std::uint64_t> t;
    t.reserve(static_cast<std::size_t>(length));
    for (int i = 0; i < length; ++i) t.push_back(start + static_cast<std::uint64_t>(i) * diff);
    return t;
  }

  friend bool operator==(const ApWitness&, const ApWitness&) = default;
};

inline void require_valid_p(int p) {
  if (p < 3) throw InvalidP(p);
}

/// Exhaustive scan over (first term, difference) pairs realized by two
/// members; remaining memberships probed through the bitmap. Deterministic:
/// smallest start first, then smallest difference.
inline std::optional<ApWitness> find_ap_witness(const IntegerSet& s, int p) {
  require_valid_p(p);
  const auto elems = s.elements();
  const std::uint64_t top = s.max();
  const auto steps = static_cast<std::uint64_t>(p - 1);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const std::uint64_t start = elems[i];
    for (std::size_t j = i + 1; j < elems.size(); ++j) {
      const std::uint64_t diff = elems[j] - start;
      if (diff > (top - start) / steps) break;  // later j only widen the stride
      bool all = true;
      for (std::uint64_t k = 2; k < steps + 1; ++k) {
        if (!s.contains(start + k * diff)) {
          all = false;
          break;
        }
      }
      if (all) return ApWitness{start, diff, p};
    }
  }
  return std::nullopt;
}

inline bool is_ap_free(const IntegerSet& s, int p) {
  return !find_ap_witness(s, p).has_value();
}

namespace detail {

// x exceeds every member, so a new p-progression must end at x: its other
// terms are x-d, x-2d, ..., x-(p-1)d. Walking members m downward as the
// candidate x-d enumerates exactly the differences whose first probe
// succeeds, in increasing order. The second term x-2d = 2m-x also descends
// as m does, so a trailing pointer resolves it with sequential reads
// instead of bitmap probes; only terms past the second go to the bitmap.
template <class SetLike>
bool creates_ap_as_max(const SetLike& s, std::uint64_t x, int p) {
  const auto elems = s.elements();
  const auto steps = static_cast<std::uint64_t>(p - 1);
  const std::uint64_t max_d = (x - 1) / steps;  // keep x - (p-1)d >= 1
  std::size_t qi = elems.size();                // trails the q = 2m - x probe
  for (std::size_t j = elems.size(); j-- > 0;) {
    const std::uint64_t m = elems[j];
    const std::uint64_t d = x - m;
    if (d > max_d) break;
    const std::uint64_t q = 2 * m - x;  // = x - 2d; positive because d <= max_d
    while (qi > 0 && elems[qi - 1] > q) --qi;
    if (qi == 0) break;  // every later q is smaller still
    if (elems[qi - 1] != q) continue;
    bool all = true;
    for (std::uint64_t k = 3; k <= steps; ++k) {
      if (!s.contains(x - k * d)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace detail

/// True iff S union {x} contains a p-term progression, for x beyond max(S)
/// and S itself progression-free (both checked).
inline bool extension_creates_ap(const IntegerSet& s, std::uint64_t x, int p) {
  require_valid_p(p);
  if (x <= s.max()) throw NotAnExtension(x, s.max());
  if (auto w = find_ap_witness(s, p))
    throw PreconditionViolated("set already contains a progression: start " +
                               std::to_string(w->start) + ", diff " + std::to_string(w->diff));
  return detail::creates_ap_as_max(s, x, p);
}

}  // namespace apfree
