#pragma once

// Finite-horizon face of the product-topology story: indicator prefixes,
// the eventual-agreement convergence criterion, the closedness check for
// progression-free limits, and the continuity check for the reciprocal-sum
// map. Sets may be exact (finite, fully known) or described only up to a
// horizon; every verdict is relative to the horizons involved, and nothing
// is extrapolated past them.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apfree/errors.hpp"
#include "apfree/integer_set.hpp"
#include "apfree/measure.hpp"
#include "apfree/progressions.hpp"
#include "apfree/rational.hpp"

namespace apfree {

struct IndicatorPrefix {
  std::vector<std::uint8_t> bits;  // bits[i] is the membership of i+1

  [[nodiscard]] std::uint64_t horizon() const noexcept { return bits.size(); }

  friend bool operator==(const IndicatorPrefix&, const IndicatorPrefix&) = default;
};

/// A finitely described set: either an exact finite set (indicator known for
/// every n) or the restriction of an unknown larger set to [1, horizon].
class DescribedSet {
 public:
  DescribedSet() = default;

  [[nodiscard]] static DescribedSet exact(IntegerSet s) {
    DescribedSet d;
    d.set_ = std::move(s);
    return d;
  }

  [[nodiscard]] static DescribedSet truncated(IntegerSet s, std::uint64_t horizon) {
    if (s.max() > horizon)
      throw PreconditionViolated("described elements exceed the declared horizon");
    DescribedSet d;
    d.set_ = std::move(s);
    d.horizon_ = horizon;
    return d;
  }

  [[nodiscard]] const IntegerSet& known() const noexcept { return set_; }
  [[nodiscard]] std::optional<std::uint64_t> horizon() const noexcept { return horizon_; }

  [[nodiscard]] bool known_up_to(std::uint64_t k) const noexcept {
    return !horizon_ || *horizon_ >= k;
  }

  void require_known_up_to(std::uint64_t k) const {
    if (!known_up_to(k)) throw HorizonExceeded(k, *horizon_);
  }

 private:
  IntegerSet set_;
  std::optional<std::uint64_t> horizon_;
};

using SetSequence = std::vector<DescribedSet>;

inline IndicatorPrefix indicator(const DescribedSet& s, std::uint64_t k) {
  if (k < 1) throw PreconditionViolated("indicator prefix length must be >= 1");
  s.require_known_up_to(k);
  IndicatorPrefix out;
  out.bits.assign(k, 0);
  for (const auto e : s.known().elements()) {
    if (e > k) break;
    out.bits[e - 1] = 1;
  }
  return out;
}

inline IndicatorPrefix indicator(const IntegerSet& s, std::uint64_t k) {
  return indicator(DescribedSet::exact(s), k);
}

/// Rebuild S intersect [1, k] from an indicator prefix.
inline IntegerSet set_from_indicator(const IndicatorPrefix& pre) {
  std::vector<std::uint64_t> elems;
  for (std::uint64_t n = 1; n <= pre.horizon(); ++n)
    if (pre.bits[n - 1]) elems.push_back(n);
  return IntegerSet{std::move(elems)};
}

/// Smallest n <= horizon where the indicators differ; nullopt when the two
/// sets agree through the whole window.
inline std::optional<std::uint64_t> first_disagreement(const DescribedSet& a,
                                                       const DescribedSet& b,
                                                       std::uint64_t horizon) {
  a.require_known_up_to(horizon);
  b.require_known_up_to(horizon);
  for (std::uint64_t n = 1; n <= horizon; ++n)
    if (a.known().contains(n) != b.known().contains(n)) return n;
  return std::nullopt;
}

/// The product-topology convergence criterion at prefix length k: the smallest N_k
/// (1-based member index) from which every member of the sequence agrees
/// with the limit on the first k bits. nullopt when even the last member
/// disagrees somewhere in the window.
inline std::optional<std::size_t> convergence_index(const SetSequence& seq,
                                                    const DescribedSet& limit,
                                                    std::uint64_t k) {
  limit.require_known_up_to(k);
  for (const auto& member : seq) member.require_known_up_to(k);
  std::size_t first_ok = seq.size() + 1;
  for (std::size_t n = seq.size(); n-- > 0;) {
    if (first_disagreement(seq[n], limit, k).has_value()) break;
    first_ok = n + 1;
  }
  if (first_ok == seq.size() + 1) return std::nullopt;
  return first_ok;
}

struct ClosednessVerdict {
  bool pass = false;
  std::size_t convergence_at = 0;      // N_window
  std::uint64_t window = 0;
  std::optional<ApWitness> witness;    // set only on failure
};

/// Every member is verified progression-free and the sequence must converge
/// to the limit on the window; the limit's window restriction is then
/// scanned for a progression. Finding one would contradict closedness of
/// the progression-free family, so a witness signals a harness bug upstream.
inline ClosednessVerdict closedness_check(const SetSequence& seq, const DescribedSet& limit,
                                          int p, std::uint64_t window) {
  require_valid_p(p);
  for (std::size_t n = 0; n < seq.size(); ++n) {
    if (auto w = find_ap_witness(seq[n].known(), p))
      throw PreconditionViolated("sequence member " + std::to_string(n + 1) +
                                 " contains a progression: start " + std::to_string(w->start) +
                                 ", diff " + std::to_string(w->diff));
  }
  const auto conv = convergence_index(seq, limit, window);
  if (!conv)
    throw PreconditionViolated("sequence does not converge to the limit on the first " +
                               std::to_string(window) + " bits");
  ClosednessVerdict out;
  out.window = window;
  out.convergence_at = *conv;
  out.witness = find_ap_witness(limit.known().restricted_to(window), p);
  out.pass = !out.witness.has_value();
  return out;
}

struct ContinuityReport {
  enum class Status { ok, deviation_exceeded, not_converged, tail_not_small };

  Status status = Status::ok;
  std::size_t tail_start = 0;       // n_0: elements beyond this index sum below eps/2
  std::uint64_t agreement_prefix = 0;  // k = the n_0-th element of the limit
  std::size_t convergence_at = 0;   // N_0
  Rational limit_mu;
  Rational max_deviation;           // over members at indices >= N_0
  Rational tail_bound;              // two-tail upper bound for the deviation
  bool deviation_within_bound = false;

  [[nodiscard]] bool ok() const noexcept { return status == Status::ok; }
};

/// Reproduces the continuity schedule: pick n_0 with the limit's tail below
/// eps/2, locate N_0 as the convergence index at prefix length a_{n_0}, then
/// measure |mu(A_n) - mu(A)| for all members from N_0 on. Deviations are
/// exact rationals; the report also carries the two-tail bound they must
/// respect.
inline ContinuityReport continuity_check(const SetSequence& seq, const DescribedSet& limit,
                                         const Rational& epsilon, std::uint64_t horizon) {
  if (!(epsilon > Rational{0})) throw PreconditionViolated("epsilon must be positive");
  ContinuityReport out;
  const IntegerSet& a = limit.known();
  out.limit_mu = exact_reciprocal_sum(a.elements());

  // Minimal n_0 whose tail drops below eps/2. For a horizon-described limit
  // the empty tail at n_0 = |A| proves nothing beyond the horizon, so it is
  // not accepted there.
  const Rational half = epsilon / Rational{2};
  std::optional<std::size_t> n0;
  Rational tail = out.limit_mu;
  for (std::size_t idx = 0; idx <= a.size(); ++idx) {
    if (idx > 0) tail -= Rational::reciprocal_of(a.term(idx));
    if (tail < half) {
      if (limit.horizon().has_value() && idx == a.size() && !a.empty()) break;
      n0 = idx;
      break;
    }
  }
  if (!n0) {
    out.status = ContinuityReport::Status::tail_not_small;
    return out;
  }
  out.tail_start = *n0;

  const std::uint64_t k = *n0 == 0 ? 1 : a.term(*n0);
  if (k > horizon)
    throw HorizonExceeded(k, horizon);
  out.agreement_prefix = k;

  const auto conv = convergence_index(seq, limit, k);
  if (!conv) {
    out.status = ContinuityReport::Status::not_converged;
    return out;
  }
  out.convergence_at = *conv;

  // Two-tail bound: the limit's tail plus the largest member tail beyond
  // position n_0, everything exact.
  const Rational limit_tail = tail;
  Rational worst_member_tail;
  out.max_deviation = Rational{0};
  for (std::size_t n = *conv; n <= seq.size(); ++n) {
    const IntegerSet& member = seq[n - 1].known();
    const Rational member_mu = exact_reciprocal_sum(member.elements());
    const Rational dev = (member_mu - out.limit_mu).abs();
    if (dev > out.max_deviation) out.max_deviation = dev;
    if (member.size() >= *n0) {
      Rational member_tail = member_mu;
      for (std::size_t idx = 1; idx <= *n0; ++idx)
        member_tail -= Rational::reciprocal_of(member.term(idx));
      if (member_tail > worst_member_tail) worst_member_tail = member_tail;
    }
  }
  out.tail_bound = limit_tail + worst_member_tail;
  out.deviation_within_bound = out.max_deviation <= out.tail_bound;
  out.status = out.max_deviation < epsilon ? ContinuityReport::Status::ok
                                           : ContinuityReport::Status::deviation_exceeded;
  return out;
}

}  // namespace apfree
