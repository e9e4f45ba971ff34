#pragma once

// Constructive gadgets: the scale-and-join amplifier that adds at least 1
// to the reciprocal sum while staying progression-free, the bootstrap chain
// that iterates it until a certified infeasibility, and the four-way
// interval partition with its pigeonhole selection and verified join.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apfree/errors.hpp"
#include "apfree/greedy.hpp"
#include "apfree/integer_set.hpp"
#include "apfree/measure.hpp"
#include "apfree/progressions.hpp"
#include "apfree/rational.hpp"

namespace apfree {

/// {c*e : e in E}. Affine images of progressions are progressions, so the
/// result is progression-free iff E is.
inline IntegerSet scale_set(const IntegerSet& e, std::uint64_t c) {
  if (c == 0) throw PreconditionViolated("scale factor must be >= 1");
  if (!e.empty() && e.max() > IntegerSet::max_element / c)
    throw OverflowError("scaled element would exceed the supported maximum");
  std::vector<std::uint64_t> scaled;
  scaled.reserve(e.size());
  for (const auto v : e.elements()) scaled.push_back(v * c);
  return IntegerSet{std::move(scaled)};
}

struct AmplifyReport {
  IntegerSet base;        // A
  IntegerSet amplifier;   // E
  std::uint64_t scale;    // 2 * max(A)
  IntegerSet result;      // A joined with scale*E
  Rational mu_base;
  Rational mu_result;
};

/// B = A (disjoint) scale*E with scale = 2*max(A). Requires mu(E) >= 2*max(A),
/// which makes mu(B) >= mu(A) + 1. The join is provably progression-free;
/// this is re-verified by brute force anyway.
inline AmplifyReport amplify(const IntegerSet& a, const IntegerSet& e, int p) {
  require_valid_p(p);
  if (a.empty() || e.empty())
    throw PreconditionViolated("amplify requires nonempty base and amplifier");
  if (auto w = find_ap_witness(a, p))
    throw NotApFree("base set contains a progression: start " + std::to_string(w->start) +
                    ", diff " + std::to_string(w->diff));
  if (auto w = find_ap_witness(e, p))
    throw NotApFree("amplifier contains a progression: start " + std::to_string(w->start) +
                    ", diff " + std::to_string(w->diff));

  const std::uint64_t n = a.max();
  const Rational mu_e = exact_reciprocal_sum(e.elements());
  const Rational required{static_cast<std::int64_t>(2 * n)};
  if (mu_e < required)
    throw AmplifierTooSmall("amplifier reciprocal sum " + mu_e.to_string() +
                            " is below the required " + required.to_string());

  AmplifyReport rep;
  rep.base = a;
  rep.amplifier = e;
  rep.scale = 2 * n;
  rep.result = IntegerSet::disjoint_union(a, scale_set(e, rep.scale));
  rep.mu_base = exact_reciprocal_sum(a.elements());
  rep.mu_result = exact_reciprocal_sum(rep.result.elements());

  if (auto w = find_ap_witness(rep.result, p))
    throw ClaimViolated(w->start, w->diff, p);
  if (rep.mu_result < rep.mu_base + Rational{1})
    throw std::logic_error("amplified sum failed to gain 1");
  return rep;
}

struct AmplifierSearch {
  enum class Outcome { found, budget_exhausted, ceiling_infeasible };

  Outcome outcome = Outcome::budget_exhausted;
  std::optional<IntegerSet> amplifier;
  Rational achieved_mu;         // of the amplifier, or of the longest prefix tried
  std::uint64_t required = 0;   // 2N
  std::uint64_t budget = 0;
  double ceiling = 0.0;         // certified upper bound for H_budget

  [[nodiscard]] bool found() const noexcept { return outcome == Outcome::found; }
};

/// Shortest greedy prefix E with mu(E) >= 2n and max(E) <= budget. When
/// 2n exceeds the harmonic ceiling of [1, budget], no subset of the budget
/// range can qualify and the search is refused with that certificate.
inline AmplifierSearch find_amplifier(int p, std::uint64_t n, std::uint64_t budget) {
  require_valid_p(p);
  if (n == 0) throw PreconditionViolated("amplifier target must be >= 1");

  AmplifierSearch out;
  out.required = 2 * n;
  out.budget = budget;
  out.ceiling = harmonic_ceiling(budget);

  const Rational target{static_cast<std::int64_t>(out.required)};
  if (static_cast<double>(out.required) > out.ceiling) {
    out.outcome = AmplifierSearch::Outcome::ceiling_infeasible;
    return out;
  }

  GreedyGenerator gen(p);
  Rational sum;
  while (true) {
    const std::uint64_t t = gen.next_term();
    if (t > budget) {
      out.outcome = AmplifierSearch::Outcome::budget_exhausted;
      out.achieved_mu = sum;
      return out;
    }
    sum += Rational::reciprocal_of(t);
    if (sum >= target) {
      out.outcome = AmplifierSearch::Outcome::found;
      out.amplifier = gen.snapshot();
      out.achieved_mu = sum;
      return out;
    }
  }
}

struct BootstrapResult {
  IntegerSet initial;                  // A_0 = {1}
  std::vector<AmplifyReport> steps;    // successful amplifications, in order
  std::size_t requested_steps = 0;
  std::size_t failed_step = 0;         // 1-based step that could not proceed; 0 if none
  std::optional<AmplifierSearch> failure;

  [[nodiscard]] bool budget_exhausted() const noexcept { return failed_step != 0; }
  [[nodiscard]] const IntegerSet& final_set() const noexcept {
    return steps.empty() ? initial : steps.back().result;
  }
};

/// Iterate find_amplifier + amplify from A_0 = {1}. Each successful step
/// adds at least 1 to the reciprocal sum; the chain halts with a certificate
/// as soon as no amplifier fits the budget.
inline BootstrapResult bootstrap(int p, std::size_t steps, std::uint64_t budget) {
  require_valid_p(p);
  BootstrapResult out;
  out.initial = IntegerSet{{1}};
  out.requested_steps = steps;
  for (std::size_t j = 1; j <= steps; ++j) {
    const IntegerSet& cur = out.steps.empty() ? out.initial : out.steps.back().result;
    AmplifierSearch search = find_amplifier(p, cur.max(), budget);
    if (!search.found()) {
      out.failed_step = j;
      out.failure = std::move(search);
      break;
    }
    out.steps.push_back(amplify(cur, *search.amplifier, p));
  }
  return out;
}

struct BlockIndex {
  int j = 0;        // 1..4
  std::uint32_t i = 0;  // scale level

  friend bool operator==(const BlockIndex&, const BlockIndex&) = default;
};

/// The unique (j, i) with (j+1)*3^i*m <= x < (j+2)*3^i*m. The blocks for
/// j = 1..4 tile [2*3^i*m, 2*3^(i+1)*m), so every x >= 2m lands somewhere.
inline BlockIndex block_index(std::uint64_t x, std::uint64_t m) {
  if (m == 0) throw PreconditionViolated("partition modulus must be >= 1");
  if (x < 2 * m) throw BelowRange(x, 2 * m);
  std::uint64_t t = m;
  std::uint32_t i = 0;
  while (x / t >= 6) {  // t <= x/6 here, so t*3 cannot overflow
    t *= 3;
    ++i;
  }
  return BlockIndex{static_cast<int>(x / t) - 1, i};
}

struct PartitionResult {
  std::uint64_t m = 0;
  std::array<IntegerSet, 4> parts;  // parts[j-1] holds block family j
  std::vector<std::pair<std::uint64_t, BlockIndex>> block_map;

  [[nodiscard]] const IntegerSet& part(int j) const { return parts.at(static_cast<std::size_t>(j - 1)); }
};

/// Split R into the four block families; requires min(R) >= 2m.
inline PartitionResult block_partition(const IntegerSet& r, std::uint64_t m) {
  PartitionResult out;
  out.m = m;
  std::array<std::vector<std::uint64_t>, 4> buckets;
  for (const auto x : r.elements()) {
    const BlockIndex b = block_index(x, m);
    buckets[static_cast<std::size_t>(b.j - 1)].push_back(x);
    out.block_map.emplace_back(x, b);
  }
  for (std::size_t k = 0; k < 4; ++k) out.parts[k] = IntegerSet{std::move(buckets[k])};
  return out;
}

struct PigeonholeResult {
  int j = 0;
  IntegerSet part;
  Rational part_mu;
  Rational total_mu;
};

/// The block family carrying the largest share of mu(R); at least a quarter
/// by pigeonhole. Ties break toward the smallest j.
inline PigeonholeResult pigeonhole_part(const IntegerSet& r, std::uint64_t m) {
  const PartitionResult parts = block_partition(r, m);
  PigeonholeResult out;
  out.total_mu = exact_reciprocal_sum(r.elements());
  std::array<Rational, 4> mus;
  for (std::size_t k = 0; k < 4; ++k) mus[k] = exact_reciprocal_sum(parts.parts[k].elements());
  std::size_t best = 0;
  for (std::size_t k = 1; k < 4; ++k)
    if (mus[k] > mus[best]) best = k;
  out.j = static_cast<int>(best + 1);
  out.part = parts.parts[best];
  out.part_mu = mus[best];
  if (out.part_mu * Rational{4} < out.total_mu)
    throw std::logic_error("pigeonhole bound violated");
  return out;
}

/// Join A1 (supported on [1, m]) with the heaviest block family of R and
/// verify the result progression-free by brute force. Only the part being
/// joined needs to be progression-free, so that is what is enforced. A
/// verification failure would contradict the underlying claim and is raised
/// loudly, never swallowed.
inline IntegerSet pigeonhole_join(const IntegerSet& a1, const IntegerSet& r, std::uint64_t m,
                                  int p) {
  require_valid_p(p);
  if (m == 0) throw PreconditionViolated("partition modulus must be >= 1");
  if (a1.max() > m)
    throw PreconditionViolated("left set reaches " + std::to_string(a1.max()) +
                               ", above the modulus " + std::to_string(m));
  if (!r.empty() && r.min() < 2 * m)
    throw PreconditionViolated("right set starts at " + std::to_string(r.min()) +
                               ", below twice the modulus");
  if (auto w = find_ap_witness(a1, p))
    throw PreconditionViolated("left set contains a progression: start " +
                               std::to_string(w->start) + ", diff " + std::to_string(w->diff));
  if (r.empty()) return a1;

  const PigeonholeResult chosen = pigeonhole_part(r, m);
  if (auto w = find_ap_witness(chosen.part, p))
    throw PreconditionViolated("chosen part contains a progression: start " +
                               std::to_string(w->start) + ", diff " + std::to_string(w->diff));
  IntegerSet joined = IntegerSet::disjoint_union(a1, chosen.part);
  if (auto w = find_ap_witness(joined, p))
    throw ClaimViolated(w->start, w->diff, p);
  return joined;
}

}  // namespace apfree
