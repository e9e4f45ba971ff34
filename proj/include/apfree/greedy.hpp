#pragma once

// The greedy progression-free sequence: a_1 = 1, and each next term is the
// smallest integer above the current maximum whose inclusion keeps the set
// free of p-term progressions. A generator is single-owner mutable state;
// snapshots are immutable IntegerSets.
//
// The generator sieves candidates through a sliding window: a pair of
// members (q, m) blocks the candidate 2m - q (for p > 3 only when the
// deeper terms q - d, q - 2d, ... are also members). Each blocking pair is
// enumerated once per window instead of being rediscovered by every
// candidate between two terms, which is what makes long runs tractable.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "apfree/errors.hpp"
#include "apfree/integer_set.hpp"
#include "apfree/progressions.hpp"

namespace apfree {

class GreedyGenerator {
 public:
  explicit GreedyGenerator(int p) : p_(p) { require_valid_p(p); }

  /// Rebuild a generator from a stored prefix. The prefix is re-verified to
  /// be progression-free and to start at 1; minimality is trusted, so feed
  /// this only from caches this library wrote.
  [[nodiscard]] static GreedyGenerator resume_from(int p, const IntegerSet& prefix) {
    GreedyGenerator g(p);
    if (prefix.empty()) return g;
    if (prefix.min() != 1)
      throw PreconditionViolated("stored greedy prefix does not start at 1");
    if (auto w = find_ap_witness(prefix, p))
      throw PreconditionViolated("stored greedy prefix contains a progression: start " +
                                 std::to_string(w->start) + ", diff " +
                                 std::to_string(w->diff));
    for (const auto e : prefix.elements()) {
      g.terms_.push_back(e);
      g.present_.set(e);
    }
    g.cursor_ = prefix.max();
    return g;
  }

  [[nodiscard]] int p() const noexcept { return p_; }
  [[nodiscard]] std::uint64_t cursor() const noexcept { return cursor_; }
  [[nodiscard]] std::size_t count() const noexcept { return terms_.size(); }
  [[nodiscard]] const std::vector<std::uint64_t>& terms() const noexcept { return terms_; }
  [[nodiscard]] std::size_t bitmap_words() const noexcept { return present_.word_count(); }

  /// Announce an upper bound on upcoming terms so the bitmap is sized once.
  void reserve_up_to(std::uint64_t limit) { present_.ensure(limit); }

  std::uint64_t next_term() {
    std::uint64_t x = cursor_ + 1;
    while (true) {
      if (window_lo_ == 0 || x > window_hi()) build_window(x);
      x = next_unblocked(x);
      if (x != 0) break;
      x = window_hi() + 1;  // window exhausted; rebuild past it
    }
    if (x > IntegerSet::max_element)
      throw OverflowError("greedy term exceeds the supported element maximum");
    terms_.push_back(x);
    present_.set(x);
    cursor_ = x;
    mark_new_member(x);
    return x;
  }

  [[nodiscard]] IntegerSet snapshot() const { return IntegerSet{terms_}; }

  // SetLike surface for the incremental progression check.
  [[nodiscard]] std::span<const std::uint64_t> elements() const noexcept { return terms_; }
  [[nodiscard]] bool contains(std::uint64_t n) const noexcept { return present_.test(n); }

 private:
  static constexpr std::uint64_t window_bits = std::uint64_t{1} << 17;

  [[nodiscard]] std::uint64_t window_hi() const noexcept {
    return window_lo_ + window_bits - 1;
  }

  void window_mark(std::uint64_t x) noexcept {
    const std::uint64_t off = x - window_lo_;
    window_[static_cast<std::size_t>(off / 64)] |= std::uint64_t{1} << (off % 64);
  }

  /// Smallest unblocked candidate >= from within the window, or 0.
  [[nodiscard]] std::uint64_t next_unblocked(std::uint64_t from) const noexcept {
    std::uint64_t off = from - window_lo_;
    std::size_t w = static_cast<std::size_t>(off / 64);
    std::uint64_t free = ~window_[w] & (~std::uint64_t{0} << (off % 64));
    while (free == 0) {
      if (++w == window_.size()) return 0;
      free = ~window_[w];
    }
    return window_lo_ + 64 * w + static_cast<std::uint64_t>(std::countr_zero(free));
  }

  /// For p > 3 a pair (q, q + d) only blocks when the progression continues
  /// downward through q - d, q - 2d, ...
  [[nodiscard]] bool prefix_below_ok(std::uint64_t q, std::uint64_t d) const noexcept {
    for (int j = 1; j <= p_ - 3; ++j) {
      const std::uint64_t need = static_cast<std::uint64_t>(j) * d;
      if (q <= need || !present_.test(q - need)) return false;
    }
    return true;
  }

  /// Mark every candidate in [lo, lo + window_bits) blocked by a pair of
  /// current members. Pairs are enumerated by walking m downward while a
  /// trailing pointer tracks the admissible q range, so each pair costs a
  /// couple of sequential reads and one in-cache bit write.
  void build_window(std::uint64_t lo) {
    window_lo_ = lo;
    window_.assign(static_cast<std::size_t>(window_bits / 64), 0);
    const std::uint64_t hi = window_hi();
    std::size_t q_top = terms_.size();
    for (std::size_t im = terms_.size(); im-- > 0;) {
      const std::uint64_t m = terms_[im];
      if (2 * m <= lo) break;  // even q = 1 lands below the window
      const std::uint64_t qmax = 2 * m - lo;
      const std::uint64_t qmin = 2 * m > hi ? 2 * m - hi : 1;
      while (q_top > 0 && terms_[q_top - 1] > qmax) --q_top;
      for (std::size_t qi = q_top; qi-- > 0;) {
        const std::uint64_t q = terms_[qi];
        if (q < qmin) break;
        if (p_ == 3 || prefix_below_ok(q, m - q)) window_mark(2 * m - q);
      }
    }
  }

  /// Marks contributed by the freshly appended member within the live
  /// window; pairs reaching past it are regenerated by later builds.
  void mark_new_member(std::uint64_t added) {
    if (window_lo_ == 0) return;
    const std::uint64_t hi = window_hi();
    const std::uint64_t qmin = 2 * added > hi ? 2 * added - hi : 1;
    for (std::size_t qi = terms_.size() - 1; qi-- > 0;) {
      const std::uint64_t q = terms_[qi];
      if (q < qmin) break;
      if (p_ == 3 || prefix_below_ok(q, added - q)) window_mark(2 * added - q);
    }
  }

  int p_;
  std::vector<std::uint64_t> terms_;
  detail::Bitmap present_;
  std::uint64_t cursor_ = 0;
  std::vector<std::uint64_t> window_;  // blocked bits for [window_lo_, window_hi()]
  std::uint64_t window_lo_ = 0;        // 0 while no window is built
};

/// First n terms of the greedy sequence for p.
inline IntegerSet generate(int p, std::size_t n) {
  require_valid_p(p);
  if (n == 0) throw InvalidCount();
  GreedyGenerator g(p);
  for (std::size_t i = 0; i < n; ++i) g.next_term();
  return g.snapshot();
}

/// All greedy terms <= limit.
inline IntegerSet generate_up_to(int p, std::uint64_t limit) {
  require_valid_p(p);
  GreedyGenerator g(p);
  if (limit >= 1) {
    g.reserve_up_to(limit);
    while (g.next_term() <= limit) {
    }
  }
  // The loop always emits one term past the limit; drop it.
  std::vector<std::uint64_t> kept(g.terms().begin(), g.terms().end());
  while (!kept.empty() && kept.back() > limit) kept.pop_back();
  return IntegerSet{std::move(kept)};
}

}  // namespace apfree
