#pragma once

// Finite strictly increasing sets of positive integers, stored twice: a
// sorted element vector for iteration and a bitmap over [1, max] for O(1)
// membership. Progression scanning is membership-bound, which is what the
// bitmap pays for. Values are immutable after construction and safe to
// share across threads.

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "apfree/errors.hpp"

namespace apfree {

namespace detail {

/// Growable bitmap over positive integers; bit n lives at word n/64.
class Bitmap {
 public:
  void ensure(std::uint64_t n) {
    const std::size_t need = static_cast<std::size_t>(n / 64 + 1);
    if (need > words_.size()) {
      std::size_t cap = words_.empty() ? 16 : words_.size();
      while (cap < need) cap *= 2;
      words_.resize(cap, 0);
    }
  }

  void set(std::uint64_t n) {
    ensure(n);
    words_[static_cast<std::size_t>(n / 64)] |= std::uint64_t{1} << (n % 64);
  }

  void clear(std::uint64_t n) noexcept {
    const std::size_t w = static_cast<std::size_t>(n / 64);
    if (w < words_.size()) words_[w] &= ~(std::uint64_t{1} << (n % 64));
  }

  [[nodiscard]] bool test(std::uint64_t n) const noexcept {
    const std::size_t w = static_cast<std::size_t>(n / 64);
    if (w >= words_.size()) return false;
    return (words_[w] >> (n % 64)) & 1U;
  }

  [[nodiscard]] std::size_t word_count() const noexcept { return words_.size(); }

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace detail

class IntegerSet {
 public:
  /// Largest admissible element. The bitmap costs max/8 bytes, so the
  /// interface contract's unbounded integers are cut off here and rejected
  /// with OverflowError instead.
  static constexpr std::uint64_t max_element = std::uint64_t{1} << 32;

  IntegerSet() = default;

  /// Elements must be strictly increasing and >= 1.
  explicit IntegerSet(std::vector<std::uint64_t> elements) : elems_(std::move(elements)) {
    std::uint64_t prev = 0;
    for (const auto e : elems_) {
      if (e == 0) throw PreconditionViolated("set elements must be positive");
      if (e <= prev)
        throw PreconditionViolated("set elements must be strictly increasing: " +
                                   std::to_string(e) + " after " + std::to_string(prev));
      if (e > max_element)
        throw OverflowError("element " + std::to_string(e) + " exceeds the supported maximum " +
                            std::to_string(max_element));
      prev = e;
    }
    for (const auto e : elems_) bits_.set(e);
  }

  [[nodiscard]] static IntegerSet from_values(std::vector<std::uint64_t> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return IntegerSet{std::move(values)};
  }

  [[nodiscard]] std::span<const std::uint64_t> elements() const noexcept { return elems_; }
  [[nodiscard]] std::size_t size() const noexcept { return elems_.size(); }
  [[nodiscard]] bool empty() const noexcept { return elems_.empty(); }
  [[nodiscard]] std::uint64_t max() const noexcept { return elems_.empty() ? 0 : elems_.back(); }
  [[nodiscard]] std::uint64_t min() const noexcept { return elems_.empty() ? 0 : elems_.front(); }

  [[nodiscard]] bool contains(std::uint64_t n) const noexcept { return bits_.test(n); }

  /// 1-based, matching the a_1 < a_2 < ... convention.
  [[nodiscard]] std::uint64_t term(std::size_t index) const {
    if (index < 1 || index > elems_.size()) throw IndexOutOfRange(index, elems_.size());
    return elems_[index - 1];
  }

  [[nodiscard]] IntegerSet restricted_to(std::uint64_t limit) const {
    std::vector<std::uint64_t> kept;
    for (const auto e : elems_) {
      if (e > limit) break;
      kept.push_back(e);
    }
    return IntegerSet{std::move(kept)};
  }

  [[nodiscard]] bool includes(const IntegerSet& other) const noexcept {
    for (const auto e : other.elems_)
      if (!contains(e)) return false;
    return true;
  }

  [[nodiscard]] bool intersects(const IntegerSet& other) const noexcept {
    const IntegerSet& small = size() <= other.size() ? *this : other;
    const IntegerSet& large = size() <= other.size() ? other : *this;
    for (const auto e : small.elems_)
      if (large.contains(e)) return true;
    return false;
  }

  /// Union of sets known to be disjoint; throws if they are not.
  [[nodiscard]] static IntegerSet disjoint_union(const IntegerSet& a, const IntegerSet& b) {
    if (a.intersects(b))
      throw PreconditionViolated("disjoint_union called on intersecting sets");
    std::vector<std::uint64_t> merged;
    merged.reserve(a.size() + b.size());
    std::merge(a.elems_.begin(), a.elems_.end(), b.elems_.begin(), b.elems_.end(),
               std::back_inserter(merged));
    return IntegerSet{std::move(merged)};
  }

  friend bool operator==(const IntegerSet& a, const IntegerSet& b) noexcept {
    return a.elems_ == b.elems_;
  }

  [[nodiscard]] std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(elems_[i]);
    }
    s += "}";
    return s;
  }

 private:
  std::vector<std::uint64_t> elems_;
  detail::Bitmap bits_;
};

}  // namespace apfree
