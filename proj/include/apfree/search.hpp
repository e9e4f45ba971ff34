#pragma once

// Exact maximization of the reciprocal sum over progression-free subsets of
// [1, N]. Both methods walk the include/exclude decision tree on 1..N in
// increasing order with an incremental feasibility check; branch-and-bound
// additionally prunes against the exact sum of all undecided reciprocals.
// All comparisons are exact rationals, so optimality is unconditional.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "apfree/errors.hpp"
#include "apfree/greedy.hpp"
#include "apfree/integer_set.hpp"
#include "apfree/measure.hpp"
#include "apfree/progressions.hpp"
#include "apfree/rational.hpp"

namespace apfree {

enum class SearchMethod { exhaustive, branch_and_bound };

inline const char* to_string(SearchMethod m) {
  return m == SearchMethod::exhaustive ? "exhaustive" : "branch_and_bound";
}

struct SearchResult {
  IntegerSet best_set;
  Rational best_mu;
  std::uint64_t nodes_explored = 0;
  SearchMethod method = SearchMethod::branch_and_bound;
  bool proven_optimal = false;
};

inline constexpr std::uint64_t exhaustive_limit = 25;

namespace detail {

// Mutable decision state: chosen elements plus a bitmap for the
// progression probes.
struct SearchSpace {
  std::vector<std::uint64_t> chosen;
  Bitmap bits;

  [[nodiscard]] std::span<const std::uint64_t> elements() const noexcept { return chosen; }
  [[nodiscard]] bool contains(std::uint64_t n) const noexcept { return bits.test(n); }

  void push(std::uint64_t x) {
    chosen.push_back(x);
    bits.set(x);
  }
  void pop() {
    bits.clear(chosen.back());
    chosen.pop_back();
  }
};

struct Incumbent {
  std::vector<std::uint64_t> elements;
  Rational mu;

  // Replace on strictly larger mu, or on equal mu with a lexicographically
  // smaller element list.
  bool offer(const std::vector<std::uint64_t>& cand, const Rational& cand_mu) {
    const int c = Rational::compare(cand_mu, mu);
    if (c < 0) return false;
    if (c == 0 && !std::lexicographical_compare(cand.begin(), cand.end(), elements.begin(),
                                                elements.end()))
      return false;
    elements = cand;
    mu = cand_mu;
    return true;
  }
};

struct SearchContext {
  std::uint64_t n;
  int p;
  bool use_bound;
  std::vector<Rational> suffix;  // suffix[x] = sum of 1/k for k in [x, n]
  std::uint64_t nodes = 0;

  void dfs(SearchSpace& space, std::uint64_t next, const Rational& current,
           Incumbent& best) {
    ++nodes;
    if (next > n) {
      best.offer(space.chosen, current);
      return;
    }
    if (use_bound && current + suffix[next] <= best.mu) return;
    if (!creates_ap_as_max(space, next, p)) {
      space.push(next);
      dfs(space, next + 1, current + Rational::reciprocal_of(next), best);
      space.pop();
    }
    dfs(space, next + 1, current, best);
  }
};

inline std::vector<Rational> suffix_sums(std::uint64_t n) {
  std::vector<Rational> suffix(static_cast<std::size_t>(n) + 2);
  for (std::uint64_t x = n; x >= 1; --x)
    suffix[x] = suffix[x + 1] + Rational::reciprocal_of(x);
  return suffix;
}

}  // namespace detail

inline SearchResult max_mu_subset(std::uint64_t n, int p, SearchMethod method,
                                  unsigned jobs = 1) {
  require_valid_p(p);
  if (n == 0) throw PreconditionViolated("search range must be nonempty");
  if (method == SearchMethod::exhaustive && n > exhaustive_limit)
    throw TooLargeForExhaustive(n, exhaustive_limit);

  const IntegerSet greedy_start = generate_up_to(p, n);
  detail::Incumbent seed;
  seed.elements.assign(greedy_start.elements().begin(), greedy_start.elements().end());
  seed.mu = exact_reciprocal_sum(greedy_start.elements());

  const auto suffix = detail::suffix_sums(n);
  const bool use_bound = method == SearchMethod::branch_and_bound;

  SearchResult out;
  out.method = method;

  if (jobs <= 1) {
    detail::SearchContext ctx{n, p, use_bound, suffix};
    detail::SearchSpace space;
    space.bits.ensure(n);
    detail::Incumbent best = seed;
    ctx.dfs(space, 1, Rational{0}, best);
    out.best_set = IntegerSet{std::move(best.elements)};
    out.best_mu = std::move(best.mu);
    out.nodes_explored = ctx.nodes;
  } else {
    // Split the tree at a fixed depth into independent subtasks, each run
    // with its own incumbent; merge deterministically in tree order, so the
    // result matches the sequential run.
    std::uint64_t depth = 1;
    while (depth < n && (std::uint64_t{1} << depth) < 8ULL * jobs) ++depth;

    struct Task {
      std::vector<std::uint64_t> prefix;
      Rational mu;
    };
    std::vector<Task> tasks;
    {
      detail::SearchSpace space;
      space.bits.ensure(n);
      // Enumerate feasible prefixes of decisions on 1..depth, include-first.
      auto emit = [&](auto&& self, std::uint64_t next, const Rational& cur) -> void {
        if (next > depth) {
          tasks.push_back(Task{space.chosen, cur});
          return;
        }
        if (!detail::creates_ap_as_max(space, next, p)) {
          space.push(next);
          self(self, next + 1, cur + Rational::reciprocal_of(next));
          space.pop();
        }
        self(self, next + 1, cur);
      };
      emit(emit, 1, Rational{0});
    }

    std::atomic<std::size_t> cursor{0};
    const unsigned workers = std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size()));
    std::vector<std::pair<detail::Incumbent, std::uint64_t>> results(tasks.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t idx = cursor.fetch_add(1);
          if (idx >= tasks.size()) return;
          detail::SearchContext ctx{n, p, use_bound, suffix};
          detail::SearchSpace space;
          space.bits.ensure(n);
          for (const auto x : tasks[idx].prefix) space.push(x);
          detail::Incumbent best = seed;
          ctx.dfs(space, depth + 1, tasks[idx].mu, best);
          results[idx] = {std::move(best), ctx.nodes};
        }
      });
    }
    for (auto& t : pool) t.join();

    detail::Incumbent best = seed;
    std::uint64_t nodes = 0;
    for (auto& [inc, cnt] : results) {
      best.offer(inc.elements, inc.mu);
      nodes += cnt;
    }
    out.best_set = IntegerSet{std::move(best.elements)};
    out.best_mu = std::move(best.mu);
    out.nodes_explored = nodes;
  }

  if (auto w = find_ap_witness(out.best_set, p))
    throw std::logic_error("search returned a set containing a progression");
  out.proven_optimal = true;
  return out;
}

struct GreedyComparison {
  IntegerSet greedy_set;
  Rational greedy_mu;
  SearchResult optimal;
  Rational mu_gap;  // optimal minus greedy, always >= 0
  bool greedy_is_optimal = false;
};

/// The greedy run truncated at N against the exact optimum on [1, N]. No
/// claim beyond the window: small-N outcomes say nothing asymptotic.
inline GreedyComparison greedy_vs_optimal(std::uint64_t n, int p, unsigned jobs = 1) {
  GreedyComparison out;
  out.greedy_set = generate_up_to(p, n);
  out.greedy_mu = exact_reciprocal_sum(out.greedy_set.elements());
  out.optimal = max_mu_subset(n, p, SearchMethod::branch_and_bound, jobs);
  out.mu_gap = out.optimal.best_mu - out.greedy_mu;
  out.greedy_is_optimal = out.mu_gap.is_zero();
  return out;
}

}  // namespace apfree
