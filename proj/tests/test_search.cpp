#include "apfree/search.hpp"

#include <vector>

#include "apfree/errors.hpp"
#include "apfree/greedy.hpp"
#include "apfree/measure.hpp"
#include "doctest.h"
#include "oracles.hpp"

using apfree::IntegerSet;
using apfree::Rational;
using apfree::SearchMethod;

namespace {

// Literal power-set sweep: every mask, a from-scratch progression scan, an
// exact sum per survivor, ties broken toward the lexicographically smaller
// element list.
std::pair<std::vector<std::uint64_t>, Rational> bitmask_optimum(std::uint64_t n, int p) {
  std::vector<std::uint64_t> best;
  Rational best_mu{-1};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::uint64_t> elems;
    for (std::uint64_t v = 1; v <= n; ++v)
      if (mask & (std::uint64_t{1} << (v - 1))) elems.push_back(v);
    if (!oracle::is_ap_free(elems, p)) continue;
    Rational mu;
    for (const auto e : elems) mu += Rational::reciprocal_of(e);
    const int c = Rational::compare(mu, best_mu);
    if (c > 0 || (c == 0 && std::lexicographical_compare(elems.begin(), elems.end(),
                                                         best.begin(), best.end()))) {
      best = elems;
      best_mu = mu;
    }
  }
  return {best, best_mu};
}

}  // namespace

TEST_CASE("spot optima") {
  const auto r5 = apfree::max_mu_subset(5, 3, SearchMethod::exhaustive);
  CHECK(r5.best_set == IntegerSet{{1, 2, 4, 5}});
  CHECK(r5.best_mu == Rational{39, 20});
  CHECK(r5.proven_optimal);

  const auto r1 = apfree::max_mu_subset(1, 3, SearchMethod::branch_and_bound);
  CHECK(r1.best_set == IntegerSet{{1}});
  CHECK(r1.best_mu == Rational{1});

  const auto r3 = apfree::max_mu_subset(3, 3, SearchMethod::exhaustive);
  CHECK(r3.best_set == IntegerSet{{1, 2}});
  CHECK(r3.best_mu == Rational{3, 2});
}

TEST_CASE("guard rails") {
  CHECK_THROWS_AS(static_cast<void>(apfree::max_mu_subset(26, 3, SearchMethod::exhaustive)),
                  apfree::TooLargeForExhaustive);
  CHECK_THROWS_AS(static_cast<void>(apfree::max_mu_subset(5, 2, SearchMethod::exhaustive)),
                  apfree::InvalidP);
  CHECK_NOTHROW(static_cast<void>(apfree::max_mu_subset(26, 3, SearchMethod::branch_and_bound)));
}

TEST_CASE("both methods match the literal power-set oracle") {
  for (const int p : {3, 4}) {
    for (std::uint64_t n = 1; n <= 14; ++n) {
      const auto [oracle_set, oracle_mu] = bitmask_optimum(n, p);
      const auto ex = apfree::max_mu_subset(n, p, SearchMethod::exhaustive);
      const auto bb = apfree::max_mu_subset(n, p, SearchMethod::branch_and_bound);
      CHECK(std::vector<std::uint64_t>(ex.best_set.elements().begin(),
                                       ex.best_set.elements().end()) == oracle_set);
      CHECK(ex.best_mu == oracle_mu);
      CHECK(bb.best_set == ex.best_set);
      CHECK(bb.best_mu == ex.best_mu);
      CHECK(bb.nodes_explored <= ex.nodes_explored);
    }
  }
}

TEST_CASE("soundness and bounds") {
  for (const int p : {3, 4}) {
    Rational prev{-1};
    for (std::uint64_t n = 1; n <= 20; ++n) {
      const auto r = apfree::max_mu_subset(n, p, SearchMethod::branch_and_bound);

      // Feasible, and mu recomputed independently matches exactly.
      const std::vector<std::uint64_t> elems(r.best_set.elements().begin(),
                                             r.best_set.elements().end());
      CHECK(oracle::is_ap_free(elems, p));
      CHECK(r.best_set.max() <= n);
      CHECK(*apfree::mu(r.best_set).exact == r.best_mu);

      // Monotone in the range, and never below the greedy restriction.
      CHECK(r.best_mu >= prev);
      prev = r.best_mu;
      CHECK(r.best_mu >= *apfree::mu(apfree::generate_up_to(p, n)).exact);
    }
  }
}

TEST_CASE("parallel search returns the sequential result") {
  for (const int p : {3, 4}) {
    const auto seq = apfree::max_mu_subset(17, p, SearchMethod::branch_and_bound, 1);
    const auto par = apfree::max_mu_subset(17, p, SearchMethod::branch_and_bound, 4);
    CHECK(par.best_set == seq.best_set);
    CHECK(par.best_mu == seq.best_mu);
  }
}

TEST_CASE("greedy_vs_optimal") {
  const auto eq = apfree::greedy_vs_optimal(5, 3);
  CHECK(eq.greedy_is_optimal);
  CHECK(eq.mu_gap.is_zero());
  CHECK(eq.greedy_set == eq.optimal.best_set);

  const auto triv = apfree::greedy_vs_optimal(1, 3);
  CHECK(triv.greedy_is_optimal);

  // Composite length at a modest window: no sign asserted, only coherence.
  const auto cmp = apfree::greedy_vs_optimal(20, 4);
  CHECK(cmp.greedy_mu + cmp.mu_gap == cmp.optimal.best_mu);
  CHECK(cmp.mu_gap >= Rational{0});
  CHECK(cmp.greedy_is_optimal == cmp.mu_gap.is_zero());
}
