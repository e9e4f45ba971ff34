#include "apfree/bigint.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"

using apfree::Natural;
using u128 = unsigned __int128;

namespace {

Natural from_u128(u128 v) {
  Natural n{static_cast<std::uint64_t>(v >> 64)};
  n.shift_left(64);
  n += Natural{static_cast<std::uint64_t>(v)};
  return n;
}

u128 to_u128(const Natural& n) {
  REQUIRE(n.bit_width() <= 128);
  Natural hi = n;
  hi.shift_right(64);
  Natural lo = n;
  lo -= [&] {
    Natural t = hi;
    t.shift_left(64);
    return t;
  }();
  return (static_cast<u128>(hi.to_u64()) << 64) | lo.to_u64();
}

Natural random_natural(std::mt19937_64& rng, std::size_t limbs) {
  Natural n;
  for (std::size_t i = 0; i < limbs; ++i) {
    n.shift_left(64);
    n += Natural{rng()};
  }
  return n;
}

}  // namespace

TEST_CASE("natural basics") {
  Natural zero;
  CHECK(zero.is_zero());
  CHECK(zero.to_decimal() == "0");
  CHECK(Natural{1}.is_one());
  CHECK(Natural{7} + Natural{8} == Natural{15});
  CHECK(Natural{100} - Natural{58} == Natural{42});
  CHECK(Natural{6} * Natural{7} == Natural{42});
  CHECK(Natural{5} < Natural{8});
  CHECK(Natural{8} > Natural{5});
  CHECK(Natural::from_decimal("18446744073709551616").bit_width() == 65);  // 2^64
  CHECK_THROWS(static_cast<void>(Natural{3} - Natural{4}));

  // Numerator smaller than the denominator short-circuits.
  const Natural big = Natural::from_decimal("340282366920938463463374607431768211457");
  const auto [q0, r0] = Natural::divmod(Natural{5}, big);
  CHECK(q0.is_zero());
  CHECK(r0 == Natural{5});
  CHECK_THROWS(static_cast<void>(Natural::divmod(big, Natural{})));
}

TEST_CASE("single-limb arithmetic agrees with built-in integers") {
  std::mt19937_64 rng(12345);
  for (int iter = 0; iter < 2000; ++iter) {
    const std::uint64_t a = rng(), b = rng();
    CHECK(to_u128(Natural{a} + Natural{b}) == static_cast<u128>(a) + b);
    CHECK(to_u128(Natural{a} * Natural{b}) == static_cast<u128>(a) * b);
    if (b != 0) {
      const auto [q, r] = Natural::divmod(Natural{a}, Natural{b});
      CHECK(q.to_u64() == a / b);
      CHECK(r.to_u64() == a % b);
    }
    const std::uint64_t lo = std::min(a, b), hi = std::max(a, b);
    CHECK((Natural{hi} - Natural{lo}).to_u64() == hi - lo);
    CHECK(Natural::gcd(Natural{a}, Natural{b}).to_u64() == std::gcd(a, b));
  }
}

TEST_CASE("two-limb values against 128-bit reference") {
  std::mt19937_64 rng(99);
  for (int iter = 0; iter < 2000; ++iter) {
    const u128 a = (static_cast<u128>(rng()) << 64) | rng();
    const u128 b = (static_cast<u128>(rng()) << 64) | rng();
    CHECK(to_u128(from_u128(a / 2) + from_u128(b / 2)) == a / 2 + b / 2);
    if (b != 0) {
      const auto [q, r] = Natural::divmod(from_u128(a), from_u128(b));
      CHECK(to_u128(q) == a / b);
      CHECK(to_u128(r) == a % b);
    }
  }
}

TEST_CASE("multi-limb multiply-divide round trips") {
  std::mt19937_64 rng(2024);
  for (int iter = 0; iter < 400; ++iter) {
    const std::size_t la = 1 + static_cast<std::size_t>(rng() % 7);
    const std::size_t lb = 1 + static_cast<std::size_t>(rng() % 7);
    const Natural a = random_natural(rng, la);
    Natural b = random_natural(rng, lb);
    if (b.is_zero()) b = Natural{1};

    const Natural prod = a * b;
    CHECK(Natural::divmod(prod, b).first == a);
    CHECK(Natural::divmod(prod, b).second.is_zero());

    // Quotient/remainder reconstruction on an arbitrary numerator.
    const Natural num = random_natural(rng, la + lb);
    const auto [q, r] = Natural::divmod(num, b);
    CHECK(r < b);
    CHECK(q * b + r == num);
  }
}

TEST_CASE("division qhat correction paths") {
  // Divisors with saturated top limbs push the estimated quotient digit to
  // its correction branches.
  std::mt19937_64 rng(777);
  for (int iter = 0; iter < 400; ++iter) {
    Natural b = random_natural(rng, 2 + static_cast<std::size_t>(rng() % 3));
    Natural top{~std::uint64_t{0}};
    top.shift_left(64 * (b.limb_count() - 1));
    b += top;  // force a high top limb
    const Natural num = random_natural(rng, b.limb_count() + 2);
    const auto [q, r] = Natural::divmod(num, b);
    CHECK(r < b);
    CHECK(q * b + r == num);
  }
}

TEST_CASE("decimal conversions round trip") {
  CHECK(Natural::from_decimal("0").is_zero());
  CHECK(Natural::from_decimal("340282366920938463463374607431768211456").to_decimal() ==
        "340282366920938463463374607431768211456");  // 2^128
  std::mt19937_64 rng(31337);
  for (int iter = 0; iter < 200; ++iter) {
    const Natural a = random_natural(rng, 1 + static_cast<std::size_t>(rng() % 6));
    CHECK(Natural::from_decimal(a.to_decimal()) == a);
  }
}

TEST_CASE("shifts round trip and gcd scales") {
  std::mt19937_64 rng(4242);
  for (int iter = 0; iter < 200; ++iter) {
    const Natural a = random_natural(rng, 1 + static_cast<std::size_t>(rng() % 4));
    const std::size_t s = static_cast<std::size_t>(rng() % 130);
    Natural shifted = a;
    shifted.shift_left(s);
    shifted.shift_right(s);
    CHECK(shifted == a);

    Natural x = random_natural(rng, 2), y = random_natural(rng, 2);
    const std::uint64_t k = 1 + (rng() % 1000);
    Natural kx = x, ky = y;
    kx.mul_u64(k);
    ky.mul_u64(k);
    Natural expect = Natural::gcd(x, y);
    expect.mul_u64(k);
    CHECK(Natural::gcd(kx, ky) == expect);
  }
}

TEST_CASE("float projection") {
  CHECK(Natural{0}.to_double() == 0.0);
  CHECK(Natural{1}.to_double() == 1.0);
  CHECK(Natural{123456789}.to_double() == doctest::Approx(123456789.0));
  Natural big = Natural::from_decimal("123456789012345678901234567890");
  CHECK(big.to_double() == doctest::Approx(1.2345678901234568e29).epsilon(1e-12));
}
