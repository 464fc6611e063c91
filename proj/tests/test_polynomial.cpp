#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "knotforge/errors.hpp"
#include "knotforge/polynomial.hpp"

using namespace knotforge;

namespace {

RatPoly from_longs(std::initializer_list<long> cs) {
  std::vector<Rat> v;
  for (long c : cs) v.emplace_back(c);
  return RatPoly(std::move(v));
}

}  // namespace

TEST_CASE("rational parsing round-trips") {
  CHECK(parse_rational("3/4") == Rat(3, 4));
  CHECK(parse_rational("-42224361/1146679") == Rat(-42224361, 1146679));
  CHECK(parse_rational("17") == Rat(17));
  CHECK(rational_to_string(Rat(-5, 8)) == "-5/8");
  CHECK_THROWS_AS(parse_rational("abc"), FixtureError);
}

TEST_CASE("long double conversion keeps extended precision") {
  // 2^70 + 1 is not representable in a 53-bit double but is in 64 bits
  mpz_class big = (mpz_class(1) << 70) + mpz_class(1);
  long double v = mpz_to_long_double(big);
  long double expect = powl(2.0L, 70) + 1.0L;
  CHECK(v == expect);
  CHECK(rat_to_long_double(Rat(1, 3)) == doctest::Approx(1.0L / 3.0L));
}

TEST_CASE("polynomial arithmetic and evaluation") {
  RatPoly p = from_longs({-1, 0, 1});  // t^2 - 1
  RatPoly q = from_longs({1, 1});      // t + 1
  CHECK((p * q).degree() == 3);
  CHECK(p.eval(Rat(3)) == Rat(8));
  CHECK(p.eval_ld(3.0L) == doctest::Approx(8.0L));
  auto [quo, rem] = p.divrem(q);
  CHECK(rem.is_zero());
  CHECK(quo == from_longs({-1, 1}));
  CHECK(p.derivative() == from_longs({0, 2}));
}

TEST_CASE("gcd finds shared linear factors") {
  RatPoly a = from_longs({-1, 1}) * from_longs({-2, 1}) * from_longs({-3, 1});
  RatPoly b = from_longs({-2, 1}) * from_longs({-3, 1}) * from_longs({5, 7});
  RatPoly g = RatPoly::gcd(a, b);
  CHECK(g.degree() == 2);
  CHECK(g.eval(Rat(2)) == 0);
  CHECK(g.eval(Rat(3)) == 0);
  CHECK(g.eval(Rat(1)) != 0);
}

TEST_CASE("root isolation on a half-open interval") {
  // roots 1/10, 1/4, 1/2, 21/25 of the product of linear factors
  RatPoly p = RatPoly::linear(Rat(-1), Rat(10)) * RatPoly::linear(Rat(-1), Rat(4)) *
              RatPoly::linear(Rat(-1), Rat(2)) * RatPoly::linear(Rat(-21), Rat(25));
  auto roots = isolate_real_roots(p, Rat(0), Rat(1), Rat(1, 1000000000000L));
  REQUIRE(roots.size() == 4);
  std::vector<Rat> expect = {Rat(1, 10), Rat(1, 4), Rat(1, 2), Rat(21, 25)};
  for (int i = 0; i < 4; ++i) CHECK(abs(roots[i] - expect[i]) < Rat(1, 1000000000));
}

TEST_CASE("roots at the interval endpoints follow half-open semantics") {
  RatPoly p = from_longs({0, 1}) * from_longs({-1, 1});  // t(t-1)
  auto roots = isolate_real_roots(p, Rat(0), Rat(1), Rat(1, 1000000000000L));
  REQUIRE(roots.size() == 1);  // 0 in, 1 out
  CHECK(roots[0] == Rat(0));
}

TEST_CASE("no real roots yields an empty list") {
  RatPoly p = from_longs({1, 0, 1});  // t^2 + 1
  CHECK(isolate_real_roots(p, Rat(0), Rat(1), Rat(1, 1000000)).empty());
}

TEST_CASE("repeated roots are reported once") {
  RatPoly p = from_longs({-1, 1}) * from_longs({-1, 1}) * from_longs({1, 2});
  auto roots = isolate_real_roots(p, Rat(-1), Rat(2), Rat(1, 1000000000000L));
  REQUIRE(roots.size() == 2);
  CHECK(abs(roots[0] + Rat(1, 2)) < Rat(1, 1000000000));
  CHECK(abs(roots[1] - Rat(1)) < Rat(1, 1000000000));
}
