#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "halolab/errors.hpp"
#include "halolab/random.hpp"
#include "halolab/rational.hpp"

using halolab::Rational;

TEST_CASE("lowest terms and positive denominator") {
  Rational r(6, -8);
  CHECK(r.num() == -3);
  CHECK(r.den() == 4);
  CHECK(r.str() == "-3/4");
  CHECK(Rational(10, 5).str() == "2");
  CHECK_THROWS_AS(Rational(1, 0), halolab::InvalidArgument);
}

TEST_CASE("parse round-trips") {
  for (const char* text : {"0", "7", "-7", "3/2", "-101/100", "123456789012345678901234567890/11"})
    CHECK(Rational::parse(text).str() == text);
  CHECK(Rational::parse("4/6") == Rational(2, 3));
  for (const char* text : {"", "/", "1/", "a/b", "1/0", " 1/2", "1.5", "--1"})
    CHECK_THROWS_AS(Rational::parse(text), halolab::InvalidArgument);
}

TEST_CASE("exact arithmetic and ordering") {
  Rational a(2, 3), b(3, 2);
  CHECK(a * b == Rational(1));
  CHECK(a + b == Rational(13, 6));
  CHECK(a - b == Rational(-5, 6));
  CHECK(a / b == Rational(4, 9));
  CHECK(a < b);
  CHECK(Rational(1, 3) + Rational(1, 3) + Rational(1, 3) == Rational(1));
  CHECK_THROWS_AS(a / Rational(0), halolab::InvalidArgument);
  CHECK(pow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(pow(Rational(5), 0) == Rational(1));
}

TEST_CASE("floor and ceil") {
  CHECK(Rational(7, 2).floor() == 3);
  CHECK(Rational(7, 2).ceil() == 4);
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(-7, 2).ceil() == -3);
  CHECK(Rational(4).floor() == 4);
  CHECK(Rational(4).ceil() == 4);
}

TEST_CASE("decimal rounds half to even at 12 places") {
  CHECK(Rational(4, 3).decimal() == "1.333333333333");
  CHECK(Rational(2, 3).decimal() == "0.666666666667");
  CHECK(Rational(-2, 3).decimal() == "-0.666666666667");
  CHECK(Rational(3).decimal() == "3.000000000000");
  // Exact ties: 5e-13 goes down to even 0, 15e-13 up to even 2.
  CHECK(Rational(halolab::BigInt(5), halolab::BigInt("10000000000000")).decimal() == "0.000000000000");
  CHECK(Rational(halolab::BigInt(15), halolab::BigInt("10000000000000")).decimal() == "0.000000000002");
  CHECK(Rational(1, 8).decimal(2) == "0.12");
  CHECK(Rational(3, 8).decimal(2) == "0.38");
}

TEST_CASE("to_u64 range") {
  CHECK(halolab::to_u64(halolab::BigInt(42)) == 42u);
  CHECK(!halolab::to_u64(halolab::BigInt(-1)));
  CHECK(!halolab::to_u64(halolab::BigInt("18446744073709551616")));
}

TEST_CASE("bounded draws stay in range and are reproducible") {
  std::mt19937_64 a(9), b(9);
  for (int i = 0; i < 1000; ++i) {
    auto x = halolab::bounded_draw(a, 7);
    CHECK(x < 7);
    CHECK(x == halolab::bounded_draw(b, 7));
  }
  CHECK(halolab::derive_seed(1, 0) != halolab::derive_seed(1, 1));
  CHECK(halolab::derive_seed(1, 5) == halolab::derive_seed(1, 5));
}
