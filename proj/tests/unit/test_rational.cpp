#include <doctest.h>

#include <limits>
#include <random>
#include <sstream>

#include "kgcohort/error.hpp"
#include "kgcohort/rational.hpp"

using kgcohort::Errc;
using kgcohort::Error;
using kgcohort::Rational;

TEST_SUITE("rational") {
  TEST_CASE("lowest terms with positive denominator") {
    Rational r(6, -8);
    CHECK(r.small_num() == -3);
    CHECK(r.small_den() == 4);
    CHECK(r.str() == "-3/4");
    CHECK(Rational(10, 5).str() == "2");
    CHECK(Rational(0, -7) == Rational(0));
    CHECK(Rational(0, -7).small_den() == 1);
  }

  TEST_CASE("zero denominator is a domain error") {
    try {
      Rational(1, 0);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::DomainError);
    }
    CHECK_THROWS_AS(Rational(0).reciprocal(), Error);
    CHECK_THROWS_AS(Rational(1) / Rational(0), Error);
  }

  TEST_CASE("arithmetic") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
    CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
    CHECK(Rational(2, 3) / Rational(4, 9) == Rational(3, 2));
    CHECK(-Rational(2, 3) == Rational(-2, 3));
    CHECK(Rational(3, 7).reciprocal() == Rational(7, 3));
    CHECK(Rational(-3, 7).reciprocal() == Rational(-7, 3));
  }

  TEST_CASE("ordering") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(5) > Rational(49, 10));
  }

  TEST_CASE("parse and print") {
    CHECK(Rational::parse("3/15") == Rational(1, 5));
    CHECK(Rational::parse("-7") == Rational(-7));
    CHECK(Rational::parse("123456789012345678901234567890/2").is_big());
    CHECK_THROWS_AS(Rational::parse("1/0"), Error);
    CHECK_THROWS_AS(Rational::parse("abc"), Error);
    CHECK_THROWS_AS(Rational::parse(""), Error);
    std::ostringstream os;
    os << Rational(22, 7);
    CHECK(os.str() == "22/7");
  }

  TEST_CASE("overflow promotes to big and demotes back") {
    const auto max = std::numeric_limits<std::int64_t>::max();
    Rational big = Rational(max) + Rational(1);
    CHECK(big.is_big());
    CHECK(big.num_str() == "9223372036854775808");
    Rational back = big - Rational(1);
    CHECK_FALSE(back.is_big());
    CHECK(back == Rational(max));

    Rational tiny(1, max);
    Rational sq = tiny * tiny;
    CHECK(sq.is_big());
    CHECK(sq.reciprocal() / Rational(max) == Rational(max));
    CHECK_FALSE((sq.reciprocal() / Rational(max)).is_big());
    CHECK(sq < tiny);
    CHECK(sq > Rational(0));

    // Same value reached two ways prints the same.
    Rational a = Rational(1, 3) + Rational(max - 1, max);
    Rational b = Rational(max - 1, max) + Rational(1, 3);
    CHECK(a == b);
    CHECK(a.str() == b.str());
  }

  TEST_CASE("int64 minimum is handled") {
    const auto min = std::numeric_limits<std::int64_t>::min();
    Rational m(min);
    CHECK((-m).num_str() == "9223372036854775808");
    CHECK(-(-m) == m);
    CHECK(Rational(min, -1).num_str() == "9223372036854775808");
    CHECK(Rational(min, min) == Rational(1));
  }

  TEST_CASE("field identities on random values") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> small(-1000, 1000), large(-(1LL << 62), 1LL << 62);
    for (int k = 0; k < 2000; ++k) {
      auto draw = [&]() {
        auto& d = (k % 3 == 0) ? large : small;
        std::int64_t den = d(rng);
        if (den == 0) den = 1;
        return Rational(d(rng), den);
      };
      Rational a = draw(), b = draw(), c = draw();
      CHECK((a + b) - b == a);
      CHECK(a + b == b + a);
      CHECK((a + b) + c == a + (b + c));
      CHECK(a * (b + c) == a * b + a * c);
      if (!b.is_zero()) CHECK((a * b) / b == a);
      CHECK(((a < b) == (b - a).sign() > 0));
    }
  }

  TEST_CASE("to_double") {
    CHECK(Rational(1, 4).to_double() == 0.25);
    CHECK(Rational::parse("1/300000000000000000000000000000").to_double() ==
          doctest::Approx(1e-29).epsilon(1e-12));
  }
}
