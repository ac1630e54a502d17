#include <catch2/catch_amalgamated.hpp>

#include "fpsum/rational.hpp"
#include "fpsum/rng.hpp"

using fpsum::Rational;

TEST_CASE("decimal parsing is exact") {
    CHECK(Rational::parse("3") == Rational(3));
    CHECK(Rational::parse("-12") == Rational(-12));
    CHECK(Rational::parse("3.25") == Rational(13, 4));
    CHECK(Rational::parse("0.1") == Rational(1, 10));
    CHECK(Rational::parse("-0.125") == Rational(-1, 8));
    CHECK(Rational::parse("1e-3") == Rational(1, 1000));
    CHECK(Rational::parse("2.5e2") == Rational(250));
    CHECK_THROWS_AS(Rational::parse("abc"), fpsum::ParseError);
    CHECK_THROWS_AS(Rational::parse("1.2.3"), fpsum::ParseError);
    CHECK_THROWS_AS(Rational::parse(""), fpsum::ParseError);
}

TEST_CASE("decimal rendering round-trips") {
    fpsum::SplitRng rng(7, 0);
    for (int i = 0; i < 200; ++i) {
        std::int64_t num = static_cast<std::int64_t>(rng.next_below(20001)) - 10000;
        std::int64_t den = 1;
        for (std::uint64_t k = rng.next_below(4); k > 0; --k) den *= 10;
        Rational r(num, den);
        CHECK(Rational::parse(r.to_decimal_string()) == r);
    }
    CHECK(Rational(1, 3).to_decimal_string() == "1/3");
    CHECK(Rational(-13, 4).to_decimal_string() == "-3.25");
}

TEST_CASE("gcd and exact quotients") {
    Rational g = Rational::gcd(Rational(3, 4), Rational(1, 2));
    CHECK(g == Rational(1, 4));
    CHECK(Rational::gcd(Rational(0), Rational(5, 2)) == Rational(5, 2));
    CHECK(Rational::exact_quotient(Rational(3, 2), Rational(1, 2)) == 3);
    CHECK_THROWS_AS(Rational::exact_quotient(Rational(1, 3), Rational(1, 2)), fpsum::Error);
}

TEST_CASE("arithmetic matches double evaluation") {
    fpsum::SplitRng rng(11, 1);
    for (int i = 0; i < 200; ++i) {
        Rational a(static_cast<std::int64_t>(rng.next_below(401)) - 200,
                   1 + static_cast<std::int64_t>(rng.next_below(12)));
        Rational b(static_cast<std::int64_t>(rng.next_below(401)) - 200,
                   1 + static_cast<std::int64_t>(rng.next_below(12)));
        CHECK((a + b).to_double() == Catch::Approx(a.to_double() + b.to_double()).margin(1e-12));
        CHECK((a * b).to_double() == Catch::Approx(a.to_double() * b.to_double()).margin(1e-12));
        CHECK((a - b).to_double() == Catch::Approx(a.to_double() - b.to_double()).margin(1e-12));
    }
}
