#include <catch2/catch_amalgamated.hpp>

#include "folcoh/scalar.hpp"
#include "test_support.hpp"

using namespace folcoh;

TEST_CASE("rationals are canonical") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(-4, 2).str() == "-2");
    CHECK(Rational(1, 3).str() == "1/3");
    CHECK_THROWS_AS(Rational(1, 0), validation_error);
    CHECK_THROWS_AS(Rational(1) / Rational(0), validation_error);
}

TEST_CASE("rational text round trip") {
    testsupport::Rng rng(101);
    for (int i = 0; i < 200; ++i) {
        Rational r = rng.rational(1000, 999);
        auto back = Rational::parse(r.str());
        REQUIRE(back);
        CHECK(*back == r);
    }
    CHECK(!Rational::parse(""));
    CHECK(!Rational::parse("1/"));
    CHECK(!Rational::parse("/2"));
    CHECK(!Rational::parse("1.5"));
    CHECK(!Rational::parse("a"));
    CHECK(!Rational::parse("1/2/3"));
    CHECK(Rational::parse("-7/14") == Rational(-1, 2));
}

TEST_CASE("perfect squares") {
    CHECK(Rational(49, 4).sqrt_if_square() == Rational(7, 2));
    CHECK(Rational(0).sqrt_if_square() == Rational(0));
    CHECK(!Rational(2).sqrt_if_square());
    CHECK(!Rational(-4).sqrt_if_square());
    CHECK(!Rational(9, 2).sqrt_if_square());
}

TEST_CASE("gaussian rational arithmetic and i powers") {
    GaussianRational i = GaussianRational::i_unit();
    CHECK(i * i == GaussianRational(Rational(-1)));
    CHECK(GaussianRational::i_power(4) == GaussianRational(Rational(1)));
    CHECK(GaussianRational::i_power(-1) == GaussianRational(Rational(0), Rational(-1)));
    GaussianRational z(Rational(1, 2), Rational(-3, 4));
    CHECK(z * z.conj() == GaussianRational(Rational(13, 16)));
    CHECK(z / z == GaussianRational(Rational(1)));
}

TEST_CASE("gaussian rational text round trip") {
    testsupport::Rng rng(202);
    for (int i = 0; i < 200; ++i) {
        GaussianRational z(rng.rational(50, 9), rng.rational(50, 9));
        auto back = GaussianRational::parse(z.str());
        REQUIRE(back);
        CHECK(*back == z);
    }
    CHECK(GaussianRational::parse("1/2+3/4*i") ==
          GaussianRational(Rational(1, 2), Rational(3, 4)));
    CHECK(GaussianRational::parse("-2/3*i") == GaussianRational(Rational(0), Rational(-2, 3)));
    CHECK(GaussianRational(Rational(1, 2), Rational(-3, 4)).str() == "1/2-3/4*i");
    CHECK(!GaussianRational::parse("i"));
    CHECK(!GaussianRational::parse("1+*i"));
}
