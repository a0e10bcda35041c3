#include <catch2/catch_amalgamated.hpp>

#include "folcoh/framed_metric.hpp"
#include "test_support.hpp"

using namespace folcoh;
using testsupport::Rng;

static RForm e(int n, std::initializer_list<int> idx) {
    IndexMask m = 0;
    for (int i : idx) m |= IndexMask(1) << (i - 1);
    return RForm::basis(n, m);
}

static RForm random_form(Rng& rng, int n, int degree) {
    RForm f(n);
    for (IndexMask m : degree_masks(n, degree)) f.add_term(m, rng.rational(3, 3));
    return f;
}

TEST_CASE("wedge: fixed cases") {
    CHECK(wedge(e(3, {1}), e(3, {2})) == e(3, {1, 2}));
    CHECK(wedge(e(3, {1}), e(3, {1})).is_zero());
    auto a = e(3, {1}) + e(3, {2});
    auto b = e(3, {1}) - e(3, {2});
    CHECK(wedge(a, b) == Rational(-2) * e(3, {1, 2}));
    CHECK_THROWS_AS(wedge(e(2, {1}), e(3, {1})), validation_error);
}

TEST_CASE("wedge is graded-commutative and associative") {
    Rng rng(21);
    for (int t = 0; t < 60; ++t) {
        int n = static_cast<int>(rng.integer(2, 5));
        int ka = static_cast<int>(rng.integer(0, 3));
        int kb = static_cast<int>(rng.integer(0, 3));
        int kc = static_cast<int>(rng.integer(0, 2));
        auto a = random_form(rng, n, ka);
        auto b = random_form(rng, n, kb);
        auto c = random_form(rng, n, kc);
        auto ab = wedge(a, b);
        auto ba = wedge(b, a);
        CHECK(ab == ((ka * kb) % 2 == 0 ? ba : -ba));
        CHECK(wedge(ab, c) == wedge(a, wedge(b, c)));
    }
}

TEST_CASE("contraction: fixed cases") {
    CHECK(contract(1, e(3, {1, 2})) == e(3, {2}));
    CHECK(contract(3, e(3, {1, 2})).is_zero());
    auto f = e(3, {1, 2}) + Rational(2) * e(3, {2, 3});
    CHECK(contract(2, f) == -e(3, {1}) + Rational(2) * e(3, {3}));
    CHECK_THROWS_AS(contract(4, f), validation_error);
}

TEST_CASE("contraction is an antiderivation with square zero") {
    Rng rng(22);
    for (int t = 0; t < 60; ++t) {
        int n = static_cast<int>(rng.integer(2, 5));
        int x = static_cast<int>(rng.integer(1, n));
        int ka = static_cast<int>(rng.integer(0, 3));
        auto a = random_form(rng, n, ka);
        auto b = random_form(rng, n, static_cast<int>(rng.integer(0, 3)));
        auto lhs = contract(x, wedge(a, b));
        auto rhs = wedge(contract(x, a), b) +
                   (ka % 2 == 0 ? wedge(a, contract(x, b)) : -wedge(a, contract(x, b)));
        CHECK(lhs == rhs);
        CHECK(contract(x, contract(x, a)).is_zero());
    }
}

TEST_CASE("hodge star on an orthonormal 2-frame") {
    auto m = FramedMetric::orthonormal(2);
    CHECK(hodge_star(e(2, {1}), m) == e(2, {2}));
    CHECK(hodge_star(e(2, {2}), m) == -e(2, {1}));
    CHECK(hodge_star(RForm::unit(2), m) == e(2, {1, 2}));
    CHECK(hodge_star(e(2, {1, 2}), m) == RForm::unit(2));
}

TEST_CASE("hodge star satisfies its defining property for a non-flat Gram") {
    RMatrix g(3, 3);
    g(0, 0) = Rational(4);
    g(1, 1) = Rational(1);
    g(2, 2) = Rational(1);
    FramedMetric m(g, {1, 2, 3});
    m.validate();
    CHECK(m.volume_coefficient() == Rational(2));
    // frozen from solving a ^ *b = <a,b> vol on the degree-1 space
    CHECK(hodge_star(e(3, {1}), m) == Rational(1, 2) * e(3, {2, 3}));

    for (int k = 0; k <= 3; ++k) {
        auto masks = degree_masks(3, k);
        auto gram = form_gram(m, k);
        for (std::size_t i = 0; i < masks.size(); ++i)
            for (std::size_t j = 0; j < masks.size(); ++j) {
                auto lhs = wedge(RForm::basis(3, masks[i]),
                                 hodge_star(RForm::basis(3, masks[j]), m));
                RForm rhs(3);
                rhs.add_term((IndexMask(1) << 3) - 1, gram(i, j) * m.volume_coefficient());
                CHECK(lhs == rhs);
            }
    }
}

TEST_CASE("hodge star squares with the usual sign on random forms") {
    Rng rng(23);
    for (int t = 0; t < 30; ++t) {
        int n = static_cast<int>(rng.integer(2, 5));
        int k = static_cast<int>(rng.integer(0, n));
        auto m = FramedMetric::orthonormal(n);
        auto a = random_form(rng, n, k);
        auto ss = hodge_star(hodge_star(a, m), m);
        CHECK(ss == ((k * (n - k)) % 2 == 0 ? a : -a));
    }
}

TEST_CASE("transversal star reduces to the full star for point foliations") {
    Rng rng(24);
    auto m = FramedMetric::orthonormal(4);
    auto chi = RForm::unit(4);
    for (int k = 0; k <= 4; ++k) {
        auto a = random_form(rng, 4, k);
        CHECK(transversal_star(a, m, chi, 0, 4) == hodge_star(a, m));
    }
}

TEST_CASE("transversal star on the Carriere frame") {
    // p = 1, q = 2, chi = e1, orthonormal frame
    auto m = FramedMetric::orthonormal(3);
    auto chi = e(3, {1});
    CHECK(transversal_star(e(3, {2}), m, chi, 1, 2) == e(3, {3}));
    CHECK(transversal_star(e(3, {3}), m, chi, 1, 2) == -e(3, {2}));
    CHECK(transversal_star(RForm::unit(3), m, chi, 1, 2) == e(3, {2, 3}));
    CHECK(transversal_star(e(3, {2, 3}), m, chi, 1, 2) == RForm::unit(3));

    // star_bar^2 = (-1)^{k(q-k)} on transverse forms
    auto basic1 = e(3, {2}) + Rational(5, 3) * e(3, {3});
    auto twice = transversal_star(transversal_star(basic1, m, chi, 1, 2), m, chi, 1, 2);
    CHECK(twice == -basic1);
}

TEST_CASE("form text round trip and parsing") {
    Rng rng(25);
    for (int t = 0; t < 50; ++t) {
        int n = static_cast<int>(rng.integer(1, 5));
        RForm f(n);
        int terms = static_cast<int>(rng.integer(0, 4));
        for (int i = 0; i < terms; ++i) {
            int k = static_cast<int>(rng.integer(0, n));
            auto masks = degree_masks(n, k);
            f.add_term(masks[static_cast<std::size_t>(
                           rng.integer(0, static_cast<long>(masks.size()) - 1))],
                       rng.rational());
        }
        CHECK(parse_form(f.str(), n) == f);
    }
    CHECK(parse_form("1/2 * e{3}", 3) == Rational(1, 2) * e(3, {3}));
    CHECK(parse_form("e{1,2} - 2 * e{2,3}", 3) == e(3, {1, 2}) - Rational(2) * e(3, {2, 3}));
    CHECK(parse_form("0", 3).is_zero());
    CHECK(parse_form("3", 2) == Rational(3) * RForm::unit(2));
    CHECK_THROWS_AS(parse_form("e{4}", 3), parse_error);
    CHECK_THROWS_AS(parse_form("e{2,1}", 3), parse_error);
    CHECK_THROWS_AS(parse_form("1 ** e{1}", 3), parse_error);
}
