#include <catch2/catch_amalgamated.hpp>

#include "folcoh/form.hpp"
#include "folcoh/linalg.hpp"
#include "test_support.hpp"

using namespace folcoh;
using testsupport::Rng;

static Rational q(long n, long d = 1) { return Rational(n, d); }

TEST_CASE("rank and kernel: fixed cases") {
    CHECK(rank_and_kernel(RMatrix::identity(2)).first == 2);
    CHECK(rank_and_kernel(RMatrix::identity(2)).second.cols() == 0);

    auto z = RMatrix::zero(3, 4);
    auto [r, ker] = rank_and_kernel(z);
    CHECK(r == 0);
    CHECK(ker.cols() == 4);

    // degree-1 differential of the Carriere basic complex: a e2 + b e3 -> -a e2^e3
    RMatrix d1(1, 2, {q(-1), q(0)});
    auto [r2, ker2] = rank_and_kernel(d1);
    CHECK(r2 == 1);
    REQUIRE(ker2.cols() == 1);
    CHECK(ker2(0, 0) == q(0));
    CHECK(ker2(1, 0) == q(1));
}

TEST_CASE("rank-nullity and kernel columns map to zero") {
    Rng rng(7);
    for (int t = 0; t < 40; ++t) {
        std::size_t r = static_cast<std::size_t>(rng.integer(0, 5));
        std::size_t c = static_cast<std::size_t>(rng.integer(0, 5));
        auto m = rng.matrix(r, c);
        auto [rk, ker] = rank_and_kernel(m);
        CHECK(rk + ker.cols() == c);
        CHECK((m * ker).is_zero());
        CHECK(rank(ker) == ker.cols());
    }
}

TEST_CASE("adjoint_wrt: fixed cases") {
    SymmetricForm<Rational> id2(RMatrix::identity(2));
    SymmetricForm<Rational> id3(RMatrix::identity(3));

    Rng rng(8);
    auto a = rng.matrix(3, 2);
    CHECK(adjoint_wrt(a, id2, id3) == a.transpose());
    CHECK(adjoint_wrt(RMatrix::identity(3), id3, id3) == RMatrix::identity(3));

    RMatrix g_dom(2, 2, {q(2), q(0), q(0), q(1)});
    RMatrix g_cod(1, 1, {q(3)});
    RMatrix a12(1, 2, {q(1), q(0)});
    auto adj = adjoint_wrt(a12, SymmetricForm<Rational>(g_dom), SymmetricForm<Rational>(g_cod));
    REQUIRE(adj.rows() == 2);
    CHECK(adj(0, 0) == q(3, 2));
    CHECK(adj(1, 0) == q(0));
}

TEST_CASE("adjoint is an involution and rejects indefinite Grams") {
    Rng rng(9);
    for (int t = 0; t < 25; ++t) {
        std::size_t n = static_cast<std::size_t>(rng.integer(1, 4));
        std::size_t m = static_cast<std::size_t>(rng.integer(1, 4));
        SymmetricForm<Rational> gd(rng.positive_definite(n));
        SymmetricForm<Rational> gc(rng.positive_definite(m));
        auto a = rng.matrix(m, n);
        auto astar = adjoint_wrt(a, gd, gc);
        CHECK(adjoint_wrt(astar, gc, gd) == a);
        // defining property <a x, y>_cod = <x, a* y>_dom as a matrix identity
        CHECK(a.transpose() * gc.matrix() == gd.matrix() * astar);
    }
    RMatrix indef(2, 2, {q(1), q(0), q(0), q(-1)});
    CHECK_THROWS_AS(adjoint_wrt(RMatrix::identity(2), SymmetricForm<Rational>(indef),
                                SymmetricForm<Rational>(RMatrix::identity(2))),
                    validation_error);
}

TEST_CASE("sylvester signature: fixed cases") {
    RMatrix d(2, 2, {q(1), q(0), q(0), q(-1)});
    auto s = sylvester_signature(SymmetricForm<Rational>(d));
    CHECK(s.n_plus == 1);
    CHECK(s.n_minus == 1);
    CHECK(s.n_zero == 0);

    auto z = sylvester_signature(SymmetricForm<Rational>(RMatrix::zero(3, 3)));
    CHECK(z.n_zero == 3);

    // hyperbolic block with zero diagonal
    RMatrix h(2, 2, {q(0), q(5), q(5), q(0)});
    auto hs = sylvester_signature(SymmetricForm<Rational>(h));
    CHECK(hs.n_plus == 1);
    CHECK(hs.n_minus == 1);
}

TEST_CASE("wedge pairing of the 2-forms on a 4-frame has signature (3,3,0)") {
    // Independent oracle: enumerate the six increasing pairs (i,j), pair two
    // of them by the sign of sorting the concatenated quadruple, zero unless
    // the union is {1,2,3,4}.
    std::vector<std::pair<int, int>> basis;
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j) basis.emplace_back(i, j);
    REQUIRE(basis.size() == 6);
    auto sort_sign = [](std::vector<int> v) {
        int sign = 1;
        for (std::size_t a = 0; a < v.size(); ++a)
            for (std::size_t b = a + 1; b < v.size(); ++b)
                if (v[a] > v[b]) {
                    std::swap(v[a], v[b]);
                    sign = -sign;
                }
        for (std::size_t a = 1; a < v.size(); ++a)
            if (v[a] == v[a - 1]) return 0;
        return sign;
    };
    RMatrix pairing(6, 6);
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b)
            pairing(a, b) = q(sort_sign(
                {basis[a].first, basis[a].second, basis[b].first, basis[b].second}));
    auto s = sylvester_signature(SymmetricForm<Rational>(pairing));
    CHECK(s.n_plus == 3);
    CHECK(s.n_minus == 3);
    CHECK(s.n_zero == 0);
}

TEST_CASE("sylvester signature is congruence invariant") {
    Rng rng(10);
    for (int t = 0; t < 50; ++t) {
        std::size_t n = static_cast<std::size_t>(rng.integer(1, 5));
        auto s = rng.symmetric(n);
        auto p = rng.invertible(n);
        auto sig = sylvester_signature(SymmetricForm<Rational>(s));
        auto sig2 = sylvester_signature(SymmetricForm<Rational>(p.transpose() * s * p));
        CHECK(sig == sig2);
    }
}

TEST_CASE("hermitian signature over the gaussian rationals") {
    GaussianRational i = GaussianRational::i_unit();
    GMatrix h(2, 2);
    h(0, 0) = GaussianRational(Rational(0));
    h(0, 1) = i;
    h(1, 0) = -i;
    h(1, 1) = GaussianRational(Rational(0));
    auto s = sylvester_signature(SymmetricForm<GaussianRational>(h));
    CHECK(s.n_plus == 1);
    CHECK(s.n_minus == 1);
    CHECK(s.n_zero == 0);
}

TEST_CASE("orthogonal projection: fixed cases") {
    SymmetricForm<Rational> id2(RMatrix::identity(2));
    CHECK(orthogonal_projection(RMatrix::identity(2), id2) == RMatrix::identity(2));
    CHECK(orthogonal_projection(RMatrix::zero(2, 0), id2) == RMatrix::zero(2, 2));

    RMatrix b(2, 1, {q(1), q(1)});
    auto p = orthogonal_projection(b, id2);
    RMatrix expect(2, 2, {q(1, 2), q(1, 2), q(1, 2), q(1, 2)});
    CHECK(p == expect);

    RMatrix dep(2, 2, {q(1), q(2), q(1), q(2)});
    CHECK_THROWS_AS(orthogonal_projection(dep, id2), validation_error);
}

TEST_CASE("orthogonal projection is idempotent and self-adjoint") {
    Rng rng(11);
    for (int t = 0; t < 25; ++t) {
        std::size_t n = static_cast<std::size_t>(rng.integer(1, 5));
        std::size_t k = static_cast<std::size_t>(rng.integer(0, static_cast<long>(n)));
        RMatrix b = rng.matrix(n, k);
        while (rank(b) != k) b = rng.matrix(n, k);
        SymmetricForm<Rational> g(rng.positive_definite(n));
        auto p = orthogonal_projection(b, g);
        CHECK(p * p == p);
        CHECK(g.matrix() * p == p.transpose() * g.matrix());
        CHECK(p * b == b);
        CHECK(rank(p) == k);
    }
}

TEST_CASE("solve and inverse") {
    Rng rng(12);
    for (int t = 0; t < 20; ++t) {
        std::size_t n = static_cast<std::size_t>(rng.integer(1, 5));
        auto a = rng.invertible(n);
        auto inv = inverse(a);
        REQUIRE(inv);
        CHECK(a * *inv == RMatrix::identity(n));
    }
    RMatrix a(2, 2, {q(1), q(2), q(2), q(4)});
    RMatrix bad(2, 1, {q(1), q(0)});
    CHECK(!solve(a, bad));
    RMatrix good(2, 1, {q(1), q(2)});
    auto x = solve(a, good);
    REQUIRE(x);
    CHECK(a * *x == good);
}
