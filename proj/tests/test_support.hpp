#pragma once

#include <random>

#include "folcoh/linalg.hpp"

// Deterministic generators for property-style tests. mt19937 raw output is
// fully specified by the standard, so seeds reproduce across platforms.
namespace testsupport {

using folcoh::DenseMatrix;
using folcoh::Rational;

class Rng {
public:
    explicit Rng(std::uint32_t seed) : rng_(seed) {}

    long integer(long lo, long hi) {
        return lo + static_cast<long>(rng_() % static_cast<std::uint32_t>(hi - lo + 1));
    }

    Rational rational(long max_num = 5, long max_den = 4) {
        return Rational(integer(-max_num, max_num), integer(1, max_den));
    }

    Rational nonzero_rational(long max_num = 5, long max_den = 4) {
        while (true) {
            Rational r = rational(max_num, max_den);
            if (!r.is_zero()) return r;
        }
    }

    DenseMatrix<Rational> matrix(std::size_t r, std::size_t c) {
        DenseMatrix<Rational> m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rational();
        return m;
    }

    DenseMatrix<Rational> symmetric(std::size_t n) {
        auto a = matrix(n, n);
        return a + a.transpose();
    }

    // L * D * U with unit-triangular L, U and nonzero diagonal D
    DenseMatrix<Rational> invertible(std::size_t n) {
        auto l = DenseMatrix<Rational>::identity(n);
        auto u = DenseMatrix<Rational>::identity(n);
        auto d = DenseMatrix<Rational>::zero(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            d(i, i) = nonzero_rational();
            for (std::size_t j = 0; j < i; ++j) l(i, j) = rational(3, 3);
            for (std::size_t j = i + 1; j < n; ++j) u(i, j) = rational(3, 3);
        }
        return l * d * u;
    }

    // positive definite Gram: P^T P + small diagonal boost
    DenseMatrix<Rational> positive_definite(std::size_t n) {
        auto p = invertible(n);
        auto g = p.transpose() * p;
        for (std::size_t i = 0; i < n; ++i) g(i, i) += Rational(1, 2);
        return g;
    }

private:
    std::mt19937 rng_;
};

}  // namespace testsupport
