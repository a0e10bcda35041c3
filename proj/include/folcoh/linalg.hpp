#pragma once

#include <utility>
#include <vector>

#include "folcoh/matrix.hpp"

namespace folcoh {

/// A matrix equal to its (conjugate-)transpose. Over the rationals this is
/// a symmetric bilinear form, over the Gaussian rationals a Hermitian one.
template <class S>
class SymmetricForm {
public:
    explicit SymmetricForm(DenseMatrix<S> m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) throw validation_error("symmetric form must be square");
        if (m_ != m_.dagger()) throw validation_error("form is not (conjugate-)symmetric");
    }

    std::size_t dim() const { return m_.rows(); }
    const DenseMatrix<S>& matrix() const { return m_; }

private:
    DenseMatrix<S> m_;
};

struct Signature {
    std::size_t n_plus = 0, n_minus = 0, n_zero = 0;
    long sigma() const { return static_cast<long>(n_plus) - static_cast<long>(n_minus); }
    friend bool operator==(const Signature& a, const Signature& b) {
        return a.n_plus == b.n_plus && a.n_minus == b.n_minus && a.n_zero == b.n_zero;
    }
};

/// Sylvester signature by exact congruence diagonalization: symmetric
/// Gaussian elimination pivoting on the first nonzero diagonal entry, or on
/// a 2x2 off-diagonal block when the remaining diagonal is zero (such a
/// block is hyperbolic and contributes one plus and one minus).
/// Congruence-invariant: signature(p^T s p) = signature(s) for invertible p.
template <class S>
Signature sylvester_signature(const SymmetricForm<S>& form) {
    DenseMatrix<S> m = form.matrix();
    std::vector<std::size_t> live(m.rows());
    for (std::size_t i = 0; i < live.size(); ++i) live[i] = i;
    Signature sig;

    auto real_sign = [](const S& x) {
        if (!scalar_traits<S>::is_real(x))
            throw consistency_error("hermitian form has non-real diagonal");
        return scalar_traits<S>::real(x).sign();
    };

    while (!live.empty()) {
        // 1x1 pivot: first nonzero diagonal entry in index order
        std::size_t pick = live.size();
        for (std::size_t a = 0; a < live.size(); ++a)
            if (!is_zero(m(live[a], live[a]))) {
                pick = a;
                break;
            }
        if (pick < live.size()) {
            std::size_t r = live[pick];
            const S d = m(r, r);
            if (real_sign(d) > 0)
                ++sig.n_plus;
            else
                ++sig.n_minus;
            live.erase(live.begin() + static_cast<long>(pick));
            for (auto i : live)
                for (auto j : live)
                    m(i, j) -= m(i, r) * scalar_traits<S>::conj(m(j, r)) / d;
            continue;
        }
        // all-zero diagonal: look for a 2x2 block [[0, a], [conj(a), 0]]
        std::size_t ra = live.size(), rb = live.size();
        for (std::size_t a = 0; a < live.size() && ra == live.size(); ++a)
            for (std::size_t b = a + 1; b < live.size(); ++b)
                if (!is_zero(m(live[a], live[b]))) {
                    ra = a;
                    rb = b;
                    break;
                }
        if (ra == live.size()) {
            sig.n_zero += live.size();
            break;
        }
        std::size_t r = live[ra], s = live[rb];
        const S a = m(r, s);
        ++sig.n_plus;
        ++sig.n_minus;
        live.erase(live.begin() + static_cast<long>(rb));
        live.erase(live.begin() + static_cast<long>(ra));
        const S ac = scalar_traits<S>::conj(a);
        for (auto i : live)
            for (auto j : live)
                m(i, j) -= m(i, s) * scalar_traits<S>::conj(m(j, r)) / a +
                           m(i, r) * scalar_traits<S>::conj(m(j, s)) / ac;
    }
    return sig;
}

template <class S>
bool is_positive_definite(const SymmetricForm<S>& g) {
    return sylvester_signature(g).n_plus == g.dim();
}

/// Metric adjoint a* of a : (V, gram_domain) -> (W, gram_codomain), i.e. the
/// unique map with <a x, y>_cod = <x, a* y>_dom. Both Grams must be positive
/// definite. Satisfies (a*)* = a exactly.
template <class S>
DenseMatrix<S> adjoint_wrt(const DenseMatrix<S>& a, const SymmetricForm<S>& gram_domain,
                           const SymmetricForm<S>& gram_codomain) {
    if (a.cols() != gram_domain.dim() || a.rows() != gram_codomain.dim())
        throw validation_error("adjoint_wrt: shape mismatch with Grams");
    if (!is_positive_definite(gram_domain) || !is_positive_definite(gram_codomain))
        throw validation_error("adjoint_wrt: Gram not positive definite");
    // G_dom a* = a^dagger G_cod
    auto x = solve(gram_domain.matrix(), a.dagger() * gram_codomain.matrix());
    if (!x) throw consistency_error("adjoint_wrt: positive definite Gram not invertible");
    return *x;
}

/// Orthogonal projection onto the column span of `basis` with respect to a
/// positive definite Gram: p = B (B^dagger G B)^{-1} B^dagger G.
/// Idempotent and self-adjoint (G p = p^dagger G) by construction.
template <class S>
DenseMatrix<S> orthogonal_projection(const DenseMatrix<S>& basis, const SymmetricForm<S>& gram) {
    if (basis.rows() != gram.dim())
        throw validation_error("orthogonal_projection: basis/Gram shape mismatch");
    if (!is_positive_definite(gram))
        throw validation_error("orthogonal_projection: Gram not positive definite");
    if (rank(basis) != basis.cols())
        throw validation_error("orthogonal_projection: basis columns are dependent");
    auto bd = basis.dagger();
    auto small = bd * gram.matrix() * basis;
    auto inv = inverse(small);
    if (!inv) throw consistency_error("orthogonal_projection: Gram restriction singular");
    return basis * (*inv) * bd * gram.matrix();
}

}  // namespace folcoh
