#pragma once

#include <numeric>
#include <vector>

#include "folcoh/form.hpp"
#include "folcoh/linalg.hpp"

namespace folcoh {

inline int permutation_sign(const std::vector<int>& perm) {
    int n = static_cast<int>(perm.size());
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    for (int v : perm) {
        if (v < 1 || v > n || seen[static_cast<std::size_t>(v)]) return 0;
        seen[static_cast<std::size_t>(v)] = true;
    }
    int sign = 1;
    std::vector<int> p = perm;
    for (int i = 0; i < n; ++i) {
        while (p[static_cast<std::size_t>(i)] != i + 1) {
            int j = p[static_cast<std::size_t>(i)] - 1;
            std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
            sign = -sign;
        }
    }
    return sign;
}

/// Positive definite metric on the degree-1 frame, plus an orientation
/// given as an ordered index tuple. The whole pipeline stays inside Q, so
/// det(gram) is required to be a perfect square of a rational.
struct FramedMetric {
    RMatrix gram;                // n x n, positive definite
    std::vector<int> orientation;  // permutation of 1..n

    FramedMetric() = default;
    FramedMetric(RMatrix g, std::vector<int> orient)
        : gram(std::move(g)), orientation(std::move(orient)) {}

    static FramedMetric orthonormal(int n) {
        std::vector<int> o(static_cast<std::size_t>(n));
        std::iota(o.begin(), o.end(), 1);
        return FramedMetric(RMatrix::identity(static_cast<std::size_t>(n)), std::move(o));
    }

    int frame_size() const { return static_cast<int>(gram.rows()); }

    void validate() const {
        int n = frame_size();
        if (gram.cols() != static_cast<std::size_t>(n))
            throw validation_error("metric Gram must be square");
        if (static_cast<int>(orientation.size()) != n || permutation_sign(orientation) == 0)
            throw validation_error("orientation must be a permutation of the frame indices");
        SymmetricForm<Rational> g(gram);
        if (!is_positive_definite(g))
            throw validation_error("metric Gram is not positive definite");
        if (!determinant().sqrt_if_square())
            throw validation_error("det(gram) must be a perfect square of a rational");
    }

    Rational determinant() const {
        // product of pivots of an LU pass; exact
        RMatrix m = gram;
        Rational det(1);
        std::size_t n = m.rows();
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            while (p < n && m(p, k).is_zero()) ++p;
            if (p == n) return Rational(0);
            if (p != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(k, j));
                det = -det;
            }
            det *= m(k, k);
            for (std::size_t i = k + 1; i < n; ++i) {
                Rational f = m(i, k) / m(k, k);
                for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
            }
        }
        return det;
    }

    int orientation_sign() const { return permutation_sign(orientation); }

    /// Coefficient c with vol_g = c * e^{1..n}; requires a square determinant.
    Rational volume_coefficient() const {
        auto s = determinant().sqrt_if_square();
        if (!s) throw validation_error("det(gram) is not a perfect square");
        return orientation_sign() > 0 ? *s : -*s;
    }

    FramedMetric with_flipped_orientation() const {
        FramedMetric m = *this;
        if (m.orientation.size() >= 2) std::swap(m.orientation[0], m.orientation[1]);
        return m;
    }
};

/// Induced Gram on degree-k forms: the k-th compound of the dual metric,
/// <e^I, e^J> = det((G^{-1})_{I x J}), in the lexicographic mask basis.
inline RMatrix form_gram(const FramedMetric& metric, int k) {
    int n = metric.frame_size();
    auto dual = inverse(metric.gram);
    if (!dual) throw validation_error("metric Gram not invertible");
    auto masks = degree_masks(n, k);
    RMatrix g(masks.size(), masks.size());
    for (std::size_t a = 0; a < masks.size(); ++a) {
        auto ia = mask_indices(masks[a]);
        for (std::size_t b = 0; b < masks.size(); ++b) {
            auto ib = mask_indices(masks[b]);
            // det of the k x k minor of the dual metric
            std::size_t kk = ia.size();
            RMatrix minor(kk, kk);
            for (std::size_t r = 0; r < kk; ++r)
                for (std::size_t c = 0; c < kk; ++c)
                    minor(r, c) = (*dual)(static_cast<std::size_t>(ia[r] - 1),
                                          static_cast<std::size_t>(ib[c] - 1));
            FramedMetric tmp;  // reuse the LU determinant
            tmp.gram = minor;
            g(a, b) = kk == 0 ? Rational(1) : tmp.determinant();
        }
    }
    return g;
}

/// Full Hodge star on degree k, defined by the property a ^ (*b) = <a,b> vol_g
/// and computed by a per-degree linear solve. Returned in coordinates:
/// columns are images of the lexicographic degree-k basis, expressed in the
/// lexicographic degree-(n-k) basis.
inline RMatrix hodge_star_matrix(const FramedMetric& metric, int k) {
    int n = metric.frame_size();
    if (k < 0 || k > n) throw validation_error("hodge star degree out of range");
    auto src = degree_masks(n, k);
    auto dst = degree_masks(n, n - k);
    Rational vol = metric.volume_coefficient();
    RMatrix w(src.size(), dst.size());
    for (std::size_t i = 0; i < src.size(); ++i)
        for (std::size_t j = 0; j < dst.size(); ++j) {
            int s = wedge_sign(src[i], dst[j]);
            if (s != 0) w(i, j) = Rational(s);
        }
    RMatrix g = form_gram(metric, k);
    // coefficient of e^{1..n}:  w * star = g * vol
    RMatrix rhs = g;
    rhs *= vol;
    auto x = solve(w, rhs);
    if (!x) throw consistency_error("hodge star solve failed");
    return *x;
}

/// Apply the full star to a homogeneous form.
template <class S>
Form<S> hodge_star(const Form<S>& a, const FramedMetric& metric) {
    if (a.is_zero()) return a;
    int k = a.degree();
    int n = metric.frame_size();
    auto star = hodge_star_matrix(metric, k);
    auto src = degree_masks(n, k);
    auto dst = degree_masks(n, n - k);
    Form<S> out(n);
    for (std::size_t j = 0; j < src.size(); ++j) {
        auto it = a.terms().find(src[j]);
        if (it == a.terms().end()) continue;
        for (std::size_t i = 0; i < dst.size(); ++i) {
            Rational c = star(i, j);
            if (c.is_zero()) continue;
            out.add_term(dst[i], it->second * scalar_traits<S>::from_rational(c));
        }
    }
    return out;
}

/// Pointwise transversal Hodge star on a degree-k form:
/// star_bar(g) = (-1)^{p(q-k)} * star(g ^ chi), with chi the degree-p
/// characteristic form and q = n - p the codimension.
template <class S>
Form<S> transversal_star(const Form<S>& g, const FramedMetric& metric, const Form<S>& chi,
                         int p, int q) {
    if (!chi.is_zero() && chi.degree() != p)
        throw validation_error("transversal_star: chi has wrong degree");
    if (g.is_zero()) return g;
    int k = g.degree();
    if (k > q) throw validation_error("transversal_star: form degree exceeds codimension");
    Form<S> starred = hodge_star(wedge(g, chi), metric);
    int sign = ((p * (q - k)) % 2 == 0) ? 1 : -1;
    return sign > 0 ? starred : -starred;
}

}  // namespace folcoh
