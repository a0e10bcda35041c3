#pragma once

#include <vector>

#include "folcoh/model.hpp"

namespace folcoh {

namespace detail {

inline RMatrix leaf_basis_matrix(const LiePayload& pl) {
    RMatrix b(static_cast<std::size_t>(pl.n), pl.leaf.size());
    for (std::size_t x = 0; x < pl.leaf.size(); ++x)
        b(static_cast<std::size_t>(pl.leaf[x] - 1), x) = Rational(1);
    return b;
}

inline Rational leaf_gram_determinant(const LiePayload& pl, const RMatrix& gram) {
    RMatrix sub(pl.leaf.size(), pl.leaf.size());
    for (std::size_t a = 0; a < pl.leaf.size(); ++a)
        for (std::size_t b = 0; b < pl.leaf.size(); ++b)
            sub(a, b) = gram(static_cast<std::size_t>(pl.leaf[a] - 1),
                             static_cast<std::size_t>(pl.leaf[b] - 1));
    FramedMetric tmp;
    tmp.gram = sub;
    return tmp.determinant();
}

}  // namespace detail

/// Evaluate the two-stage homotopy between bundle-like metrics at the given
/// rational sample times.
///
/// Stage 1 (t in [0, 1/2]) rotates the leaf coframe of g0 onto the splitting
/// of g1 while keeping the transverse part of g0 fixed; stage 2 (t in
/// [1/2, 1]) is the convex combination of the leaf and transverse blocks
/// along the now-common splitting. Every returned metric is checked to be
/// bundle-like with perfect-square determinants; a failing sample raises a
/// construction error naming the stage.
inline std::vector<FramedMetric> metric_homotopy(const FramedMetric& g0, const FramedMetric& g1,
                                                 const FoliatedModel& m,
                                                 const std::vector<Rational>& samples) {
    if (!m.lie) throw validation_error("metric_homotopy needs a frame model");
    const LiePayload& pl = *m.lie;
    if (g0.frame_size() != pl.n || g1.frame_size() != pl.n)
        throw validation_error("metric_homotopy: frame size mismatch");
    if (g0.orientation != g1.orientation)
        throw validation_error("metric_homotopy: endpoint orientations differ");
    g0.validate();
    g1.validate();
    for (const auto* g : {&g0, &g1}) {
        auto diag = is_riemannian(pl, *g);
        if (!diag.ok)
            throw validation_error("metric_homotopy endpoint is not bundle-like: " + diag.detail);
    }

    RMatrix leaf = detail::leaf_basis_matrix(pl);
    const bool has_leaf = leaf.cols() > 0;
    RMatrix p0 = has_leaf ? orthogonal_projection(leaf, SymmetricForm<Rational>(g0.gram))
                          : RMatrix::zero(leaf.rows(), leaf.rows());
    RMatrix p1 = has_leaf ? orthogonal_projection(leaf, SymmetricForm<Rational>(g1.gram))
                          : RMatrix::zero(leaf.rows(), leaf.rows());
    std::size_t n = static_cast<std::size_t>(pl.n);
    RMatrix id = RMatrix::identity(n);

    RMatrix leaf0 = p0.transpose() * g0.gram * p0;       // g0 restricted to the leaf block
    RMatrix trans0 = (id - p0).transpose() * g0.gram * (id - p0);
    RMatrix gbar = p1.transpose() * leaf0 * p1 + trans0;  // stage-1 endpoint

    RMatrix gbar_leaf = p1.transpose() * gbar * p1;
    RMatrix gbar_trans = (id - p1).transpose() * gbar * (id - p1);
    RMatrix g1_leaf = p1.transpose() * g1.gram * p1;
    RMatrix g1_trans = (id - p1).transpose() * g1.gram * (id - p1);

    auto stage1 = [&](const Rational& u) {
        Rational a = (Rational(1) - u) * (Rational(1) - u);
        Rational b = u * (Rational(1) - u);
        Rational c = u * u;
        RMatrix cross = leaf0 * p1;
        return a * leaf0 + b * (cross + cross.transpose()) + c * (p1.transpose() * leaf0 * p1) +
               trans0;
    };
    auto stage2 = [&](const Rational& v) {
        return (Rational(1) - v) * (gbar_leaf + gbar_trans) + v * (g1_leaf + g1_trans);
    };

    std::vector<FramedMetric> out;
    for (const Rational& t : samples) {
        if (t.sign() < 0 || t > Rational(1))
            throw validation_error("metric_homotopy: sample outside [0, 1]");
        bool first = t <= Rational(1, 2);
        std::string stage = first ? "stage 1" : "stage 2";
        RMatrix gram = first ? stage1(Rational(2) * t) : stage2(Rational(2) * t - Rational(1));
        FramedMetric fm(gram, g0.orientation);
        auto fail = [&](const std::string& why) {
            throw validation_error("metric_homotopy " + stage + " at t = " + t.str() + ": " + why);
        };
        if (!is_positive_definite(SymmetricForm<Rational>(gram)))
            fail("metric is not positive definite");
        if (!fm.determinant().sqrt_if_square())
            fail("det(gram) is not a perfect square");
        if (has_leaf && !detail::leaf_gram_determinant(pl, gram).sqrt_if_square())
            fail("leaf Gram determinant is not a perfect square");
        auto diag = is_riemannian(pl, fm);
        if (!diag.ok) fail("sample is not bundle-like: " + diag.detail);
        out.push_back(std::move(fm));
    }
    return out;
}

/// Deterministically search sample times in [0, 1] whose homotopy metrics
/// pass all validity checks (notably the perfect-square determinant
/// condition, which convex interpolation does not preserve). Enumerates
/// rationals by increasing denominator, then numerator; 0 and 1 come first.
inline std::vector<Rational> find_valid_samples(const FramedMetric& g0, const FramedMetric& g1,
                                                const FoliatedModel& m, std::size_t count,
                                                long max_denominator = 512) {
    std::vector<Rational> found;
    auto try_sample = [&](const Rational& t) {
        if (found.size() >= count) return;
        for (const auto& f : found)
            if (f == t) return;
        try {
            metric_homotopy(g0, g1, m, {t});
            found.push_back(t);
        } catch (const validation_error&) {
        }
    };
    try_sample(Rational(0));
    try_sample(Rational(1));
    for (long den = 2; den <= max_denominator && found.size() < count; ++den)
        for (long num = 1; num < den && found.size() < count; ++num)
            try_sample(Rational(num, den));
    if (found.size() < count)
        throw validation_error("could not find enough valid homotopy samples for '" + m.name +
                               "'");
    std::sort(found.begin(), found.end());
    return found;
}

}  // namespace folcoh
