#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "folcoh/framed_metric.hpp"

namespace folcoh {

enum class ModelKind { lie, cdga };

/// One structure constant entry: [e_i, e_j] = c e_k (i, j, k are 1-based).
struct StructureConstant {
    int i, j, k;
    Rational c;
};

struct LiePayload {
    int n = 0;
    std::vector<RMatrix> bracket;  // bracket[k](i,j): e_k-coefficient of [e_i, e_j]
    std::vector<int> leaf;         // 1-based frame indices spanning the leaf distribution
    FramedMetric metric;
    std::vector<std::vector<IndexMask>> masks;  // lexicographic mask basis per degree
};

/// Finite-dimensional graded-commutative differential algebra with leaf
/// contraction operators, metric, orientation and integration functional.
/// The finite stand-in for the de Rham complex of a foliated manifold, with
/// the basic subcomplex sitting inside it.
///
/// Everything an engine needs is stored as matrices against the per-degree
/// bases, so Chevalley-Eilenberg models and hand-written cdga models run
/// through exactly the same code paths.
struct FoliatedModel {
    std::string name;
    ModelKind kind = ModelKind::lie;
    int p = 0;    // leaf rank
    int q = 0;    // codimension
    int top = 0;  // top ambient degree (p + q for frame models)

    std::vector<std::size_t> dims;                    // per degree 0..top
    std::vector<std::vector<std::string>> names;      // basis element names per degree
    std::vector<RMatrix> d;                           // d[k]: dims[k+1] x dims[k]
    std::vector<std::vector<std::vector<RMatrix>>> mul;  // mul[k][l][i]: (b_i^k ^ .) : deg l -> k+l
    std::vector<std::vector<RMatrix>> iota;           // iota[x][k]: dims[k-1] x dims[k], leaf generator x
    std::vector<RMatrix> gram;                        // positive definite Gram per degree
    RMatrix integral;                                 // 1 x dims[top]; vanishes on exact forms
    RMatrix kappa;                                    // mean curvature, ambient degree-1 coords
    RMatrix chi;                                      // characteristic form, ambient degree-p coords
    bool star_ok = false;
    std::vector<RMatrix> star;                        // full Hodge star per degree (when star_ok)

    std::optional<LiePayload> lie;

    std::size_t dim(int k) const {
        return (k < 0 || k > top) ? 0 : dims[static_cast<std::size_t>(k)];
    }

    const RMatrix& diff(int k) const { return d[static_cast<std::size_t>(k)]; }

    /// Matrix of (a ^ .) : degree l -> degree k+l, for a given in degree-k coords.
    RMatrix wedge_from_left(int k, const RMatrix& a, int l) const {
        RMatrix out(dim(k + l), dim(l));
        if (k > top || l > top) return out;
        const auto& blocks = mul[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
        for (std::size_t i = 0; i < dim(k); ++i) {
            if (a(i, 0).is_zero()) continue;
            out += a(i, 0) * blocks[i];
        }
        return out;
    }

    /// Matrix of (. ^ a) : degree l -> degree k+l (graded flip of the above).
    RMatrix wedge_from_right(int k, const RMatrix& a, int l) const {
        RMatrix m = wedge_from_left(k, a, l);
        return ((k * l) % 2 == 0) ? m : -m;
    }

    /// Product of two coordinate vectors.
    RMatrix wedge_vec(int k, const RMatrix& a, int l, const RMatrix& b) const {
        return wedge_from_left(k, a, l) * b;
    }

    /// Contraction with an ambient vector given by frame coefficients
    /// (Lie-frame models only).
    RMatrix contract_matrix(const RMatrix& frame_vector, int k) const;

    std::string element_str(int k, const RMatrix& coords) const {
        if (dim(k) == 0 || coords.is_zero()) return "0";
        std::string out;
        bool first = true;
        for (std::size_t i = 0; i < dim(k); ++i) {
            const Rational& c = coords(i, 0);
            if (c.is_zero()) continue;
            bool neg = c.sign() < 0;
            if (first)
                out += neg ? "-" : "";
            else
                out += neg ? " - " : " + ";
            first = false;
            out += (neg ? -c : c).str() + " * " + names[static_cast<std::size_t>(k)][i];
        }
        return out;
    }
};

/// The subcomplex of basic elements: per degree, a basis of the joint kernel
/// of every leaf contraction and every (leaf contraction) o d, together with
/// the restricted differential and Gram.
struct BasicComplex {
    int q = 0;
    std::vector<std::size_t> bdims;   // degrees 0..q
    std::vector<RMatrix> basis;       // ambient coords, columns per degree
    std::vector<RMatrix> d;           // restricted differential
    std::vector<RMatrix> gram;        // restricted Gram, positive definite

    std::size_t dim(int k) const {
        return (k < 0 || k > q) ? 0 : bdims[static_cast<std::size_t>(k)];
    }
    const RMatrix& basis_at(int k) const { return basis[static_cast<std::size_t>(k)]; }
    const RMatrix& diff(int k) const { return d[static_cast<std::size_t>(k)]; }
    const RMatrix& gram_at(int k) const { return gram[static_cast<std::size_t>(k)]; }
};

struct MeanCurvatureData {
    RMatrix kappa;          // ambient degree-1 coords
    RMatrix kappa_b;        // P kappa, ambient degree-1 coords
    RMatrix kappa_b_basic;  // same element in basic coordinates
    RMatrix chi;            // ambient degree-p coords
    RMatrix phi0;           // Rummler residual, ambient degree-(p+1) coords
    bool taut = false;      // [kappa_b] = 0 in basic H^1
};

namespace detail {

inline RMatrix column(std::size_t n) { return RMatrix(n, 1); }

inline RMatrix form_to_coords(const RForm& f, const std::vector<IndexMask>& masks) {
    RMatrix v(masks.size(), 1);
    for (std::size_t i = 0; i < masks.size(); ++i) {
        auto it = f.terms().find(masks[i]);
        if (it != f.terms().end()) v(i, 0) = it->second;
    }
    // every term must be accounted for
    std::size_t hit = 0;
    for (const auto& [m, c] : f.terms())
        for (auto mm : masks)
            if (mm == m) {
                ++hit;
                break;
            }
    if (hit != f.terms().size()) throw consistency_error("form does not live in the given degree");
    return v;
}

inline RForm coords_to_form(int n, const RMatrix& v, const std::vector<IndexMask>& masks) {
    RForm f(n);
    for (std::size_t i = 0; i < masks.size(); ++i) f.add_term(masks[i], v(i, 0));
    return f;
}

inline std::string mask_name(IndexMask m) {
    std::string s = "e{";
    auto idx = mask_indices(m);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(idx[i]);
    }
    return s + "}";
}

}  // namespace detail

inline RMatrix FoliatedModel::contract_matrix(const RMatrix& frame_vector, int k) const {
    if (!lie) throw validation_error("ambient contraction needs a frame model");
    const auto& pl = *lie;
    RMatrix out(dim(k - 1), dim(k));
    if (k <= 0 || k > top) return out;
    const auto& src = pl.masks[static_cast<std::size_t>(k)];
    const auto& dst = pl.masks[static_cast<std::size_t>(k - 1)];
    for (std::size_t j = 0; j < src.size(); ++j) {
        RForm f = contract_vector(frame_vector, RForm::basis(pl.n, src[j]));
        RMatrix col = detail::form_to_coords(f, dst);
        out.set_col(j, col);
    }
    return out;
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

/// Checks every axiom the engines rely on: d^2 = 0, the Leibniz rule on all
/// basis pairs, graded commutativity, contractions being antiderivations
/// that square to zero, positive definite Grams, Stokes (the integration
/// functional kills exact top forms), and unit behaviour. Associativity is
/// checked for hand-written cdga models; the mask encoding of frame models
/// is associative by construction.
inline void validate_model(const FoliatedModel& m) {
    auto fail = [&](const std::string& what) {
        throw validation_error("model '" + m.name + "': " + what);
    };
    if (m.top + 1 != static_cast<int>(m.dims.size())) fail("degree table size mismatch");
    if (m.p + m.q != m.top && m.kind == ModelKind::lie) fail("p + q must equal the frame size");

    // d^2 = 0
    for (int k = 0; k + 1 <= m.top; ++k)
        if (!(m.diff(k + 1) * m.diff(k)).is_zero()) fail("d^2 != 0 at degree " + std::to_string(k));

    // graded commutativity and Leibniz on all basis pairs
    for (int k = 0; k <= m.top; ++k)
        for (int l = 0; k + l <= m.top; ++l)
            for (std::size_t i = 0; i < m.dim(k); ++i) {
                RMatrix ei = detail::column(m.dim(k));
                ei(i, 0) = Rational(1);
                const RMatrix li = m.wedge_from_left(k, ei, l);
                for (std::size_t j = 0; j < m.dim(l); ++j) {
                    RMatrix ej = detail::column(m.dim(l));
                    ej(j, 0) = Rational(1);
                    RMatrix ij = li * ej;
                    RMatrix ji = m.wedge_from_left(l, ej, k) * ei;
                    if (ij != ((k * l) % 2 == 0 ? ji : -ji))
                        fail("graded commutativity fails on " +
                             m.names[static_cast<std::size_t>(k)][i] + " * " +
                             m.names[static_cast<std::size_t>(l)][j]);
                    // d(ab) = (da) b + (-1)^k a (db)
                    RMatrix lhs = m.diff(k + l) * ij;
                    RMatrix da = m.diff(k) * ei;
                    RMatrix db = m.diff(l) * ej;
                    RMatrix rhs = m.wedge_vec(k + 1, da, l, ej);
                    RMatrix second = m.wedge_vec(k, ei, l + 1, db);
                    rhs += (k % 2 == 0) ? second : -second;
                    if (lhs != rhs)
                        fail("Leibniz fails on " + m.names[static_cast<std::size_t>(k)][i] +
                             " * " + m.names[static_cast<std::size_t>(l)][j]);
                }
            }

    // associativity (cdga models only; the frame wedge is associative by encoding)
    if (m.kind == ModelKind::cdga) {
        for (int k = 0; k <= m.top; ++k)
            for (int l = 0; k + l <= m.top; ++l)
                for (int r = 0; k + l + r <= m.top; ++r)
                    for (std::size_t i = 0; i < m.dim(k); ++i)
                        for (std::size_t j = 0; j < m.dim(l); ++j)
                            for (std::size_t s = 0; s < m.dim(r); ++s) {
                                RMatrix ei = detail::column(m.dim(k));
                                ei(i, 0) = Rational(1);
                                RMatrix ej = detail::column(m.dim(l));
                                ej(j, 0) = Rational(1);
                                RMatrix es = detail::column(m.dim(r));
                                es(s, 0) = Rational(1);
                                RMatrix left =
                                    m.wedge_vec(k + l, m.wedge_vec(k, ei, l, ej), r, es);
                                RMatrix right =
                                    m.wedge_vec(k, ei, l + r, m.wedge_vec(l, ej, r, es));
                                if (left != right) fail("associativity fails");
                            }
    }

    // unit element: first degree-0 basis element acts as identity
    if (m.dim(0) == 0) fail("degree 0 must contain the unit");
    for (int l = 0; l <= m.top; ++l) {
        RMatrix unit = detail::column(m.dim(0));
        unit(0, 0) = Rational(1);
        if (m.wedge_from_left(0, unit, l) != RMatrix::identity(m.dim(l)))
            fail("first degree-0 element is not a unit");
    }

    // contractions: degree -1 antiderivations with square zero
    for (std::size_t x = 0; x < m.iota.size(); ++x) {
        const auto& io = m.iota[x];
        for (int k = 1; k < m.top; ++k)
            if (!(io[static_cast<std::size_t>(k)] * io[static_cast<std::size_t>(k + 1)]).is_zero())
                fail("iota^2 != 0 for leaf generator " + std::to_string(x + 1));
        for (int k = 0; k <= m.top; ++k)
            for (int l = 0; k + l <= m.top; ++l)
                for (std::size_t i = 0; i < m.dim(k); ++i) {
                    RMatrix ei = detail::column(m.dim(k));
                    ei(i, 0) = Rational(1);
                    for (std::size_t j = 0; j < m.dim(l); ++j) {
                        RMatrix ej = detail::column(m.dim(l));
                        ej(j, 0) = Rational(1);
                        RMatrix ab = m.wedge_vec(k, ei, l, ej);
                        RMatrix lhs =
                            io[static_cast<std::size_t>(k + l)] * ab;
                        RMatrix ia = k > 0 ? io[static_cast<std::size_t>(k)] * ei
                                           : detail::column(m.dim(-1));
                        RMatrix ib = l > 0 ? io[static_cast<std::size_t>(l)] * ej
                                           : detail::column(m.dim(-1));
                        RMatrix rhs = k > 0 ? m.wedge_vec(k - 1, ia, l, ej)
                                            : RMatrix(m.dim(k + l - 1), 1);
                        if (l > 0) {
                            RMatrix second = m.wedge_vec(k, ei, l - 1, ib);
                            rhs += (k % 2 == 0) ? second : -second;
                        }
                        if (lhs != rhs)
                            fail("contraction is not an antiderivation (generator " +
                                 std::to_string(x + 1) + ")");
                    }
                }
    }

    // Grams positive definite
    for (int k = 0; k <= m.top; ++k) {
        if (m.gram[static_cast<std::size_t>(k)].rows() != m.dim(k)) fail("Gram size mismatch");
        if (m.dim(k) > 0 &&
            !is_positive_definite(SymmetricForm<Rational>(m.gram[static_cast<std::size_t>(k)])))
            fail("Gram at degree " + std::to_string(k) + " is not positive definite");
    }

    // Stokes: the integration functional vanishes on exact top-degree forms
    if (m.top >= 1 && !(m.integral * m.diff(m.top - 1)).is_zero())
        fail("integration functional does not kill exact forms");
}

// ---------------------------------------------------------------------------
// star construction (shared by both model kinds)
// ---------------------------------------------------------------------------

namespace detail {

/// Wedge-to-top pairing W_k[i][j] = integral(b_i^k ^ b_j^{top-k}).
inline RMatrix wedge_pairing(const FoliatedModel& m, int k) {
    RMatrix w(m.dim(k), m.dim(m.top - k));
    for (std::size_t i = 0; i < m.dim(k); ++i) {
        RMatrix ei = column(m.dim(k));
        ei(i, 0) = Rational(1);
        RMatrix row = m.integral * m.wedge_from_left(k, ei, m.top - k);
        for (std::size_t j = 0; j < m.dim(m.top - k); ++j) w(i, j) = row(0, j);
    }
    return w;
}

/// Solve a ^ (*b) = <a,b> vol degree by degree, where vol is the top element
/// with integral 1. Fails (returns empty) when the wedge pairing degenerates.
inline std::optional<std::vector<RMatrix>> build_star(const FoliatedModel& m) {
    std::vector<RMatrix> star(static_cast<std::size_t>(m.top) + 1);
    for (int k = 0; k <= m.top; ++k) {
        if (m.dim(k) != m.dim(m.top - k)) return std::nullopt;
        RMatrix w = wedge_pairing(m, k);
        auto x = solve(w, m.gram[static_cast<std::size_t>(k)]);
        if (!x || rank(w) != w.rows()) return std::nullopt;
        star[static_cast<std::size_t>(k)] = *x;
    }
    return star;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Lie (Chevalley-Eilenberg) models
// ---------------------------------------------------------------------------

namespace detail {

inline RMatrix bracket_vector(const LiePayload& pl, const RMatrix& u, const RMatrix& v) {
    // [u, v] by bilinearity
    RMatrix out(static_cast<std::size_t>(pl.n), 1);
    for (int k = 0; k < pl.n; ++k) {
        Rational acc(0);
        for (int i = 0; i < pl.n; ++i)
            for (int j = 0; j < pl.n; ++j) {
                const Rational& c = pl.bracket[static_cast<std::size_t>(k)](
                    static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                if (c.is_zero()) continue;
                acc += c * u(static_cast<std::size_t>(i), 0) * v(static_cast<std::size_t>(j), 0);
            }
        out(static_cast<std::size_t>(k), 0) = acc;
    }
    return out;
}

}  // namespace detail

/// Holonomy invariance of the transverse metric, phrased on the annihilator
/// coframe of the leaf distribution: for each leaf generator X the Cartan
/// Lie derivative L_X = iota_X d acts on the span of the transverse coframe,
/// and the condition is A^T H + H A = 0 against the dual Gram H restricted
/// to that span. Diagnostics name the violating generator.
struct RiemannianDiagnostics {
    bool ok = true;
    int violating_generator = 0;  // 1-based frame index, 0 if ok
    std::string detail;
};

inline RiemannianDiagnostics is_riemannian(const LiePayload& pl, const FramedMetric& metric) {
    RiemannianDiagnostics diag;
    int n = pl.n;
    std::vector<int> transverse;
    std::vector<bool> is_leaf(static_cast<std::size_t>(n) + 1, false);
    for (int l : pl.leaf) is_leaf[static_cast<std::size_t>(l)] = true;
    for (int i = 1; i <= n; ++i)
        if (!is_leaf[static_cast<std::size_t>(i)]) transverse.push_back(i);

    auto dual = inverse(metric.gram);
    if (!dual) throw validation_error("metric Gram not invertible");
    RMatrix h(transverse.size(), transverse.size());
    for (std::size_t a = 0; a < transverse.size(); ++a)
        for (std::size_t b = 0; b < transverse.size(); ++b)
            h(a, b) = (*dual)(static_cast<std::size_t>(transverse[a] - 1),
                              static_cast<std::size_t>(transverse[b] - 1));

    for (int l : pl.leaf) {
        // L_{e_l} e^j = iota_{e_l} d e^j, expressed on the transverse coframe
        RMatrix act(transverse.size(), transverse.size());
        for (std::size_t jj = 0; jj < transverse.size(); ++jj) {
            int j = transverse[jj];
            // d e^j = -sum_{i<k} c^j_{ik} e^{ik}
            RForm dej(n);
            for (int i = 1; i <= n; ++i)
                for (int k = i + 1; k <= n; ++k) {
                    Rational c = pl.bracket[static_cast<std::size_t>(j - 1)](
                        static_cast<std::size_t>(i - 1), static_cast<std::size_t>(k - 1));
                    if (c.is_zero()) continue;
                    dej.add_term((IndexMask(1) << (i - 1)) | (IndexMask(1) << (k - 1)), -c);
                }
            RForm lie_deriv = contract(l, dej);
            for (const auto& [mask, c] : lie_deriv.terms()) {
                auto idx = mask_indices(mask);
                if (idx.size() != 1) throw consistency_error("Lie derivative degree mismatch");
                if (is_leaf[static_cast<std::size_t>(idx[0])]) {
                    diag.ok = false;
                    diag.violating_generator = l;
                    diag.detail = "leaf span is not preserved along generator " + std::to_string(l);
                    return diag;
                }
                std::size_t row = 0;
                for (std::size_t a = 0; a < transverse.size(); ++a)
                    if (transverse[a] == idx[0]) row = a;
                act(row, jj) = c;
            }
        }
        if (!(act.transpose() * h + h * act).is_zero()) {
            diag.ok = false;
            diag.violating_generator = l;
            diag.detail = "transverse metric is not invariant along generator " +
                          std::to_string(l);
            return diag;
        }
    }
    return diag;
}

/// Chevalley-Eilenberg model of a Lie algebra with an invariant metric:
/// the differential is de^k = -sum_{i<j} c^k_{ij} e^i ^ e^j, extended as a
/// derivation; contractions, Grams, Hodge stars, the mean curvature one-form
/// and the characteristic form are all derived from the frame data.
inline FoliatedModel from_lie_algebra(int n, const std::vector<StructureConstant>& constants,
                                      std::vector<int> leaf, FramedMetric metric,
                                      std::string name = "lie-model") {
    if (n < 0 || n > kMaxFrame) throw validation_error("unsupported frame size");
    if (metric.frame_size() != n) throw validation_error("metric size does not match frame");
    metric.validate();

    LiePayload pl;
    pl.n = n;
    pl.leaf = leaf;
    pl.metric = metric;
    pl.bracket.assign(static_cast<std::size_t>(n),
                      RMatrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n)));
    for (const auto& sc : constants) {
        if (sc.i < 1 || sc.i > n || sc.j < 1 || sc.j > n || sc.k < 1 || sc.k > n)
            throw validation_error("structure constant index out of range");
        if (sc.i == sc.j && !sc.c.is_zero())
            throw validation_error("structure constants must be antisymmetric");
        auto& bk = pl.bracket[static_cast<std::size_t>(sc.k - 1)];
        bk(static_cast<std::size_t>(sc.i - 1), static_cast<std::size_t>(sc.j - 1)) += sc.c;
        bk(static_cast<std::size_t>(sc.j - 1), static_cast<std::size_t>(sc.i - 1)) -= sc.c;
    }

    // Jacobi identity on all frame triples
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                RMatrix ei(static_cast<std::size_t>(n), 1), ej(static_cast<std::size_t>(n), 1),
                    ek(static_cast<std::size_t>(n), 1);
                ei(static_cast<std::size_t>(i), 0) = Rational(1);
                ej(static_cast<std::size_t>(j), 0) = Rational(1);
                ek(static_cast<std::size_t>(k), 0) = Rational(1);
                RMatrix jac = detail::bracket_vector(pl, detail::bracket_vector(pl, ei, ej), ek) +
                              detail::bracket_vector(pl, detail::bracket_vector(pl, ej, ek), ei) +
                              detail::bracket_vector(pl, detail::bracket_vector(pl, ek, ei), ej);
                if (!jac.is_zero())
                    throw validation_error("Jacobi identity fails on frame triple (" +
                                           std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                           "," + std::to_string(k + 1) + ")");
            }

    // leaf span closed under the bracket (integrability)
    std::vector<bool> is_leaf(static_cast<std::size_t>(n) + 1, false);
    for (int l : leaf) {
        if (l < 1 || l > n) throw validation_error("leaf index out of range");
        is_leaf[static_cast<std::size_t>(l)] = true;
    }
    for (int a : leaf)
        for (int b : leaf) {
            RMatrix ea(static_cast<std::size_t>(n), 1), eb(static_cast<std::size_t>(n), 1);
            ea(static_cast<std::size_t>(a - 1), 0) = Rational(1);
            eb(static_cast<std::size_t>(b - 1), 0) = Rational(1);
            RMatrix br = detail::bracket_vector(pl, ea, eb);
            for (int k = 1; k <= n; ++k)
                if (!is_leaf[static_cast<std::size_t>(k)] &&
                    !br(static_cast<std::size_t>(k - 1), 0).is_zero())
                    throw validation_error("leaf span is not closed under the bracket");
        }

    auto rdiag = is_riemannian(pl, metric);
    if (!rdiag.ok)
        throw validation_error("metric is not bundle-like: " + rdiag.detail);

    FoliatedModel m;
    m.name = std::move(name);
    m.kind = ModelKind::lie;
    m.p = static_cast<int>(leaf.size());
    m.q = n - m.p;
    m.top = n;

    pl.masks.resize(static_cast<std::size_t>(n) + 1);
    m.dims.resize(static_cast<std::size_t>(n) + 1);
    m.names.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        pl.masks[static_cast<std::size_t>(k)] = degree_masks(n, k);
        m.dims[static_cast<std::size_t>(k)] = pl.masks[static_cast<std::size_t>(k)].size();
        for (auto mask : pl.masks[static_cast<std::size_t>(k)])
            m.names[static_cast<std::size_t>(k)].push_back(detail::mask_name(mask));
    }

    // differential on coframe generators, then extended as a derivation
    std::vector<RForm> d1(static_cast<std::size_t>(n), RForm(n));
    for (int c = 1; c <= n; ++c)
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) {
                Rational v = pl.bracket[static_cast<std::size_t>(c - 1)](
                    static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1));
                if (!v.is_zero())
                    d1[static_cast<std::size_t>(c - 1)].add_term(
                        (IndexMask(1) << (i - 1)) | (IndexMask(1) << (j - 1)), -v);
            }
    m.d.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        RMatrix dk(m.dim(k + 1), m.dim(k));
        for (std::size_t col = 0; col < m.dim(k); ++col) {
            IndexMask mask = pl.masks[static_cast<std::size_t>(k)][col];
            auto idx = mask_indices(mask);
            RForm df(n);
            for (std::size_t t = 0; t < idx.size(); ++t) {
                RForm term = RForm::unit(n);
                for (std::size_t s = 0; s < idx.size(); ++s) {
                    if (s == t)
                        term = wedge(term, d1[static_cast<std::size_t>(idx[s] - 1)]);
                    else
                        term = wedge(term, RForm::basis(n, IndexMask(1) << (idx[s] - 1)));
                }
                df += (t % 2 == 0) ? term : -term;
            }
            if (k + 1 <= n)
                dk.set_col(col, detail::form_to_coords(df, pl.masks[static_cast<std::size_t>(k + 1)]));
        }
        m.d[static_cast<std::size_t>(k)] = dk;
    }

    // multiplication table from mask wedges
    m.mul.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        m.mul[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(n) + 1);
        for (int l = 0; l <= n; ++l) {
            auto& blocks = m.mul[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
            blocks.assign(m.dim(k), RMatrix(m.dim(k + l), m.dim(l)));
            if (k + l > n) continue;
            const auto& src = pl.masks[static_cast<std::size_t>(l)];
            const auto& dst = pl.masks[static_cast<std::size_t>(k + l)];
            for (std::size_t i = 0; i < m.dim(k); ++i) {
                IndexMask a = pl.masks[static_cast<std::size_t>(k)][i];
                for (std::size_t j = 0; j < src.size(); ++j) {
                    int s = wedge_sign(a, src[j]);
                    if (s == 0) continue;
                    IndexMask u = a | src[j];
                    for (std::size_t t = 0; t < dst.size(); ++t)
                        if (dst[t] == u) blocks[i](t, j) = Rational(s);
                }
            }
        }
    }

    // leaf contractions
    m.iota.resize(leaf.size());
    for (std::size_t x = 0; x < leaf.size(); ++x) {
        auto& io = m.iota[x];
        io.resize(static_cast<std::size_t>(n) + 1);
        io[0] = RMatrix(0, m.dim(0));
        for (int k = 1; k <= n; ++k) {
            RMatrix mk(m.dim(k - 1), m.dim(k));
            const auto& src = pl.masks[static_cast<std::size_t>(k)];
            const auto& dst = pl.masks[static_cast<std::size_t>(k - 1)];
            for (std::size_t j = 0; j < src.size(); ++j) {
                RForm f = contract(leaf[x], RForm::basis(n, src[j]));
                mk.set_col(j, detail::form_to_coords(f, dst));
            }
            io[static_cast<std::size_t>(k)] = mk;
        }
    }

    // Grams, integration, Hodge stars
    m.gram.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) m.gram[static_cast<std::size_t>(k)] = form_gram(metric, k);
    m.integral = RMatrix(1, 1);
    m.integral(0, 0) = Rational(1) / metric.volume_coefficient();
    m.star.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k)
        m.star[static_cast<std::size_t>(k)] = hodge_star_matrix(metric, k);
    m.star_ok = true;
    {
        auto cross = detail::build_star(m);
        if (!cross || *cross != m.star)
            throw consistency_error("Hodge star routes disagree on '" + m.name + "'");
    }

    // mean curvature via the Koszul formula over an orthogonalized leaf frame,
    // and the normalized leaf covolume form
    {
        std::vector<RMatrix> u;  // orthogonal (not normalized) leaf frame
        for (int l : leaf) {
            RMatrix v(static_cast<std::size_t>(n), 1);
            v(static_cast<std::size_t>(l - 1), 0) = Rational(1);
            for (const auto& prev : u) {
                RMatrix gprev = metric.gram * prev;
                Rational num = (prev.transpose() * metric.gram * v)(0, 0);
                Rational den = (prev.transpose() * gprev)(0, 0);
                v -= (num / den) * prev;
            }
            u.push_back(v);
        }
        RMatrix kappa_sharp(static_cast<std::size_t>(n), 1);
        for (const auto& ui : u) {
            Rational norm2 = (ui.transpose() * metric.gram * ui)(0, 0);
            // <nabla_u u, e_z> = <[e_z, u], u>
            RMatrix w(static_cast<std::size_t>(n), 1);
            for (int z = 0; z < n; ++z) {
                RMatrix ez(static_cast<std::size_t>(n), 1);
                ez(static_cast<std::size_t>(z), 0) = Rational(1);
                RMatrix br = detail::bracket_vector(pl, ez, ui);
                w(static_cast<std::size_t>(z), 0) = (br.transpose() * metric.gram * ui)(0, 0);
            }
            auto nabla = solve(metric.gram, w);
            if (!nabla) throw consistency_error("Koszul solve failed");
            kappa_sharp += (Rational(1) / norm2) * (*nabla);
        }
        // project away the leaf part, then lower the index
        if (!leaf.empty()) {
            RMatrix leaf_basis(static_cast<std::size_t>(n), leaf.size());
            for (std::size_t x = 0; x < leaf.size(); ++x)
                leaf_basis(static_cast<std::size_t>(leaf[x] - 1), x) = Rational(1);
            auto pr = orthogonal_projection(leaf_basis, SymmetricForm<Rational>(metric.gram));
            kappa_sharp -= pr * kappa_sharp;
        }
        m.kappa = metric.gram * kappa_sharp;

        // chi = (1/sqrt(det leaf Gram)) u_1^flat ^ ... ^ u_p^flat
        RForm chi_form = RForm::unit(n);
        Rational leaf_det(1);
        for (const auto& ui : u) {
            leaf_det *= (ui.transpose() * metric.gram * ui)(0, 0);
            RMatrix flat = metric.gram * ui;
            RForm oneform(n);
            for (int i = 0; i < n; ++i)
                oneform.add_term(IndexMask(1) << i, flat(static_cast<std::size_t>(i), 0));
            chi_form = wedge(chi_form, oneform);
        }
        auto root = leaf_det.sqrt_if_square();
        if (!root)
            throw validation_error("leaf Gram determinant must be a perfect square");
        chi_form = (Rational(1) / *root) * chi_form;
        m.chi = detail::form_to_coords(chi_form, pl.masks[static_cast<std::size_t>(m.p)]);
    }

    m.lie = std::move(pl);
    validate_model(m);
    return m;
}

/// Rebuild a frame model with a different bundle-like metric.
inline FoliatedModel with_metric(const FoliatedModel& m, const FramedMetric& metric) {
    if (!m.lie) throw validation_error("with_metric needs a frame model");
    std::vector<StructureConstant> sc;
    for (int k = 1; k <= m.lie->n; ++k)
        for (int i = 1; i <= m.lie->n; ++i)
            for (int j = i + 1; j <= m.lie->n; ++j) {
                Rational c = m.lie->bracket[static_cast<std::size_t>(k - 1)](
                    static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1));
                if (!c.is_zero()) sc.push_back({i, j, k, c});
            }
    return from_lie_algebra(m.lie->n, sc, m.lie->leaf, metric, m.name);
}

inline FoliatedModel flip_orientation(const FoliatedModel& m) {
    if (m.lie) return with_metric(m, m.lie->metric.with_flipped_orientation());
    FoliatedModel out = m;
    out.integral = -out.integral;
    auto star = detail::build_star(out);
    if (!star) throw consistency_error("orientation flip lost the star");
    out.star = *star;
    return out;
}

// ---------------------------------------------------------------------------
// basic subcomplex and mean curvature
// ---------------------------------------------------------------------------

/// Extract the basic subcomplex: per degree the joint kernel of every leaf
/// contraction and every contraction composed with d. The result is closed
/// under d and under the wedge product; both facts are asserted.
inline BasicComplex basic_subcomplex(const FoliatedModel& m) {
    BasicComplex bc;
    bc.q = m.q;
    bc.bdims.resize(static_cast<std::size_t>(m.q) + 1);
    bc.basis.resize(static_cast<std::size_t>(m.q) + 1);
    bc.d.resize(static_cast<std::size_t>(m.q) + 1);
    bc.gram.resize(static_cast<std::size_t>(m.q) + 1);

    auto basic_conditions = [&](int k) {
        RMatrix stacked(0, m.dim(k));
        for (const auto& io : m.iota) {
            stacked = stacked.vstack(io[static_cast<std::size_t>(k)]);
            if (k + 1 <= m.top)
                stacked = stacked.vstack(io[static_cast<std::size_t>(k + 1)] * m.diff(k));
        }
        return stacked;
    };

    for (int k = 0; k <= m.q; ++k) {
        RMatrix stacked = basic_conditions(k);
        RMatrix basis = stacked.rows() == 0 ? RMatrix::identity(m.dim(k))
                                            : rank_and_kernel(stacked).second;
        bc.bdims[static_cast<std::size_t>(k)] = basis.cols();
        bc.basis[static_cast<std::size_t>(k)] = basis;
        bc.gram[static_cast<std::size_t>(k)] =
            basis.transpose() * m.gram[static_cast<std::size_t>(k)] * basis;
    }

    // nothing basic survives above the codimension; degenerate cdga input
    // could violate this, which would wreck the transverse theory
    for (int k = m.q + 1; k <= m.top; ++k) {
        RMatrix stacked = basic_conditions(k);
        std::size_t bdim =
            stacked.rows() == 0 ? m.dim(k) : rank_and_kernel(stacked).second.cols();
        if (bdim != 0)
            throw validation_error("model '" + m.name +
                                   "': basic elements above the codimension");
    }

    // restricted differential; closure under d is asserted by the solve
    for (int k = 0; k <= m.q; ++k) {
        RMatrix image = m.diff(k) * bc.basis[static_cast<std::size_t>(k)];
        if (k + 1 <= m.q) {
            auto x = solve(bc.basis[static_cast<std::size_t>(k + 1)], image);
            if (!x)
                throw consistency_error("basic subcomplex is not closed under d in '" + m.name +
                                        "'");
            bc.d[static_cast<std::size_t>(k)] = *x;
        } else {
            if (!image.is_zero())
                throw consistency_error("basic subcomplex leaks above the codimension");
            bc.d[static_cast<std::size_t>(k)] = RMatrix(0, bc.dim(k));
        }
    }
    return bc;
}

/// Express an ambient element (known to be basic) in basic coordinates.
inline RMatrix ambient_to_basic(const BasicComplex& bc, int k, const RMatrix& v) {
    auto x = solve(bc.basis_at(k), v);
    if (!x) throw consistency_error("element is not basic");
    return *x;
}

/// Matrix of (a ^ .) on the basic complex, for a basic element a of degree k.
inline RMatrix basic_wedge_from_left(const FoliatedModel& m, const BasicComplex& bc, int k,
                                     const RMatrix& a_basic, int l) {
    if (k + l > bc.q) return RMatrix(0, bc.dim(l));
    RMatrix a_amb = bc.basis_at(k) * a_basic;
    RMatrix amb = m.wedge_from_left(k, a_amb, l) * bc.basis_at(l);
    auto x = solve(bc.basis_at(k + l), amb);
    if (!x) throw consistency_error("basic complex is not closed under wedge");
    return *x;
}

/// Transversal Hodge star restricted to the basic complex, degree by degree:
/// star_bar = (-1)^{p(q-k)} star(. ^ chi).
inline std::vector<RMatrix> basic_transversal_star(const FoliatedModel& m, const BasicComplex& bc) {
    if (!m.star_ok)
        throw validation_error("model '" + m.name + "' has no transversal star");
    std::vector<RMatrix> sb(static_cast<std::size_t>(bc.q) + 1);
    for (int k = 0; k <= bc.q; ++k) {
        // right-multiplication by chi: v -> v ^ chi = (-1)^{kp} chi ^ v
        RMatrix rmul = m.wedge_from_left(m.p, m.chi, k);
        if ((k * m.p) % 2 != 0) rmul = -rmul;
        RMatrix amb = m.star[static_cast<std::size_t>(k + m.p)] * rmul * bc.basis_at(k);
        if ((m.p * (bc.q - k)) % 2 != 0) amb = -amb;
        auto x = solve(bc.basis_at(bc.q - k), amb);
        if (!x)
            throw consistency_error("transversal star does not preserve basic elements in '" +
                                    m.name + "'");
        sb[static_cast<std::size_t>(k)] = *x;
    }
    return sb;
}

/// kappa, kappa_b = P kappa, chi and the Rummler residual
/// phi_0 = d chi + kappa ^ chi, with all the closure assertions.
inline MeanCurvatureData mean_curvature(const FoliatedModel& m, const BasicComplex& bc) {
    MeanCurvatureData mc;
    mc.kappa = m.kappa;
    mc.chi = m.chi;

    // orthogonal projection onto basic degree-1 elements, against the ambient Gram
    const RMatrix& b1 = bc.basis_at(1);
    if (b1.cols() == 0) {
        mc.kappa_b = RMatrix(m.dim(1), 1);
        mc.kappa_b_basic = RMatrix(0, 1);
    } else {
        auto pr = orthogonal_projection(b1, SymmetricForm<Rational>(m.gram[1]));
        mc.kappa_b = pr * m.kappa;
        mc.kappa_b_basic = ambient_to_basic(bc, 1, mc.kappa_b);
    }

    // kappa_b is always closed
    if (m.dim(1) > 0 && !(m.diff(1) * mc.kappa_b).is_zero())
        throw validation_error("model '" + m.name + "': d kappa_b != 0");

    // Rummler: d chi = -kappa ^ chi + phi_0 with the p-fold leaf contraction
    // of phi_0 vanishing
    mc.phi0 = m.diff(m.p) * m.chi + m.wedge_vec(1, m.kappa, m.p, m.chi);
    {
        RMatrix v = mc.phi0;
        int deg = m.p + 1;
        for (std::size_t x = m.iota.size(); x-- > 0;) {
            v = m.iota[x][static_cast<std::size_t>(deg)] * v;
            --deg;
        }
        if (!v.is_zero())
            throw validation_error("model '" + m.name +
                                   "': Rummler residual survives the leaf contractions");
    }

    // taut iff the Alvarez class vanishes
    if (bc.dim(1) == 0)
        mc.taut = true;
    else
        mc.taut = in_span(bc.diff(0), mc.kappa_b_basic);
    return mc;
}

inline MeanCurvatureData mean_curvature(const FoliatedModel& m) {
    return mean_curvature(m, basic_subcomplex(m));
}

}  // namespace folcoh
