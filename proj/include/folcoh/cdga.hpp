#pragma once

#include <map>
#include <string>
#include <vector>

#include "folcoh/model.hpp"

namespace folcoh {

/// Raw ingredients of a hand-written cdga model, with elements referred to
/// by basis names. Products with the unit are implicit; any product or
/// differential not listed is zero. Missing Grams default to the identity.
struct CdgaData {
    using Element = std::vector<std::pair<std::string, Rational>>;

    std::string name;
    int p = 0;
    std::vector<std::vector<std::string>> basis;  // per degree; top = basis.size() - 1

    struct Product {
        std::string a, b;
        Element value;
    };
    struct Diff {
        std::string a;
        Element value;
    };
    struct Contraction {
        int generator = 1;  // 1-based leaf generator
        std::string a;
        Element value;
    };

    std::vector<Product> products;
    std::vector<Diff> diffs;
    std::vector<Contraction> contractions;
    Element kappa;
    Element chi;                           // defaults to the unit when p = 0
    std::map<int, std::vector<std::vector<Rational>>> grams;
    std::optional<Element> orientation;    // top element with integral 1
};

namespace detail {

struct NameIndex {
    int degree;
    std::size_t index;
};

inline std::map<std::string, NameIndex> index_names(const CdgaData& data) {
    std::map<std::string, NameIndex> out;
    for (int k = 0; k < static_cast<int>(data.basis.size()); ++k)
        for (std::size_t i = 0; i < data.basis[static_cast<std::size_t>(k)].size(); ++i) {
            const auto& nm = data.basis[static_cast<std::size_t>(k)][i];
            if (out.count(nm))
                throw validation_error("cdga '" + data.name + "': duplicate basis name " + nm);
            out[nm] = {k, i};
        }
    return out;
}

inline std::pair<int, RMatrix> resolve_element(const CdgaData& data,
                                               const std::map<std::string, NameIndex>& idx,
                                               const CdgaData::Element& elt,
                                               const std::vector<std::size_t>& dims) {
    int degree = -1;
    for (const auto& [nm, c] : elt) {
        auto it = idx.find(nm);
        if (it == idx.end())
            throw validation_error("cdga '" + data.name + "': unknown basis name " + nm);
        if (degree == -1) degree = it->second.degree;
        if (degree != it->second.degree)
            throw validation_error("cdga '" + data.name + "': element mixes degrees");
    }
    if (degree == -1) return {-1, RMatrix(0, 1)};
    RMatrix v(dims[static_cast<std::size_t>(degree)], 1);
    for (const auto& [nm, c] : elt) v(idx.at(nm).index, 0) += c;
    return {degree, v};
}

}  // namespace detail

/// Build and validate a general cdga model. The caller supplies the
/// multiplication, differential, contractions, kappa and chi; the validator
/// checks every axiom a frame model would satisfy by construction.
inline FoliatedModel from_cdga(const CdgaData& data) {
    if (data.basis.empty()) throw validation_error("cdga model needs at least degree 0");
    FoliatedModel m;
    m.name = data.name;
    m.kind = ModelKind::cdga;
    m.top = static_cast<int>(data.basis.size()) - 1;
    m.p = data.p;
    m.q = m.top - m.p;
    if (m.p < 0 || m.q < 0) throw validation_error("cdga leaf rank exceeds top degree");

    auto idx = detail::index_names(data);
    m.names = data.basis;
    m.dims.resize(static_cast<std::size_t>(m.top) + 1);
    for (int k = 0; k <= m.top; ++k)
        m.dims[static_cast<std::size_t>(k)] = data.basis[static_cast<std::size_t>(k)].size();
    if (m.dim(0) == 0) throw validation_error("cdga model needs a unit in degree 0");

    // differential
    m.d.resize(static_cast<std::size_t>(m.top) + 1);
    for (int k = 0; k <= m.top; ++k) m.d[static_cast<std::size_t>(k)] = RMatrix(m.dim(k + 1), m.dim(k));
    for (const auto& df : data.diffs) {
        auto it = idx.find(df.a);
        if (it == idx.end()) throw validation_error("cdga diff on unknown name " + df.a);
        auto [deg, v] = detail::resolve_element(data, idx, df.value, m.dims);
        if (deg == -1) continue;
        if (deg != it->second.degree + 1)
            throw validation_error("cdga diff of " + df.a + " has wrong degree");
        m.d[static_cast<std::size_t>(it->second.degree)].set_col(it->second.index, v);
    }

    // multiplication table: unit products implicit, listed products set both
    // orders with the graded sign, everything else zero
    m.mul.resize(static_cast<std::size_t>(m.top) + 1);
    for (int k = 0; k <= m.top; ++k) {
        m.mul[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(m.top) + 1);
        for (int l = 0; l <= m.top; ++l)
            m.mul[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)].assign(
                m.dim(k), RMatrix(m.dim(k + l), m.dim(l)));
    }
    for (int l = 0; l <= m.top; ++l) {
        // unit acts as identity
        auto& blocks0 = m.mul[0][static_cast<std::size_t>(l)];
        if (!blocks0.empty())
            for (std::size_t j = 0; j < m.dim(l); ++j) blocks0[0](j, j) = Rational(1);
    }
    for (int k = 1; k <= m.top; ++k) {
        // and from the right
        auto& blocks = m.mul[static_cast<std::size_t>(k)][0];
        for (std::size_t i = 0; i < m.dim(k); ++i) blocks[i](i, 0) = Rational(1);
    }
    auto set_product = [&](const detail::NameIndex& a, const detail::NameIndex& b,
                           const RMatrix& value, int vdeg) {
        if (vdeg != -1 && vdeg != a.degree + b.degree)
            throw validation_error("cdga product lands in the wrong degree");
        auto& block = m.mul[static_cast<std::size_t>(a.degree)][static_cast<std::size_t>(b.degree)]
                           [a.index];
        RMatrix col = vdeg == -1 ? RMatrix(m.dim(a.degree + b.degree), 1) : value;
        block.set_col(b.index, col);
    };
    for (const auto& pr : data.products) {
        auto ia = idx.find(pr.a), ib = idx.find(pr.b);
        if (ia == idx.end() || ib == idx.end())
            throw validation_error("cdga product on unknown name");
        if (ia->second.degree == 0 && ia->second.index == 0)
            throw validation_error("products with the unit are implicit");
        auto [vdeg, v] = detail::resolve_element(data, idx, pr.value, m.dims);
        set_product(ia->second, ib->second, v, vdeg);
        if (!(ia->second.degree == ib->second.degree && ia->second.index == ib->second.index)) {
            int sign = (ia->second.degree * ib->second.degree) % 2 == 0 ? 1 : -1;
            set_product(ib->second, ia->second, sign > 0 ? v : -v, vdeg);
        }
    }

    // contractions
    m.iota.resize(static_cast<std::size_t>(m.p));
    for (int x = 0; x < m.p; ++x) {
        auto& io = m.iota[static_cast<std::size_t>(x)];
        io.resize(static_cast<std::size_t>(m.top) + 1);
        for (int k = 0; k <= m.top; ++k) io[static_cast<std::size_t>(k)] = RMatrix(m.dim(k - 1), m.dim(k));
    }
    for (const auto& co : data.contractions) {
        if (co.generator < 1 || co.generator > m.p)
            throw validation_error("cdga contraction generator out of range");
        auto it = idx.find(co.a);
        if (it == idx.end()) throw validation_error("cdga contraction on unknown name " + co.a);
        auto [deg, v] = detail::resolve_element(data, idx, co.value, m.dims);
        if (deg == -1) continue;
        if (deg != it->second.degree - 1)
            throw validation_error("cdga contraction of " + co.a + " has wrong degree");
        m.iota[static_cast<std::size_t>(co.generator - 1)][static_cast<std::size_t>(it->second.degree)]
            .set_col(it->second.index, v);
    }

    // Grams
    m.gram.resize(static_cast<std::size_t>(m.top) + 1);
    for (int k = 0; k <= m.top; ++k) {
        auto it = data.grams.find(k);
        if (it == data.grams.end()) {
            m.gram[static_cast<std::size_t>(k)] = RMatrix::identity(m.dim(k));
        } else {
            const auto& rows = it->second;
            RMatrix g(m.dim(k), m.dim(k));
            if (rows.size() != m.dim(k))
                throw validation_error("cdga Gram row count mismatch at degree " + std::to_string(k));
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i].size() != m.dim(k))
                    throw validation_error("cdga Gram is not square at degree " + std::to_string(k));
                for (std::size_t j = 0; j < rows[i].size(); ++j) g(i, j) = rows[i][j];
            }
            m.gram[static_cast<std::size_t>(k)] = g;
        }
    }

    // kappa and chi
    {
        auto [deg, v] = detail::resolve_element(data, idx, data.kappa, m.dims);
        if (deg == -1)
            m.kappa = RMatrix(m.dim(1), 1);
        else if (deg != 1)
            throw validation_error("cdga kappa must have degree 1");
        else
            m.kappa = v;
    }
    {
        auto [deg, v] = detail::resolve_element(data, idx, data.chi, m.dims);
        if (deg == -1) {
            if (m.p != 0)
                throw validation_error("cdga model with leaf rank > 0 must supply chi");
            m.chi = RMatrix(m.dim(0), 1);
            m.chi(0, 0) = Rational(1);
        } else if (deg != m.p) {
            throw validation_error("cdga chi must have degree p");
        } else {
            m.chi = v;
        }
    }

    // integration functional from the orientation element
    m.integral = RMatrix(1, m.dim(m.top));
    if (data.orientation) {
        auto [deg, v] = detail::resolve_element(data, idx, *data.orientation, m.dims);
        if (deg != m.top) throw validation_error("cdga orientation element must have top degree");
        if (m.dim(m.top) != 1)
            throw validation_error("cdga orientation needs a one-dimensional top degree");
        if (v(0, 0).is_zero()) throw validation_error("cdga orientation element is zero");
        m.integral(0, 0) = Rational(1) / v(0, 0);
    }

    if (auto star = detail::build_star(m); star && data.orientation) {
        m.star = *star;
        m.star_ok = true;
    }

    validate_model(m);
    return m;
}

/// The bundle-like family induced by a global conformal scaling of the
/// (virtual) underlying metric by lambda^2: degree-k Grams pick up
/// lambda^{-2k}, the integration functional lambda^{-top}, chi lambda^p.
inline FoliatedModel with_conformal_scale(const FoliatedModel& m, const Rational& lambda) {
    if (lambda.sign() <= 0) throw validation_error("conformal factor must be positive");
    FoliatedModel out = m;
    Rational l2 = lambda * lambda;
    for (int k = 0; k <= m.top; ++k) {
        Rational f(1);
        for (int t = 0; t < k; ++t) f /= l2;
        out.gram[static_cast<std::size_t>(k)] = f * m.gram[static_cast<std::size_t>(k)];
    }
    Rational fint(1);
    for (int t = 0; t < m.top; ++t) fint /= lambda;
    out.integral = fint * m.integral;
    Rational fchi(1);
    for (int t = 0; t < m.p; ++t) fchi *= lambda;
    out.chi = fchi * m.chi;
    if (out.star_ok) {
        auto star = detail::build_star(out);
        if (!star) throw consistency_error("conformal scaling lost the star");
        out.star = *star;
    }
    return out;
}

}  // namespace folcoh
