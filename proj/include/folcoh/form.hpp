#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "folcoh/matrix.hpp"

namespace folcoh {

/// Strictly increasing index tuples are packed into bitmasks (bit i set =
/// frame index i+1 present). Frame sizes beyond 31 are rejected up front;
/// the models this library targets have single-digit dimension.
using IndexMask = std::uint32_t;

constexpr int kMaxFrame = 31;

inline int mask_degree(IndexMask m) { return std::popcount(m); }

/// Sign of e^A ^ e^B as a reordering of the concatenated tuple, or 0 when
/// the tuples share an index.
inline int wedge_sign(IndexMask a, IndexMask b) {
    if (a & b) return 0;
    int inversions = 0;
    IndexMask rest = a;
    while (rest) {
        int i = std::countr_zero(rest);
        rest &= rest - 1;
        inversions += std::popcount(b & ((IndexMask(1) << i) - 1));
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

/// All degree-k masks on n indices, in lexicographic order of the tuples.
inline std::vector<IndexMask> degree_masks(int n, int k) {
    std::vector<IndexMask> out;
    if (k < 0 || k > n) return out;
    std::vector<int> c(k);
    for (int i = 0; i < k; ++i) c[i] = i;
    while (true) {
        IndexMask m = 0;
        for (int i : c) m |= IndexMask(1) << i;
        out.push_back(m);
        int i = k - 1;
        while (i >= 0 && c[i] == n - k + i) --i;
        if (i < 0) break;
        ++c[i];
        for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    }
    return out;
}

inline std::vector<int> mask_indices(IndexMask m) {
    std::vector<int> idx;
    while (m) {
        idx.push_back(std::countr_zero(m) + 1);  // 1-based
        m &= m - 1;
    }
    return idx;
}

inline bool mask_lex_less(IndexMask a, IndexMask b) {
    auto ia = mask_indices(a), ib = mask_indices(b);
    return ia < ib;
}

/// Element of the exterior algebra over an ordered frame e^1..e^n with
/// exact coefficients. Terms are canonical: strictly increasing tuples,
/// no zero coefficients stored.
template <class S>
class Form {
public:
    Form() : n_(0) {}
    explicit Form(int frame_size) : n_(frame_size) {
        if (frame_size < 0 || frame_size > kMaxFrame)
            throw validation_error("unsupported frame size");
    }

    static Form unit(int n) {
        Form f(n);
        f.add_term(0, S(1));
        return f;
    }
    static Form basis(int n, IndexMask m) {
        Form f(n);
        f.add_term(m, S(1));
        return f;
    }

    int frame_size() const { return n_; }
    const std::map<IndexMask, S>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    void add_term(IndexMask m, S c) {
        if (folcoh::is_zero(c)) return;
        auto it = t_.find(m);
        if (it == t_.end()) {
            t_.emplace(m, std::move(c));
        } else {
            it->second += c;
            if (folcoh::is_zero(it->second)) t_.erase(it);
        }
    }

    bool is_homogeneous(int k) const {
        for (const auto& [m, c] : t_)
            if (mask_degree(m) != k) return false;
        return true;
    }

    /// Degree of a homogeneous form; -1 for the zero form; throws otherwise.
    int degree() const {
        if (t_.empty()) return -1;
        int k = mask_degree(t_.begin()->first);
        if (!is_homogeneous(k)) throw validation_error("form is not homogeneous");
        return k;
    }

    Form degree_part(int k) const {
        Form f(n_);
        for (const auto& [m, c] : t_)
            if (mask_degree(m) == k) f.add_term(m, c);
        return f;
    }

    Form operator-() const {
        Form f(n_);
        for (const auto& [m, c] : t_) f.add_term(m, -c);
        return f;
    }
    Form& operator+=(const Form& o) {
        require_same_frame(o);
        for (const auto& [m, c] : o.t_) add_term(m, c);
        return *this;
    }
    Form& operator-=(const Form& o) {
        require_same_frame(o);
        for (const auto& [m, c] : o.t_) add_term(m, -c);
        return *this;
    }
    Form& operator*=(const S& c) {
        Form f(n_);
        for (const auto& [m, x] : t_) f.add_term(m, x * c);
        *this = std::move(f);
        return *this;
    }
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator*(Form a, const S& c) { return a *= c; }
    friend Form operator*(const S& c, Form a) { return a *= c; }
    friend bool operator==(const Form& a, const Form& b) { return a.n_ == b.n_ && a.t_ == b.t_; }
    friend bool operator!=(const Form& a, const Form& b) { return !(a == b); }

    std::string str() const {
        if (t_.empty()) return "0";
        std::vector<IndexMask> keys;
        for (const auto& [m, c] : t_) keys.push_back(m);
        std::sort(keys.begin(), keys.end(), [](IndexMask a, IndexMask b) {
            int da = mask_degree(a), db = mask_degree(b);
            if (da != db) return da < db;
            return mask_lex_less(a, b);
        });
        std::ostringstream os;
        bool first = true;
        for (IndexMask m : keys) {
            const S& c = t_.at(m);
            if constexpr (scalar_traits<S>::is_complex) {
                if (!first) os << " + ";
                os << '(' << scalar_traits<S>::str(c) << ')';
            } else {
                bool neg = scalar_traits<S>::real(c).sign() < 0;
                if (first)
                    os << (neg ? "-" : "");
                else
                    os << (neg ? " - " : " + ");
                os << scalar_traits<S>::str(neg ? -c : c);
            }
            first = false;
            os << " * e{";
            auto idx = mask_indices(m);
            for (std::size_t i = 0; i < idx.size(); ++i) {
                if (i) os << ',';
                os << idx[i];
            }
            os << '}';
        }
        return os.str();
    }

private:
    void require_same_frame(const Form& o) const {
        if (n_ != o.n_) throw validation_error("frame size mismatch");
    }
    int n_;
    std::map<IndexMask, S> t_;
};

using RForm = Form<Rational>;

/// Wedge product. Bilinear, associative, graded-commutative.
template <class S>
Form<S> wedge(const Form<S>& a, const Form<S>& b) {
    if (a.frame_size() != b.frame_size())
        throw validation_error("wedge: mismatched frame sizes");
    Form<S> out(a.frame_size());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            int s = wedge_sign(ma, mb);
            if (s == 0) continue;
            out.add_term(ma | mb, s > 0 ? ca * cb : -(ca * cb));
        }
    return out;
}

/// Interior product with the frame vector e_{x_index} (1-based index).
/// Degree -1 antiderivation; contracting twice with the same index gives 0.
template <class S>
Form<S> contract(int x_index, const Form<S>& a) {
    if (x_index < 1 || x_index > a.frame_size())
        throw validation_error("contract: frame index out of range");
    IndexMask bit = IndexMask(1) << (x_index - 1);
    Form<S> out(a.frame_size());
    for (const auto& [m, c] : a.terms()) {
        if (!(m & bit)) continue;
        int pos = std::popcount(m & (bit - 1));  // 0-based position within the tuple
        out.add_term(m & ~bit, (pos % 2 == 0) ? c : -c);
    }
    return out;
}

/// Interior product with an arbitrary vector given by frame coefficients.
template <class S>
Form<S> contract_vector(const DenseMatrix<S>& v, const Form<S>& a) {
    if (v.rows() != static_cast<std::size_t>(a.frame_size()) || v.cols() != 1)
        throw validation_error("contract_vector: bad coefficient vector");
    Form<S> out(a.frame_size());
    for (int i = 1; i <= a.frame_size(); ++i) {
        const S& c = v(static_cast<std::size_t>(i - 1), 0);
        if (is_zero(c)) continue;
        out += c * contract(i, a);
    }
    return out;
}

/// Parse the documented form syntax: terms "c * e{i1,...,ik}" joined by
/// '+'/'-', coefficient optional ("e{3}" reads as 1 * e{3}), "0" allowed.
/// Whitespace between tokens is ignored.
template <class S = Rational>
Form<S> parse_form(std::string_view text, int frame_size) {
    auto skip_ws = [&](std::size_t& i) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    };
    Form<S> out(frame_size);
    std::size_t i = 0;
    skip_ws(i);
    if (i == text.size()) throw parse_error("empty form expression");
    if (text.substr(i) == "0") return out;
    bool first = true;
    while (i < text.size()) {
        skip_ws(i);
        int sign = 1;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            if (first && text[i] == '+') throw parse_error("unexpected leading '+'");
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            skip_ws(i);
        } else if (!first) {
            throw parse_error("expected '+' or '-' between form terms");
        }
        first = false;
        // coefficient (optional)
        S coeff(1);
        if (i < text.size() && text[i] != 'e') {
            std::size_t j = i;
            while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '/'))
                ++j;
            auto c = Rational::parse(text.substr(i, j - i));
            if (!c) throw parse_error("bad coefficient in form expression");
            coeff = scalar_traits<S>::from_rational(*c);
            i = j;
            skip_ws(i);
            if (i < text.size() && text[i] == '*') {
                ++i;
                skip_ws(i);
            }
        }
        // basis element
        IndexMask m = 0;
        if (i < text.size() && text[i] == 'e') {
            ++i;
            if (i >= text.size() || text[i] != '{') throw parse_error("expected '{' after 'e'");
            ++i;
            while (true) {
                skip_ws(i);
                if (i < text.size() && text[i] == '}') {
                    ++i;
                    break;
                }
                std::size_t j = i;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
                if (j == i) throw parse_error("expected frame index in e{...}");
                int idx = std::stoi(std::string(text.substr(i, j - i)));
                if (idx < 1 || idx > frame_size) throw parse_error("frame index out of range");
                IndexMask bit = IndexMask(1) << (idx - 1);
                if (m & bit) throw parse_error("repeated index in e{...}");
                if (bit < m) throw parse_error("indices in e{...} must increase");
                m |= bit;
                i = j;
                skip_ws(i);
                if (i < text.size() && text[i] == ',') {
                    ++i;
                    continue;
                }
            }
        }
        out.add_term(m, sign < 0 ? -coeff : coeff);
        skip_ws(i);
    }
    return out;
}

}  // namespace folcoh
