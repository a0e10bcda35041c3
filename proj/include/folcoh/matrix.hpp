#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <vector>

#include "folcoh/scalar.hpp"

namespace folcoh {

/// Dense matrix over an exact scalar (Rational or GaussianRational).
/// Model dimensions stay small (a few hundred at most), so there is no
/// sparse storage and no pivoting heuristics beyond "first nonzero in
/// column order", which keeps every reduction reproducible.
template <class S>
class DenseMatrix {
public:
    DenseMatrix() : rows_(0), cols_(0) {}
    DenseMatrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c, S(0)) {}
    DenseMatrix(std::size_t r, std::size_t c, std::initializer_list<S> entries)
        : rows_(r), cols_(c), a_(entries) {
        if (a_.size() != r * c) throw validation_error("matrix initializer size mismatch");
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
        return m;
    }
    static DenseMatrix zero(std::size_t r, std::size_t c) { return DenseMatrix(r, c); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    S& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!folcoh::is_zero(x)) return false;
        return true;
    }

    DenseMatrix transpose() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Conjugate transpose; plain transpose over the rationals.
    DenseMatrix dagger() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = scalar_traits<S>::conj((*this)(i, j));
        return t;
    }

    DenseMatrix operator-() const {
        DenseMatrix m(rows_, cols_);
        for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = -a_[k];
        return m;
    }
    DenseMatrix& operator+=(const DenseMatrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    DenseMatrix& operator-=(const DenseMatrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    DenseMatrix& operator*=(const S& c) {
        for (auto& x : a_) x *= c;
        return *this;
    }

    friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
    friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
    friend DenseMatrix operator*(DenseMatrix a, const S& c) { return a *= c; }
    friend DenseMatrix operator*(const S& c, DenseMatrix a) { return a *= c; }

    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
        if (a.cols_ != b.rows_) throw validation_error("matrix product shape mismatch");
        DenseMatrix m(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const S& aik = a(i, k);
                if (folcoh::is_zero(aik)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
            }
        return m;
    }

    friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }
    friend bool operator!=(const DenseMatrix& a, const DenseMatrix& b) { return !(a == b); }

    DenseMatrix col(std::size_t j) const {
        DenseMatrix c(rows_, 1);
        for (std::size_t i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
        return c;
    }
    void set_col(std::size_t j, const DenseMatrix& c) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c(i, 0);
    }

    DenseMatrix hstack(const DenseMatrix& o) const {
        if (rows_ != o.rows_) throw validation_error("hstack row mismatch");
        DenseMatrix m(rows_, cols_ + o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
            for (std::size_t j = 0; j < o.cols_; ++j) m(i, cols_ + j) = o(i, j);
        }
        return m;
    }

    DenseMatrix vstack(const DenseMatrix& o) const {
        if (cols_ != o.cols_) throw validation_error("vstack column mismatch");
        DenseMatrix m(rows_ + o.rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
        for (std::size_t i = 0; i < o.rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(rows_ + i, j) = o(i, j);
        return m;
    }

    template <class T>
    DenseMatrix<T> map() const {
        DenseMatrix<T> m(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                m(i, j) = scalar_traits<T>::from_rational((*this)(i, j));
        return m;
    }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                if (j) os << ' ';
                os << scalar_traits<S>::str((*this)(i, j));
            }
            if (i + 1 < rows_) os << " ; ";
        }
        return os.str();
    }

private:
    void require_same_shape(const DenseMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw validation_error("matrix shape mismatch");
    }

    std::size_t rows_, cols_;
    std::vector<S> a_;
};

using RMatrix = DenseMatrix<Rational>;
using GMatrix = DenseMatrix<GaussianRational>;

template <class S>
struct RrefResult {
    DenseMatrix<S> reduced;
    std::vector<std::size_t> pivot_cols;
};

/// Reduced row echelon form. Pivot rule: first nonzero entry in column
/// order, top row first -- deterministic across runs and platforms.
template <class S>
RrefResult<S> rref(DenseMatrix<S> m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t pr = row;
        while (pr < m.rows() && is_zero(m(pr, col))) ++pr;
        if (pr == m.rows()) continue;
        if (pr != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pr, j), m(row, j));
        S inv = S(1) / m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || is_zero(m(i, col))) continue;
            S f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(m), std::move(pivots)};
}

template <class S>
std::size_t rank(const DenseMatrix<S>& m) {
    return rref(m).pivot_cols.size();
}

/// Rank together with a basis of the kernel (columns). The kernel basis is
/// the standard one read off the RREF free columns, so rank + kernel
/// columns always equals the column count.
template <class S>
std::pair<std::size_t, DenseMatrix<S>> rank_and_kernel(const DenseMatrix<S>& m) {
    auto r = rref(m);
    const auto& piv = r.pivot_cols;
    std::size_t n = m.cols();
    DenseMatrix<S> ker(n, n - piv.size());
    std::size_t kcol = 0;
    std::vector<bool> is_pivot(n, false);
    for (auto c : piv) is_pivot[c] = true;
    for (std::size_t j = 0; j < n; ++j) {
        if (is_pivot[j]) continue;
        ker(j, kcol) = S(1);
        for (std::size_t i = 0; i < piv.size(); ++i) ker(piv[i], kcol) = -r.reduced(i, j);
        ++kcol;
    }
    return {piv.size(), std::move(ker)};
}

/// Solve A X = B exactly. Returns nullopt if inconsistent; free variables
/// are set to zero, so the solution is deterministic.
template <class S>
std::optional<DenseMatrix<S>> solve(const DenseMatrix<S>& a, const DenseMatrix<S>& b) {
    if (a.rows() != b.rows()) throw validation_error("solve: row mismatch");
    auto r = rref(a.hstack(b));
    std::size_t n = a.cols();
    DenseMatrix<S> x(n, b.cols());
    for (std::size_t i = 0; i < r.pivot_cols.size(); ++i) {
        std::size_t pc = r.pivot_cols[i];
        if (pc >= n) return std::nullopt;  // pivot in the augmented block
        for (std::size_t j = 0; j < b.cols(); ++j) x(pc, j) = r.reduced(i, n + j);
    }
    if (!(a * x == b)) return std::nullopt;
    return x;
}

template <class S>
std::optional<DenseMatrix<S>> inverse(const DenseMatrix<S>& a) {
    if (a.rows() != a.cols()) return std::nullopt;
    auto x = solve(a, DenseMatrix<S>::identity(a.rows()));
    if (!x) return std::nullopt;
    if (!(*x * a == DenseMatrix<S>::identity(a.rows()))) return std::nullopt;
    return x;
}

/// True if v lies in the column span of a.
template <class S>
bool in_span(const DenseMatrix<S>& a, const DenseMatrix<S>& v) {
    return solve(a, v).has_value();
}

}  // namespace folcoh
