#pragma once
/// @file qmatrix.hpp
/// @brief Dense rational matrices and exact linear algebra (RREF, kernels, spans).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gtr/rational.hpp"

namespace gtr {

class QMat {
public:
    QMat() = default;
    QMat(std::size_t r, std::size_t c) : r_(r), c_(c), a_(r * c) {}

    static QMat identity(std::size_t n) {
        QMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static QMat scalar(std::size_t n, const Rational& s) {
        QMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = s;
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }

    Rational& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    bool is_zero() const {
        for (const auto& x : a_)
            if (sgn(x) != 0) return false;
        return true;
    }
    bool operator==(const QMat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
    bool operator!=(const QMat& o) const { return !(*this == o); }

    QMat operator+(const QMat& o) const {
        check_same(o);
        QMat m = *this;
        for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] += o.a_[k];
        return m;
    }
    QMat operator-(const QMat& o) const {
        check_same(o);
        QMat m = *this;
        for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] -= o.a_[k];
        return m;
    }
    QMat& operator+=(const QMat& o) {
        check_same(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    QMat& operator-=(const QMat& o) {
        check_same(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    QMat operator-() const {
        QMat m = *this;
        for (auto& x : m.a_) x = -x;
        return m;
    }
    QMat operator*(const Rational& s) const {
        QMat m = *this;
        for (auto& x : m.a_) x *= s;
        return m;
    }
    QMat operator*(const QMat& o) const {
        if (c_ != o.r_) throw std::invalid_argument("QMat: shape mismatch in product");
        QMat m(r_, o.c_);
        Rational t;
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t k = 0; k < c_; ++k) {
                const Rational& x = (*this)(i, k);
                if (sgn(x) == 0) continue;
                const Rational* orow = &o.a_[k * o.c_];
                Rational* mrow = &m.a_[i * o.c_];
                for (std::size_t j = 0; j < o.c_; ++j) {
                    if (sgn(orow[j]) == 0) continue;
                    t = x * orow[j];
                    mrow[j] += t;
                }
            }
        return m;
    }
    std::vector<Rational> apply(const std::vector<Rational>& v) const {
        if (v.size() != c_) throw std::invalid_argument("QMat: vector size mismatch");
        std::vector<Rational> w(r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t k = 0; k < c_; ++k)
                if (sgn(a_[i * c_ + k]) != 0 && sgn(v[k]) != 0) w[i] += a_[i * c_ + k] * v[k];
        return w;
    }

    QMat transpose() const {
        QMat m(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }
    QMat col(std::size_t j) const {
        QMat m(r_, 1);
        for (std::size_t i = 0; i < r_; ++i) m(i, 0) = (*this)(i, j);
        return m;
    }
    QMat cols_range(std::size_t j0, std::size_t j1) const {
        QMat m(r_, j1 - j0);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = j0; j < j1; ++j) m(i, j - j0) = (*this)(i, j);
        return m;
    }
    QMat rows_range(std::size_t i0, std::size_t i1) const {
        QMat m(i1 - i0, c_);
        for (std::size_t i = i0; i < i1; ++i)
            for (std::size_t j = 0; j < c_; ++j) m(i - i0, j) = (*this)(i, j);
        return m;
    }
    QMat select_cols(const std::vector<std::size_t>& js) const {
        QMat m(r_, js.size());
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t k = 0; k < js.size(); ++k) m(i, k) = (*this)(i, js[k]);
        return m;
    }
    QMat select_rows(const std::vector<std::size_t>& is) const {
        QMat m(is.size(), c_);
        for (std::size_t k = 0; k < is.size(); ++k)
            for (std::size_t j = 0; j < c_; ++j) m(k, j) = (*this)(is[k], j);
        return m;
    }
    std::vector<Rational> column_vector(std::size_t j) const {
        std::vector<Rational> v(r_);
        for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    static QMat from_column(const std::vector<Rational>& v) {
        QMat m(v.size(), 1);
        for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
        return m;
    }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < r_; ++i) {
            os << "[";
            for (std::size_t j = 0; j < c_; ++j) os << (j ? " " : "") << (*this)(i, j).get_str();
            os << "]\n";
        }
        return os.str();
    }

private:
    void check_same(const QMat& o) const {
        if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("QMat: shape mismatch");
    }
    std::size_t r_ = 0, c_ = 0;
    std::vector<Rational> a_;
};

inline QMat hcat(const QMat& a, const QMat& b) {
    if (a.cols() == 0) return b;
    if (b.cols() == 0) return a;
    if (a.rows() != b.rows()) throw std::invalid_argument("hcat: row mismatch");
    QMat m(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
    }
    return m;
}

inline QMat vcat(const QMat& a, const QMat& b) {
    if (a.rows() == 0) return b;
    if (b.rows() == 0) return a;
    if (a.cols() != b.cols()) throw std::invalid_argument("vcat: column mismatch");
    QMat m(a.rows() + b.rows(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) m(i, j) = a(i, j);
        for (std::size_t i = 0; i < b.rows(); ++i) m(a.rows() + i, j) = b(i, j);
    }
    return m;
}

inline QMat block_diag(const QMat& a, const QMat& b) {
    QMat m(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
    return m;
}

struct Rref {
    QMat m;
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Reduced row echelon form by Gauss-Jordan elimination.
inline Rref rref(QMat m) {
    const std::size_t R = m.rows(), C = m.cols();
    std::vector<std::size_t> piv;
    std::size_t row = 0;
    Rational f, t;
    for (std::size_t col = 0; col < C && row < R; ++col) {
        std::size_t p = R;
        for (std::size_t i = row; i < R; ++i)
            if (sgn(m(i, col)) != 0) { p = i; break; }
        if (p == R) continue;
        if (p != row)
            for (std::size_t j = col; j < C; ++j) std::swap(m(p, j), m(row, j));
        f = 1 / m(row, col);
        for (std::size_t j = col; j < C; ++j)
            if (sgn(m(row, j)) != 0) m(row, j) *= f;
        for (std::size_t i = 0; i < R; ++i) {
            if (i == row || sgn(m(i, col)) == 0) continue;
            f = m(i, col);
            for (std::size_t j = col; j < C; ++j) {
                if (sgn(m(row, j)) == 0) continue;
                t = f * m(row, j);
                m(i, j) -= t;
            }
        }
        piv.push_back(col);
        ++row;
    }
    return {std::move(m), std::move(piv)};
}

inline std::size_t rank(const QMat& m) { return rref(m).pivots.size(); }

/// Columns form a basis of {x : m x = 0}.
inline QMat kernel(const QMat& m) {
    Rref r = rref(m);
    const std::size_t C = m.cols();
    std::vector<bool> is_piv(C, false);
    for (auto p : r.pivots) is_piv[p] = true;
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < C; ++j)
        if (!is_piv[j]) free.push_back(j);
    QMat k(C, free.size());
    for (std::size_t f = 0; f < free.size(); ++f) {
        k(free[f], f) = 1;
        for (std::size_t i = 0; i < r.pivots.size(); ++i) k(r.pivots[i], f) = -r.m(i, free[f]);
    }
    return k;
}

/// Some X with a X = b, if one exists.
inline std::optional<QMat> solve(const QMat& a, const QMat& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("solve: row mismatch");
    Rref r = rref(hcat(a, b));
    const std::size_t n = a.cols();
    QMat x(n, b.cols());
    for (std::size_t i = 0; i < r.pivots.size(); ++i) {
        if (r.pivots[i] >= n) return std::nullopt;
        for (std::size_t j = 0; j < b.cols(); ++j) x(r.pivots[i], j) = r.m(i, n + j);
    }
    return x;
}

inline std::optional<QMat> inverse(const QMat& a) {
    if (a.rows() != a.cols()) return std::nullopt;
    const std::size_t n = a.rows();
    Rref r = rref(hcat(a, QMat::identity(n)));
    if (r.pivots.size() < n || r.pivots[n - 1] != n - 1) return std::nullopt;
    return r.m.cols_range(n, 2 * n);
}

/// Basis (as columns) of the column span, chosen among the given columns.
inline QMat column_basis(const QMat& m) {
    if (m.cols() == 0) return m;
    Rref r = rref(m);
    return m.select_cols(r.pivots);
}

/// Canonical form of the column span: the nonzero rows of rref(m^T), transposed back.
inline QMat canonical_span(const QMat& m) {
    if (m.cols() == 0) return QMat(m.rows(), 0);
    Rref r = rref(m.transpose());
    return r.m.rows_range(0, r.pivots.size()).transpose();
}

inline bool same_span(const QMat& a, const QMat& b) { return canonical_span(a) == canonical_span(b); }

inline bool span_contains(const QMat& big, const QMat& small) {
    if (small.cols() == 0) return true;
    return rank(hcat(big, small)) == rank(big);
}

/// Basis of the intersection of two column spans.
inline QMat span_intersection(const QMat& a, const QMat& b) {
    if (a.cols() == 0 || b.cols() == 0) return QMat(a.rows(), 0);
    QMat k = kernel(hcat(a, -b));
    return column_basis(a * k.rows_range(0, a.cols()));
}

/// Basis of {x : m x lies in the span of the columns of s}.
inline QMat preimage(const QMat& m, const QMat& s) {
    if (s.cols() == 0) return kernel(m);
    QMat k = kernel(hcat(m, -s));
    return column_basis(k.rows_range(0, m.cols()));
}

inline QMat power(const QMat& m, unsigned e) {
    QMat r = QMat::identity(m.rows()), b = m;
    while (e) {
        if (e & 1u) r = r * b;
        e >>= 1u;
        if (e) b = b * b;
    }
    return r;
}

/// Coordinates of the columns of v in the (independent) columns of basis.
inline std::optional<QMat> coordinates(const QMat& basis, const QMat& v) { return solve(basis, v); }

/// Standard basis vectors spanning a complement of the column span of a.
inline QMat complement_basis(const QMat& a) {
    const std::size_t n = a.rows();
    std::vector<bool> used(n, false);
    if (a.cols() > 0)
        for (auto p : rref(a.transpose()).pivots) used[p] = true;
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i)
        if (!used[i]) free.push_back(i);
    QMat out(n, free.size());
    for (std::size_t k = 0; k < free.size(); ++k) out(free[k], k) = 1;
    return out;
}

}  // namespace gtr
