#pragma once
/// @file rmatrix.hpp
/// @brief Matrices over a finite algebra, flattened to rational matrices when needed.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtr/algebra.hpp"

namespace gtr {

class RMat {
public:
    RMat() = default;
    RMat(Ring R, std::size_t r, std::size_t c) : R_(std::move(R)), r_(r), c_(c), a_(r * c, RingElem::zero(R_)) {}

    static RMat identity(const Ring& R, std::size_t n) {
        RMat m(R, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = RingElem::scalar(R, 1);
        return m;
    }
    static RMat scalar(const Ring& R, std::size_t n, const RingElem& x) {
        RMat m(R, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = x;
        return m;
    }
    static RMat from_q(const Ring& R, const QMat& q) {
        RMat m(R, q.rows(), q.cols());
        for (std::size_t i = 0; i < q.rows(); ++i)
            for (std::size_t j = 0; j < q.cols(); ++j) m(i, j) = RingElem::scalar(R, q(i, j));
        return m;
    }
    static RMat from_rows(const Ring& R, const std::vector<std::vector<RingElem>>& rows) {
        RMat m(R, rows.size(), rows.empty() ? 0 : rows[0].size());
        for (std::size_t i = 0; i < m.r_; ++i)
            for (std::size_t j = 0; j < m.c_; ++j) m(i, j) = rows[i][j];
        return m;
    }
    /// Inverse of flatten() for a column vector.
    static RMat unflatten_column(const Ring& R, const std::vector<Rational>& v) {
        const std::size_t d = R->dim();
        RMat m(R, v.size() / d, 1);
        for (std::size_t i = 0; i < m.r_; ++i)
            for (std::size_t s = 0; s < d; ++s) m(i, 0).coords()[s] = v[i * d + s];
        return m;
    }

    const Ring& ring() const { return R_; }
    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    RingElem& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const RingElem& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    bool is_zero() const {
        for (auto& x : a_)
            if (!x.is_zero()) return false;
        return true;
    }
    bool operator==(const RMat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
    bool operator!=(const RMat& o) const { return !(*this == o); }

    RMat operator+(const RMat& o) const {
        RMat m = *this;
        for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] += o.a_[k];
        return m;
    }
    RMat operator-(const RMat& o) const {
        RMat m = *this;
        for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] -= o.a_[k];
        return m;
    }
    RMat operator-() const {
        RMat m = *this;
        for (auto& x : m.a_) x = -x;
        return m;
    }
    RMat operator*(const RMat& o) const {
        if (c_ != o.r_) throw std::invalid_argument("RMat: shape mismatch");
        RMat m(R_, r_, o.c_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t k = 0; k < c_; ++k) {
                const RingElem& x = (*this)(i, k);
                if (x.is_zero()) continue;
                for (std::size_t j = 0; j < o.c_; ++j)
                    if (!o(k, j).is_zero()) m(i, j) += x * o(k, j);
            }
        return m;
    }
    RMat operator*(const RingElem& s) const {
        RMat m = *this;
        for (auto& x : m.a_) x = x * s;
        return m;
    }
    RMat operator*(const Rational& s) const {
        RMat m = *this;
        for (auto& x : m.a_) x = x * s;
        return m;
    }
    RMat& operator+=(const RMat& o) { return *this = *this + o; }
    RMat& operator-=(const RMat& o) { return *this = *this - o; }

    RMat transpose() const {
        RMat m(R_, c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }
    RingElem trace() const {
        RingElem s = RingElem::zero(R_);
        for (std::size_t i = 0; i < std::min(r_, c_); ++i) s += (*this)(i, i);
        return s;
    }

    /// Rational matrix of the Q-linear map R^c -> R^r; coordinate (i, s) sits at i*d+s.
    QMat flatten() const {
        const std::size_t d = R_->dim();
        QMat q(r_ * d, c_ * d);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) {
                const auto& x = (*this)(i, j);
                if (x.is_zero()) continue;
                QMat L = x.mult_matrix();
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t b = 0; b < d; ++b)
                        if (sgn(L(a, b)) != 0) q(i * d + a, j * d + b) = L(a, b);
            }
        return q;
    }
    /// Coordinates of the columns stacked (each column flattened).
    QMat flatten_columns() const {
        const std::size_t d = R_->dim();
        QMat q(r_ * d, c_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j)
                for (std::size_t s = 0; s < d; ++s) q(i * d + s, j) = (*this)(i, j).coords()[s];
        return q;
    }

    QMat residue() const {
        QMat q(r_, c_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) q(i, j) = (*this)(i, j).residue();
        return q;
    }

    std::optional<RMat> inverse() const {
        if (r_ != c_) return std::nullopt;
        auto inv = gtr::inverse(flatten());
        if (!inv) return std::nullopt;
        RMat I = identity(R_, r_);
        QMat sol = *inv * I.flatten_columns();
        RMat m(R_, r_, r_);
        const std::size_t d = R_->dim();
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < r_; ++j)
                for (std::size_t s = 0; s < d; ++s) m(i, j).coords()[s] = sol(i * d + s, j);
        return m;
    }

    RMat pow(unsigned e) const {
        RMat r = identity(R_, r_), b = *this;
        while (e) {
            if (e & 1u) r = r * b;
            e >>= 1u;
            if (e) b = b * b;
        }
        return r;
    }

    std::string str() const {
        std::string s = "[";
        for (std::size_t i = 0; i < r_; ++i) {
            s += i ? ", [" : "[";
            for (std::size_t j = 0; j < c_; ++j) s += (j ? ", " : "") + (*this)(i, j).str();
            s += "]";
        }
        return s + "]";
    }

private:
    Ring R_;
    std::size_t r_ = 0, c_ = 0;
    std::vector<RingElem> a_;
};

inline RMat operator*(const RingElem& s, const RMat& m) { return m * s; }

/// Least N with M^N = 0, or nullopt when M is not nilpotent.
inline std::optional<int> nilpotency_order(const RMat& M) {
    const std::size_t n = M.rows();
    if (n == 0) return 0;
    if (!power(M.residue(), static_cast<unsigned>(n)).is_zero()) return std::nullopt;
    RMat P = RMat::identity(M.ring(), n);
    int k = 0;
    while (!P.is_zero()) {
        P = P * M;
        ++k;
    }
    return k;
}

/// Determinant of a square rational matrix.
inline Rational det(QMat m) {
    const std::size_t n = m.rows();
    Rational d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && sgn(m(p, c)) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            d = -d;
        }
        d *= m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (sgn(m(i, c)) == 0) continue;
            Rational f = m(i, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return d;
}

/// Free kernel vectors of M over a local ring: lifts of a basis of the liftable part of the
/// residue kernel, each killed by M exactly.
inline RMat kernel_over_artin(const RMat& M, std::size_t expected_rank) {
    const Ring& R = M.ring();
    QMat k0 = kernel(M.residue());
    if (k0.cols() < expected_rank)
        throw AlgebraError("RankMismatch", "residue kernel has dimension " + std::to_string(k0.cols()) +
                                               ", expected " + std::to_string(expected_rank));
    const std::size_t n = M.cols(), d = R->dim();
    QMat K = kernel(M.flatten());
    QMat red(n, n * d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t s = 0; s < d; ++s) red(i, i * d + s) = R->residue()[s];
    QMat img = column_basis(red * K);
    if (img.cols() < expected_rank)
        throw AlgebraError("LiftObstruction", "only " + std::to_string(img.cols()) + " residue kernel vectors lift");
    if (img.cols() > expected_rank)
        throw AlgebraError("RankMismatch", "liftable kernel has rank " + std::to_string(img.cols()) + ", expected " +
                                               std::to_string(expected_rank));
    RMat out(R, n, expected_rank);
    QMat lifts = K * *solve(red * K, img);
    for (std::size_t c = 0; c < expected_rank; ++c)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t s = 0; s < d; ++s) out(i, c).coords()[s] = lifts(i * d + s, c);
    return out;
}

}  // namespace gtr
