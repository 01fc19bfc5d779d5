#pragma once
/// @file upoly.hpp
/// @brief Univariate polynomials over a finite algebra; Hensel factorization and
/// square roots of unipotent elements.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gtr/rmatrix.hpp"

namespace gtr {

/// Polynomial in T with coefficients in R, stored lowest degree first.
class UnivarPoly {
public:
    UnivarPoly() = default;
    explicit UnivarPoly(Ring R) : R_(std::move(R)) {}
    UnivarPoly(Ring R, std::vector<RingElem> c) : R_(std::move(R)), c_(std::move(c)) { trim(); }

    static UnivarPoly constant(const Ring& R, const RingElem& a) { return UnivarPoly(R, {a}); }
    static UnivarPoly T(const Ring& R) { return UnivarPoly(R, {RingElem::zero(R), RingElem::scalar(R, 1)}); }
    /// T - a
    static UnivarPoly linear(const Ring& R, const RingElem& a) { return UnivarPoly(R, {-a, RingElem::scalar(R, 1)}); }
    static UnivarPoly from_q(const Ring& R, const std::vector<Rational>& c) {
        std::vector<RingElem> v;
        for (auto& x : c) v.push_back(RingElem::scalar(R, x));
        return UnivarPoly(R, v);
    }

    const Ring& ring() const { return R_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<RingElem>& coeffs() const { return c_; }
    RingElem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : RingElem::zero(R_); }
    bool is_monic() const { return !c_.empty() && c_.back() == RingElem::scalar(R_, 1); }

    /// For a monic quadratic T^2 - g1 T + g0.
    RingElem gamma1() const { return -coeff(1); }
    RingElem gamma0() const { return coeff(0); }

    bool operator==(const UnivarPoly& o) const { return c_ == o.c_; }
    bool operator!=(const UnivarPoly& o) const { return c_ != o.c_; }

    UnivarPoly operator+(const UnivarPoly& o) const {
        std::vector<RingElem> c(std::max(c_.size(), o.c_.size()), RingElem::zero(R_));
        for (std::size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
        for (std::size_t i = 0; i < o.c_.size(); ++i) c[i] += o.c_[i];
        return UnivarPoly(R_, c);
    }
    UnivarPoly operator-() const {
        std::vector<RingElem> c = c_;
        for (auto& x : c) x = -x;
        return UnivarPoly(R_, c);
    }
    UnivarPoly operator-(const UnivarPoly& o) const { return *this + (-o); }
    UnivarPoly operator*(const UnivarPoly& o) const {
        if (c_.empty() || o.c_.empty()) return UnivarPoly(R_);
        std::vector<RingElem> c(c_.size() + o.c_.size() - 1, RingElem::zero(R_));
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
        return UnivarPoly(R_, c);
    }
    UnivarPoly operator*(const RingElem& a) const {
        std::vector<RingElem> c = c_;
        for (auto& x : c) x = x * a;
        return UnivarPoly(R_, c);
    }

    /// Quotient and remainder by a monic divisor.
    std::pair<UnivarPoly, UnivarPoly> divmod(const UnivarPoly& m) const {
        if (!m.is_monic()) throw std::invalid_argument("divmod: divisor must be monic");
        std::vector<RingElem> r = c_;
        const int dm = m.degree();
        std::vector<RingElem> q(std::max(0, degree() - dm + 1), RingElem::zero(R_));
        for (int k = degree(); k >= dm; --k) {
            RingElem lc = r[k];
            if (lc.is_zero()) continue;
            q[k - dm] = lc;
            for (int j = 0; j <= dm; ++j) r[k - dm + j] -= lc * m.c_[j];
        }
        return {UnivarPoly(R_, q), UnivarPoly(R_, r)};
    }
    UnivarPoly mod(const UnivarPoly& m) const { return divmod(m).second; }

    RingElem eval(const RingElem& x) const {
        RingElem acc = RingElem::zero(R_);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }
    RMat eval(const RMat& X) const {
        RMat acc(R_, X.rows(), X.cols());
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * X + RMat::scalar(R_, X.rows(), c_[i]);
        return acc;
    }
    /// Evaluate at a rational operator matrix, given how each ring basis element acts.
    QMat eval_operator(const QMat& X, const std::vector<QMat>& ring_action) const {
        QMat acc(X.rows(), X.cols());
        for (std::size_t i = c_.size(); i-- > 0;) {
            acc = acc * X;
            for (std::size_t s = 0; s < R_->dim(); ++s)
                if (sgn(c_[i].coords()[s]) != 0) acc += ring_action[s] * c_[i].coords()[s];
        }
        return acc;
    }

    /// Coefficients reduced to the residue field.
    std::vector<Rational> residue() const {
        std::vector<Rational> r;
        for (auto& x : c_) r.push_back(x.residue());
        while (!r.empty() && sgn(r.back()) == 0) r.pop_back();
        return r;
    }

    std::string str(const std::string& var = "T") const {
        if (c_.empty()) return "0";
        std::string s;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (c_[i].is_zero()) continue;
            std::string cs = c_[i].str();
            std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
            std::string term;
            if (mono.empty()) term = cs;
            else if (cs == "1") term = mono;
            else if (cs == "-1") term = "-" + mono;
            else term = "(" + cs + ")*" + mono;
            if (!s.empty()) s += term[0] == '-' ? " - " + term.substr(1) : " + " + term;
            else s = term;
        }
        return s;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    Ring R_;
    std::vector<RingElem> c_;
};

/// Characteristic polynomial det(T - M) by Faddeev-LeVerrier (exact in characteristic zero).
inline UnivarPoly charpoly(const RMat& M) {
    const Ring& R = M.ring();
    const std::size_t n = M.rows();
    std::vector<RingElem> c(n + 1, RingElem::zero(R));
    c[n] = RingElem::scalar(R, 1);
    RMat Mk(R, n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        Mk = M * Mk + RMat::scalar(R, n, c[n - k + 1]);
        c[n - k] = (M * Mk).trace() * Rational(-1, static_cast<long>(k));
    }
    return UnivarPoly(R, c);
}

namespace detail {

using QPoly = std::vector<Rational>;

inline void qtrim(QPoly& p) {
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}
inline QPoly qsub(QPoly a, const QPoly& b) {
    if (a.size() < b.size()) a.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    qtrim(a);
    return a;
}
inline QPoly qmul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly c(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    qtrim(c);
    return c;
}
inline std::pair<QPoly, QPoly> qdivmod(QPoly a, const QPoly& b) {
    qtrim(a);
    if (a.size() < b.size()) return {{}, a};
    QPoly q(a.size() - b.size() + 1);
    for (std::size_t k = a.size(); k-- > b.size() - 1;) {
        Rational f = a[k] / b.back();
        q[k - b.size() + 1] = f;
        for (std::size_t j = 0; j < b.size(); ++j) a[k - b.size() + 1 + j] -= f * b[j];
    }
    qtrim(a);
    qtrim(q);
    return {q, a};
}

}  // namespace detail

/// Resultant of two rational polynomials via the Sylvester matrix.
inline Rational resultant(const std::vector<Rational>& f, const std::vector<Rational>& g) {
    const int m = static_cast<int>(f.size()) - 1, n = static_cast<int>(g.size()) - 1;
    if (m < 0 || n < 0) return 0;
    if (m == 0 && n == 0) return 1;
    const int s = m + n;
    QMat S(s, s);
    for (int r = 0; r < n; ++r)
        for (int i = 0; i <= m; ++i) S(r, r + m - i) = f[i];
    for (int r = 0; r < m; ++r)
        for (int i = 0; i <= n; ++i) S(n + r, r + n - i) = g[i];
    return det(S);
}

struct HenselResult {
    UnivarPoly Q, S;
    int iterations = 0;
};

/// Lift a coprime factorization P = Q0*S0 (mod nilradical) to an exact one, by quadratic
/// Newton iteration on the factors and their Bezout cofactors.
inline HenselResult hensel_factor(const UnivarPoly& P, const UnivarPoly& Q0, const UnivarPoly& S0) {
    using namespace detail;
    const Ring& R = P.ring();
    if (!P.is_monic() || !Q0.is_monic() || !S0.is_monic()) throw std::invalid_argument("hensel_factor: inputs must be monic");
    QPoly q0 = Q0.residue(), s0 = S0.residue(), p0 = P.residue();
    if (qmul(q0, s0) != p0) throw AlgebraError("NotCongruent", "P mod nilradical differs from Q0*S0");
    if (sgn(resultant(q0, s0)) == 0) throw AlgebraError("NotCoprime", "resultant of Q0 and S0 vanishes");
    // Bezout over the residue field: a*q0 + b*s0 = 1
    QPoly r0 = q0, r1 = s0, a0 = {1}, a1 = {}, b0 = {}, b1 = {1};
    while (!r1.empty()) {
        auto [qq, rr] = qdivmod(r0, r1);
        r0 = r1;
        r1 = rr;
        QPoly na = qsub(a0, qmul(qq, a1)), nb = qsub(b0, qmul(qq, b1));
        a0 = a1;
        a1 = na;
        b0 = b1;
        b1 = nb;
    }
    Rational inv = 1 / r0[0];
    for (auto& x : a0) x *= inv;
    for (auto& x : b0) x *= inv;
    HenselResult res;
    res.Q = UnivarPoly::from_q(R, q0);
    res.S = UnivarPoly::from_q(R, s0);
    UnivarPoly a = UnivarPoly::from_q(R, a0), b = UnivarPoly::from_q(R, b0);
    const UnivarPoly one = UnivarPoly::constant(R, RingElem::scalar(R, 1));
    while (true) {
        UnivarPoly E = P - res.Q * res.S;
        if (E.is_zero()) break;
        ++res.iterations;
        if (res.iterations > 64) throw std::logic_error("hensel_factor: no convergence");
        res.Q = res.Q + (b * E).mod(res.Q);
        res.S = res.S + (a * E).mod(res.S);
        UnivarPoly e = one - a * res.Q - b * res.S;
        a = (a + a * e).mod(res.S);
        b = (b + b * e).mod(res.Q);
    }
    return res;
}

/// The unique square root of u congruent to 1 modulo the nilradical.
inline RingElem sqrt_one_plus_nilpotent(const RingElem& u) {
    const Ring& R = u.ring();
    RingElem n = u - RingElem::scalar(R, 1);
    if (!n.in_nilradical()) throw AlgebraError("NotUnipotent", "u - 1 is not nilpotent");
    RingElem acc = RingElem::scalar(R, 1), p = RingElem::scalar(R, 1);
    for (unsigned i = 1; i <= R->dim() + 1; ++i) {
        p = p * n;
        if (p.is_zero()) break;
        acc += p * binomial_half(i);
    }
    return acc;
}

}  // namespace gtr
