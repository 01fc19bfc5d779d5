#pragma once
// Independent reference computations used by the tests. Nothing here calls the
// library routine it is meant to check.

#include <map>
#include <vector>

#include "gtr/connection.hpp"
#include "gtr/qmatrix.hpp"

namespace oracle {

/// Irreducible constituents of V_1^{(x)m}, by peeling highest weights off the weight
/// multiplicities. Key: highest weight (a, b) with a >= b; value: multiplicity.
inline std::map<std::pair<long, long>, int> v1_power_constituents(int m) {
    // weight (i, m - i) counts subsets with i first-coordinate letters
    std::map<std::pair<long, long>, long> mult;
    for (int i = 0; i <= m; ++i) {
        long c = 1;
        for (int k = 0; k < i; ++k) c = c * (m - k) / (k + 1);
        mult[{i, m - i}] = c;
    }
    std::map<std::pair<long, long>, int> out;
    while (true) {
        std::pair<long, long> top{-1, -1};
        for (auto& [w, c] : mult)
            if (c > 0 && w.first >= w.second && (top.first < 0 || w.first - w.second > top.first - top.second)) top = w;
        if (top.first < 0) break;
        long c = mult[top];
        out[top] += static_cast<int>(c);
        for (long a = top.second; a <= top.first; ++a) mult[{a, top.first + top.second - a}] -= c;
    }
    return out;
}

/// Kernel of Y^power by explicit powering (the rank bound from the design notes).
inline gtr::QMat kernel_of_power(const gtr::QMat& Y, unsigned power) {
    gtr::QMat P = gtr::QMat::identity(Y.rows());
    for (unsigned i = 0; i < power; ++i) P = P * Y;
    return gtr::kernel(P);
}


/// Kernel of Y^(2^m) with 2^m at least the dimension, by repeated squaring.
inline gtr::QMat kernel_of_big_power(const gtr::QMat& Y) {
    gtr::QMat P = Y;
    std::size_t e = 1;
    while (e < Y.rows()) {
        P = P * P;
        e *= 2;
    }
    return gtr::kernel(P);
}

inline gtr::QMat kron(const gtr::QMat& a, const gtr::QMat& b) {
    gtr::QMat m(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (sgn(a(i, j)) == 0) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l) m(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
        }
    return m;
}

/// Generalized (c, z)-eigenspace of D (x) V_l (x) det^b modulo a + i >= N, for rank-2 D.
/// Operators are Kronecker products on the rectangle D/t^(N+1) (x) V_l, then restricted.
/// Returned in the layout (i, a, j, s) -> offset_i + (a*2 + j)*d + s.
inline gtr::QMat translation_eigenspace(const gtr::ConnectionModule& D, unsigned l, long b, std::size_t N,
                                        const gtr::RingElem& c_mu, const gtr::RingElem& z_mu) {
    using gtr::QMat;
    using gtr::Rational;
    const gtr::Ring& R = D.base;
    const std::size_t d = R->dim(), n = 2, blk = n * d, M = N + 2;
    auto idx = [&](std::size_t a, std::size_t j, std::size_t s) { return (a * n + j) * d + s; };
    // rational operators on D/t^M
    QMat nab(M * blk, M * blk), t(M * blk, M * blk), one = QMat::identity(M * blk);
    std::vector<QMat> rm(d, QMat(M * blk, M * blk));
    for (std::size_t a = 0; a < M; ++a)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t s = 0; s < d; ++s) {
                const std::size_t col = idx(a, j, s);
                if (a + 1 < M) t(idx(a + 1, j, s), col) = 1;
                nab(col, col) += Rational(static_cast<long>(a));
                for (std::size_t r = 0; r < d; ++r) {
                    QMat L = gtr::RingElem::basis(R, r).mult_matrix();
                    for (std::size_t u = 0; u < d; ++u) rm[r](idx(a, j, u), col) = L(u, s);
                }
                for (std::size_t m = 0; a + m < M && m < D.A.size(); ++m)
                    for (std::size_t i = 0; i < n; ++i) {
                        QMat L = D.A[m](i, j).mult_matrix();
                        for (std::size_t u = 0; u < d; ++u) nab(idx(a + m, i, u), col) += L(u, s);
                    }
            }
    auto sc = [&](const gtr::RingElem& x) {
        QMat m(M * blk, M * blk);
        for (std::size_t s = 0; s < d; ++s) m += rm[s] * x.coords()[s];
        return m;
    };
    const gtr::RMat& A0 = D.A[0];
    gtr::RingElem g1 = A0(0, 0) + A0(1, 1), g0 = A0(0, 0) * A0(1, 1) - A0(0, 1) * A0(1, 0);
    QMat P = nab * nab - sc(g1) * nab + sc(g0);
    // u- = -t^-1 P : shift rows down by one degree
    QMat umD(M * blk, M * blk);
    for (std::size_t r = blk; r < M * blk; ++r)
        for (std::size_t c2 = 0; c2 < M * blk; ++c2) umD(r - blk, c2) = -P(r, c2);
    QMat amD = sc(g1 - gtr::RingElem::scalar(R, 1)) - nab;
    gtr::Gl2Module V = gtr::build_Vk(l);
    QMat Vup = V.up.residue(), Vum = V.um.residue(), Vap = V.ap.residue(), Vam = V.am.residue(), I = QMat::identity(l + 1);
    QMat up = kron(t, I) + kron(one, Vup), um = kron(umD, I) + kron(one, Vum);
    QMat bI = QMat::identity(M * blk * (l + 1)) * Rational(b);
    QMat ap = kron(nab, I) + kron(one, Vap) + bI, am = kron(amD, I) + kron(one, Vam) + bI;
    QMat h = ap - am, z = ap + am;
    QMat cas = h * h - h * Rational(2) + up * um * Rational(4);
    // restrict to a + i < N
    std::vector<std::size_t> keep, target;
    std::size_t off = 0;
    for (std::size_t i = 0; i <= l; ++i) {
        for (std::size_t a = 0; a + i < N; ++a)
            for (std::size_t k = 0; k < blk; ++k) {
                keep.push_back((a * blk + k) * (l + 1) + i);
                target.push_back(off + a * blk + k);
            }
        off += (N - i) * blk;
    }
    QMat C = cas.select_rows(keep).select_cols(keep), Z = z.select_rows(keep).select_cols(keep);
    // scalars act through the ring structure on D
    QMat cm = kron(sc(c_mu), I).select_rows(keep).select_cols(keep), zm = kron(sc(z_mu), I).select_rows(keep).select_cols(keep);
    QMat K = gtr::span_intersection(kernel_of_big_power(C - cm), kernel_of_big_power(Z - zm));
    QMat out(off, K.cols());
    for (std::size_t r = 0; r < keep.size(); ++r)
        for (std::size_t c2 = 0; c2 < K.cols(); ++c2) out(target[r], c2) = K(r, c2);
    return out;
}

/// Two-chart count for O(d) on P^1: global sections are x^j with 0 <= j <= d, and H^1 is spanned
/// by the Laurent monomials x^m with d < m < 0 that neither chart reaches.
inline std::pair<long, long> cech_line_bundle_dims(long d) {
    long h0 = 0, h1 = 0;
    for (long m = -50; m <= 50; ++m) {
        const bool chart0 = m >= 0, chart1 = m <= d;
        if (chart0 && chart1) ++h0;
        if (!chart0 && !chart1) ++h1;
    }
    return {h0, h1};
}

/// Fiber kind of a 2x2 rational operator from its characteristic polynomial alone:
/// 0 etale (nonzero discriminant), 1 ramified (zero discriminant, not scalar), 2 full flag (scalar).
inline int fiber_kind_by_discriminant(const gtr::QMat& nu) {
    const gtr::Rational tr = nu(0, 0) + nu(1, 1), dt = nu(0, 0) * nu(1, 1) - nu(0, 1) * nu(1, 0);
    const gtr::Rational disc = tr * tr - 4 * dt;
    const bool scalar = sgn(nu(0, 1)) == 0 && sgn(nu(1, 0)) == 0 && nu(0, 0) == nu(1, 1);
    if (scalar) return 2;
    return sgn(disc) != 0 ? 0 : 1;
}

}  // namespace oracle
