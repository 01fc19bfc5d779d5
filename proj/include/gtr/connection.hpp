#pragma once
/// @file connection.hpp
/// @brief Lattices with a t-connection over R[t]/t^N: gauge transforms, Fuchs normalization,
/// rational windows t^lo M / t^hi M, lattice extraction, the pdR filtration and change of weights.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gtr/gl2module.hpp"
#include "gtr/report.hpp"
#include "gtr/upoly.hpp"

namespace gtr {

/// Matrix-valued polynomial in t; entry k is the coefficient of t^k.
using Series = std::vector<RMat>;

inline RMat series_at(const Series& s, std::size_t k, const Ring& R, std::size_t r, std::size_t c) {
    return k < s.size() ? s[k] : RMat(R, r, c);
}

inline Series series_mul(const Series& a, const Series& b, std::size_t N) {
    const Ring& R = a[0].ring();
    Series out(N, RMat(R, a[0].rows(), b[0].cols()));
    for (std::size_t i = 0; i < a.size() && i < N; ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size() && i + j < N; ++j)
            if (!b[j].is_zero()) out[i + j] += a[i] * b[j];
    }
    return out;
}

/// Inverse modulo t^N; requires S(0) invertible.
inline std::optional<Series> series_inverse(const Series& S, std::size_t N) {
    auto inv0 = S[0].inverse();
    if (!inv0) return std::nullopt;
    const Ring& R = S[0].ring();
    const std::size_t n = S[0].rows();
    Series out(N, RMat(R, n, n));
    out[0] = *inv0;
    for (std::size_t k = 1; k < N; ++k) {
        RMat acc(R, n, n);
        for (std::size_t j = 1; j <= k && j < S.size(); ++j) acc += S[j] * out[k - j];
        out[k] = -(*inv0 * acc);
    }
    return out;
}

/// t * dS/dt
inline Series series_t_derivative(const Series& S) {
    Series out = S;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = S[k] * Rational(static_cast<long>(k));
    return out;
}

inline Series series_constant(const RMat& m, std::size_t N) {
    Series s(N, RMat(m.ring(), m.rows(), m.cols()));
    s[0] = m;
    return s;
}

struct ConnectionModule {
    Ring base;
    std::size_t rank = 0;
    std::size_t N = 1;
    Series A;  // length N
    long window_shift = 0;

    RMat coeff(std::size_t k) const { return series_at(A, k, base, rank, rank); }
    RMat residue_matrix() const { return coeff(0); }
    UnivarPoly sen_polynomial() const { return charpoly(coeff(0)); }

    static ConnectionModule make(const Series& A, std::size_t N, long shift = 0) {
        ConnectionModule M;
        M.base = A.at(0).ring();
        M.rank = A[0].rows();
        M.N = N;
        for (std::size_t k = 0; k < N; ++k) M.A.push_back(series_at(A, k, M.base, M.rank, M.rank));
        M.window_shift = shift;
        return M;
    }
    static ConnectionModule constant(const RMat& A0, std::size_t N) { return make({A0}, N); }

    bool operator==(const ConnectionModule& o) const {
        if (rank != o.rank || N != o.N) return false;
        for (std::size_t k = 0; k < N; ++k)
            if (coeff(k) != o.coeff(k)) return false;
        return true;
    }
};

/// The lattice t^i M: same basis scaled, A + i.
inline ConnectionModule shift_weights(const ConnectionModule& M, long i) {
    ConnectionModule out = M;
    out.A[0] += RMat::scalar(M.base, M.rank, RingElem::scalar(M.base, Rational(i)));
    out.window_shift += i;
    return out;
}

/// Change of basis e' = e S. If S = t^e U with U(0) invertible the basis spans t^e times a lattice
/// and the result records window_shift += e.
inline ConnectionModule gauge_transform(const ConnectionModule& M, const Series& S) {
    const Ring& R = M.base;
    const std::size_t n = M.rank;
    std::size_t e = 0;
    while (e < S.size() && S[e].is_zero()) ++e;
    if (e == S.size()) throw AlgebraError("NotInvertible", "gauge matrix is zero");
    Series U(S.begin() + static_cast<long>(e), S.end());
    auto Uinv = series_inverse(U, M.N);
    if (!Uinv) throw AlgebraError("NotInvertible", "det S(0) is not a unit");
    Series AU = series_mul(M.A, U, M.N);
    Series dU = series_t_derivative(U);
    for (std::size_t k = 0; k < M.N && k < dU.size(); ++k) AU[k] += dU[k];
    Series out = series_mul(*Uinv, AU, M.N);
    out[0] += RMat::scalar(R, n, RingElem::scalar(R, Rational(static_cast<long>(e))));
    return ConnectionModule::make(out, M.N, M.window_shift + static_cast<long>(e));
}

namespace detail {

/// Coordinates of an r x c matrix at (i*c + j)*d + s.
inline std::vector<Rational> flatten_entries(const RMat& m) {
    const std::size_t d = m.ring()->dim();
    std::vector<Rational> v(m.rows() * m.cols() * d);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            for (std::size_t s = 0; s < d; ++s) v[(i * m.cols() + j) * d + s] = m(i, j).coords()[s];
    return v;
}

inline RMat unflatten_entries(const Ring& R, std::size_t r, std::size_t c, const QMat& v, std::size_t col = 0,
                              std::size_t offset = 0) {
    const std::size_t d = R->dim();
    RMat m(R, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            for (std::size_t s = 0; s < d; ++s) m(i, j).coords()[s] = v(offset + (i * c + j) * d + s, col);
    return m;
}

/// Rational matrix of a Q-linear map on r x c matrices over R.
template <class F>
QMat matrix_map(const Ring& R, std::size_t r, std::size_t c, F f) {
    const std::size_t d = R->dim();
    QMat out(0, 0);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            for (std::size_t s = 0; s < d; ++s) {
                RMat X(R, r, c);
                X(i, j) = RingElem::basis(R, s);
                auto v = flatten_entries(f(X));
                if (out.rows() == 0) out = QMat(v.size(), r * c * d);
                for (std::size_t k = 0; k < v.size(); ++k) out(k, (i * c + j) * d + s) = v[k];
            }
    return out;
}

/// Integer roots with multiplicity of a rational polynomial (lowest degree first), or nullopt
/// when it does not split into integer linear factors.
inline std::optional<std::vector<long>> integer_roots(std::vector<Rational> p) {
    std::vector<long> roots;
    while (p.size() > 1) {
        Rational bound = 1;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) bound += abs(p[i] / p.back());
        const mpz_class qb = bound.get_num() / bound.get_den();
        const long B = qb.get_si() + 1;
        bool found = false;
        for (long h = -B; h <= B && !found; ++h) {
            // synthetic division by T - h
            std::vector<Rational> q(p.size() - 1);
            Rational acc = 0;
            for (std::size_t i = p.size(); i-- > 1;) {
                acc = acc * h + p[i];
                q[i - 1] = acc;
            }
            if (sgn(acc * h + p[0]) == 0) {
                roots.push_back(h);
                p = q;
                found = true;
            }
        }
        if (!found) return std::nullopt;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace detail

/// Integral Hodge-Tate-Sen weights of M (sorted), or NotAlmostDeRham.
inline std::vector<long> sen_weights(const ConnectionModule& M) {
    auto r = detail::integer_roots(M.sen_polynomial().residue());
    if (!r) throw AlgebraError("NotAlmostDeRham", "Sen polynomial " + M.sen_polynomial().str() + " has non-integral roots");
    return *r;
}

struct FuchsResult {
    Series S;
    RMat nu;
};

/// Gauge S with constant connection matrix A(0), solved order by order:
/// (ad A(0) + k) S_k = -sum_{j >= 1} A_j S_{k-j}.
inline FuchsResult fuchs_normalize_weight0(const ConnectionModule& M) {
    const Ring& R = M.base;
    const std::size_t n = M.rank;
    auto w = detail::integer_roots(M.sen_polynomial().residue());
    if (!w || std::any_of(w->begin(), w->end(), [](long h) { return h != 0; }))
        throw AlgebraError("NotWeightZero", "Sen polynomial is not T^n modulo the nilradical");
    const RMat A0 = M.coeff(0);
    FuchsResult out{Series(M.N, RMat(R, n, n)), A0};
    out.S[0] = RMat::identity(R, n);
    for (std::size_t k = 1; k < M.N; ++k) {
        QMat L = detail::matrix_map(R, n, n, [&](const RMat& X) {
            return A0 * X - X * A0 + X * Rational(static_cast<long>(k));
        });
        RMat rhs(R, n, n);
        for (std::size_t j = 1; j <= k; ++j) rhs -= M.coeff(j) * out.S[k - j];
        auto x = solve(L, QMat::from_column(detail::flatten_entries(rhs)));
        if (!x) throw std::logic_error("fuchs_normalize_weight0: singular recursion");
        out.S[k] = detail::unflatten_entries(R, n, n, *x);
    }
    return out;
}

/// Weight 0 and i != 0: A(0) + i is invertible, so t^i-graded pieces carry no horizontal vectors.
inline bool graded_piece_invertible(const ConnectionModule& M, long i) {
    RMat X = M.coeff(0) + RMat::scalar(M.base, M.rank, RingElem::scalar(M.base, Rational(i)));
    return X.inverse().has_value();
}

// ---------------------------------------------------------------------------------------------
// Rational windows

/// A finite-dimensional Q-space with the operators t (T), nabla and multiplication by the basis
/// of R.
struct Ambient {
    Ring R;
    std::size_t dim = 0;
    QMat T, nabla;
    std::vector<QMat> rmul;

    QMat scalar(const RingElem& x) const {
        QMat m(dim, dim);
        for (std::size_t s = 0; s < R->dim(); ++s)
            if (sgn(x.coords()[s]) != 0) m += rmul[s] * x.coords()[s];
        return m;
    }
    /// Smallest subspace containing V stable under t and R.
    QMat closure(const QMat& V) const {
        QMat W = column_basis(V);
        while (true) {
            QMat next = hcat(W, T * W);
            for (std::size_t s = 1; s < R->dim(); ++s) next = hcat(next, rmul[s] * W);
            next = column_basis(next);
            if (next.cols() == W.cols()) return W;
            W = next;
        }
    }
    bool stable(const QMat& L) const {
        if (!span_contains(L, T * L) || !span_contains(L, nabla * L)) return false;
        for (std::size_t s = 1; s < R->dim(); ++s)
            if (!span_contains(L, rmul[s] * L)) return false;
        return true;
    }
};

/// t^lo M / t^(lo+size) M with basis t^(lo+k) b_s e_i at (k*n + i)*d + s.
struct Window : Ambient {
    std::size_t n = 0, size = 0;
    long lo = 0;

    std::size_t index(std::size_t k, std::size_t i, std::size_t s) const { return (k * n + i) * R->dim() + s; }
    /// Basis vectors of t-degree at least e.
    QMat degree_at_least(long e) const {
        std::vector<std::size_t> cols;
        for (std::size_t j = 0; j < dim; ++j)
            if (lo + static_cast<long>(j / (n * R->dim())) >= e) cols.push_back(j);
        return QMat::identity(dim).select_cols(cols);
    }
    /// A vector of R^n placed in degree e.
    QMat place(const RMat& v, long e) const {
        QMat out(dim, v.cols());
        const long k = e - lo;
        if (k < 0 || k >= static_cast<long>(size)) return out;
        for (std::size_t c = 0; c < v.cols(); ++c)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t s = 0; s < R->dim(); ++s) out(index(static_cast<std::size_t>(k), i, s), c) = v(i, c).coords()[s];
        return out;
    }
    /// Component of degree e of column c, as a vector of R^n.
    RMat component(const QMat& v, std::size_t c, long e) const {
        RMat out(R, n, 1);
        const long k = e - lo;
        if (k < 0 || k >= static_cast<long>(size)) return out;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t s = 0; s < R->dim(); ++s) out(i, 0).coords()[s] = v(index(static_cast<std::size_t>(k), i, s), c);
        return out;
    }
};

inline Window window(const ConnectionModule& M, long lo, std::size_t size) {
    Window W;
    W.R = M.base;
    W.n = M.rank;
    W.size = size;
    W.lo = lo;
    const std::size_t d = M.base->dim(), n = M.rank;
    W.dim = size * n * d;
    W.T = QMat(W.dim, W.dim);
    W.nabla = QMat(W.dim, W.dim);
    W.rmul.assign(d, QMat(W.dim, W.dim));
    std::vector<QMat> bmul(d);
    for (std::size_t s = 0; s < d; ++s) bmul[s] = RingElem::basis(M.base, s).mult_matrix();
    for (std::size_t k = 0; k < size; ++k)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t s = 0; s < d; ++s) {
                const std::size_t col = W.index(k, j, s);
                if (k + 1 < size) W.T(W.index(k + 1, j, s), col) = 1;
                for (std::size_t r = 0; r < d; ++r)
                    for (std::size_t u = 0; u < d; ++u)
                        if (sgn(bmul[r](u, s)) != 0) W.rmul[r](W.index(k, j, u), col) = bmul[r](u, s);
                W.nabla(col, col) += Rational(lo + static_cast<long>(k));
                const RingElem bs = RingElem::basis(M.base, s);
                for (std::size_t m = 0; k + m < size && m < M.N; ++m)
                    for (std::size_t i = 0; i < n; ++i) {
                        const RingElem& a = M.A[m](i, j);
                        if (a.is_zero()) continue;
                        RingElem v = a * bs;
                        for (std::size_t u = 0; u < d; ++u) W.nabla(W.index(k + m, i, u), col) += v.coords()[u];
                    }
            }
    return W;
}

struct Extracted {
    ConnectionModule module;
    QMat gens;  // generator vectors in the ambient
};

/// Free R[t]-basis of a t-, R- and nabla-stable subspace L, with the connection matrix of the
/// generators modulo t^precision. Requires L / t^precision L to be free over R[t]/t^precision.
inline Extracted extract_lattice(const Ambient& W, const QMat& Lin, std::size_t precision) {
    const Ring& R = W.R;
    const std::size_t d = R->dim();
    QMat L = column_basis(Lin);
    if (!W.stable(L)) throw AlgebraError("NotStable", "subspace is not stable under t, R and nabla");
    QMat rad = W.T * L;
    const QMat& nil = R->nilradical_basis();
    for (std::size_t c = 0; c < nil.cols(); ++c) {
        RingElem m(R, nil.column_vector(c));
        rad = hcat(rad, W.scalar(m) * L);
    }
    rad = column_basis(rad);
    Rref rr = rref(hcat(rad, L));
    std::vector<std::size_t> pick;
    for (auto p : rr.pivots)
        if (p >= rad.cols()) pick.push_back(p - rad.cols());
    QMat gens = L.select_cols(pick);
    const std::size_t r = gens.cols();
    QMat tp = column_basis(power(W.T, static_cast<unsigned>(precision)) * L);
    QMat cols(W.dim, 0);
    QMat Ta = QMat::identity(W.dim);
    for (std::size_t a = 0; a < precision; ++a) {
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t s = 0; s < d; ++s) cols = hcat(cols, Ta * W.rmul[s] * gens.col(i));
        Ta = W.T * Ta;
    }
    if (rank(hcat(cols, tp)) != tp.cols() + r * d * precision)
        throw AlgebraError("NotFree", "quotient by t^" + std::to_string(precision) + " is not free on " +
                                          std::to_string(r) + " generators");
    auto x = solve(hcat(cols, tp), W.nabla * gens);
    ConnectionModule M;
    M.base = R;
    M.rank = r;
    M.N = precision;
    M.A.assign(precision, RMat(R, r, r));
    for (std::size_t a = 0; a < precision; ++a)
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                for (std::size_t s = 0; s < d; ++s) M.A[a](i, j).coords()[s] = (*x)((a * r + i) * d + s, j);
    return {M, gens};
}

/// Solve for a horizontal isomorphism S (modulo t^p) with gauge_transform(M1, S) = M2.
inline std::optional<Series> connection_isomorphism(const ConnectionModule& M1, const ConnectionModule& M2, std::size_t p,
                                                    std::uint64_t seed = 0) {
    if (M1.rank != M2.rank) return std::nullopt;
    const Ring& R = M1.base;
    const std::size_t n = M1.rank, d = R->dim(), blk = n * n * d;
    // A S + t S' - S B = 0 order by order
    QMat sys(blk * p, blk * p);
    for (std::size_t k = 0; k < p; ++k)
        for (std::size_t j = 0; j <= k; ++j) {
            const RMat A = M1.coeff(k - j), B = M2.coeff(k - j);
            const long kk = static_cast<long>(k);
            QMat piece = detail::matrix_map(R, n, n, [&](const RMat& X) {
                RMat y = A * X - X * B;
                if (j == k) y += X * Rational(kk);
                return y;
            });
            for (std::size_t a = 0; a < blk; ++a)
                for (std::size_t b = 0; b < blk; ++b)
                    if (sgn(piece(a, b)) != 0) sys(k * blk + a, j * blk + b) = piece(a, b);
        }
    QMat sol = kernel(sys);
    if (sol.cols() == 0) return std::nullopt;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(-9, 9);
    for (int attempt = 0; attempt < 8; ++attempt) {
        QMat comb(sol.cols(), 1);
        for (std::size_t c = 0; c < sol.cols(); ++c) comb(c, 0) = dist(rng);
        QMat v = sol * comb;
        Series S;
        for (std::size_t k = 0; k < p; ++k) S.push_back(detail::unflatten_entries(R, n, n, v, 0, k * blk));
        if (S[0].inverse()) return S;
    }
    return std::nullopt;
}

/// Connection matrices agree modulo t^p.
inline bool agree_mod(const ConnectionModule& a, const ConnectionModule& b, std::size_t p) {
    for (std::size_t k = 0; k < p; ++k)
        if (a.coeff(k) != b.coeff(k)) return false;
    return true;
}

// ---------------------------------------------------------------------------------------------
// pdR data

struct FilteredNilpotentData {
    Ring base;
    std::size_t rank = 0;
    RMat nu;
    std::vector<long> weights;  // sorted
    /// Steps (i, basis of Fil^i) for -max(h) <= i <= -min(h); Fil^i is everything below and 0 above.
    std::vector<std::pair<long, RMat>> fil;

    RMat fil_at(long i) const {
        if (fil.empty() || i > fil.back().first) return RMat(base, rank, 0);
        if (i <= fil.front().first) return RMat::identity(base, rank);
        for (auto& [j, B] : fil)
            if (j == i) return B;
        throw std::logic_error("fil_at: missing step");
    }

    /// Invariants: nu nilpotent, steps free, nu-stable, graded ranks matching the weights.
    Report validate() const {
        Report r("filtered_nilpotent_data");
        r.add("nu nilpotent", nilpotency_order(nu).has_value());
        bool stable = true, ranks = true, free = true;
        if (!weights.empty())
            for (long i = -weights.back(); i <= -weights.front() + 1; ++i) {
                RMat B = fil_at(i);
                if (B.cols() > 0 && !free_basis(base, rank, B.flatten()).has_value()) free = false;
                if (B.cols() > 0 && !span_contains(B.flatten(), (nu * B).flatten_columns())) stable = false;
                const auto expect = static_cast<std::size_t>(
                    std::count_if(weights.begin(), weights.end(), [&](long h) { return h <= -i; }));
                if (B.cols() != expect) ranks = false;
            }
        r.add("steps free", free);
        r.add("nu-stable", stable);
        r.add("graded ranks match weights", ranks);
        return r;
    }
};

struct PdrResult {
    FilteredNilpotentData data;
    Window win;  // t^lo M / t^(lo+N) M with lo = -max(h)
    QMat E0;     // generalized 0-eigenspace of nabla in the window
    QMat gens;   // R-basis of E0 (one column per basis vector of D_pdR)
};

namespace detail {

/// Coordinates of the columns of X in the R-basis `gens` of an R-stable subspace, flattened
/// at j*d + s.
inline QMat r_coordinates(const Ambient& W, const QMat& gens, const QMat& X) {
    QMat span(W.dim, 0);
    for (std::size_t j = 0; j < gens.cols(); ++j)
        for (std::size_t s = 0; s < W.R->dim(); ++s) span = hcat(span, W.rmul[s] * gens.col(j));
    auto x = solve(span, X);
    if (!x) throw AlgebraError("NotStable", "vectors outside the R-span");
    return *x;
}

}  // namespace detail

/// D_pdR as the generalized kernel of nabla on t^-max(h) M / t^(N-max(h)) M, with
/// Fil^i = D_pdR intersected with t^i M.
inline PdrResult d_pdr(const ConnectionModule& M) {
    const Ring& R = M.base;
    const std::size_t n = M.rank, d = R->dim();
    const std::vector<long> h = sen_weights(M);
    const long hmin = h.front(), hmax = h.back();
    if (static_cast<long>(M.N) <= hmax - hmin + 1)
        throw AlgebraError("WindowTooSmall", "truncation " + std::to_string(M.N) + " does not exceed weight spread + 1");
    PdrResult out;
    out.win = window(M, -hmax, M.N);
    const Window& W = out.win;
    out.E0 = generalized_kernel(W.nabla, QMat::identity(W.dim));
    if (out.E0.cols() != n * d) throw AlgebraError("NotFree", "generalized 0-eigenspace has the wrong dimension");
    // R-basis: complement of m*E0
    QMat rad(W.dim, 0);
    const QMat& nil = R->nilradical_basis();
    for (std::size_t c = 0; c < nil.cols(); ++c) rad = hcat(rad, W.scalar(RingElem(R, nil.column_vector(c))) * out.E0);
    rad = column_basis(rad);
    Rref rr = rref(hcat(rad, out.E0));
    std::vector<std::size_t> pick;
    for (auto p : rr.pivots)
        if (p >= rad.cols()) pick.push_back(p - rad.cols());
    out.gens = out.E0.select_cols(pick);
    if (out.gens.cols() != n) throw AlgebraError("NotFree", "D_pdR is not free of rank n");
    FilteredNilpotentData& F = out.data;
    F.base = R;
    F.rank = n;
    F.weights = h;
    QMat nu = detail::r_coordinates(W, out.gens, W.nabla * out.gens);
    F.nu = RMat(R, n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t s = 0; s < d; ++s) F.nu(i, j).coords()[s] = nu(i * d + s, j);
    for (long i = -hmax; i <= -hmin; ++i) {
        QMat Vi = span_intersection(out.E0, W.degree_at_least(i));
        QMat c = detail::r_coordinates(W, out.gens, Vi);
        auto B = free_basis(R, n, c);
        if (!B) throw AlgebraError("NotFree", "Fil^" + std::to_string(i) + " is not a free summand");
        F.fil.push_back({i, *B});
    }
    return out;
}

struct FiltrationLattice {
    ConnectionModule module;
    RMat P;                  // adapted basis of D_pdR, columns
    std::vector<long> w;     // weight of each column; lattice basis is t^w_j P_j
};

/// The lattice sum_i Fil^i (x) t^-i R[[t]] inside D_pdR (x) R((t)) with connection t d/dt + nu.
inline FiltrationLattice lattice_from_filtration(const FilteredNilpotentData& F, std::size_t N) {
    const Ring& R = F.base;
    const std::size_t n = F.rank;
    FiltrationLattice out;
    out.P = RMat(R, n, 0);
    const std::size_t d = R->dim();
    RMat cols(R, n, n);
    std::size_t filled = 0;
    // a column is added when the R-span of the chosen columns stays free
    auto try_add = [&](const RMat& v, long w) {
        RMat cand = cols;
        for (std::size_t r = 0; r < n; ++r) cand(r, filled) = v(r, 0);
        if (rank(cand.flatten()) != (filled + 1) * d) return;
        cols = cand;
        out.w.push_back(w);
        ++filled;
    };
    for (auto it = F.fil.rbegin(); it != F.fil.rend(); ++it) {
        const auto& [i, B] = *it;
        if (B.cols() > 0 && !span_contains(B.flatten(), (F.nu * B).flatten_columns()))
            throw AlgebraError("FiltrationNotStable", "nu does not preserve Fil^" + std::to_string(i));
        for (std::size_t c = 0; c < B.cols() && filled < n; ++c) {
            RMat v(R, n, 1);
            for (std::size_t r = 0; r < n; ++r) v(r, 0) = B(r, c);
            try_add(v, -i);
        }
    }
    // vectors outside every listed step have the largest weight
    const long top = F.weights.empty() ? 0 : F.weights.back();
    for (std::size_t e = 0; e < n && filled < n; ++e) {
        RMat u(R, n, 1);
        u(e, 0) = RingElem::scalar(R, 1);
        try_add(u, top);
    }
    // over a product of fields a completion may need e_i +- e_j
    for (std::size_t e = 0; e < n && filled < n; ++e)
        for (std::size_t f = e + 1; f < n && filled < n; ++f)
            for (long sign : {1, -1}) {
                if (filled == n) break;
                RMat u(R, n, 1);
                u(e, 0) = RingElem::scalar(R, 1);
                u(f, 0) = RingElem::scalar(R, Rational(sign));
                try_add(u, top);
            }
    if (filled < n) throw AlgebraError("NotFree", "no adapted basis");
    out.P = cols;
    RMat C = *cols.inverse() * F.nu * cols;
    Series A(N, RMat(R, n, n));
    for (std::size_t i = 0; i < n; ++i) {
        A[0](i, i) += RingElem::scalar(R, Rational(out.w[i]));
        for (std::size_t j = 0; j < n; ++j) {
            if (C(i, j).is_zero()) continue;
            const long e = out.w[j] - out.w[i];
            if (e < 0) throw AlgebraError("FiltrationNotStable", "nu lowers the filtration");
            if (e < static_cast<long>(N)) A[static_cast<std::size_t>(e)](i, j) += C(i, j);
        }
    }
    out.module = ConnectionModule::make(A, N);
    return out;
}

/// Lattice basis t^shift F(t) in terms of the basis of a reference module.
struct Frame {
    long shift = 0;
    Series F;
};

struct HenselRoute {
    ConnectionModule module;  // weight 0
    Frame frame;
    int steps = 0;
    int max_iterations = 0;
};

/// Raise the lowest weight block by one until all weights agree, then rescale to weight 0.
inline HenselRoute change_weights_hensel(const ConnectionModule& M) {
    const Ring& R = M.base;
    const std::size_t n = M.rank;
    HenselRoute out;
    out.frame.F = {RMat::identity(R, n)};
    ConnectionModule cur = M;
    while (true) {
        const std::vector<long> h = sen_weights(cur);
        if (h.front() == h.back()) {
            out.module = shift_weights(cur, -h.front());
            out.frame.shift -= h.front();
            out.module.window_shift = M.window_shift + out.frame.shift;
            return out;
        }
        if (cur.N < 2) throw AlgebraError("WindowTooSmall", "precision exhausted while raising weights");
        const long w0 = h.front();
        const std::size_t m0 = static_cast<std::size_t>(std::count(h.begin(), h.end(), w0));
        UnivarPoly Q0 = UnivarPoly::constant(R, RingElem::scalar(R, 1)), S0 = Q0;
        for (long x : h) (x == w0 ? Q0 : S0) = (x == w0 ? Q0 : S0) * UnivarPoly::linear(R, RingElem::scalar(R, Rational(x)));
        HenselResult hf = hensel_factor(cur.sen_polynomial(), Q0, S0);
        out.max_iterations = std::max(out.max_iterations, hf.iterations);
        RMat K = kernel_over_artin(hf.S.eval(cur.coeff(0)), n - m0);
        // complete K by standard vectors
        QMat have = K.residue();
        std::vector<std::size_t> comp;
        for (std::size_t e = 0; e < n && have.cols() < n; ++e) {
            QMat u(n, 1);
            u(e, 0) = 1;
            if (rank(hcat(have, u)) > have.cols()) {
                have = hcat(have, u);
                comp.push_back(e);
            }
        }
        RMat U(R, n, n);
        std::vector<long> ex(n, 0);
        for (std::size_t j = 0; j < K.cols(); ++j)
            for (std::size_t i = 0; i < n; ++i) U(i, j) = K(i, j);
        for (std::size_t c = 0; c < comp.size(); ++c) {
            U(comp[c], K.cols() + c) = RingElem::scalar(R, 1);
            ex[K.cols() + c] = 1;
        }
        ConnectionModule B = gauge_transform(cur, {U});
        const std::size_t N1 = cur.N - 1;
        Series A(N1, RMat(R, n, n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const long e = ex[j] - ex[i];
                for (std::size_t k = 0; k < cur.N; ++k) {
                    const RingElem& x = B.A[k](i, j);
                    if (x.is_zero()) continue;
                    const long kk = static_cast<long>(k) + e;
                    if (kk < 0) throw AlgebraError("DivisionObstruction", "sheared entry not divisible by t");
                    if (kk < static_cast<long>(N1)) A[static_cast<std::size_t>(kk)](i, j) += x;
                }
            }
        for (std::size_t i = 0; i < n; ++i) A[0](i, i) += RingElem::scalar(R, Rational(ex[i]));
        Series D(2, RMat(R, n, n));
        for (std::size_t i = 0; i < n; ++i) D[static_cast<std::size_t>(ex[i])](i, i) = RingElem::scalar(R, 1);
        Series UD = series_mul({U}, D, 2);
        out.frame.F = series_mul(out.frame.F, UD, out.frame.F.size() + 1);
        cur = ConnectionModule::make(A, N1);
        ++out.steps;
    }
}

/// Window vectors of the lattice spanned by the frame columns.
inline QMat frame_vectors(const Window& W, const Frame& f) {
    QMat out(W.dim, 0);
    const std::size_t n = W.n;
    for (std::size_t j = 0; j < n; ++j) {
        QMat v(W.dim, 1);
        for (std::size_t k = 0; k < f.F.size(); ++k) {
            RMat col(W.R, n, 1);
            for (std::size_t i = 0; i < n; ++i) col(i, 0) = f.F[k](i, j);
            v += W.place(col, f.shift + static_cast<long>(k));
        }
        out = hcat(out, v);
    }
    return out;
}

struct ChangeOfWeights {
    ConnectionModule hensel;      // weight-0 module from the Hensel route
    ConnectionModule filtration;  // constant nu from the filtration route
    HenselRoute route;
    PdrResult pdr;
    bool same_lattice = false;
};

/// f_h(M) by both routes; the lattices are compared as subspaces of t^-max(h) M / t^(N-max(h)) M.
inline ChangeOfWeights change_weights_fh(const ConnectionModule& M) {
    ChangeOfWeights out;
    out.route = change_weights_hensel(M);
    out.hensel = out.route.module;
    out.pdr = d_pdr(M);
    FilteredNilpotentData trivial = out.pdr.data;
    trivial.fil.clear();
    trivial.weights.assign(M.rank, 0);
    out.filtration = lattice_from_filtration(trivial, out.hensel.N).module;
    const Window& W = out.pdr.win;
    QMat a = W.closure(out.pdr.gens);
    QMat b = W.closure(frame_vectors(W, out.route.frame));
    out.same_lattice = same_span(a, b);
    return out;
}

struct RoundTrip {
    FiltrationLattice lattice;
    Series S;  // lattice basis in terms of the basis of M
    std::size_t precision = 0;
    bool gauge_matches = false;
};

/// lattice_from_filtration(d_pdr(M)) re-embedded in M through the horizontal frame.
inline RoundTrip pdr_round_trip(const ConnectionModule& M) {
    const Ring& R = M.base;
    const std::size_t n = M.rank;
    PdrResult pdr = d_pdr(M);
    const Window& W = pdr.win;
    RoundTrip out;
    out.lattice = lattice_from_filtration(pdr.data, M.N);
    const long hi = W.lo + static_cast<long>(W.size);
    out.precision = static_cast<std::size_t>(hi + pdr.data.weights.front());
    out.S.assign(out.precision, RMat(R, n, n));
    for (std::size_t j = 0; j < n; ++j) {
        // P_j in D_pdR as a window vector
        QMat v(W.dim, 1);
        for (std::size_t i = 0; i < n; ++i) v += W.scalar(out.lattice.P(i, j)) * pdr.gens.col(i);
        const long wj = out.lattice.w[j];
        for (long e = W.lo; e < hi; ++e) {
            RMat c = W.component(v, 0, e);
            const long deg = e + wj;
            if (deg < 0) {
                if (!c.is_zero()) throw std::logic_error("pdr_round_trip: lattice vector outside M");
                continue;
            }
            if (deg < static_cast<long>(out.precision))
                for (std::size_t i = 0; i < n; ++i) out.S[static_cast<std::size_t>(deg)](i, j) = c(i, 0);
        }
    }
    ConnectionModule Mp = ConnectionModule::make(M.A, out.precision);
    ConnectionModule g = gauge_transform(Mp, out.S);
    out.gauge_matches = agree_mod(g, out.lattice.module, out.precision);
    return out;
}

// ---------------------------------------------------------------------------------------------
// Seeded instances

namespace detail {

inline RingElem random_elem(const Ring& R, std::mt19937_64& rng, int bound, bool nilpotent) {
    std::uniform_int_distribution<int> dist(-bound, bound);
    RingElem x = RingElem::zero(R);
    if (nilpotent) {
        const QMat& nil = R->nilradical_basis();
        for (std::size_t c = 0; c < nil.cols(); ++c) x += RingElem(R, nil.column_vector(c)) * Rational(dist(rng));
    } else {
        for (std::size_t s = 0; s < R->dim(); ++s) x.coords()[s] = dist(rng);
    }
    return x;
}

}  // namespace detail

/// Connection of the given integral weights: A(0) is a rational conjugate of an upper triangular
/// matrix with diagonal h plus nilpotent noise; higher coefficients are small random elements.
inline ConnectionModule seeded_connection(const Ring& R, const std::vector<long>& h, std::uint64_t seed, std::size_t N,
                                          bool higher_terms = true) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> small(-2, 2);
    const std::size_t n = h.size();
    RMat A0(R, n, n);
    for (std::size_t i = 0; i < n; ++i) {
        A0(i, i) = RingElem::scalar(R, Rational(h[i]));
        for (std::size_t j = i + 1; j < n; ++j) A0(i, j) = RingElem::scalar(R, Rational(small(rng)));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) A0(i, j) += detail::random_elem(R, rng, 1, true);
    // P lower unitriangular
    RMat P = RMat::identity(R, n), Pinv;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) P(i, j) = RingElem::scalar(R, Rational(small(rng)));
    Pinv = *P.inverse();
    Series A(N, RMat(R, n, n));
    A[0] = P * A0 * Pinv;
    if (higher_terms)
        for (std::size_t k = 1; k < N; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) A[k](i, j) = detail::random_elem(R, rng, 1, false);
    return ConnectionModule::make(A, N);
}

/// The constant connection nu behind a seeded gauge with leading term [[1,0],[seed mod 3,1]].
inline ConnectionModule disguised_constant(const RMat& nu, std::uint64_t seed, std::size_t N) {
    const Ring& R = nu.ring();
    const std::size_t n = nu.rows();
    std::mt19937_64 rng(seed);
    Series S;
    for (int k = 0; k < 3; ++k) {
        RMat a(R, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = detail::random_elem(R, rng, 2, false);
        if (k == 0) {
            a = RMat::identity(R, n);
            if (n > 1) a(1, 0) = RingElem::scalar(R, Rational(static_cast<long>(seed % 3)));
        }
        S.push_back(a);
    }
    return gauge_transform(ConnectionModule::constant(nu, N), S);
}

}  // namespace gtr
