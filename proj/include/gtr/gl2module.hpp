#pragma once
/// @file gl2module.hpp
/// @brief Finite free gl2-modules over a finite algebra: V_l, tensors, determinant twists,
/// infinitesimal characters, generalized eigenspaces and abstract translations.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gtr/rmatrix.hpp"
#include "gtr/uenv.hpp"

namespace gtr {

struct Gl2Module {
    Ring base;
    std::size_t rank = 0;
    RMat up, um, ap, am;

    RMat h() const { return ap - am; }
    RMat z() const { return ap + am; }
    RMat casimir() const {
        RMat H = h();
        return H * H - H * Rational(2) + up * um * Rational(4);
    }
    /// Matrix of a PBW element acting on the module.
    RMat act(const UEnvElement& x) const {
        RMat acc(base, rank, rank);
        const RMat ops[4] = {um, h(), z(), up};
        for (auto& [k, c] : x.terms()) {
            RMat m = RMat::identity(base, rank);
            for (int v = 0; v < 4; ++v)
                for (int i = 0; i < k[v]; ++i) m = m * ops[v];
            acc += m * c;
        }
        return acc;
    }
};

struct Character {
    RingElem z, c;
};

/// Weight (l1, l2) of gl2 with the infinitesimal character z -> l1 + l2, c -> (l1 - l2 + 1)^2 - 1.
using Weight = std::pair<long, long>;

inline Character character_of(const Ring& R, const Weight& w) {
    const long d = w.first - w.second + 1;
    return {RingElem::scalar(R, Rational(w.first + w.second)), RingElem::scalar(R, Rational(d * d - 1))};
}

/// Character attached to Sen weights (h1, h2), i.e. to lambda = (h2 - 1, h1).
inline Character infinitesimal_character(long h1, long h2, const Ring& R = FiniteAlgebra::rationals()) {
    return character_of(R, {h2 - 1, h1});
}

inline Gl2Module build_Vk(unsigned l, const Ring& R = FiniteAlgebra::rationals()) {
    const std::size_t n = l + 1;
    Gl2Module M{R, n, RMat(R, n, n), RMat(R, n, n), RMat(R, n, n), RMat(R, n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        if (i + 1 < n) M.up(i + 1, i) = RingElem::scalar(R, 1);
        if (i > 0) M.um(i - 1, i) = RingElem::scalar(R, Rational(static_cast<long>(i * (l - i + 1))));
        M.ap(i, i) = RingElem::scalar(R, Rational(static_cast<long>(i)));
        M.am(i, i) = RingElem::scalar(R, Rational(static_cast<long>(l - i)));
    }
    return M;
}

/// det^b: u+- = 0 and a+ = a- = b.
inline Gl2Module det_power(long b, const Ring& R = FiniteAlgebra::rationals()) {
    auto s = RMat::scalar(R, 1, RingElem::scalar(R, Rational(b)));
    return {R, 1, RMat(R, 1, 1), RMat(R, 1, 1), s, s};
}

namespace detail {
inline RMat kron(const RMat& a, const RMat& b) {
    RMat m(a.ring(), a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j).is_zero()) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    if (!b(k, l).is_zero()) m(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
        }
    return m;
}
/// Scalars from Q moved into R.
inline RMat to_ring(const Ring& R, const RMat& m) {
    if (m.ring() == R) return m;
    RMat out(R, m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m.ring()->dim() != 1) throw std::invalid_argument("to_ring: only rational scalars move between rings");
            out(i, j) = RingElem::scalar(R, m(i, j).coords()[0]);
        }
    return out;
}
}  // namespace detail

/// Diagonal action on M (x) N; basis m_i (x) n_k sits at i * rank(N) + k. N may live over Q.
inline Gl2Module tensor(const Gl2Module& M, const Gl2Module& N) {
    const Ring& R = M.base;
    RMat I1 = RMat::identity(R, M.rank), I2 = RMat::identity(R, N.rank);
    auto lift = [&](const RMat& x) { return detail::to_ring(R, x); };
    using detail::kron;
    return {R,
            M.rank * N.rank,
            kron(M.up, I2) + kron(I1, lift(N.up)),
            kron(M.um, I2) + kron(I1, lift(N.um)),
            kron(M.ap, I2) + kron(I1, lift(N.ap)),
            kron(M.am, I2) + kron(I1, lift(N.am))};
}

/// Dominant conjugate of an integral weight, realized as V_{a-b} (x) det^b.
inline Gl2Module finite_dimensional(const Weight& nu, const Ring& R = FiniteAlgebra::rationals()) {
    long a = std::max(nu.first, nu.second), b = std::min(nu.first, nu.second);
    Gl2Module V = build_Vk(static_cast<unsigned>(a - b), R);
    return b == 0 ? V : tensor(V, det_power(b, R));
}

struct BracketReport {
    bool ok = true;
    std::vector<std::string> failures;
};

inline BracketReport check_brackets(const Gl2Module& M) {
    BracketReport r;
    auto br = [](const RMat& x, const RMat& y) { return x * y - y * x; };
    auto expect = [&](const std::string& name, const RMat& lhs, const RMat& rhs) {
        if (lhs != rhs) {
            r.ok = false;
            r.failures.push_back(name);
        }
    };
    expect("[a+,u+]=u+", br(M.ap, M.up), M.up);
    expect("[a-,u+]=-u+", br(M.am, M.up), -M.up);
    expect("[a+,u-]=-u-", br(M.ap, M.um), -M.um);
    expect("[a-,u-]=u-", br(M.am, M.um), M.um);
    expect("[u+,u-]=h", br(M.up, M.um), M.h());
    expect("[a+,a-]=0", br(M.ap, M.am), RMat(M.base, M.rank, M.rank));
    return r;
}

/// Generalized kernel of a rational operator: the stable value of K_{m+1} = Y^{-1}(K_m).
inline QMat generalized_kernel(const QMat& Y, const QMat& within) {
    QMat K = span_intersection(kernel(Y), within);
    while (true) {
        QMat next = span_intersection(preimage(Y, K), within);
        if (next.cols() == K.cols()) return K;
        K = next;
    }
}

/// A Q-subspace (columns) of R^n that is a free R-submodule; returns an R-basis or nullopt.
inline std::optional<RMat> free_basis(const Ring& R, std::size_t n, const QMat& K) {
    const std::size_t d = R->dim();
    if (K.cols() % d != 0) return std::nullopt;
    const std::size_t r = K.cols() / d;
    auto to_rmat = [&](const QMat& cols) {
        RMat B(R, n, cols.cols());
        for (std::size_t j = 0; j < cols.cols(); ++j)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t s = 0; s < d; ++s) B(i, j).coords()[s] = cols(i * d + s, j);
        return B;
    };
    if (!R->is_local()) {
        // seeded random generators, accepted when their R-span is K and free
        std::mt19937_64 rng(r * 7919 + n);
        std::uniform_int_distribution<int> dist(-5, 5);
        for (int attempt = 0; attempt < 16; ++attempt) {
            QMat comb(K.cols(), r);
            for (std::size_t i = 0; i < K.cols(); ++i)
                for (std::size_t j = 0; j < r; ++j) comb(i, j) = dist(rng);
            RMat B = to_rmat(K * comb);
            QMat span = B.flatten();
            if (rank(span) == r * d && same_span(span, K)) return B;
        }
        return std::nullopt;
    }
    // reduction to the residue field: image of K in Q^n
    QMat red(n, n * d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t s = 0; s < d; ++s) red(i, i * d + s) = R->residue()[s];
    QMat img = red * K;
    Rref rr = rref(img);
    if (rr.pivots.size() != r) return std::nullopt;
    return to_rmat(K.select_cols(rr.pivots));
}

/// Express op * B in the basis B: returns C with op*B = B*C (B a free R-basis of an op-stable submodule).
inline RMat restrict_operator(const RMat& op, const RMat& B) {
    const Ring& R = B.ring();
    const std::size_t d = R->dim(), r = B.cols();
    QMat span = B.flatten();  // columns: b_s * B_j at j*d + s
    QMat target = (op * B).flatten_columns();
    auto x = solve(span, target);
    if (!x) throw AlgebraError("NotStable", "operator does not preserve the submodule");
    RMat C(R, r, r);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t s = 0; s < d; ++s) C(i, j).coords()[s] = (*x)(i * d + s, j);
    return C;
}

struct Eigenspace {
    Gl2Module module;
    RMat inclusion;  // rank(M) x rank(E), columns are the basis of E
};

/// Joint generalized eigenspace of the Casimir and z for the character chi.
inline Eigenspace generalized_eigenspace(const Gl2Module& M, const Character& chi) {
    const Ring& R = M.base;
    const std::size_t n = M.rank;
    RMat C = M.casimir() - RMat::scalar(R, n, chi.c);
    RMat Z = M.z() - RMat::scalar(R, n, chi.z);
    QMat all = QMat::identity(n * R->dim());
    QMat K = generalized_kernel(C.flatten(), all);
    K = generalized_kernel(Z.flatten(), K);
    if (K.cols() == 0) return {{R, 0, RMat(R, 0, 0), RMat(R, 0, 0), RMat(R, 0, 0), RMat(R, 0, 0)}, RMat(R, n, 0)};
    auto B = free_basis(R, n, K);
    if (!B) throw AlgebraError("NotFree", "generalized eigenspace is not free over the base");
    Gl2Module E{R, B->cols(), restrict_operator(M.up, *B), restrict_operator(M.um, *B), restrict_operator(M.ap, *B),
                restrict_operator(M.am, *B)};
    return {E, *B};
}

/// pr_to(pr_from M (x) L(dominant(to - from))).
inline Gl2Module translate_abstract(const Gl2Module& M, const Weight& from, const Weight& to) {
    const Ring& R = M.base;
    Gl2Module P = generalized_eigenspace(M, character_of(R, from)).module;
    Gl2Module T = tensor(P, finite_dimensional({to.first - from.first, to.second - from.second}));
    return generalized_eigenspace(T, character_of(R, to)).module;
}

/// Iterated translation along lambda_1, ..., lambda_n. The successive differences must be
/// dominant and lambda_1 + (1,0) dominant; otherwise PreconditionViolated.
inline Gl2Module translate_chain(const Gl2Module& M, const std::vector<Weight>& chain) {
    if (chain.size() < 2) throw std::invalid_argument("translate_chain: need at least two weights");
    if (chain[0].first + 1 < chain[0].second) throw AlgebraError("PreconditionViolated", "lambda_1 + (1,0) is not dominant");
    for (std::size_t i = 1; i < chain.size(); ++i)
        if (chain[i].first - chain[i - 1].first < chain[i].second - chain[i - 1].second)
            throw AlgebraError("PreconditionViolated", "difference of consecutive weights is not dominant");
    Gl2Module cur = M;
    for (std::size_t i = 1; i < chain.size(); ++i) cur = translate_abstract(cur, chain[i - 1], chain[i]);
    return cur;
}

/// An isomorphism S: M1 -> M2 of gl2-modules (S X1 = X2 S for all four operators), chosen as a
/// seeded random combination of the solution space and required invertible mod the nilradical.
inline std::optional<RMat> intertwiner(const Gl2Module& M1, const Gl2Module& M2, std::uint64_t seed = 0) {
    if (M1.rank != M2.rank) return std::nullopt;
    const Ring& R = M1.base;
    const std::size_t n = M1.rank, d = R->dim();
    if (n == 0) return RMat(R, 0, 0);
    // unknown S(i,j) coordinate s at (i*n + j)*d + s; equation entries S X1 - X2 S
    const RMat* X1[4] = {&M1.up, &M1.um, &M1.ap, &M1.am};
    const RMat* X2[4] = {&M2.up, &M2.um, &M2.ap, &M2.am};
    const std::size_t nu = n * n * d;
    QMat sys(4 * n * n * d, nu);
    for (int o = 0; o < 4; ++o)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t s = 0; s < d; ++s) {
                    // basis unknown: S = b_s E_ij
                    const std::size_t col = (i * n + j) * d + s;
                    RingElem bs = RingElem::basis(R, s);
                    // (S X1)(i, l) = b_s X1(j, l);  (X2 S)(k, j) = X2(k, i) b_s
                    for (std::size_t l = 0; l < n; ++l) {
                        const auto& x = (*X1[o])(j, l);
                        if (x.is_zero()) continue;
                        RingElem v = bs * x;
                        for (std::size_t t = 0; t < d; ++t) sys(((o * n + i) * n + l) * d + t, col) += v.coords()[t];
                    }
                    for (std::size_t k = 0; k < n; ++k) {
                        const auto& x = (*X2[o])(k, i);
                        if (x.is_zero()) continue;
                        RingElem v = x * bs;
                        for (std::size_t t = 0; t < d; ++t) sys(((o * n + k) * n + j) * d + t, col) -= v.coords()[t];
                    }
                }
    QMat sol = kernel(sys);
    if (sol.cols() == 0) return std::nullopt;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(-9, 9);
    for (int attempt = 0; attempt < 8; ++attempt) {
        QMat comb(sol.cols(), 1);
        for (std::size_t c = 0; c < sol.cols(); ++c) comb(c, 0) = dist(rng);
        QMat v = sol * comb;
        RMat S(R, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t s = 0; s < d; ++s) S(i, j).coords()[s] = v((i * n + j) * d + s, 0);
        if (rank(S.residue()) == n) return S;
    }
    return std::nullopt;
}

}  // namespace gtr
