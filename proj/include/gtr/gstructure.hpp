#pragma once
/// @file gstructure.hpp
/// @brief The standard gl2-structure on rank-2 connection modules, tensor products with V_l and
/// determinant twists on rational windows, Casimir formulas, translations and the counit.

#include <optional>
#include <string>
#include <vector>

#include "gtr/connection.hpp"

namespace gtr {

/// Carrier (D (x) V_l (x) det^b) / F_N where F_N is spanned by t^a d (x) t^i e with a + i >= N.
/// Basis t^a b_s d_j (x) t^i e. T = u+ and nabla = a+ come from Ambient.
struct Gl2ConnectionModule : Ambient {
    ConnectionModule module;
    unsigned l = 0;
    long det = 0;
    std::size_t N = 0;
    std::size_t effective_order = 0;  // u- is computed from the representative; brackets hold below it
    QMat um, am, upum;
    RingElem gamma1, gamma0;
    std::vector<std::size_t> offset;  // offset[i] = first index of the t^i e block

    std::size_t index(std::size_t i, std::size_t a, std::size_t j, std::size_t s) const {
        return offset[i] + (a * module.rank + j) * R->dim() + s;
    }
    std::size_t block_size(std::size_t i) const { return (N - i) * module.rank * R->dim(); }
    const QMat& up() const { return T; }
    const QMat& ap() const { return nabla; }
    QMat h() const { return nabla - am; }
    QMat z() const { return nabla + am; }
    QMat casimir() const {
        QMat H = h();
        return H * H - H * Rational(2) + upum * Rational(4);
    }
    /// Rows of F_e, i.e. basis vectors with a + i >= e.
    std::vector<std::size_t> rows_at_least(std::size_t e) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i <= l; ++i)
            for (std::size_t a = 0; a + i < N; ++a)
                if (a + i >= e)
                    for (std::size_t k = 0; k < module.rank * R->dim(); ++k) out.push_back(offset[i] + a * module.rank * R->dim() + k);
        return out;
    }
    /// X with the rows in F_e set to zero.
    QMat modulo(const QMat& X, std::size_t e) const {
        QMat Y = X;
        for (auto r : rows_at_least(e))
            for (std::size_t c = 0; c < Y.cols(); ++c) Y(r, c) = 0;
        return Y;
    }
    /// Component along t^i e as a vector of the D-window of size N - i.
    QMat component(const QMat& v, std::size_t i) const {
        QMat out(block_size(i), v.cols());
        for (std::size_t r = 0; r < block_size(i); ++r)
            for (std::size_t c = 0; c < v.cols(); ++c) out(r, c) = v(offset[i] + r, c);
        return out;
    }
    /// The projection pi_0 onto the e-component, into D / t^N.
    QMat pi0() const {
        QMat P(block_size(0), dim);
        for (std::size_t r = 0; r < block_size(0); ++r) P(r, offset[0] + r) = 1;
        return P;
    }
};

namespace detail {

struct DOps {
    Window win;   // D / t^N
    QMat umD;     // -t^-1 P(nabla) : D/t^N -> D/t^N
    QMat upumD;   // -P(nabla)
};

inline DOps d_operators(const ConnectionModule& D, std::size_t N) {
    DOps o;
    o.win = window(D, 0, N);
    Window big = window(D, 0, N + 1);
    const UnivarPoly P = D.sen_polynomial();
    QMat PN = P.eval_operator(big.nabla, big.rmul);
    const std::size_t blk = D.rank * D.base->dim();
    for (std::size_t r = 0; r < blk; ++r)
        for (std::size_t c = 0; c < PN.cols(); ++c)
            if (sgn(PN(r, c)) != 0) throw AlgebraError("DivisionObstruction", "P_Sen(nabla) is not divisible by t");
    o.umD = QMat(N * blk, N * blk);
    for (std::size_t r = blk; r < (N + 1) * blk; ++r)
        for (std::size_t c = 0; c < N * blk; ++c) o.umD(r - blk, c) = -PN(r, c);
    o.upumD = -P.eval_operator(o.win.nabla, o.win.rmul);
    return o;
}

}  // namespace detail

/// D (x) V_l (x) det^b on the window of size N, with the standard structure on D.
inline Gl2ConnectionModule build_tensor(const ConnectionModule& D, unsigned l, long det, std::size_t N) {
    if (D.rank != 2) throw std::invalid_argument("standard structure needs a rank-2 module");
    if (N <= l) throw AlgebraError("WindowTooSmall", "window must exceed the V_l length");
    Gl2ConnectionModule G;
    G.R = D.base;
    G.module = D;
    G.l = l;
    G.det = det;
    G.N = N;
    G.effective_order = N - 1;
    const UnivarPoly P = D.sen_polynomial();
    G.gamma1 = P.gamma1();
    G.gamma0 = P.gamma0();
    const std::size_t d = D.base->dim(), n = D.rank, blk = n * d;
    G.offset.assign(l + 1, 0);
    std::size_t total = 0;
    for (std::size_t i = 0; i <= l; ++i) {
        G.offset[i] = total;
        total += (N - i) * blk;
    }
    G.dim = total;
    detail::DOps o = detail::d_operators(D, N);
    const QMat amD = o.win.scalar(G.gamma1 - RingElem::scalar(G.R, 1)) - o.win.nabla;
    G.T = QMat(total, total);
    G.nabla = QMat(total, total);
    G.am = QMat(total, total);
    G.um = QMat(total, total);
    G.upum = QMat(total, total);
    G.rmul.assign(d, QMat(total, total));
    auto valid = [&](std::size_t i, std::size_t a) { return i <= l && a + i < N; };
    for (std::size_t i = 0; i <= l; ++i) {
        const long il = static_cast<long>(i), ll = static_cast<long>(l);
        const Rational cV = Rational(il * (ll - il + 1));          // u- on V: t^i e -> cV t^(i-1) e
        for (std::size_t a = 0; a + i < N; ++a)
            for (std::size_t k = 0; k < blk; ++k) {
                const std::size_t src = G.offset[i] + a * blk + k, dsrc = a * blk + k;
                // t (x) 1 and 1 (x) t
                if (valid(i, a + 1)) G.T(G.offset[i] + (a + 1) * blk + k, src) += 1;
                if (valid(i + 1, a)) G.T(G.offset[i + 1] + a * blk + k, src) += 1;
                for (std::size_t a2 = 0; a2 + i < N; ++a2)
                    for (std::size_t k2 = 0; k2 < blk; ++k2) {
                        const std::size_t drow = a2 * blk + k2, dst = G.offset[i] + drow;
                        if (sgn(o.win.nabla(drow, dsrc)) != 0) G.nabla(dst, src) += o.win.nabla(drow, dsrc);
                        if (sgn(amD(drow, dsrc)) != 0) G.am(dst, src) += amD(drow, dsrc);
                        if (sgn(o.umD(drow, dsrc)) != 0) G.um(dst, src) += o.umD(drow, dsrc);
                        if (sgn(o.upumD(drow, dsrc)) != 0) G.upum(dst, src) += o.upumD(drow, dsrc);
                        for (std::size_t s = 0; s < d; ++s)
                            if (sgn(o.win.rmul[s](drow, dsrc)) != 0) G.rmul[s](dst, src) = o.win.rmul[s](drow, dsrc);
                        // u-_D (x) u+_V
                        if (valid(i + 1, a2) && sgn(o.umD(drow, dsrc)) != 0)
                            G.upum(G.offset[i + 1] + drow, src) += o.umD(drow, dsrc);
                    }
                G.nabla(src, src) += Rational(il + det);
                G.am(src, src) += Rational(ll - il + det);
                if (i > 0) {
                    G.um(G.offset[i - 1] + a * blk + k, src) += cV;
                    G.upum(src, src) += cV;  // u+u- on V
                    if (valid(i - 1, a + 1)) G.upum(G.offset[i - 1] + (a + 1) * blk + k, src) += cV;  // t (x) u-
                }
            }
    }
    return G;
}

inline Gl2ConnectionModule standard_g_structure(const ConnectionModule& D) { return build_tensor(D, 0, 0, D.N); }
inline Gl2ConnectionModule standard_g_structure(const ConnectionModule& D, std::size_t N) { return build_tensor(D, 0, 0, N); }

inline Gl2ConnectionModule tensor_with_Vk(const Gl2ConnectionModule& GM, unsigned l) {
    if (GM.l != 0) throw std::invalid_argument("tensor_with_Vk: input must be an untensored module");
    return build_tensor(GM.module, l, GM.det, GM.N);
}

/// The six defining brackets modulo F_effective_order.
inline Report check_brackets(const Gl2ConnectionModule& G) {
    Report r("brackets");
    auto br = [](const QMat& a, const QMat& b) { return a * b - b * a; };
    const std::size_t e = G.effective_order;
    auto expect = [&](const std::string& name, const QMat& lhs, const QMat& rhs) {
        r.add(name, G.modulo(lhs - rhs, e).is_zero());
    };
    expect("[a+,u+]=u+", br(G.nabla, G.T), G.T);
    expect("[a-,u+]=-u+", br(G.am, G.T), -G.T);
    expect("[a+,u-]=-u-", br(G.nabla, G.um), -G.um);
    expect("[a-,u-]=u-", br(G.am, G.um), G.um);
    expect("[u+,u-]=h", br(G.T, G.um), G.h());
    expect("[a+,a-]=0", br(G.nabla, G.am), QMat(G.dim, G.dim));
    expect("u+u- consistent", G.T * G.um, G.upum);
    return r;
}

/// Casimir and z as scalars: c = gamma1^2 - 4 gamma0 - 1, z = gamma1 - 1 (and the det twist).
inline Report check_standard_scalars(const Gl2ConnectionModule& G) {
    Report r("standard scalars");
    const RingElem one = RingElem::scalar(G.R, 1);
    RingElem c = G.gamma1 * G.gamma1 - G.gamma0 * Rational(4) - one;
    RingElem z = G.gamma1 - one + one * Rational(2 * G.det);
    r.add("casimir scalar", G.casimir() == G.scalar(c));
    r.add("z scalar", G.z() == G.scalar(z));
    return r;
}

/// The operator from the closed Casimir formula on D (x) V_l.
inline QMat casimir_closed_form(const Gl2ConnectionModule& G) {
    const std::vector<long> w = sen_weights(G.module);
    if (G.module.rank != 2 || std::find(w.begin(), w.end(), 0L) == w.end())
        throw AlgebraError("WeightShapeMismatch", "expected a rank-2 module of weights (0,k)");
    detail::DOps o = detail::d_operators(G.module, G.N);
    const std::size_t blk = G.module.rank * G.R->dim();
    const long l = static_cast<long>(G.l);
    QMat C(G.dim, G.dim);
    const QMat tP = -o.umD;  // t^-1 P(nabla)
    for (std::size_t i = 0; i <= G.l; ++i) {
        const long il = static_cast<long>(i);
        RingElem g = G.gamma1 - RingElem::scalar(G.R, Rational(2 * il - l));
        RingElem diag = g * g - RingElem::scalar(G.R, 1) - G.gamma0 * Rational(4) +
                        RingElem::scalar(G.R, Rational(4 * il * (l - il + 1)));
        QMat local = o.win.nabla * Rational(4 * (2 * il - l)) + o.win.scalar(diag);
        const std::size_t sz = G.block_size(i);
        for (std::size_t r = 0; r < sz; ++r)
            for (std::size_t c = 0; c < sz; ++c) {
                if (sgn(local(r, c)) != 0) C(G.offset[i] + r, G.offset[i] + c) += local(r, c);
                if (i + 1 <= G.l && r < G.block_size(i + 1) && sgn(tP(r, c)) != 0)
                    C(G.offset[i + 1] + r, G.offset[i] + c) += tP(r, c) * Rational(-4);
            }
        if (i > 0)
            for (std::size_t c = 0; c < sz; ++c)
                if (c + blk < G.block_size(i - 1)) C(G.offset[i - 1] + c + blk, G.offset[i] + c) += Rational(4 * il * (l - il + 1));
    }
    return C;
}

struct CasimirTwoWays {
    QMat operators, closed;
    bool agree = false;
};

inline CasimirTwoWays casimir_tensor(const Gl2ConnectionModule& GM, unsigned l) {
    Gl2ConnectionModule G = GM.l == l ? GM : tensor_with_Vk(GM, l);
    CasimirTwoWays out{G.casimir(), casimir_closed_form(G)};
    out.agree = G.modulo(out.operators - out.closed, G.effective_order).is_zero() && out.operators == out.closed;
    return out;
}

/// (c - g1^2 + 4 g0)^2 - 4 (g1^2 - 4 g0) on the given tensor.
inline QMat casimir_relation(const Gl2ConnectionModule& G) {
    RingElem d = G.gamma1 * G.gamma1 - G.gamma0 * Rational(4);
    QMat X = G.casimir() - G.scalar(d);
    return X * X - G.scalar(d * Rational(4));
}

/// Graded pieces of the t_V-adic filtration are the windows of t^i D.
inline Report check_graded_pieces(const Gl2ConnectionModule& G) {
    Report r("graded pieces");
    for (std::size_t i = 0; i <= G.l; ++i) {
        Window W = window(shift_weights(G.module, static_cast<long>(i) + G.det), 0, G.N - i);
        const std::size_t sz = G.block_size(i);
        QMat T(sz, sz), Nb(sz, sz);
        for (std::size_t a = 0; a < sz; ++a)
            for (std::size_t b = 0; b < sz; ++b) {
                T(a, b) = G.T(G.offset[i] + a, G.offset[i] + b);
                Nb(a, b) = G.nabla(G.offset[i] + a, G.offset[i] + b);
            }
        r.add("gr^" + std::to_string(i) + " = t^" + std::to_string(i) + "D", T == W.T && Nb == W.nabla);
    }
    return r;
}

/// Standard structure on t^i D against D (x) det^i: all four operators coincide.
inline Report check_twist(const ConnectionModule& D, long i, std::size_t N) {
    Report r("twist");
    Gl2ConnectionModule a = build_tensor(shift_weights(D, i), 0, 0, N), b = build_tensor(D, 0, i, N);
    r.add("u+", a.T == b.T);
    r.add("u-", a.um == b.um);
    r.add("a+", a.nabla == b.nabla);
    r.add("a-", a.am == b.am);
    return r;
}

// ---------------------------------------------------------------------------------------------
// Translation

struct TranslationResult {
    Gl2ConnectionModule tensor;
    QMat E;             // the generalized eigenspace inside the tensor window
    Extracted lattice;  // free R[T]-basis and connection of the result
};

/// pr_mu (M (x) V), V the finite-dimensional module of extremal weight mu - lambda.
inline TranslationResult translate_conn(const ConnectionModule& M, const Weight& lambda, const Weight& mu, std::size_t N = 0) {
    if (N == 0) N = M.N;
    const long a = std::max(mu.first - lambda.first, mu.second - lambda.second);
    const long b = std::min(mu.first - lambda.first, mu.second - lambda.second);
    const unsigned l = static_cast<unsigned>(a - b);
    if (N < l + 2) throw AlgebraError("WindowTooSmall", "window needs slack |lambda - mu| + 1");
    const Ring& R = M.base;
    const UnivarPoly P = M.sen_polynomial();
    const Character chl = character_of(R, lambda), chm = character_of(R, mu);
    const RingElem one = RingElem::scalar(R, 1);
    RingElem c = P.gamma1() * P.gamma1() - P.gamma0() * Rational(4) - one, z = P.gamma1() - one;
    if ((c - chl.c).residue() != 0 || (z - chl.z).residue() != 0)
        throw AlgebraError("CharacterMismatch", "module does not have the infinitesimal character of lambda");
    TranslationResult out;
    out.tensor = build_tensor(M, l, b, N);
    const Gl2ConnectionModule& G = out.tensor;
    QMat E = generalized_kernel(G.casimir() - G.scalar(chm.c), QMat::identity(G.dim));
    out.E = generalized_kernel(G.z() - G.scalar(chm.z), E);
    out.lattice = extract_lattice(G, out.E, N - l);
    return out;
}

/// Roots (alpha, beta) of a quadratic Sen polynomial lifting the distinct integers (k, 0).
inline std::pair<RingElem, RingElem> sen_roots(const ConnectionModule& D, long k) {
    const Ring& R = D.base;
    auto f = hensel_factor(D.sen_polynomial(), UnivarPoly::linear(R, RingElem::scalar(R, Rational(k))),
                           UnivarPoly::linear(R, RingElem::zero(R)));
    return {-f.Q.coeff(0), -f.S.coeff(0)};
}

/// Preimage of (D/t^k)[prod_{i<k} (nabla - alpha - i) = 0] in D/t^N.
inline QMat closed_form_to_kk(const ConnectionModule& D, long k, std::size_t N) {
    Window W = window(D, 0, N);
    const RingElem alpha = sen_roots(D, k).first;
    QMat op = QMat::identity(W.dim);
    for (long i = 0; i < k; ++i) op = (W.nabla - W.scalar(alpha + RingElem::scalar(D.base, Rational(i)))) * op;
    return preimage(op, W.degree_at_least(k));
}

/// {v : prod_{i<=j} (nabla - beta - i) v in t^(j+1) D for j < l} in D/t^N.
inline QMat closed_form_to_0k(const ConnectionModule& D, long k, unsigned l, std::size_t N) {
    Window W = window(D, 0, N);
    const RingElem beta = sen_roots(D, k).second;
    QMat op = QMat::identity(W.dim), V = QMat::identity(W.dim);
    for (long j = 0; j < static_cast<long>(l); ++j) {
        op = (W.nabla - W.scalar(beta + RingElem::scalar(D.base, Rational(j)))) * op;
        V = span_intersection(V, preimage(op, W.degree_at_least(j + 1)));
    }
    return V;
}

/// v_i = (i t)^-1 (nabla - alpha) v_{i-1} on every vector of E (checked as i t v_i = (nabla - alpha) v_{i-1}).
inline bool recursion_holds(const TranslationResult& tr, const RingElem& alpha) {
    const Gl2ConnectionModule& G = tr.tensor;
    for (std::size_t i = 1; i <= G.l; ++i) {
        Window W = window(G.module, 0, G.N - i + 1);
        QMat prev = G.component(tr.E, i - 1), cur = G.component(tr.E, i);
        QMat lhs = W.T * vcat(cur, QMat(W.dim - cur.rows(), cur.cols())) * Rational(static_cast<long>(i));
        QMat rhs = (W.nabla - W.scalar(alpha)) * prev;
        if (lhs != rhs) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------------------------
// Counit

struct CounitData {
    Report report{"counit"};
    QMat composite_eval, composite_casimir;  // both in t^-1 D / t^(N-1) D, rows of degree >= N - 3 cleared
    Window win;                              // t^-1 D / t^(N-1) D
    QMat delta_gens;                         // R[t]-basis of Delta in win
    Gl2ConnectionModule delta_tensor;        // Delta (x) V_1, the source of both composites
};

/// D of weights (0,1) with Sen polynomial (T - (z - h + 1))(T - (z + h)); h the given nilpotent.
inline CounitData counit_check(const ConnectionModule& D, const RingElem& h, std::size_t N) {
    const Ring& R = D.base;
    CounitData out;
    // Delta = T_lambda^mu D inside (D (x) det^-1) (x) V_1
    TranslationResult tr = translate_conn(D, {0, 0}, {-1, 0}, N);
    const Gl2ConnectionModule& G = tr.tensor;
    const RingElem zeta = (D.sen_polynomial().gamma1() - RingElem::scalar(R, 1)) * Rational(1, 2);
    const RingElem zmh = zeta - h;
    Window WD = window(D, -1, N);  // t^-1 D / t^(N-1) D
    QMat closed = preimage(WD.nabla - WD.scalar(zmh), WD.degree_at_least(0));
    // t^-1 pi_0(E) in WD coordinates: degree a of D goes to degree a of t^-1 D shifted by one slot
    const std::size_t blk = D.rank * R->dim();
    auto to_WD = [&](const QMat& dvec) {  // D/t^N vector -> WD vector, multiplied by t^-1
        QMat v(WD.dim, dvec.cols());
        for (std::size_t r = 0; r < dvec.rows() && r < WD.dim; ++r)
            for (std::size_t c = 0; c < dvec.cols(); ++c) v(r, c) = dvec(r, c);
        return v;
    };
    auto place_D = [&](const QMat& dvec) {  // D/t^N vector -> WD vector, same element
        QMat v(WD.dim, dvec.cols());
        for (std::size_t r = 0; r + blk < WD.dim && r < dvec.rows(); ++r)
            for (std::size_t c = 0; c < dvec.cols(); ++c) v(r + blk, c) = dvec(r, c);
        return v;
    };
    QMat Delta = to_WD(G.component(tr.E, 0));
    out.report.add("Delta = preimage of (t^-1 D / D)[nabla = z - h]", same_span(column_basis(Delta), closed));
    out.report.add("Delta has rank 2", tr.lattice.module.rank == 2);
    // Delta as a module on its own
    Extracted dl = extract_lattice(WD, closed, N - 1);
    const std::size_t N2 = N - 2;
    out.win = WD;
    out.delta_gens = dl.gens;
    out.delta_tensor = build_tensor(dl.module, 1, 0, N2);
    const Gl2ConnectionModule& GD = out.delta_tensor;
    const RingElem four_h = h * Rational(4);
    QMat c = GD.casimir() - GD.scalar(h * h * Rational(4));
    out.report.add("(c - 4h)(c + 4h) = 0", ((c - GD.scalar(four_h)) * (c + GD.scalar(four_h))).is_zero());
    // basis vectors of Delta (x) V_1 as Delta-vectors in WD
    auto delta_vec = [&](std::size_t a, std::size_t j, std::size_t s) {
        QMat v = WD.rmul[s] * dl.gens.col(j);
        for (std::size_t k = 0; k < a; ++k) v = WD.T * v;
        return v;
    };
    // E spanned against t^-1 pi_0
    QMat Epi = to_WD(G.component(tr.E, 0));
    const std::size_t keep = (N2 - 1) * blk + blk;  // WD rows of degree <= N2 - 2
    auto cut = [&](QMat v) {
        for (std::size_t r = keep; r < v.rows(); ++r)
            for (std::size_t cc = 0; cc < v.cols(); ++cc) v(r, cc) = 0;
        return v;
    };
    QMat P0 = G.pi0();
    out.composite_eval = QMat(WD.dim, GD.dim);
    out.composite_casimir = QMat(WD.dim, GD.dim);
    const QMat quarter = (c - GD.scalar(four_h)) * Rational(1, 4);
    const std::size_t d = R->dim();
    bool solved = true;
    for (std::size_t i = 0; i <= 1; ++i)
        for (std::size_t a = 0; a + i < N2; ++a)
            for (std::size_t j = 0; j < dl.module.rank; ++j)
                for (std::size_t s = 0; s < d; ++s) {
                    const std::size_t col = GD.index(i, a, j, s);
                    QMat dv = delta_vec(a, j, s);
                    auto x = solve(Epi, dv);
                    if (!x) {
                        solved = false;
                        continue;
                    }
                    QMat elem = tr.E * *x;  // iota(dv)
                    // evaluation V_1 (x) V_1 -> det: delta (x) e -> -x_1, delta (x) te -> x_0
                    QMat img = i == 0 ? -place_D(vcat(G.component(elem, 1), QMat(blk, 1))) : place_D(G.component(elem, 0));
                    img = cut(img);
                    for (std::size_t r = 0; r < WD.dim; ++r) out.composite_eval(r, col) = img(r, 0);
                    // (1/4)(c - 4h) then pi_0, expressed through the generators of Delta
                    QMat y = quarter.col(col);
                    QMat v(WD.dim, 1);
                    for (std::size_t a2 = 0; a2 < N2; ++a2)
                        for (std::size_t j2 = 0; j2 < dl.module.rank; ++j2)
                            for (std::size_t s2 = 0; s2 < d; ++s2) {
                                const Rational& coef = y(GD.index(0, a2, j2, s2), 0);
                                if (sgn(coef) != 0) v += delta_vec(a2, j2, s2) * coef;
                            }
                    v = cut(v);
                    for (std::size_t r = 0; r < WD.dim; ++r) out.composite_casimir(r, col) = v(r, 0);
                }
    out.report.add("iota defined on Delta", solved);
    QMat diff = out.composite_eval - out.composite_casimir;
    std::string witness;
    for (std::size_t r = 0; r < diff.rows() && witness.empty(); ++r)
        for (std::size_t cc = 0; cc < diff.cols(); ++cc)
            if (sgn(diff(r, cc)) != 0) {
                witness = "entry (" + std::to_string(r) + "," + std::to_string(cc) + "): " + out.composite_eval(r, cc).get_str() +
                          " vs " + out.composite_casimir(r, cc).get_str();
                break;
            }
    out.report.add("composites agree", diff.is_zero(), witness);
    return out;
}

/// Rank-2 module with Sen polynomial (T - r1)(T - r2): upper triangular A(0) conjugated by a
/// rational unitriangular matrix, plus random higher terms.
inline ConnectionModule seeded_with_roots(const RingElem& r1, const RingElem& r2, std::uint64_t seed, std::size_t N) {
    const Ring& R = r1.ring();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> small(-2, 2);
    RMat A0(R, 2, 2), P = RMat::identity(R, 2);
    A0(0, 0) = r1;
    A0(1, 1) = r2;
    int x = small(rng);
    A0(0, 1) = RingElem::scalar(R, Rational(x == 0 ? 1 : x));
    P(1, 0) = RingElem::scalar(R, Rational(small(rng)));
    Series A(N, RMat(R, 2, 2));
    A[0] = P * A0 * *P.inverse();
    for (std::size_t k = 1; k < N; ++k)
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) A[k](i, j) = detail::random_elem(R, rng, 1, false);
    return ConnectionModule::make(A, N);
}

}  // namespace gtr
