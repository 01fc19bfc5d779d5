#pragma once
/// @file springer.hpp
/// @brief The rings U = Q[a,b,c,z] and Ut = U[h]/(h^2 - a^2 - bc), the operator
/// nu = [[a+z, b], [c, -a+z]] on Ut^2, exactness certificates and fiber types.

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gtr/report.hpp"
#include "gtr/rmatrix.hpp"
#include "gtr/upoly.hpp"

namespace gtr {

/// 2x2 matrix of polynomials, stored by columns.
using PMat = std::array<ModVec, 2>;

class SpringerRings {
public:
    // h comes first so that degrevlex picks h^2 as the leading term of the relation
    enum Var : std::size_t { H = 0, A, B, C, Z, NV };

    SpringerRings() {
        rel_ = var(H) * var(H) - var(A) * var(A) - var(B) * var(C);
        gb_ = {rel_};
    }

    static const std::vector<std::string>& names() {
        static const std::vector<std::string> n{"h", "a", "b", "c", "z"};
        return n;
    }

    MPoly var(std::size_t v) const { return MPoly::var(NV, MonoOrder::DegRevLex, v); }
    MPoly cst(const Rational& x) const { return MPoly::constant(NV, MonoOrder::DegRevLex, x); }
    MPoly zero() const { return cst(0); }
    const MPoly& relation() const { return rel_; }

    /// Normal form alpha + beta*h with alpha, beta free of h.
    MPoly reduce(const MPoly& p) const { return normal_form(p, gb_); }
    ModVec reduce(const ModVec& v) const {
        ModVec w;
        for (auto& p : v) w.push_back(reduce(p));
        return w;
    }
    /// (alpha, beta) with p = alpha + beta*h in Ut.
    std::pair<MPoly, MPoly> split_h(const MPoly& p) const {
        std::vector<MPoly::Term> a, b;
        const MPoly red = reduce(p);
        for (auto& [m, c] : red.terms()) {
            Mono mm = m;
            if (mm[H] == 0) a.push_back({mm, c});
            else {
                mm[H] = 0;
                b.push_back({mm, c});
            }
        }
        return {MPoly::from_terms(NV, MonoOrder::DegRevLex, a), MPoly::from_terms(NV, MonoOrder::DegRevLex, b)};
    }

    PMat nu() const { return {ModVec{var(A) + var(Z), var(C)}, ModVec{var(B), var(Z) - var(A)}}; }
    /// nu - (z + sign*h)
    PMat nu_shift(int sign) const {
        PMat m = nu();
        MPoly s = var(Z) + var(H) * Rational(sign);
        m[0][0] = m[0][0] - s;
        m[1][1] = m[1][1] - s;
        return m;
    }

    ModVec apply(const PMat& m, const ModVec& v) const {
        return reduce(mod_add(mod_scale(m[0], v[0]), mod_scale(m[1], v[1])));
    }
    PMat mul(const PMat& x, const PMat& y) const { return {apply(x, y[0]), apply(x, y[1])}; }

    /// Generators of {v in Ut^2 : m v = 0}.
    std::vector<ModVec> kernel(const PMat& m) const {
        auto syz = syzygies({m[0], m[1]}, {rel_});
        for (auto& s : syz) s = reduce(s);
        return syz;
    }
    /// Groebner basis of the Ut-submodule spanned by gens, lifted to the polynomial ring.
    std::vector<ModVec> submodule_gb(const std::vector<ModVec>& gens) const {
        std::vector<ModVec> all = gens;
        for (std::size_t i = 0; i < 2; ++i) {
            ModVec e(2, zero());
            e[i] = rel_;
            all.push_back(e);
        }
        return module_groebner(all);
    }

    std::string str(const MPoly& p) const { return reduce(p).str(names()); }
    std::string str(const ModVec& v) const { return "(" + str(v[0]) + ", " + str(v[1]) + ")"; }

private:
    MPoly rel_;
    std::vector<MPoly> gb_;
};

/// char(nu) = (T - (z+h))(T - (z-h)) in Ut[T], plus two specializations.
inline Report charpoly_factorization_check() {
    SpringerRings S;
    Report r("charpoly_factorization");
    using V = SpringerRings::Var;
    PMat n = S.nu();
    MPoly tr = n[0][0] + n[1][1];
    MPoly det = n[0][0] * n[1][1] - n[1][0] * n[0][1];
    MPoly zp = S.var(V::Z) + S.var(V::H), zm = S.var(V::Z) - S.var(V::H);
    // T^2 - tr T + det versus T^2 - (zp + zm) T + zp zm
    bool lin = S.reduce(tr - zp - zm).is_zero();
    bool con = S.reduce(det - zp * zm).is_zero();
    r.add("trace is 2z", lin, S.str(tr));
    r.add("determinant is (z+h)(z-h)", con, S.str(det - zp * zm));
    bool eq = S.reduce(tr - S.var(V::Z) * Rational(2)).is_zero() &&
              S.reduce(det - S.var(V::Z) * S.var(V::Z) + S.var(V::A) * S.var(V::A) + S.var(V::B) * S.var(V::C)).is_zero();
    r.add("char(nu) = T^2 - 2zT + z^2 - a^2 - bc", eq);
    // at a=b=c=z=0 (so h^2 = 0) and at a=1, h=+-1
    std::vector<Rational> origin(V::NV, 0);
    r.add("origin gives T^2", tr.eval(origin) == 0 && det.eval(origin) == 0);
    bool split = true;
    for (int s : {1, -1}) {
        std::vector<Rational> pt{Rational(s), 1, 0, 0, 0};
        split = split && zp.eval(pt) == s && zm.eval(pt) == -s && tr.eval(pt) == 0 && det.eval(pt) == -1 &&
                S.relation().eval(pt) == 0;
    }
    r.add("a=1, h=+-1 gives (T-1)(T+1)", split);
    return r;
}

namespace detail {

/// The U-linear map U^2 -> Ut^2, (z1, z2) -> z1 col1 + z2 col2, written in the U-basis {1, h} of Ut
/// as a 4x2 matrix over U (rows: comp0 const, comp0 h, comp1 const, comp1 h).
inline std::vector<ModVec> u_coordinates(const SpringerRings& S, const PMat& cols) {
    std::vector<ModVec> out;
    for (auto& c : cols) {
        auto [a0, b0] = S.split_h(c[0]);
        auto [a1, b1] = S.split_h(c[1]);
        out.push_back({a0, b0, a1, b1});
    }
    return out;
}

/// cols span a free rank-2 U-module stable under h: h*col_j is a U-combination of the columns,
/// and the 4x2 coordinate matrix over U has no syzygies.
inline void certify_u_free(const SpringerRings& S, const PMat& cols, const std::string& tag, Report& r) {
    using V = SpringerRings::Var;
    auto ucols = u_coordinates(S, cols);
    // h * col_j in U-coordinates must lie in the U-span of the columns
    auto gb = module_groebner({ucols[0], ucols[1]});
    bool stable = true;
    std::string wit;
    for (std::size_t j = 0; j < 2; ++j) {
        ModVec hc = S.reduce(mod_scale(cols[j], S.var(V::H)));
        auto hu = u_coordinates(S, {hc, hc})[0];
        if (!module_member(hu, gb)) {
            stable = false;
            wit = "h*col" + std::to_string(j + 1) + " = " + S.str(hc);
        }
    }
    r.add(tag + ": U-span is h-stable", stable, wit);
    auto syz = syzygies({ucols[0], ucols[1]});
    bool inj = true;
    for (auto& s : syz)
        if (!mod_is_zero(s)) {
            inj = false;
            wit = "(" + s[0].str(SpringerRings::names()) + ", " + s[1].str(SpringerRings::names()) + ")";
        }
    r.add(tag + ": parametrization from U^2 is injective", inj, inj ? "" : wit);
}

inline Rational small_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-6, 6), den(1, 3);
    Rational x(num(rng), den(rng));
    x.canonicalize();
    return x;
}

/// Image of p at a point (a,b,c,z) of U, as an element of Q[h]/(h^2 - q).
inline RingElem specialize(const Ring& F, const MPoly& p, const std::vector<Rational>& abcz, const Rational& q) {
    std::vector<Rational> c(2);
    for (auto& [m, coef] : p.terms()) {
        Rational v = coef;
        for (std::size_t i = 1; i < SpringerRings::NV; ++i)
            for (int k = 0; k < m[i]; ++k) v *= abcz[i - 1];
        for (int k = 0; k + 1 < m[0]; k += 2) v *= q;
        c[m[0] % 2] += v;
    }
    return RingElem(F, c);
}

inline RMat specialize(const Ring& F, const PMat& m, const std::vector<Rational>& abcz, const Rational& q) {
    RMat out(F, 2, 2);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < 2; ++i) out(i, j) = specialize(F, m[j][i], abcz, q);
    return out;
}

/// Q-span of the R-multiples of the given column vectors over a finite algebra.
inline QMat r_span(const RMat& cols) {
    const Ring& R = cols.ring();
    QMat all(cols.rows() * R->dim(), 0);
    for (std::size_t s = 0; s < R->dim(); ++s) all = hcat(all, (cols * RingElem::basis(R, s)).flatten_columns());
    return all;
}

}  // namespace detail

/// The three exactness certificates for nu - (z+h) and nu - (z-h), and seeded specializations.
inline Report verify_periodic_exactness(std::uint64_t seed = 0, int points = 50) {
    SpringerRings S;
    Report r("periodic_exactness");
    PMat Mp = S.nu_shift(1), Mm = S.nu_shift(-1);
    auto is_zero_mat = [&](const PMat& m) { return mod_is_zero(m[0]) && mod_is_zero(m[1]); };
    PMat c1 = S.mul(Mm, Mp), c2 = S.mul(Mp, Mm);
    r.add("(nu-(z-h))(nu-(z+h)) = 0", is_zero_mat(c1), S.str(c1[0]) + " " + S.str(c1[1]));
    r.add("(nu-(z+h))(nu-(z-h)) = 0", is_zero_mat(c2), S.str(c2[0]) + " " + S.str(c2[1]));

    for (int sign : {1, -1}) {
        PMat M = S.nu_shift(sign), N = S.nu_shift(-sign);
        std::string tag = sign > 0 ? "ker(nu-(z+h))" : "ker(nu-(z-h))";
        auto ker = S.kernel(M);
        bool killed = true;
        for (auto& k : ker) killed = killed && mod_is_zero(S.apply(M, k));
        r.add(tag + ": syzygy generators are killed", killed);
        auto gb = S.submodule_gb({N[0], N[1]});
        bool inside = true;
        std::string wit;
        for (auto& k : ker)
            if (!module_member(k, gb)) {
                inside = false;
                wit = S.str(k);
            }
        r.add(tag + " = image of the complementary map", inside && !ker.empty(), wit);
        detail::certify_u_free(S, N, tag, r);
    }
    {
        // (a+h) z1 + b z2 = 0 forces z1 = 0: the h-coefficient of the first entry is z1
        auto u = detail::u_coordinates(S, S.nu_shift(-1));
        r.add("(a+h)z1 + b z2 = 0 forces z1 = 0", u[0][1] == S.cst(1) && u[1][1].is_zero());
    }

    // pointwise: over Q[h]/(h^2 - q), q != 0, ker and image of nu-(z+h) are 2-dimensional and the
    // specialized generic kernel generators span the pointwise kernel
    auto ker = S.kernel(Mp);
    std::mt19937_64 rng(seed);
    bool ranks = true, spec = true;
    std::string wit;
    Ring Q = FiniteAlgebra::rationals();
    for (int i = 0; i < points; ++i) {
        std::vector<Rational> abcz(4);
        Rational q;
        do {
            for (auto& x : abcz) x = detail::small_rational(rng);
            q = abcz[0] * abcz[0] + abcz[1] * abcz[2];
        } while (q == 0);
        Ring F = FiniteAlgebra::quadratic_extension(Q, {q});
        QMat mp = detail::specialize(F, Mp, abcz, q).flatten();
        QMat mm = detail::specialize(F, Mm, abcz, q).flatten();
        QMat K = gtr::kernel(mp);
        if (K.cols() != 2 || rank(mp) != 2 || !same_span(K, column_basis(mm))) {
            ranks = false;
            wit = "point " + to_string(abcz[0]) + "," + to_string(abcz[1]) + "," + to_string(abcz[2]);
        }
        RMat gens(F, 2, ker.size());
        for (std::size_t j = 0; j < ker.size(); ++j)
            for (std::size_t k = 0; k < 2; ++k) gens(k, j) = detail::specialize(F, ker[j][k], abcz, q);
        if (!same_span(column_basis(detail::r_span(gens)), K)) spec = false;
    }
    r.add("pointwise kernel and image ranks are (2,2)", ranks, wit);
    r.add("specialized generic kernel equals pointwise kernel", spec);
    return r;
}

namespace detail {

/// Module quotient Ut^2 / span(rels) identified with span(images): x_j -> images_j. Certifies that
/// the relations map to zero and that every syzygy of the images is a combination of the relations,
/// so x_j <-> images_j are mutually inverse on generators.
inline void certify_iso(const SpringerRings& S, const PMat& rels, const PMat& images, const std::string& tag,
                        Report& r) {
    auto to_img = [&](const ModVec& x) { return S.apply(images, x); };
    bool rel_zero = mod_is_zero(to_img(rels[0])) && mod_is_zero(to_img(rels[1]));
    r.add(tag + ": relations map to zero", rel_zero);
    auto syz = S.kernel(images);
    auto gb = S.submodule_gb({rels[0], rels[1]});
    bool inv = true;
    std::string wit;
    for (auto& s : syz)
        if (!module_member(s, gb)) {
            inv = false;
            wit = S.str(s);
        }
    r.add(tag + ": inverse map is well defined", inv, wit);
}

/// dim over Q of F^2 / (rows of m), with F = Q[h]/(h^2 - q), and whether it is free of rank 1.
inline std::pair<std::size_t, bool> presentation_fiber(const PMat& rows_as_cols, const std::vector<Rational>& abcz,
                                                       const Rational& q) {
    Ring F = FiniteAlgebra::quadratic_extension(FiniteAlgebra::rationals(), {q});
    RMat rel = specialize(F, rows_as_cols, abcz, q);
    QMat N = column_basis(r_span(rel));
    const std::size_t dim = 4 - N.cols();
    // quotient basis: complement of N; h acts on the quotient through the complement coordinates
    QMat Cb = complement_basis(N);
    QMat Hm = RMat::scalar(F, 2, RingElem::basis(F, 1)).flatten();
    QMat all = hcat(Cb, N);
    QMat hq = *solve(all, Hm * Cb);
    QMat hact(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) hact(i, j) = hq(i, j);
    // a 2-dimensional module over the 2-dimensional F is free iff it is cyclic, i.e. h is not scalar
    bool free1 = dim == 2 && !(sgn(hact(0, 1)) == 0 && sgn(hact(1, 0)) == 0 && hact(0, 0) == hact(1, 1));
    return {dim, free1};
}

}  // namespace detail

/// Presentations of the eigen-submodules. The quotient with relations given by the columns of
/// nu-(z+h) is identified with ker(nu-(z+h)) via x -> (nu-(z-h)) x; the quotient with relations
/// given by its rows is identified with ker(nu-(z-h)) via x -> (nu-(z+h)) J x.
inline Report verify_presentation() {
    SpringerRings S;
    Report r("presentation");
    PMat Mp = S.nu_shift(1), Mm = S.nu_shift(-1);
    detail::certify_iso(S, Mp, Mm, "coker(nu-(z+h)) = ker(nu-(z+h))", r);
    // rows of nu-(z+h): (a-h) x1 + b x2, c x1 - (a+h) x2
    PMat rows{ModVec{Mp[0][0], Mp[1][0]}, ModVec{Mp[0][1], Mp[1][1]}};
    PMat J{ModVec{S.zero(), S.cst(-1)}, ModVec{S.cst(1), S.zero()}};
    detail::certify_iso(S, rows, S.mul(Mp, J), "row presentation = ker(nu-(z-h))", r);
    // Vt / ker(nu-(z+h)) is the image of nu-(z+h), which is ker(nu-(z-h)): free of rank 2 over U
    detail::certify_u_free(S, Mp, "cokernel of the inclusion", r);
    auto [d0, f0] = detail::presentation_fiber(rows, {0, 0, 0, 0}, 0);
    r.add("origin fiber: dimension 2, not free over Q[h]/h^2", d0 == 2 && !f0,
          "dim " + std::to_string(d0) + (f0 ? ", free" : ", not free"));
    auto [d1, f1] = detail::presentation_fiber(rows, {1, 0, 0, 0}, 1);
    r.add("a=1 fiber: dimension 2, free of rank 1 over Q[h]/(h^2-1)", d1 == 2 && f1,
          "dim " + std::to_string(d1) + (f1 ? ", free" : ", not free"));
    return r;
}

enum class FiberKind { EtaleRank2, RamifiedDouble, FullFlag };

inline std::string to_string(FiberKind k) {
    switch (k) {
        case FiberKind::EtaleRank2: return "EtaleRank2";
        case FiberKind::RamifiedDouble: return "RamifiedDouble";
        case FiberKind::FullFlag: return "FullFlag";
    }
    return "";
}

struct SpringerFiberData {
    RingElem a, b, c, z;
    RingElem q() const { return a * a + b * c; }
};

inline SpringerFiberData fiber_data(const RMat& nu0) {
    if (nu0.rows() != 2 || nu0.cols() != 2) throw std::invalid_argument("fiber_data: need a 2x2 matrix");
    Rational half(1, 2);
    return {(nu0(0, 0) - nu0(1, 1)) * half, nu0(0, 1), nu0(1, 0), (nu0(0, 0) + nu0(1, 1)) * half};
}

struct FiberType {
    FiberKind kind;
    Ring ring;  // R[h]/(h^2 - q); unset for FullFlag
    RingElem q;
};

inline FiberType fiber_type(const RMat& nu0) {
    auto d = fiber_data(nu0);
    const Ring& R = nu0.ring();
    RingElem q = d.q();
    if (d.a.is_zero() && d.b.is_zero() && d.c.is_zero()) return {FiberKind::FullFlag, nullptr, q};
    Ring E = FiniteAlgebra::quadratic_extension(R, q.coords());
    return {q.is_unit() ? FiberKind::EtaleRank2 : FiberKind::RamifiedDouble, E, q};
}

}  // namespace gtr
