#pragma once
/// @file algebra.hpp
/// @brief Finite-dimensional commutative Q-algebras given by a basis and a
/// multiplication table; Artinian local rings built from Groebner normal forms.

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gtr/mpoly.hpp"
#include "gtr/qmatrix.hpp"
#include "gtr/rational.hpp"

namespace gtr {

struct AlgebraError : std::runtime_error {
    explicit AlgebraError(const std::string& kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind(kind) {}
    std::string kind;
};

class FiniteAlgebra;
using Ring = std::shared_ptr<const FiniteAlgebra>;

/// Commutative algebra with Q-basis b_0 = 1, b_1, ..., b_{d-1}.
class FiniteAlgebra {
public:
    struct Entry {
        std::size_t k;
        Rational c;
    };

    std::size_t dim() const { return d_; }
    const std::vector<std::string>& basis_names() const { return names_; }
    const std::vector<std::string>& generators() const { return gens_; }
    const std::vector<MPoly>& ideal() const { return ideal_; }
    const std::vector<Mono>& basis_monomials() const { return monos_; }
    bool is_local() const { return local_; }
    /// residue()[i] = image of b_i in the residue field (local rings only).
    const std::vector<Rational>& residue() const { return residue_; }
    /// Least s with (max ideal)^s = 0; 1 for a field. Local rings only.
    int nilpotency_index() const { return nil_index_; }
    /// Q-basis of the nilradical, as coordinate columns.
    const QMat& nilradical_basis() const { return nil_basis_; }
    /// Coordinates of the generator images.
    const std::vector<std::vector<Rational>>& generator_coords() const { return gen_coords_; }

    const std::vector<Entry>& product(std::size_t i, std::size_t j) const { return table_[i * d_ + j]; }

    std::vector<Rational> mul(const std::vector<Rational>& a, const std::vector<Rational>& b) const {
        std::vector<Rational> c(d_);
        Rational t;
        for (std::size_t i = 0; i < d_; ++i) {
            if (sgn(a[i]) == 0) continue;
            for (std::size_t j = 0; j < d_; ++j) {
                if (sgn(b[j]) == 0) continue;
                t = a[i] * b[j];
                for (const auto& e : table_[i * d_ + j]) c[e.k] += t * e.c;
            }
        }
        return c;
    }

    /// Matrix of multiplication by a (acting on coordinate columns).
    QMat left_mult(const std::vector<Rational>& a) const {
        QMat m(d_, d_);
        for (std::size_t i = 0; i < d_; ++i) {
            if (sgn(a[i]) == 0) continue;
            for (std::size_t j = 0; j < d_; ++j)
                for (const auto& e : table_[i * d_ + j]) m(e.k, j) += a[i] * e.c;
        }
        return m;
    }
    const QMat& basis_mult(std::size_t i) const { return basis_mult_[i]; }

    Rational residue_of(const std::vector<Rational>& a) const {
        if (!local_) throw AlgebraError("NotLocal", "residue map requested on a non-local ring");
        Rational r = 0;
        for (std::size_t i = 0; i < d_; ++i)
            if (sgn(a[i]) != 0) r += a[i] * residue_[i];
        return r;
    }

    std::string describe() const {
        std::string s = "Q[";
        for (std::size_t i = 0; i < gens_.size(); ++i) s += (i ? "," : "") + gens_[i];
        s += "]/(";
        for (std::size_t i = 0; i < ideal_.size(); ++i) s += (i ? ", " : "") + ideal_[i].str(gens_);
        return s + ")";
    }

    /// Build from a presentation; the quotient must be finite-dimensional.
    /// When require_local is set, errors NotArtinian / NotLocal follow the local-ring contract.
    static Ring build(const std::vector<std::string>& gens, const std::vector<MPoly>& ideal, bool require_local) {
        auto A = std::shared_ptr<FiniteAlgebra>(new FiniteAlgebra());
        A->gens_ = gens;
        const std::size_t nv = gens.size();
        for (auto& f : ideal) A->ideal_.push_back(f.with_order(MonoOrder::DegRevLex));
        A->gb_ = buchberger(A->ideal_, MonoOrder::DegRevLex);
        for (auto& g : A->gb_)
            if (mono_degree(g.lead_mono()) == 0) throw AlgebraError("NotArtinian", "the ideal is the unit ideal");
        // zero-dimensionality: each variable needs a pure-power leading monomial
        std::vector<int> bound(nv, -1);
        for (std::size_t v = 0; v < nv; ++v)
            for (auto& g : A->gb_) {
                const Mono& lm = g.lead_mono();
                bool pure = lm[v] > 0;
                for (std::size_t u = 0; u < nv && pure; ++u)
                    if (u != v && lm[u]) pure = false;
                if (pure && (bound[v] < 0 || lm[v] < bound[v])) bound[v] = lm[v];
            }
        for (std::size_t v = 0; v < nv; ++v)
            if (bound[v] < 0)
                throw AlgebraError("NotArtinian", "no power of generator " + gens[v] + " lies in the ideal");
        // standard monomials
        std::vector<Mono> std_monos;
        Mono m(nv, 0);
        while (true) {
            bool standard = true;
            for (auto& g : A->gb_)
                if (mono_divides(g.lead_mono(), m)) { standard = false; break; }
            if (standard) std_monos.push_back(m);
            std::size_t v = 0;
            while (v < nv) {
                if (++m[v] < bound[v]) break;
                m[v] = 0;
                ++v;
            }
            if (v == nv) break;
            if (nv == 0) break;
        }
        std::sort(std_monos.begin(), std_monos.end(),
                  [](const Mono& a, const Mono& b) { return mono_cmp(a, b, MonoOrder::DegRevLex) < 0; });
        A->monos_ = std_monos;
        A->d_ = std_monos.size();
        for (auto& mm : std_monos) A->names_.push_back(MPoly::monomial(MonoOrder::DegRevLex, mm, 1).str(gens));
        // multiplication table
        const std::size_t d = A->d_;
        A->table_.resize(d * d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                MPoly p = normal_form(MPoly::monomial(MonoOrder::DegRevLex, mono_mul(std_monos[i], std_monos[j]), 1), A->gb_);
                A->table_[i * d + j] = A->coords_of_normal(p);
            }
        for (std::size_t v = 0; v < nv; ++v) {
            MPoly p = normal_form(MPoly::var(nv, MonoOrder::DegRevLex, v), A->gb_);
            std::vector<Rational> c(d);
            for (auto& e : A->coords_of_normal(p)) c[e.k] += e.c;
            A->gen_coords_.push_back(c);
        }
        A->finish(require_local);
        return A;
    }

    /// R[h]/(h^2 - q) with basis (b_i, h*b_i).
    static Ring quadratic_extension(const Ring& R, const std::vector<Rational>& q, const std::string& hname = "h") {
        auto A = std::shared_ptr<FiniteAlgebra>(new FiniteAlgebra());
        const std::size_t d = R->dim();
        A->d_ = 2 * d;
        A->gens_ = R->gens_;
        A->gens_.push_back(hname);
        for (std::size_t i = 0; i < d; ++i) A->names_.push_back(R->names_[i]);
        for (std::size_t i = 0; i < d; ++i)
            A->names_.push_back(R->names_[i] == "1" ? hname : hname + "*" + R->names_[i]);
        for (auto m : R->monos_) {
            m.push_back(0);
            A->monos_.push_back(m);
        }
        for (auto m : R->monos_) {
            m.push_back(1);
            A->monos_.push_back(m);
        }
        A->table_.resize(4 * d * d);
        for (std::size_t i = 0; i < 2 * d; ++i)
            for (std::size_t j = 0; j < 2 * d; ++j) {
                const auto& base = R->product(i % d, j % d);
                std::vector<Rational> c(2 * d);
                bool hi = i >= d, hj = j >= d;
                if (hi && hj) {
                    std::vector<Rational> bb(d);
                    for (auto& e : base) bb[e.k] += e.c;
                    auto qb = R->mul(q, bb);
                    for (std::size_t k = 0; k < d; ++k) c[k] = qb[k];
                } else {
                    std::size_t off = (hi || hj) ? d : 0;
                    for (auto& e : base) c[off + e.k] += e.c;
                }
                for (std::size_t k = 0; k < 2 * d; ++k)
                    if (sgn(c[k]) != 0) A->table_[i * 2 * d + j].push_back({k, c[k]});
            }
        const std::size_t nv = R->gens_.size();
        for (std::size_t v = 0; v < nv; ++v) {
            std::vector<Rational> c(2 * d);
            for (std::size_t k = 0; k < d; ++k) c[k] = R->gen_coords_[v][k];
            A->gen_coords_.push_back(c);
        }
        std::vector<Rational> hc(2 * d);
        hc[d] = 1;
        A->gen_coords_.push_back(hc);
        // presentation: ideal of R plus h^2 - q (q written through basis monomials)
        for (auto& f : R->ideal_) {
            std::vector<MPoly::Term> ts;
            for (auto& tm : f.terms()) {
                Mono mm = tm.first;
                mm.push_back(0);
                ts.push_back({mm, tm.second});
            }
            A->ideal_.push_back(MPoly::from_terms(nv + 1, MonoOrder::DegRevLex, ts));
        }
        {
            std::vector<MPoly::Term> ts;
            Mono h2(nv + 1, 0);
            h2[nv] = 2;
            ts.push_back({h2, 1});
            for (std::size_t k = 0; k < d; ++k)
                if (sgn(q[k]) != 0) {
                    Mono mm = R->monos_[k];
                    mm.push_back(0);
                    ts.push_back({mm, -q[k]});
                }
            A->ideal_.push_back(MPoly::from_terms(nv + 1, MonoOrder::DegRevLex, ts));
        }
        A->finish(false);
        return A;
    }

    /// Residue field Q as an algebra.
    static Ring rationals() { return build({}, {}, true); }

private:
    FiniteAlgebra() = default;

    std::vector<Entry> coords_of_normal(const MPoly& p) const {
        std::vector<Entry> out;
        for (auto& tm : p.terms()) {
            auto it = std::find(monos_.begin(), monos_.end(), tm.first);
            if (it == monos_.end()) throw std::logic_error("normal form left the standard monomials");
            out.push_back({static_cast<std::size_t>(it - monos_.begin()), tm.second});
        }
        return out;
    }

    void finish(bool require_local) {
        const std::size_t d = d_;
        basis_mult_.resize(d);
        for (std::size_t i = 0; i < d; ++i) {
            std::vector<Rational> e(d);
            e[i] = 1;
            basis_mult_[i] = left_mult(e);
        }
        // trace-form radical = nilradical (characteristic zero)
        QMat tf(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                std::vector<Rational> e(d);
                for (auto& en : table_[i * d + j]) e[en.k] += en.c;
                QMat L = left_mult(e);
                Rational tr = 0;
                for (std::size_t k = 0; k < d; ++k) tr += L(k, k);
                tf(i, j) = tr;
            }
        nil_basis_ = kernel(tf);
        local_ = (nil_basis_.cols() + 1 == d);
        if (require_local && !local_)
            throw AlgebraError("NotLocal", "residue ring has dimension " + std::to_string(d - nil_basis_.cols()));
        if (local_) {
            residue_.resize(d);
            for (std::size_t i = 0; i < d; ++i) {
                Rational tr = 0;
                for (std::size_t k = 0; k < d; ++k) tr += basis_mult_[i](k, k);
                residue_[i] = tr / Rational(static_cast<long>(d));
            }
            if (require_local)
                for (std::size_t v = 0; v < gen_coords_.size(); ++v)
                    if (sgn(residue_of(gen_coords_[v])) != 0)
                        throw AlgebraError("NotArtinian", "no power of generator " + gens_[v] + " lies in the ideal");
            // nilpotency index of the maximal ideal
            QMat cur = nil_basis_;
            nil_index_ = 1;
            while (cur.cols() > 0) {
                QMat next(d, 0);
                for (std::size_t a = 0; a < nil_basis_.cols(); ++a) {
                    QMat L = left_mult(nil_basis_.column_vector(a));
                    next = hcat(next, L * cur);
                }
                cur = next.cols() ? column_basis(next) : next;
                if (cur.cols() > 0 && cur.is_zero()) cur = QMat(d, 0);
                ++nil_index_;
            }
        }
    }

    std::size_t d_ = 0;
    std::vector<std::string> gens_;
    std::vector<MPoly> ideal_, gb_;
    std::vector<Mono> monos_;
    std::vector<std::string> names_;
    std::vector<std::vector<Entry>> table_;
    std::vector<QMat> basis_mult_;
    std::vector<std::vector<Rational>> gen_coords_;
    QMat nil_basis_;
    bool local_ = false;
    std::vector<Rational> residue_;
    int nil_index_ = 1;
};

/// Parse-free builder used by the artin_ring_build operation.
inline Ring artin_ring_build(const std::vector<std::string>& gens, const std::vector<MPoly>& ideal) {
    return FiniteAlgebra::build(gens, ideal, true);
}

/// An element of a finite algebra.
class RingElem {
public:
    RingElem() = default;
    RingElem(Ring R, std::vector<Rational> c) : R_(std::move(R)), c_(std::move(c)) {
        if (c_.size() != R_->dim()) throw std::invalid_argument("RingElem: coordinate length");
    }
    static RingElem zero(const Ring& R) { return RingElem(R, std::vector<Rational>(R->dim())); }
    static RingElem scalar(const Ring& R, const Rational& x) {
        std::vector<Rational> c(R->dim());
        c[0] = x;
        return RingElem(R, c);
    }
    static RingElem basis(const Ring& R, std::size_t i) {
        std::vector<Rational> c(R->dim());
        c[i] = 1;
        return RingElem(R, c);
    }
    static RingElem generator(const Ring& R, std::size_t v) { return RingElem(R, R->generator_coords()[v]); }
    static RingElem generator(const Ring& R, const std::string& name) {
        const auto& g = R->generators();
        auto it = std::find(g.begin(), g.end(), name);
        if (it == g.end()) throw std::invalid_argument("unknown generator " + name);
        return generator(R, static_cast<std::size_t>(it - g.begin()));
    }

    const Ring& ring() const { return R_; }
    const std::vector<Rational>& coords() const { return c_; }
    std::vector<Rational>& coords() { return c_; }

    bool is_zero() const {
        for (auto& x : c_)
            if (sgn(x) != 0) return false;
        return true;
    }
    bool operator==(const RingElem& o) const { return c_ == o.c_; }
    bool operator!=(const RingElem& o) const { return c_ != o.c_; }

    RingElem operator+(const RingElem& o) const {
        RingElem r = *this;
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
        return r;
    }
    RingElem operator-(const RingElem& o) const {
        RingElem r = *this;
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
        return r;
    }
    RingElem operator-() const {
        RingElem r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    RingElem operator*(const RingElem& o) const { return RingElem(R_, R_->mul(c_, o.c_)); }
    RingElem operator*(const Rational& s) const {
        RingElem r = *this;
        for (auto& x : r.c_) x *= s;
        return r;
    }
    RingElem& operator+=(const RingElem& o) { return *this = *this + o; }
    RingElem& operator-=(const RingElem& o) { return *this = *this - o; }
    RingElem& operator*=(const RingElem& o) { return *this = *this * o; }

    RingElem pow(unsigned e) const {
        RingElem r = scalar(R_, 1), b = *this;
        while (e) {
            if (e & 1u) r = r * b;
            e >>= 1u;
            if (e) b = b * b;
        }
        return r;
    }

    Rational residue() const { return R_->residue_of(c_); }
    bool in_nilradical() const {
        if (R_->is_local()) return sgn(residue()) == 0;
        return span_contains(R_->nilradical_basis(), QMat::from_column(c_));
    }
    QMat mult_matrix() const { return R_->left_mult(c_); }

    std::optional<RingElem> inverse() const {
        auto x = solve(mult_matrix(), QMat::from_column(RingElem::scalar(R_, 1).c_));
        if (!x) return std::nullopt;
        return RingElem(R_, x->column_vector(0));
    }
    bool is_unit() const { return inverse().has_value(); }

    std::string str() const {
        std::string s;
        const auto& nm = R_->basis_names();
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (sgn(c_[i]) == 0) continue;
            std::string coef = c_[i].get_str();
            std::string term = nm[i] == "1" ? coef : (c_[i] == 1 ? nm[i] : (c_[i] == -1 ? "-" + nm[i] : coef + "*" + nm[i]));
            if (!s.empty() && term[0] != '-') s += "+";
            s += term;
        }
        return s.empty() ? "0" : s;
    }

private:
    Ring R_;
    std::vector<Rational> c_;
};

inline RingElem operator*(const Rational& s, const RingElem& a) { return a * s; }

/// Parse a polynomial in the ring generators, e.g. "1+e/2 - 3*z*h" (used by scenarios and tests).
inline MPoly parse_mpoly(const std::string& s, const std::vector<std::string>& vars, MonoOrder ord = MonoOrder::DegRevLex);

inline RingElem ring_elem_from_poly(const Ring& R, const MPoly& p) {
    RingElem r = RingElem::zero(R);
    for (auto& tm : p.terms()) {
        RingElem m = RingElem::scalar(R, tm.second);
        for (std::size_t v = 0; v < tm.first.size(); ++v)
            if (tm.first[v]) m = m * RingElem::generator(R, v).pow(static_cast<unsigned>(tm.first[v]));
        r += m;
    }
    return r;
}

inline RingElem parse_elem(const Ring& R, const std::string& s) {
    return ring_elem_from_poly(R, parse_mpoly(s, R->generators()));
}

}  // namespace gtr

#include "gtr/detail/parse.hpp"
