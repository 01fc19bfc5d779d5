#pragma once
/// @file mpoly.hpp
/// @brief Multivariate rational polynomials, Buchberger's algorithm, and module
/// Groebner bases with position-over-term order (used for syzygies).

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gtr/rational.hpp"

namespace gtr {

enum class MonoOrder { Lex, DegRevLex };

using Mono = std::vector<int>;

inline int mono_cmp(const Mono& a, const Mono& b, MonoOrder ord) {
    if (ord == MonoOrder::DegRevLex) {
        int da = 0, db = 0;
        for (int x : a) da += x;
        for (int x : b) db += x;
        if (da != db) return da < db ? -1 : 1;
        for (std::size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
        return 0;
    }
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

inline bool mono_divides(const Mono& a, const Mono& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}
inline Mono mono_mul(const Mono& a, const Mono& b) {
    Mono c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}
inline Mono mono_div(const Mono& a, const Mono& b) {
    Mono c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    return c;
}
inline Mono mono_lcm(const Mono& a, const Mono& b) {
    Mono c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = std::max(a[i], b[i]);
    return c;
}
inline int mono_degree(const Mono& a) {
    int d = 0;
    for (int x : a) d += x;
    return d;
}

class MPoly {
public:
    using Term = std::pair<Mono, Rational>;

    MPoly() = default;
    MPoly(std::size_t nvars, MonoOrder ord) : nv_(nvars), ord_(ord) {}

    static MPoly constant(std::size_t nvars, MonoOrder ord, const Rational& c) {
        MPoly p(nvars, ord);
        if (sgn(c) != 0) p.t_.push_back({Mono(nvars, 0), c});
        return p;
    }
    static MPoly var(std::size_t nvars, MonoOrder ord, std::size_t i, const Rational& c = 1) {
        MPoly p(nvars, ord);
        Mono m(nvars, 0);
        m[i] = 1;
        if (sgn(c) != 0) p.t_.push_back({m, c});
        return p;
    }
    static MPoly monomial(MonoOrder ord, const Mono& m, const Rational& c) {
        MPoly p(m.size(), ord);
        if (sgn(c) != 0) p.t_.push_back({m, c});
        return p;
    }
    /// Build from unsorted terms; like terms are combined.
    static MPoly from_terms(std::size_t nvars, MonoOrder ord, std::vector<Term> terms) {
        MPoly p(nvars, ord);
        std::sort(terms.begin(), terms.end(),
                  [ord](const Term& a, const Term& b) { return mono_cmp(a.first, b.first, ord) > 0; });
        for (auto& tm : terms) {
            if (tm.first.size() != nvars) throw std::invalid_argument("MPoly: exponent length");
            if (!p.t_.empty() && p.t_.back().first == tm.first)
                p.t_.back().second += tm.second;
            else
                p.t_.push_back(std::move(tm));
            if (sgn(p.t_.back().second) == 0) p.t_.pop_back();
        }
        return p;
    }

    std::size_t nvars() const { return nv_; }
    MonoOrder order() const { return ord_; }
    const std::vector<Term>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    const Mono& lead_mono() const { return t_.front().first; }
    const Rational& lead_coeff() const { return t_.front().second; }
    int degree() const {
        int d = -1;
        for (auto& tm : t_) d = std::max(d, mono_degree(tm.first));
        return d;
    }

    MPoly with_order(MonoOrder o) const { return from_terms(nv_, o, t_); }

    bool operator==(const MPoly& o) const { return t_ == o.t_; }
    bool operator!=(const MPoly& o) const { return !(*this == o); }

    MPoly operator+(const MPoly& o) const { return combine(o, 1); }
    MPoly operator-(const MPoly& o) const { return combine(o, -1); }
    MPoly operator-() const {
        MPoly p = *this;
        for (auto& tm : p.t_) tm.second = -tm.second;
        return p;
    }
    MPoly operator*(const Rational& c) const {
        MPoly p(nv_, ord_);
        if (sgn(c) == 0) return p;
        p.t_ = t_;
        for (auto& tm : p.t_) tm.second *= c;
        return p;
    }
    MPoly mul_term(const Mono& m, const Rational& c) const {
        MPoly p(nv_, ord_);
        if (sgn(c) == 0) return p;
        p.t_.reserve(t_.size());
        for (auto& tm : t_) p.t_.push_back({mono_mul(tm.first, m), tm.second * c});
        return p;
    }
    MPoly operator*(const MPoly& o) const {
        std::vector<Term> acc;
        acc.reserve(t_.size() * o.t_.size());
        for (auto& a : t_)
            for (auto& b : o.t_) acc.push_back({mono_mul(a.first, b.first), a.second * b.second});
        return from_terms(nv_, ord_, std::move(acc));
    }
    MPoly& operator+=(const MPoly& o) { return *this = *this + o; }
    MPoly& operator-=(const MPoly& o) { return *this = *this - o; }

    MPoly pow(unsigned e) const {
        MPoly r = constant(nv_, ord_, 1), b = *this;
        while (e) {
            if (e & 1u) r = r * b;
            e >>= 1u;
            if (e) b = b * b;
        }
        return r;
    }

    Rational eval(const std::vector<Rational>& x) const {
        Rational s = 0;
        for (auto& tm : t_) {
            Rational v = tm.second;
            for (std::size_t i = 0; i < nv_; ++i)
                for (int k = 0; k < tm.first[i]; ++k) v *= x[i];
            s += v;
        }
        return s;
    }

    /// Substitute polynomials for variables (all in a common target ring).
    MPoly substitute(const std::vector<MPoly>& images) const {
        if (images.size() != nv_) throw std::invalid_argument("substitute: arity");
        MPoly s = constant(images[0].nvars(), images[0].order(), 0);
        for (auto& tm : t_) {
            MPoly v = constant(images[0].nvars(), images[0].order(), tm.second);
            for (std::size_t i = 0; i < nv_; ++i)
                if (tm.first[i]) v = v * images[i].pow(static_cast<unsigned>(tm.first[i]));
            s += v;
        }
        return s;
    }

    std::string str(const std::vector<std::string>& names) const {
        if (t_.empty()) return "0";
        std::string out;
        for (std::size_t k = 0; k < t_.size(); ++k) {
            const auto& [m, c] = t_[k];
            std::string cs = c.get_str();
            bool unit_mono = mono_degree(m) == 0;
            std::string ms;
            for (std::size_t i = 0; i < nv_; ++i) {
                if (!m[i]) continue;
                if (!ms.empty()) ms += "*";
                ms += names[i];
                if (m[i] > 1) ms += "^" + std::to_string(m[i]);
            }
            if (k) out += (sgn(c) < 0) ? " - " : " + ";
            else if (sgn(c) < 0) out += "-";
            Rational ac = abs(c);
            if (unit_mono) out += ac.get_str();
            else if (ac == 1) out += ms;
            else out += ac.get_str() + "*" + ms;
        }
        return out;
    }

private:
    MPoly combine(const MPoly& o, int sign) const {
        MPoly p(nv_, ord_);
        p.t_.reserve(t_.size() + o.t_.size());
        std::size_t i = 0, j = 0;
        while (i < t_.size() || j < o.t_.size()) {
            int c;
            if (i == t_.size()) c = -1;
            else if (j == o.t_.size()) c = 1;
            else c = mono_cmp(t_[i].first, o.t_[j].first, ord_);
            if (c > 0) p.t_.push_back(t_[i++]);
            else if (c < 0) {
                p.t_.push_back(o.t_[j++]);
                if (sign < 0) p.t_.back().second = -p.t_.back().second;
            } else {
                Rational s = t_[i].second;
                if (sign > 0) s += o.t_[j].second;
                else s -= o.t_[j].second;
                if (sgn(s) != 0) p.t_.push_back({t_[i].first, s});
                ++i, ++j;
            }
        }
        return p;
    }

    std::size_t nv_ = 0;
    MonoOrder ord_ = MonoOrder::DegRevLex;
    std::vector<Term> t_;
};

/// Full reduction of f modulo the list g.
inline MPoly normal_form(const MPoly& f, const std::vector<MPoly>& g) {
    MPoly p = f, r(f.nvars(), f.order());
    std::vector<MPoly::Term> rem;
    while (!p.is_zero()) {
        const Mono lm = p.lead_mono();
        const Rational lc = p.lead_coeff();
        bool reduced = false;
        for (const auto& gi : g) {
            if (gi.is_zero() || !mono_divides(gi.lead_mono(), lm)) continue;
            p = p - gi.mul_term(mono_div(lm, gi.lead_mono()), lc / gi.lead_coeff());
            reduced = true;
            break;
        }
        if (!reduced) {
            rem.push_back({lm, lc});
            p = p - MPoly::monomial(p.order(), lm, lc);
        }
    }
    return MPoly::from_terms(f.nvars(), f.order(), std::move(rem));
}

inline MPoly s_polynomial(const MPoly& f, const MPoly& g) {
    Mono l = mono_lcm(f.lead_mono(), g.lead_mono());
    return f.mul_term(mono_div(l, f.lead_mono()), 1 / f.lead_coeff()) -
           g.mul_term(mono_div(l, g.lead_mono()), 1 / g.lead_coeff());
}

/// Reduced Groebner basis (monic, sorted by leading monomial, descending).
inline std::vector<MPoly> buchberger(std::vector<MPoly> gens, MonoOrder ord) {
    std::vector<MPoly> g;
    for (auto& f : gens) {
        MPoly h = f.order() == ord ? f : f.with_order(ord);
        if (!h.is_zero()) g.push_back(h);
    }
    if (g.empty()) return g;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) pairs.push_back({j, i});
    while (!pairs.empty()) {
        auto [i, j] = pairs.back();
        pairs.pop_back();
        const Mono& a = g[i].lead_mono();
        const Mono& b = g[j].lead_mono();
        if (mono_mul(a, b) == mono_lcm(a, b)) continue;  // coprime leads
        MPoly r = normal_form(s_polynomial(g[i], g[j]), g);
        if (r.is_zero()) continue;
        g.push_back(r);
        for (std::size_t k = 0; k + 1 < g.size(); ++k) pairs.push_back({k, g.size() - 1});
    }
    // minimalize
    std::vector<MPoly> m;
    for (std::size_t i = 0; i < g.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
            if (i == j) continue;
            if (mono_divides(g[j].lead_mono(), g[i].lead_mono()) &&
                (g[j].lead_mono() != g[i].lead_mono() || j < i))
                redundant = true;
        }
        if (!redundant) m.push_back(g[i]);
    }
    // interreduce
    for (std::size_t i = 0; i < m.size(); ++i) {
        std::vector<MPoly> others;
        for (std::size_t j = 0; j < m.size(); ++j)
            if (j != i) others.push_back(m[j]);
        MPoly lead = MPoly::monomial(ord, m[i].lead_mono(), m[i].lead_coeff());
        m[i] = lead + normal_form(m[i] - lead, others);
        m[i] = m[i] * (1 / m[i].lead_coeff());
    }
    std::sort(m.begin(), m.end(),
              [ord](const MPoly& x, const MPoly& y) { return mono_cmp(x.lead_mono(), y.lead_mono(), ord) > 0; });
    return m;
}

inline bool ideal_member(const MPoly& f, const std::vector<MPoly>& gb) { return normal_form(f, gb).is_zero(); }

// ---------------------------------------------------------------------------
// Modules over the polynomial ring: vectors of MPoly, position-over-term with
// component 0 largest.

using ModVec = std::vector<MPoly>;

struct ModLead {
    std::size_t pos;
    Mono mono;
    Rational coeff;
};

inline std::optional<ModLead> mod_lead(const ModVec& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) return ModLead{i, v[i].lead_mono(), v[i].lead_coeff()};
    return std::nullopt;
}

inline bool mod_is_zero(const ModVec& v) { return !mod_lead(v).has_value(); }

inline ModVec mod_mul_term(const ModVec& v, const Mono& m, const Rational& c) {
    ModVec w;
    w.reserve(v.size());
    for (auto& p : v) w.push_back(p.mul_term(m, c));
    return w;
}
inline ModVec mod_sub(const ModVec& a, const ModVec& b) {
    ModVec w(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) w[i] = a[i] - b[i];
    return w;
}
inline ModVec mod_add(const ModVec& a, const ModVec& b) {
    ModVec w(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) w[i] = a[i] + b[i];
    return w;
}
inline ModVec mod_scale(const ModVec& a, const MPoly& f) {
    ModVec w(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) w[i] = a[i] * f;
    return w;
}

/// Top-reduce then tail-reduce v modulo g (POT order).
inline ModVec mod_normal_form(const ModVec& v, const std::vector<ModVec>& g) {
    ModVec p = v;
    const std::size_t m = v.size();
    for (std::size_t pos = 0; pos < m; ++pos) {
        // reduce the component `pos` completely, using elements whose lead sits at pos
        MPoly rem(p[pos].nvars(), p[pos].order());
        std::vector<MPoly::Term> keep;
        while (!p[pos].is_zero()) {
            Mono lm = p[pos].lead_mono();
            Rational lc = p[pos].lead_coeff();
            bool red = false;
            for (const auto& gi : g) {
                auto l = mod_lead(gi);
                if (!l || l->pos != pos || !mono_divides(l->mono, lm)) continue;
                p = mod_sub(p, mod_mul_term(gi, mono_div(lm, l->mono), lc / l->coeff));
                red = true;
                break;
            }
            if (!red) {
                keep.push_back({lm, lc});
                p[pos] = p[pos] - MPoly::monomial(p[pos].order(), lm, lc);
            }
        }
        p[pos] = MPoly::from_terms(v[pos].nvars(), v[pos].order(), std::move(keep));
    }
    return p;
}

inline std::vector<ModVec> module_groebner(std::vector<ModVec> gens) {
    std::vector<ModVec> g;
    for (auto& v : gens)
        if (!mod_is_zero(v)) g.push_back(v);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) pairs.push_back({j, i});
    while (!pairs.empty()) {
        auto [i, j] = pairs.back();
        pairs.pop_back();
        auto li = mod_lead(g[i]), lj = mod_lead(g[j]);
        if (li->pos != lj->pos) continue;
        Mono l = mono_lcm(li->mono, lj->mono);
        ModVec s = mod_sub(mod_mul_term(g[i], mono_div(l, li->mono), 1 / li->coeff),
                           mod_mul_term(g[j], mono_div(l, lj->mono), 1 / lj->coeff));
        ModVec r = mod_normal_form(s, g);
        if (mod_is_zero(r)) continue;
        g.push_back(r);
        for (std::size_t k = 0; k + 1 < g.size(); ++k) pairs.push_back({k, g.size() - 1});
    }
    // drop elements whose lead is divisible by another's
    std::vector<ModVec> m;
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto li = mod_lead(g[i]);
        bool redundant = false;
        for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
            if (i == j) continue;
            auto lj = mod_lead(g[j]);
            if (lj->pos == li->pos && mono_divides(lj->mono, li->mono) && (lj->mono != li->mono || j < i))
                redundant = true;
        }
        if (!redundant) m.push_back(g[i]);
    }
    return m;
}

inline bool module_member(const ModVec& v, const std::vector<ModVec>& gb) {
    return mod_is_zero(mod_normal_form(v, gb));
}

/// Generators of the syzygy module {c : sum_j c_j cols[j] = 0 in R^m}, R = P/(relations).
/// Relations are added as extra columns times each unit vector; their coefficients are dropped.
inline std::vector<ModVec> syzygies(const std::vector<ModVec>& cols, const std::vector<MPoly>& relations = {}) {
    if (cols.empty()) return {};
    const std::size_t m = cols[0].size();
    const std::size_t nv = cols[0][0].nvars();
    const MonoOrder ord = cols[0][0].order();
    std::vector<ModVec> all = cols;
    for (const auto& r : relations)
        for (std::size_t i = 0; i < m; ++i) {
            ModVec e(m, MPoly(nv, ord));
            e[i] = r;
            all.push_back(e);
        }
    const std::size_t k = all.size();
    std::vector<ModVec> aug;
    for (std::size_t j = 0; j < k; ++j) {
        ModVec v = all[j];
        for (std::size_t i = 0; i < k; ++i) v.push_back(MPoly::constant(nv, ord, i == j ? 1 : 0));
        aug.push_back(v);
    }
    auto gb = module_groebner(aug);
    std::vector<ModVec> out;
    for (auto& v : gb) {
        bool top_zero = true;
        for (std::size_t i = 0; i < m; ++i)
            if (!v[i].is_zero()) { top_zero = false; break; }
        if (!top_zero) continue;
        ModVec s(v.begin() + static_cast<std::ptrdiff_t>(m), v.begin() + static_cast<std::ptrdiff_t>(m + cols.size()));
        bool all_zero = true;
        for (auto& p : s)
            if (!p.is_zero()) { all_zero = false; break; }
        if (!all_zero) out.push_back(s);
    }
    return out;
}

/// Matrix (list of columns) times a coefficient vector.
inline ModVec mod_combine(const std::vector<ModVec>& cols, const ModVec& coeffs) {
    ModVec out(cols[0].size(), MPoly(cols[0][0].nvars(), cols[0][0].order()));
    for (std::size_t j = 0; j < cols.size(); ++j) out = mod_add(out, mod_scale(cols[j], coeffs[j]));
    return out;
}

}  // namespace gtr
