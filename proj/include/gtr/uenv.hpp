#pragma once
/// @file uenv.hpp
/// @brief PBW normal forms in U(gl2) with basis u-^a h^b z^c u+^d.

#include <array>
#include <map>
#include <string>

#include "gtr/rational.hpp"

namespace gtr {

enum class Gen { UPlus, UMinus, APlus, AMinus, H, Z };

class UEnvElement {
public:
    using Key = std::array<int, 4>;  // exponents of u-, h, z, u+

    UEnvElement() = default;
    static UEnvElement scalar(const Rational& c) {
        UEnvElement x;
        x.add({0, 0, 0, 0}, c);
        return x;
    }
    static UEnvElement gen(Gen g) {
        UEnvElement x;
        switch (g) {
            case Gen::UMinus: x.add({1, 0, 0, 0}, 1); break;
            case Gen::H: x.add({0, 1, 0, 0}, 1); break;
            case Gen::Z: x.add({0, 0, 1, 0}, 1); break;
            case Gen::UPlus: x.add({0, 0, 0, 1}, 1); break;
            case Gen::APlus:
                x.add({0, 0, 1, 0}, Rational(1, 2));
                x.add({0, 1, 0, 0}, Rational(1, 2));
                break;
            case Gen::AMinus:
                x.add({0, 0, 1, 0}, Rational(1, 2));
                x.add({0, 1, 0, 0}, Rational(-1, 2));
                break;
        }
        return x;
    }
    /// Product of a word of generators, normalized.
    static UEnvElement word(const std::vector<Gen>& w) {
        UEnvElement x = scalar(1);
        for (auto g : w) x = x * gen(g);
        return x;
    }
    /// h^2 - 2h + 4 u+ u-
    static UEnvElement casimir() {
        auto h = gen(Gen::H);
        return h * h - h * Rational(2) + gen(Gen::UPlus) * gen(Gen::UMinus) * Rational(4);
    }

    const std::map<Key, Rational>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool operator==(const UEnvElement& o) const { return t_ == o.t_; }
    bool operator!=(const UEnvElement& o) const { return t_ != o.t_; }

    UEnvElement operator+(const UEnvElement& o) const {
        UEnvElement r = *this;
        for (auto& [k, c] : o.t_) r.add(k, c);
        return r;
    }
    UEnvElement operator-(const UEnvElement& o) const { return *this + o * Rational(-1); }
    UEnvElement operator*(const Rational& s) const {
        UEnvElement r;
        if (sgn(s) == 0) return r;
        for (auto& [k, c] : t_) r.t_[k] = c * s;
        return r;
    }
    UEnvElement operator*(const UEnvElement& o) const {
        UEnvElement r;
        for (auto& [k1, c1] : t_)
            for (auto& [k2, c2] : o.t_) r = r + mono_product(k1, k2) * (c1 * c2);
        return r;
    }
    UEnvElement bracket(const UEnvElement& o) const { return *this * o - o * *this; }

    /// Algebra automorphism induced by conjugation with [[0,1],[p,0]].
    UEnvElement ad_pi_twist(const Rational& p) const {
        const UEnvElement um = gen(Gen::UPlus) * (1 / p), h = gen(Gen::H) * Rational(-1), z = gen(Gen::Z),
                          up = gen(Gen::UMinus) * p;
        UEnvElement r;
        for (auto& [k, c] : t_) {
            UEnvElement m = scalar(c);
            for (int i = 0; i < k[0]; ++i) m = m * um;
            for (int i = 0; i < k[1]; ++i) m = m * h;
            for (int i = 0; i < k[2]; ++i) m = m * z;
            for (int i = 0; i < k[3]; ++i) m = m * up;
            r = r + m;
        }
        return r;
    }

    std::string str() const {
        if (t_.empty()) return "0";
        static const char* names[4] = {"u-", "h", "z", "u+"};
        std::string s;
        for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
            const auto& [k, c] = *it;
            std::string mono;
            for (int v = 0; v < 4; ++v) {
                if (!k[v]) continue;
                if (!mono.empty()) mono += "*";
                mono += names[v];
                if (k[v] > 1) mono += "^" + std::to_string(k[v]);
            }
            std::string cs = c.get_str();
            std::string term = mono.empty() ? cs : (c == 1 ? mono : (c == -1 ? "-" + mono : cs + "*" + mono));
            if (s.empty()) s = term;
            else s += term[0] == '-' ? " - " + term.substr(1) : " + " + term;
        }
        return s;
    }

private:
    void add(const Key& k, const Rational& c) {
        if (sgn(c) == 0) return;
        auto it = t_.find(k);
        if (it == t_.end()) t_[k] = c;
        else {
            it->second += c;
            if (sgn(it->second) == 0) t_.erase(it);
        }
    }

    // g * (normal monomial k)
    static UEnvElement left_gen(Gen g, const Key& k) {
        UEnvElement r;
        const int a = k[0], b = k[1], c = k[2], d = k[3];
        switch (g) {
            case Gen::UMinus: r.add({a + 1, b, c, d}, 1); break;
            case Gen::Z: r.add({a, b, c + 1, d}, 1); break;
            case Gen::H:  // h u-^a = u-^a (h - 2a)
                r.add({a, b + 1, c, d}, 1);
                r.add({a, b, c, d}, Rational(-2 * a));
                break;
            case Gen::UPlus: {
                // u+ u-^a = u-^a u+ + a u-^(a-1) (h - a + 1);  u+ h^b = (h - 2)^b u+
                Rational binom = 1;
                for (int j = 0; j <= b; ++j) {
                    Rational coef = binom;
                    for (int s = 0; s < b - j; ++s) coef *= -2;
                    r.add({a, j, c, d + 1}, coef);
                    binom = binom * Rational(b - j) / Rational(j + 1);
                }
                if (a > 0) {
                    r.add({a - 1, b + 1, c, d}, Rational(a));
                    r.add({a - 1, b, c, d}, Rational(a * (1 - a)));
                }
                break;
            }
            default: {
                UEnvElement x = gen(g), y;
                y.add(k, 1);
                return x * y;
            }
        }
        return r;
    }

    static UEnvElement apply_left(Gen g, const UEnvElement& y) {
        UEnvElement r;
        for (auto& [k, c] : y.t_) r = r + left_gen(g, k) * c;
        return r;
    }

    static UEnvElement mono_product(const Key& k1, const Key& k2) {
        UEnvElement y;
        y.add(k2, 1);
        for (int i = 0; i < k1[3]; ++i) y = apply_left(Gen::UPlus, y);
        for (int i = 0; i < k1[2]; ++i) y = apply_left(Gen::Z, y);
        for (int i = 0; i < k1[1]; ++i) y = apply_left(Gen::H, y);
        for (int i = 0; i < k1[0]; ++i) y = apply_left(Gen::UMinus, y);
        return y;
    }

    std::map<Key, Rational> t_;
};

inline UEnvElement pbw_normal_form(const std::vector<std::pair<Rational, std::vector<Gen>>>& words) {
    UEnvElement r;
    for (auto& [c, w] : words) r = r + UEnvElement::word(w) * c;
    return r;
}

}  // namespace gtr
