#pragma once
// Small recursive-descent reader for polynomial strings: + - * / ^, parentheses,
// rational literals and variable names.

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

namespace gtr {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

class PolyReader {
public:
    PolyReader(const std::string& s, const std::vector<std::string>& vars, MonoOrder ord)
        : s_(s), vars_(vars), ord_(ord) {}

    MPoly run() {
        MPoly p = expr();
        skip();
        if (pos_ != s_.size()) fail("trailing input");
        return p;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("cannot parse polynomial '" + s_ + "': " + what + " at offset " + std::to_string(pos_));
    }

    MPoly expr() {
        MPoly acc = MPoly::constant(vars_.size(), ord_, 0);
        bool neg = false;
        skip();
        if (eat('-')) neg = true;
        else eat('+');
        MPoly t = term();
        acc = neg ? acc - t : acc + t;
        while (true) {
            if (eat('+')) acc = acc + term();
            else if (eat('-')) acc = acc - term();
            else break;
        }
        return acc;
    }

    MPoly term() {
        MPoly acc = power();
        while (true) {
            if (eat('*')) acc = acc * power();
            else if (eat('/')) {
                MPoly d = power();
                if (d.is_zero() || d.degree() != 0) fail("division by a non-constant");
                acc = acc * (1 / d.lead_coeff());
            } else break;
        }
        return acc;
    }

    MPoly power() {
        MPoly b = atom();
        if (eat('^')) {
            skip();
            std::size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (st == pos_) fail("expected exponent");
            b = b.pow(static_cast<unsigned>(std::stoul(s_.substr(st, pos_ - st))));
        }
        return b;
    }

    MPoly atom() {
        skip();
        if (eat('(')) {
            MPoly p = expr();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        if (eat('-')) return -atom();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return MPoly::constant(vars_.size(), ord_, Rational(s_.substr(st, pos_ - st)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t st = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string name = s_.substr(st, pos_ - st);
            for (std::size_t v = 0; v < vars_.size(); ++v)
                if (vars_[v] == name) return MPoly::var(vars_.size(), ord_, v);
            pos_ = st;
            fail("unknown variable '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    const std::string& s_;
    const std::vector<std::string>& vars_;
    MonoOrder ord_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline MPoly parse_mpoly(const std::string& s, const std::vector<std::string>& vars, MonoOrder ord) {
    return detail::PolyReader(s, vars, ord).run();
}

}  // namespace gtr
