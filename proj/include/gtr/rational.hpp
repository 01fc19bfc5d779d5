#pragma once
/// @file rational.hpp
/// @brief Exact rationals on top of GMP, plus canonical string forms.

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace gtr {

using Rational = mpq_class;
using Integer = mpz_class;

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }

/// "num/den" with den > 0; integers keep the "/1".
inline std::string to_string(const Rational& x) {
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline Rational parse_rational(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
}

inline Rational binomial_half(unsigned i) {
    // binom(1/2, i)
    Rational r = 1;
    for (unsigned j = 0; j < i; ++j) r *= (Rational(1, 2) - j) / Rational(j + 1);
    return r;
}

}  // namespace gtr
