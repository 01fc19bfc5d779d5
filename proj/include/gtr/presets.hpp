#pragma once
/// @file presets.hpp
/// @brief The Artinian base rings used by the suites.

#include <string>

#include "gtr/algebra.hpp"

namespace gtr {

inline Ring ring_Q() { return FiniteAlgebra::rationals(); }

/// Q[e]/e^2
inline Ring ring_dual() { return artin_ring_build({"e"}, {parse_mpoly("e^2", {"e"})}); }

/// Q[z,h]/(z,h)^2
inline Ring ring_zh() {
    const std::vector<std::string> v{"z", "h"};
    return artin_ring_build(v, {parse_mpoly("z^2", v), parse_mpoly("z*h", v), parse_mpoly("h^2", v)});
}

inline Ring preset_ring(const std::string& name) {
    if (name == "Q") return ring_Q();
    if (name == "dual") return ring_dual();
    if (name == "zh") return ring_zh();
    throw AlgebraError("UnknownRing", "no preset ring named " + name);
}

}  // namespace gtr
