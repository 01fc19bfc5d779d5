#pragma once
/// @file json_io.hpp
/// @brief Canonical JSON for rings, elements, matrices, connection modules and reports.
/// Ring elements are written as polynomial strings in the ring's basis names and read back with
/// parse_elem; rationals are "p/q" strings. Object keys are sorted, so dumps are canonical.

#include <json.hpp>
#include <string>
#include <vector>

#include "gtr/algebra.hpp"
#include "gtr/connection.hpp"
#include "gtr/presets.hpp"
#include "gtr/report.hpp"
#include "gtr/upoly.hpp"

namespace gtr::json_io {

using json = nlohmann::json;

/// Versioned schema strings for scenarios and reports.
inline constexpr const char* kScenarioSchema = "gtr-scenario/1";
inline constexpr const char* kReportSchema = "gtr-report/1";

inline json to_json(const Rational& x) { return x.get_str(); }
inline json to_json(const RingElem& x) { return x.str(); }

inline json to_json(const Ring& R) {
    json rel = json::array();
    for (auto& p : R->ideal()) rel.push_back(p.str(R->generators()));
    return {{"generators", R->generators()}, {"relations", rel}, {"dim", R->dim()}};
}

inline json to_json(const RMat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        rows.push_back(row);
    }
    return rows;
}

inline json to_json(const QMat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).get_str());
        rows.push_back(row);
    }
    return rows;
}

inline json to_json(const Series& s) {
    json out = json::array();
    for (auto& m : s) out.push_back(to_json(m));
    return out;
}

inline json to_json(const UnivarPoly& p) {
    json out = json::array();
    for (auto& c : p.coeffs()) out.push_back(c.str());
    return out;
}

inline json to_json(const ConnectionModule& M) {
    return {{"rank", M.rank}, {"N", M.N}, {"window_shift", M.window_shift}, {"A", to_json(M.A)}};
}

/// Witness strings that hold JSON are embedded as JSON; anything else stays a string.
inline json witness_json(const std::string& w) {
    if (w.empty()) return nullptr;
    if (w.front() == '[' || w.front() == '{') {
        auto j = json::parse(w, nullptr, false);
        if (!j.is_discarded()) return j;
    }
    return w;
}

inline json to_json(const Report& r) {
    json checks = json::array();
    for (auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"witness", witness_json(c.witness)}});
    return {{"name", r.name}, {"ok", r.ok()}, {"checks", checks}};
}

// ---------------------------------------------------------------------------------------------
// Reading

inline const json& field(const json& j, const std::string& key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError("missing field '" + key + "'");
    return j.at(key);
}

inline std::string as_string(const json& j, const std::string& what) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw ParseError(what + ": expected a string or integer");
}

inline long as_long(const json& j, const std::string& what) {
    if (!j.is_number_integer()) throw ParseError(what + ": expected an integer");
    return j.get<long>();
}

inline Rational rational_from_json(const json& j, const std::string& what) {
    try {
        return parse_rational(as_string(j, what));
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(what + ": " + e.what());
    }
}

/// A preset name ("Q", "dual", "zh") or {"generators": [...], "relations": [...]}.
inline Ring ring_from_json(const json& j) {
    try {
        if (j.is_string()) return preset_ring(j.get<std::string>());
        auto gens = field(j, "generators").get<std::vector<std::string>>();
        std::vector<MPoly> ideal;
        for (auto& r : field(j, "relations")) ideal.push_back(parse_mpoly(as_string(r, "relation"), gens));
        return artin_ring_build(gens, ideal);
    } catch (const ParseError&) {
        throw;
    } catch (const AlgebraError& e) {
        throw ParseError(std::string("ring: ") + e.what());
    } catch (const json::exception& e) {
        throw ParseError(std::string("ring: ") + e.what());
    }
}

inline RingElem elem_from_json(const Ring& R, const json& j, const std::string& what) {
    try {
        return parse_elem(R, as_string(j, what));
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(what + ": " + e.what());
    }
}

inline RMat rmat_from_json(const Ring& R, const json& j, const std::string& what) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw ParseError(what + ": expected a nonempty array of rows");
    const std::size_t cols = j[0].size();
    RMat m(R, j.size(), cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw ParseError(what + ": ragged rows");
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = elem_from_json(R, j[i][c], what);
    }
    return m;
}

inline UnivarPoly upoly_from_json(const Ring& R, const json& j, const std::string& what) {
    if (!j.is_array()) throw ParseError(what + ": expected coefficients, constant term first");
    std::vector<RingElem> c;
    for (auto& x : j) c.push_back(elem_from_json(R, x, what));
    return UnivarPoly(R, c);
}

/// A list of square matrices A(0), A(1), ...; N defaults to the number of coefficients.
inline ConnectionModule connection_from_json(const Ring& R, const json& j, std::size_t N) {
    if (!j.is_array() || j.empty()) throw ParseError("A: expected a nonempty list of matrices");
    Series A;
    for (auto& m : j) A.push_back(rmat_from_json(R, m, "A"));
    for (auto& m : A)
        if (m.rows() != A[0].rows() || m.cols() != A[0].rows()) throw ParseError("A: coefficients must be square of equal size");
    return ConnectionModule::make(A, N ? N : A.size());
}

}  // namespace gtr::json_io
