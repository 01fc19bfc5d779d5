#pragma once
/// @file scenario.hpp
/// @brief One-off computations described by a JSON scenario. See docs/formats.md.

#include <functional>
#include <limits>
#include <map>
#include <string>

#include "gtr/geom.hpp"
#include "gtr/json_io.hpp"
#include "gtr/springer.hpp"

namespace gtr {

struct ScenarioConfig {
    std::size_t truncation = 0;  // 0: taken from the inputs
    std::uint64_t seed = 0;
    long prime = 5;
    long window_slack = 0;
    int points = 50;
};

struct Scenario {
    std::string operation;
    json_io::json ring;  // null when the operation takes no ring
    json_io::json inputs;
    ScenarioConfig config;
};

struct ComputeResult {
    json_io::json output;
    int exit_code = 0;
};

namespace detail {

inline void check_range(const std::string& what, long v, long lo, long hi) {
    if (v < lo || v > hi)
        throw ParseError(what + " = " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

inline void read_config(const json_io::json& j, ScenarioConfig& c) {
    if (j.is_null()) return;
    if (!j.is_object()) throw ParseError("config: expected an object");
    for (auto& [k, v] : j.items()) {
        const long x = json_io::as_long(v, "config." + k);
        if (k == "truncation") check_range("config." + k, x, 0, 64), c.truncation = static_cast<std::size_t>(x);
        else if (k == "seed") check_range("config." + k, x, 0, std::numeric_limits<long>::max()), c.seed = static_cast<std::uint64_t>(x);
        else if (k == "prime") check_range("config." + k, x, 2, 1000003), c.prime = x;
        else if (k == "window_slack") check_range("config." + k, x, 0, 16), c.window_slack = x;
        else if (k == "points") check_range("config." + k, x, 1, 1000), c.points = static_cast<int>(x);
        else throw ParseError("config: unknown key '" + k + "'");
    }
}

inline json_io::json config_json(const ScenarioConfig& c) {
    return {{"truncation", c.truncation}, {"seed", c.seed}, {"prime", c.prime}, {"window_slack", c.window_slack}, {"points", c.points}};
}

inline Weight weight_from_json(const json_io::json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2) throw ParseError(what + ": expected [a, b]");
    return {json_io::as_long(j[0], what), json_io::as_long(j[1], what)};
}

inline std::vector<Rational> rationals_from_json(const json_io::json& j, const std::string& what) {
    if (!j.is_array()) throw ParseError(what + ": expected a list of rationals");
    std::vector<Rational> out;
    for (auto& x : j) out.push_back(json_io::rational_from_json(x, what));
    return out;
}

using Operation = std::function<json_io::json(const Ring&, const json_io::json&, const ScenarioConfig&)>;

inline const std::map<std::string, Operation>& operations() {
    using json = json_io::json;
    using namespace json_io;
    static const std::map<std::string, Operation> ops{
        {"hensel_factor",
         [](const Ring& R, const json& in, const ScenarioConfig&) -> json {
             auto P = upoly_from_json(R, field(in, "P"), "P");
             auto Q0 = UnivarPoly::from_q(R, rationals_from_json(field(in, "Q0"), "Q0"));
             auto S0 = UnivarPoly::from_q(R, rationals_from_json(field(in, "S0"), "S0"));
             auto h = hensel_factor(P, Q0, S0);
             return {{"Q", to_json(h.Q)}, {"S", to_json(h.S)}, {"iterations", h.iterations}, {"product_matches", h.Q * h.S == P}};
         }},
        {"fiber_type",
         [](const Ring& R, const json& in, const ScenarioConfig&) -> json {
             auto ft = fiber_type(rmat_from_json(R, field(in, "nu"), "nu"));
             json out{{"kind", to_string(ft.kind)}, {"q", to_json(ft.q)}};
             out["fiber_ring"] = ft.ring ? to_json(ft.ring) : json(nullptr);
             return out;
         }},
        {"tor_fiber",
         [](const Ring& R, const json& in, const ScenarioConfig&) -> json {
             auto tf = tor_fiber(rmat_from_json(R, field(in, "nu"), "nu"));
             json pieces = json::array();
             for (auto& [tw, deg] : tf.pieces) pieces.push_back({{"twist", tw}, {"degree", deg}});
             return {{"flat", tf.flat}, {"pieces", pieces}, {"ideal_twist", tf.ideal_twist}};
         }},
        {"sen_weights",
         [](const Ring& R, const json& in, const ScenarioConfig& c) -> json {
             auto M = connection_from_json(R, field(in, "A"), c.truncation);
             return {{"weights", sen_weights(M)}, {"sen_polynomial", to_json(M.sen_polynomial())}};
         }},
        {"fuchs_normalize",
         [](const Ring& R, const json& in, const ScenarioConfig& c) -> json {
             auto f = fuchs_normalize_weight0(connection_from_json(R, field(in, "A"), c.truncation));
             return {{"nu", to_json(f.nu)}, {"gauge", to_json(f.S)}};
         }},
        {"d_pdr",
         [](const Ring& R, const json& in, const ScenarioConfig& c) -> json {
             auto p = d_pdr(connection_from_json(R, field(in, "A"), c.truncation));
             json fil = json::array();
             for (auto& [i, B] : p.data.fil) fil.push_back({{"step", i}, {"basis", to_json(B)}});
             return {{"nu", to_json(p.data.nu)}, {"weights", p.data.weights}, {"filtration", fil}, {"valid", p.data.validate().ok()}};
         }},
        {"change_of_weights",
         [](const Ring& R, const json& in, const ScenarioConfig& c) -> json {
             auto r = change_weights_fh(connection_from_json(R, field(in, "A"), c.truncation));
             return {{"module", to_json(r.hensel)},
                     {"frame", {{"shift", r.route.frame.shift}, {"F", to_json(r.route.frame.F)}}},
                     {"hensel_iterations", r.route.max_iterations},
                     {"same_lattice", r.same_lattice}};
         }},
        {"translate",
         [](const Ring& R, const json& in, const ScenarioConfig& c) -> json {
             auto M = connection_from_json(R, field(in, "A"), 0);
             auto tr = translate_conn(M, weight_from_json(field(in, "lambda"), "lambda"), weight_from_json(field(in, "mu"), "mu"),
                                      c.truncation);
             return {{"rank", tr.lattice.module.rank}, {"weights", sen_weights(tr.lattice.module)}, {"module", to_json(tr.lattice.module)}};
         }},
        {"cech_line_bundle",
         [](const Ring& R, const json& in, const ScenarioConfig& c) -> json {
             const long d = as_long(field(in, "d"), "d");
             auto res = cech_p1(d, R, std::labs(d) + 2 + c.window_slack);
             return {{"h0", res.h0}, {"h1", res.h1}, {"H0_basis", to_json(res.H0)}};
         }},
        {"seeded_connection",
         [](const Ring& R, const json& in, const ScenarioConfig& c) -> json {
             std::vector<long> w;
             for (auto& x : field(in, "weights")) w.push_back(as_long(x, "weights"));
             if (w.empty()) throw ParseError("weights: expected at least one weight");
             return to_json(seeded_connection(R, w, c.seed, c.truncation ? c.truncation : 4));
         }},
        {"vk_check",
         [](const Ring&, const json& in, const ScenarioConfig&) -> json {
             const long l = as_long(field(in, "l"), "l");
             check_range("inputs.l", l, 0, 32);
             Gl2Module V = build_Vk(static_cast<unsigned>(l));
             const Rational c = l * l + 2 * l;
             return {{"brackets_ok", check_brackets(V).ok},
                     {"casimir_scalar", V.casimir() == RMat::scalar(V.base, V.rank, RingElem::scalar(V.base, c))},
                     {"casimir", to_json(V.casimir())}};
         }},
        {"periodic_exactness",
         [](const Ring&, const json&, const ScenarioConfig& c) -> json { return to_json(verify_periodic_exactness(c.seed, c.points)); }},
        {"boxtimes",
         [](const Ring&, const json& in, const ScenarioConfig& c) -> json {
             const long l = as_long(field(in, "l"), "l");
             check_range("inputs.l", l, 0, 8);
             return to_json(verify_boxtimes_translation(tensor(build_Vk(static_cast<unsigned>(l)), build_Vk(1)),
                                                        weight_from_json(field(in, "lambda"), "lambda"),
                                                        weight_from_json(field(in, "mu"), "mu"), Rational(c.prime)));
         }},
    };
    return ops;
}

}  // namespace detail

/// Parse and validate a scenario document. Throws ParseError.
inline Scenario parse_scenario(const std::string& text) {
    auto j = json_io::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("scenario is not valid JSON");
    if (!j.is_object()) throw ParseError("scenario: expected an object");
    for (auto& [k, v] : j.items())
        if (k != "schema" && k != "operation" && k != "ring" && k != "inputs" && k != "config")
            throw ParseError("scenario: unknown key '" + k + "'");
    const auto& schema = json_io::field(j, "schema");
    if (!schema.is_string() || schema.get<std::string>() != json_io::kScenarioSchema)
        throw ParseError(std::string("scenario: schema must be \"") + json_io::kScenarioSchema + "\"");
    Scenario s;
    const auto& op = json_io::field(j, "operation");
    if (!op.is_string()) throw ParseError("operation: expected a string");
    s.operation = op.get<std::string>();
    if (!detail::operations().count(s.operation)) throw ParseError("unknown operation '" + s.operation + "'");
    s.ring = j.contains("ring") ? j["ring"] : json_io::json("Q");
    s.inputs = j.contains("inputs") ? j["inputs"] : json_io::json::object();
    if (!s.inputs.is_object()) throw ParseError("inputs: expected an object");
    if (j.contains("config")) detail::read_config(j["config"], s.config);
    return s;
}

/// Run the scenario's operation. Input errors surface as ParseError; errors raised by the
/// operation itself are reported in the output with exit code 1.
inline ComputeResult compute(const Scenario& s) {
    using json = json_io::json;
    Ring R = json_io::ring_from_json(s.ring);
    json out{{"schema", json_io::kReportSchema}, {"operation", s.operation}, {"config", detail::config_json(s.config)}};
    try {
        out["result"] = detail::operations().at(s.operation)(R, s.inputs, s.config);
        const bool failed = out["result"].is_object() && out["result"].contains("ok") && !out["result"]["ok"].get<bool>();
        return {out, failed ? 1 : 0};
    } catch (const ParseError&) {
        throw;
    } catch (const AlgebraError& e) {
        out["error"] = {{"kind", e.kind}, {"message", e.what()}};
    } catch (const std::exception& e) {
        out["error"] = {{"kind", "Error"}, {"message", e.what()}};
    }
    return {out, 1};
}

}  // namespace gtr
