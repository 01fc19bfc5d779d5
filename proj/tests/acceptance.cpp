// Acceptance run: one line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gtr/suites.hpp"
#include "oracles.hpp"

using namespace gtr;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::size_t checks = 0;
    std::string note;

    void add(bool ok, const std::string& what) {
        ++checks;
        if (!ok && pass) note = what;
        pass = pass && ok;
    }
    void take(const Report& r, const std::string& prefix = "") {
        for (auto& c : r.checks)
            if (c.name.rfind(prefix, 0) == 0) add(c.pass, c.name + (c.witness.empty() ? "" : " [" + c.witness + "]"));
    }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Outcome criterion_springer(const SuiteReport& s) {
    Outcome o;
    o.take(s.report, "charpoly factorization: ");
    o.take(s.report, "periodic exactness: ");
    o.take(s.report, "presentation: ");
    o.add(s.seconds < 10.0, "springer suite took " + std::to_string(s.seconds) + " s");
    return o;
}

Outcome criterion_fibers(const SuiteReport& s) {
    Outcome o;
    Ring Q = ring_Q();
    std::mt19937_64 rng(11);
    int seen[3] = {0, 0, 0};
    for (int i = 0; i < 20; ++i) {
        QMat nu = detail::seeded_operator(rng, i);
        const int expect = oracle::fiber_kind_by_discriminant(nu);
        const int got = static_cast<int>(fiber_type(RMat::from_q(Q, nu)).kind);
        o.add(got == expect, "operator " + std::to_string(i) + ": fiber_type " + std::to_string(got) + ", discriminant rule " +
                                 std::to_string(expect));
        ++seen[expect];
    }
    o.add(seen[0] > 0 && seen[1] > 0 && seen[2] > 0, "not all three types were generated");
    o.take(s.report, "presentation: origin fiber");
    return o;
}

Outcome criterion_vk() {
    Outcome o;
    for (unsigned l = 0; l <= 8; ++l) {
        Gl2Module V = build_Vk(l);
        o.add(check_brackets(V).ok, "brackets on V_" + std::to_string(l));
        const long c = static_cast<long>(l * l + 2 * l);
        o.add(V.casimir() == RMat::scalar(V.base, V.rank, RingElem::scalar(V.base, c)), "Casimir on V_" + std::to_string(l));
    }
    return o;
}

Outcome criterion_clebsch_gordan(const SuiteReport& s) {
    Outcome o;
    for (int m = 1; m <= 4; ++m) {
        Gl2Module M = detail::v1_power(m);
        std::size_t total = 0;
        for (auto& [w, mult] : oracle::v1_power_constituents(m)) {
            auto E = generalized_eigenspace(M, character_of(M.base, w));
            const std::size_t expect = static_cast<std::size_t>(mult) * static_cast<std::size_t>(w.first - w.second + 1);
            o.add(E.module.rank == expect, "V1^" + std::to_string(m) + " piece (" + std::to_string(w.first) + "," +
                                               std::to_string(w.second) + ") has rank " + std::to_string(E.module.rank));
            total += E.module.rank;
        }
        o.add(total == M.rank, "V1^" + std::to_string(m) + " pieces do not exhaust the module");
    }
    o.take(s.report, "V1 powers: ");
    o.take(s.report, "composition of translations: ");
    return o;
}

Outcome criterion_translation(const SuiteReport& s) {
    Outcome o;
    o.take(s.report, "closed forms");
    const std::vector<Ring> rings{ring_Q(), ring_dual(), ring_zh()};
    for (long k = 1; k <= 3; ++k)
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const Ring& R = rings[seed % 3];
            auto [z, h] = detail::nilpotent_zh(R, seed);
            const std::size_t N = static_cast<std::size_t>(k) + 3;
            auto D = seeded_with_roots(detail::k_elem(R, k) + z - h, z + h, seed, N);
            const std::string tag = R->describe() + " k=" + std::to_string(k) + " seed=" + std::to_string(seed);
            for (Weight mu : {Weight{k - 1, k}, Weight{k, 0}}) {
                auto tr = translate_conn(D, {k - 1, 0}, mu);
                auto ch = character_of(R, mu);
                o.add(same_span(tr.E, oracle::translation_eigenspace(D, tr.tensor.l, tr.tensor.det, N, ch.c, ch.z)),
                      tag + ": eigenspace differs from the brute-force oracle");
            }
        }
    return o;
}

Outcome criterion_cech(const SuiteReport& s) {
    Outcome o;
    for (const Ring& R : {ring_Q(), ring_dual(), ring_zh()})
        for (long d = -3; d <= 3; ++d) {
            auto c = cech_p1(d, R);
            auto [h0, h1] = oracle::cech_line_bundle_dims(d);
            const long dim = static_cast<long>(R->dim());
            o.add(static_cast<long>(c.h0) == h0 * dim && static_cast<long>(c.h1) == h1 * dim,
                  R->describe() + " O(" + std::to_string(d) + "): " + std::to_string(c.h0) + "," + std::to_string(c.h1));
        }
    o.take(s.report, "H0 and H1 of the universal modification: ");
    return o;
}

Outcome criterion_theorem(const SuiteReport& s) {
    Outcome o;
    o.take(s.report, "de Rham direct sum: ");
    o.take(s.report, "non de Rham self-extension: ");
    o.take(s.report, "eigenspace characterization: ");
    bool pushforward = false, cz = false, cnz = false;
    for (auto& c : s.report.checks) {
        pushforward |= c.name == "non de Rham self-extension: T Delta = f_* D over Q[h]/h^2" && c.pass;
        cz |= c.name.rfind("non de Rham self-extension: ", 0) == 0 && c.name.find("c^2 = 0") != std::string::npos && c.pass;
        cnz |= c.name.rfind("non de Rham self-extension: ", 0) == 0 && c.name.find("c != 0") != std::string::npos && c.pass;
    }
    o.add(pushforward, "translation vs pushforward comparison missing");
    o.add(cz && cnz, "c^2 = 0 and c != 0 checks missing");
    return o;
}

}  // namespace

int main() {
    const auto start = Clock::now();
    auto suite = [](const std::string& name) { return run_suite(name); };
    const SuiteReport springer = suite("springer"), vk = suite("vk"), structure = suite("structure"),
                      translation = suite("translation"), counit = suite("counit"), weights = suite("weights"),
                      appendix = suite("appendix"), theorem = suite("theorem");

    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"springer relations, syzygies and presentation", [&] { return criterion_springer(springer); }},
        {"fiber classification by discriminant", [&] { return criterion_fibers(springer); }},
        {"V_l brackets and Casimir l^2+2l, l <= 8", [] { return criterion_vk(); }},
        {"Clebsch-Gordan ranks and composed translations", [&] { return criterion_clebsch_gordan(vk); }},
        {"standard structure on seeded modules",
         [&] {
             Outcome o;
             o.take(structure.report, "standard structure: ");
             return o;
         }},
        {"nonregular Casimir relation on D (x) V_1",
         [&] {
             Outcome o;
             o.take(structure.report, "nonregular relation: ");
             return o;
         }},
        {"translation closed forms and eigenspace oracle", [&] { return criterion_translation(translation); }},
        {"counit composites",
         [&] {
             Outcome o;
             o.take(counit.report);
             return o;
         }},
        {"change of weights uniqueness and Hensel bound",
         [&] {
             Outcome o;
             o.take(weights.report);
             return o;
         }},
        {"normal form and filtration round trips",
         [&] {
             Outcome o;
             o.take(appendix.report);
             return o;
         }},
        {"Cech cohomology on P1", [&] { return criterion_cech(theorem); }},
        {"direct sum, self-extension and pushforward", [&] { return criterion_theorem(theorem); }},
    };

    bool all = true;
    int index = 1;
    for (auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.add(false, std::string("exception: ") + e.what());
        }
        if (o.checks == 0) o.add(false, "no checks ran");
        all = all && o.pass;
        std::printf("[%s] criterion %2d: %s (%zu checks)%s%s\n", o.pass ? "PASS" : "FAIL", index++, name.c_str(), o.checks,
                    o.pass ? "" : " first failure: ", o.note.c_str());
    }
    const double total = seconds_since(start);
    const bool fast = total < 120.0;
    all = all && fast;
    std::printf("[%s] criterion 13: full run single-threaded in %.2f s (< 120 s)\n", fast ? "PASS" : "FAIL", total);
    return all ? 0 : 1;
}
