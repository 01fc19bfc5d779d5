#pragma once
/// @file suites.hpp
/// @brief Named verification suites. Each suite is a list of independent seeded tasks; the
/// runner executes them on a small worker pool and assembles the report in task order.

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gtr/geom.hpp"
#include "gtr/presets.hpp"
#include "gtr/springer.hpp"

namespace gtr {

struct UnknownSuite : std::invalid_argument {
    explicit UnknownSuite(const std::string& name) : std::invalid_argument("unknown suite: " + name) {}
};

struct SuiteOptions {
    std::uint64_t seed = 0;
    std::size_t truncation = 0;  // 0: per-task default
    Rational prime = 5;
    unsigned jobs = 1;
};

struct SuiteTask {
    std::string name;
    std::function<Report()> run;
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    Report report;
    double seconds = 0;
    bool ok() const { return report.ok(); }
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"springer", "vk", "structure", "translation", "counit",
                                                "weights", "theorem", "appendix"};
    return names;
}

namespace detail {

inline std::vector<Ring> preset_rings() { return {ring_Q(), ring_dual(), ring_zh()}; }

inline std::size_t pick_n(const SuiteOptions& o, std::size_t fallback) { return o.truncation ? std::max(o.truncation, fallback) : fallback; }

inline std::string seed_tag(const Ring& R, std::uint64_t seed) { return R->describe() + " seed " + std::to_string(seed); }

inline std::string qmat_str(const QMat& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s += i ? ",[" : "[";
        for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? ",\"" : "\"") + m(i, j).get_str() + "\"";
        s += "]";
    }
    return s + "]";
}

inline std::string rmat_str(const RMat& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s += i ? ",[" : "[";
        for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? ",\"" : "\"") + m(i, j).str() + "\"";
        s += "]";
    }
    return s + "]";
}

inline std::string series_str(const Series& S) {
    std::string s = "[";
    for (std::size_t k = 0; k < S.size(); ++k) s += (k ? "," : "") + rmat_str(S[k]);
    return s + "]";
}

/// Seeded 2x2 rational operator of kind i mod 3: regular semisimple, regular nilpotent
/// shifted, or scalar, conjugated by a random invertible matrix.
inline QMat seeded_operator(std::mt19937_64& rng, int i) {
    std::uniform_int_distribution<int> d(-4, 4);
    QMat P(2, 2);
    do {
        for (int k = 0; k < 4; ++k) P(k / 2, k % 2) = d(rng);
    } while (det(P) == 0);
    QMat core(2, 2);
    Rational z = d(rng);
    switch (i % 3) {
        case 0: core(0, 0) = z + 1 + (i % 2), core(1, 1) = z - 1; break;
        case 1: core(0, 0) = z, core(1, 1) = z, core(0, 1) = 1; break;
        default: core(0, 0) = z, core(1, 1) = z; break;
    }
    return P * core * *inverse(P);
}

inline Report fiber_classification(std::uint64_t seed) {
    Report r("fiber classification");
    Ring Q = ring_Q();
    std::mt19937_64 rng(seed + 11);
    int counts[3] = {0, 0, 0};
    for (int i = 0; i < 20; ++i) {
        QMat nu = seeded_operator(rng, i);
        Rational tr = nu(0, 0) + nu(1, 1), disc = tr * tr - 4 * det(nu);
        bool scalar = sgn(nu(0, 1)) == 0 && sgn(nu(1, 0)) == 0 && nu(0, 0) == nu(1, 1);
        FiberKind expect = scalar ? FiberKind::FullFlag : (sgn(disc) != 0 ? FiberKind::EtaleRank2 : FiberKind::RamifiedDouble);
        auto ft = fiber_type(RMat::from_q(Q, nu));
        r.add("operator " + std::to_string(i) + " is " + to_string(expect), ft.kind == expect && ft.q.coords()[0] * 4 == disc,
              "{\"nu\":" + qmat_str(nu) + ",\"kind\":\"" + to_string(ft.kind) + "\"}");
        ++counts[static_cast<int>(ft.kind)];
    }
    r.add("all three fiber types occur", counts[0] > 0 && counts[1] > 0 && counts[2] > 0,
          std::to_string(counts[0]) + "/" + std::to_string(counts[1]) + "/" + std::to_string(counts[2]));
    return r;
}

inline Gl2Module v1_power(int m) {
    Gl2Module M = build_Vk(1);
    for (int i = 1; i < m; ++i) M = tensor(M, build_Vk(1));
    return M;
}

/// Constituents of V_1^(x)m by generalized eigenspaces of the characters (a, m - a), a >= m - a.
inline Report v1_power_decomposition(int m) {
    Report r("V1^" + std::to_string(m));
    Gl2Module M = v1_power(m);
    QMat all(M.rank, 0);
    std::string wit = "{";
    for (long a = m; 2 * a >= m; --a) {
        Weight w{a, m - a};
        auto E = generalized_eigenspace(M, character_of(M.base, w));
        const std::size_t width = static_cast<std::size_t>(2 * a - m + 1);
        const bool closed = check_brackets(E.module).ok;
        r.add("(" + std::to_string(a) + "," + std::to_string(m - a) + ") piece is a gl2-module of rank divisible by " +
                  std::to_string(width),
              closed && E.module.rank % width == 0, std::to_string(E.module.rank));
        wit += (wit.size() > 1 ? ",\"" : "\"") + std::to_string(a) + "," + std::to_string(m - a) + "\":" + std::to_string(E.module.rank);
        all = hcat(all, E.inclusion.residue());
    }
    r.add("pieces span V1^" + std::to_string(m), rank(all) == M.rank && all.cols() == M.rank, wit + "}");
    return r;
}

inline RingElem k_elem(const Ring& R, long k) { return RingElem::scalar(R, Rational(k)); }

inline std::pair<RingElem, RingElem> nilpotent_zh(const Ring& R, std::uint64_t seed) {
    std::mt19937_64 rng(seed + 1000);
    return {random_elem(R, rng, 2, true), random_elem(R, rng, 2, true)};
}

inline RMat from_strings(const Ring& R, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::vector<RingElem>> e;
    for (auto& row : rows) {
        e.emplace_back();
        for (auto& x : row) e.back().push_back(parse_elem(R, x));
    }
    return RMat::from_rows(R, e);
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------
// Suites

inline std::vector<SuiteTask> springer_tasks(const SuiteOptions& o) {
    return {
        {"charpoly factorization", [] { return charpoly_factorization_check(); }},
        {"periodic exactness", [o] { return verify_periodic_exactness(o.seed, 50); }},
        {"presentation", [] { return verify_presentation(); }},
        {"fiber classification", [o] { return detail::fiber_classification(o.seed); }},
    };
}

inline std::vector<SuiteTask> vk_tasks(const SuiteOptions&) {
    std::vector<SuiteTask> t;
    t.push_back({"V_l brackets and Casimir", [] {
                     Report r("V_l");
                     for (unsigned l = 0; l <= 8; ++l) {
                         Gl2Module V = build_Vk(l);
                         auto br = check_brackets(V);
                         std::string failed;
                         for (auto& f : br.failures) failed += f + " ";
                         r.add("l=" + std::to_string(l) + " brackets", br.ok, failed);
                         const long c = static_cast<long>(l * l + 2 * l);
                         r.add("l=" + std::to_string(l) + " Casimir = " + std::to_string(c),
                               V.casimir() == RMat::scalar(V.base, V.rank, RingElem::scalar(V.base, c)));
                     }
                     return r;
                 }});
    for (int m = 1; m <= 4; ++m) t.push_back({"V1 powers", [m] { return detail::v1_power_decomposition(m); }});
    t.push_back({"composition of translations", [] {
                     Report r("composition");
                     auto M = tensor(build_Vk(2), build_Vk(1));
                     Weight l1{2, 1}, l2{3, 1}, l3{4, 2};
                     auto twice = translate_chain(M, {l1, l2, l3});
                     auto once = translate_abstract(M, l1, l3);
                     auto S = intertwiner(twice, once, 7);
                     r.add("chain (2,1)->(3,1)->(4,2) isomorphic to direct translation", once.rank > 0 && S.has_value(),
                           S ? detail::rmat_str(*S) : "ranks " + std::to_string(twice.rank) + " vs " + std::to_string(once.rank));
                     return r;
                 }});
    return t;
}

inline std::vector<SuiteTask> structure_tasks(const SuiteOptions& o) {
    std::vector<SuiteTask> t;
    const std::size_t N = detail::pick_n(o, 5);
    for (const Ring& R : detail::preset_rings())
        t.push_back({"standard structure", [R, N, o] {
                         Report r("standard structure");
                         for (std::uint64_t i = 0; i < 10; ++i) {
                             const std::uint64_t seed = o.seed + i;
                             auto G = standard_g_structure(seeded_connection(R, {0, static_cast<long>(seed % 3)}, seed, N));
                             r.merge(check_brackets(G), detail::seed_tag(R, seed) + ": ");
                             r.merge(check_standard_scalars(G), detail::seed_tag(R, seed) + ": ");
                         }
                         return r;
                     }});
    t.push_back({"nonregular relation", [o, N] {
                     Report r("nonregular relation");
                     auto rings = detail::preset_rings();
                     for (std::uint64_t i = 0; i < 10; ++i) {
                         const std::uint64_t seed = o.seed + i;
                         const Ring& R = rings[seed % 3];
                         auto G = build_tensor(seeded_connection(R, {0, 0}, seed, N), 1, 0, N);
                         r.add(detail::seed_tag(R, seed) + ": (c - g1^2 + 4 g0)^2 - 4(g1^2 - 4 g0) = 0", casimir_relation(G).is_zero());
                     }
                     return r;
                 }});
    t.push_back({"Casimir two ways", [o] {
                     Report r("Casimir on D (x) V_l");
                     for (const Ring& R : detail::preset_rings())
                         for (unsigned l : {1u, 2u}) {
                             auto D = seeded_connection(R, {0, 2}, o.seed + 30 + l, 6);
                             r.add(R->describe() + " l=" + std::to_string(l) + ": closed form = operator expression",
                                   casimir_tensor(build_tensor(D, 0, 0, 6), l).agree);
                         }
                     return r;
                 }});
    return t;
}

inline std::vector<SuiteTask> translation_tasks(const SuiteOptions& o) {
    std::vector<SuiteTask> t;
    for (long k = 1; k <= 3; ++k)
        t.push_back({"closed forms k=" + std::to_string(k), [k, o] {
                         Report r("translation k=" + std::to_string(k));
                         auto rings = detail::preset_rings();
                         const std::size_t N = detail::pick_n(o, static_cast<std::size_t>(k) + 3);
                         for (std::uint64_t i = 0; i < 5; ++i) {
                             const std::uint64_t seed = o.seed + i;
                             const Ring& R = rings[seed % 3];
                             auto [z, h] = detail::nilpotent_zh(R, seed);
                             auto D = seeded_with_roots(detail::k_elem(R, k) + z - h, z + h, seed, N);
                             const std::string tag = detail::seed_tag(R, seed) + ": ";
                             auto a = translate_conn(D, {k - 1, 0}, {k - 1, k});
                             r.add(tag + "(0,k)->(k,k) has rank 2 and weights (k,k)",
                                   a.lattice.module.rank == 2 && sen_weights(a.lattice.module) == std::vector<long>{k, k});
                             r.add(tag + "(0,k)->(k,k) equals its closed form", same_span(a.tensor.pi0() * a.E, closed_form_to_kk(D, k, N)));
                             r.add(tag + "recursion for the (k,k) translate", recursion_holds(a, sen_roots(D, k).first));
                             auto b = translate_conn(D, {k - 1, 0}, {k, 0});
                             r.add(tag + "(0,k)->(0,k+1) has weights (0,k+1)", sen_weights(b.lattice.module) == std::vector<long>{0, k + 1});
                             r.add(tag + "(0,k)->(0,k+1) equals its closed form",
                                   same_span(b.tensor.pi0() * b.E, closed_form_to_0k(D, k, 1, N)));
                         }
                         return r;
                     }});
    t.push_back({"composition", [o] {
                     Report r("composition of connection translations");
                     Ring Q = ring_Q();
                     auto D = seeded_with_roots(detail::k_elem(Q, 1), detail::k_elem(Q, 0), o.seed + 8, 7);
                     auto once = translate_conn(D, {0, 0}, {2, 0});
                     auto first = translate_conn(D, {0, 0}, {1, 0});
                     auto twice = translate_conn(first.lattice.module, {1, 0}, {2, 0});
                     const std::size_t p = std::min(once.lattice.module.N, twice.lattice.module.N);
                     auto S = connection_isomorphism(once.lattice.module, twice.lattice.module, p);
                     r.add("(0,0)->(2,0) isomorphic to (0,0)->(1,0)->(2,0)", S.has_value(), S ? detail::series_str(*S) : "");
                     return r;
                 }});
    t.push_back({"boxtimes", [o] {
                     return verify_boxtimes_translation(tensor(build_Vk(2), build_Vk(1)), {2, 1}, {3, 1}, o.prime);
                 }});
    return t;
}

inline std::vector<SuiteTask> counit_tasks(const SuiteOptions& o) {
    std::vector<SuiteTask> t;
    const std::size_t N = detail::pick_n(o, 6);
    for (std::uint64_t i = 0; i < 5; ++i)
        t.push_back({"counit", [i, o, N] {
                         const std::uint64_t seed = o.seed + i;
                         Ring R = i == 0 ? ring_Q() : ring_zh();
                         auto [z, h] = detail::nilpotent_zh(R, seed);
                         auto D = seeded_with_roots(z - h + detail::k_elem(R, 1), z + h, seed, N);
                         auto res = counit_check(D, h, N);
                         Report r("counit");
                         r.merge(res.report, detail::seed_tag(R, seed) + " z=" + z.str() + " h=" + h.str() + ": ");
                         return r;
                     }});
    return t;
}

inline std::vector<SuiteTask> weights_tasks(const SuiteOptions& o) {
    std::vector<SuiteTask> t;
    for (std::uint64_t i = 0; i < 10; ++i)
        t.push_back({"change of weights", [i, o] {
                         const std::uint64_t seed = o.seed + 40 + i;
                         const long k = static_cast<long>(i % 4);
                         const Ring R = detail::preset_rings()[i % 3];
                         auto M = seeded_connection(R, {0, k}, seed, detail::pick_n(o, static_cast<std::size_t>(k) + 3));
                         auto res = change_weights_fh(M);
                         const int bound = static_cast<int>(std::ceil(std::log2(R->nilpotency_index()))) + 1;
                         const std::string tag = detail::seed_tag(R, seed) + " k=" + std::to_string(k) + ": ";
                         Report r("change of weights");
                         r.add(tag + "Hensel and filtration lattices agree", res.same_lattice);
                         r.add(tag + "Hensel iterations within bound", res.route.max_iterations <= bound,
                               std::to_string(res.route.max_iterations) + " <= " + std::to_string(bound));
                         r.add(tag + "result has weights (0,0)", sen_weights(res.hensel) == std::vector<long>{0, 0});
                         return r;
                     }});
    t.push_back({"Hensel factorization", [] {
                     Report r("Hensel factorization");
                     Ring R = artin_ring_build({"e"}, {parse_mpoly("e^8", {"e"})});
                     auto e = parse_elem(R, "e");
                     auto one = RingElem::scalar(R, 1);
                     auto Q = UnivarPoly::linear(R, e * e + e * Rational(3));
                     auto S = UnivarPoly(R, {one + e, e * e * e, one});
                     auto h = hensel_factor(Q * S, UnivarPoly::from_q(R, {0, 1}), UnivarPoly::from_q(R, {1, 0, 1}));
                     const int bound = static_cast<int>(std::ceil(std::log2(R->nilpotency_index()))) + 1;
                     r.add("Q[e]/e^8: product equals the input", h.Q * h.S == Q * S);
                     r.add("Q[e]/e^8: factors are the unique lifts", h.Q == Q && h.S == S);
                     r.add("Q[e]/e^8: iterations within bound", h.iterations <= bound,
                           std::to_string(h.iterations) + " <= " + std::to_string(bound));
                     Ring D = ring_dual();
                     auto ed = parse_elem(D, "e");
                     auto oned = RingElem::scalar(D, 1);
                     UnivarPoly P(D, {ed, -(oned + ed), oned});
                     auto hd = hensel_factor(P, UnivarPoly::from_q(D, {0, 1}), UnivarPoly::from_q(D, {-1, 1}));
                     r.add("Q[e]/e^2: T^2 - (1+e)T + e = (T - e)(T - 1)",
                           hd.Q == UnivarPoly::linear(D, ed) && hd.S == UnivarPoly::linear(D, oned) && hd.Q * hd.S == P);
                     return r;
                 }});
    return t;
}

inline std::vector<SuiteTask> appendix_tasks(const SuiteOptions& o) {
    std::vector<SuiteTask> t;
    for (const Ring& R : detail::preset_rings())
        t.push_back({"round trips", [R, o] {
                         Report r("appendix round trips");
                         for (std::uint64_t i = 0; i < 4; ++i) {
                             const std::uint64_t seed = o.seed + i;
                             auto M = seeded_connection(R, {0, 0}, seed, detail::pick_n(o, 5));
                             auto f = fuchs_normalize_weight0(M);
                             auto C = ConnectionModule::constant(f.nu, M.N);
                             const std::string tag = detail::seed_tag(R, seed) + ": ";
                             r.add(tag + "Fuchs gauge reaches the constant connection", gauge_transform(M, f.S) == C, detail::series_str(f.S));
                             r.add(tag + "inverse gauge returns to M", gauge_transform(C, *series_inverse(f.S, M.N)) == M);
                             bool inv = !graded_piece_invertible(M, 0);
                             for (long g : {-3, -2, -1, 1, 2, 3}) inv = inv && graded_piece_invertible(M, g);
                             r.add(tag + "nabla invertible on graded pieces exactly for i != 0", inv);
                         }
                         for (long k = 0; k <= 3; ++k) {
                             const std::uint64_t seed = o.seed + 20 + static_cast<std::uint64_t>(k);
                             auto M = seeded_connection(R, {0, k}, seed, detail::pick_n(o, static_cast<std::size_t>(k) + 3));
                             auto rt = pdr_round_trip(M);
                             const std::string tag = detail::seed_tag(R, seed) + " k=" + std::to_string(k) + ": ";
                             r.add(tag + "lattice_from_filtration o d_pdr is gauge equivalent to M",
                                   rt.gauge_matches && rt.S[0].inverse().has_value(), detail::series_str(rt.S));
                             r.add(tag + "filtration data valid", rt.lattice.module.rank == M.rank);
                         }
                         return r;
                     }});
    return t;
}

inline std::vector<SuiteTask> theorem_tasks(const SuiteOptions& o) {
    std::vector<SuiteTask> t;
    t.push_back({"Cech line bundles", [] {
                     Report r("Cech cohomology of O(d)");
                     for (const Ring& R : detail::preset_rings())
                         for (long d = -3; d <= 3; ++d) {
                             auto c = cech_p1(d, R);
                             const long dim = static_cast<long>(R->dim());
                             const long h0 = d >= 0 ? d + 1 : 0, h1 = d <= -2 ? -d - 1 : 0;
                             r.add(R->describe() + " O(" + std::to_string(d) + ")",
                                   static_cast<long>(c.h0) == h0 * dim && static_cast<long>(c.h1) == h1 * dim,
                                   std::to_string(c.h0) + "," + std::to_string(c.h1));
                         }
                     return r;
                 }});
    t.push_back({"H0 and H1 of the universal modification", [o] {
                     Report r("universal modification cohomology");
                     Ring Q = ring_Q();
                     for (std::uint64_t i = 0; i < 2; ++i)
                         r.merge(verify_modification_cohomology(disguised_constant(RMat(Q, 2, 2), o.seed + i, 5), 4), "seed " + std::to_string(o.seed + i) + ": ");
                     r.merge(verify_modification_cohomology(disguised_constant(RMat(ring_dual(), 2, 2), o.seed + 1, 4), 3), "Q[e]/(e^2): ");
                     return r;
                 }});
    t.push_back({"de Rham direct sum", [o] {
                     return verify_translate_to_regular(disguised_constant(RMat(ring_Q(), 2, 2), o.seed, 5));
                 }});
    t.push_back({"non de Rham self-extension", [o] {
                     Ring Q = ring_Q();
                     return verify_translate_to_regular(disguised_constant(detail::from_strings(Q, {{"0", "1"}, {"0", "0"}}), o.seed, 5));
                 }});
    t.push_back({"eigenspace characterization", [] {
                     Report r("pushforward characterization");
                     Ring Q = ring_Q();
                     RMat E = detail::from_strings(Q, {{"0", "1"}, {"0", "0"}}), S = detail::from_strings(Q, {{"1", "0"}, {"0", "-1"}});
                     for (unsigned k : {1u, 2u}) {
                         r.merge(verify_pushforward_characterization(E, k), "nilpotent k=" + std::to_string(k) + ": ");
                         r.merge(verify_pushforward_characterization(S, k), "semisimple k=" + std::to_string(k) + ": ");
                     }
                     Ring D = ring_dual();
                     r.merge(verify_pushforward_characterization(detail::from_strings(D, {{"0", "1"}, {"e", "0"}}), 2), "Q[e]/(e^2) k=2: ");
                     return r;
                 }});
    t.push_back({"Psi round trip", [o] {
                     Report r("Psi round trip");
                     for (const Ring& R : detail::preset_rings())
                         for (long k = 0; k <= 2; ++k)
                             r.merge(psi_round_trip(seeded_connection(R, {0, k}, o.seed + 60 + static_cast<std::uint64_t>(k),
                                                                      static_cast<std::size_t>(k) + 3)),
                                     R->describe() + " k=" + std::to_string(k) + ": ");
                     return r;
                 }});
    return t;
}

inline std::vector<SuiteTask> suite_tasks(const std::string& name, const SuiteOptions& o) {
    if (name == "springer") return springer_tasks(o);
    if (name == "vk") return vk_tasks(o);
    if (name == "structure") return structure_tasks(o);
    if (name == "translation") return translation_tasks(o);
    if (name == "counit") return counit_tasks(o);
    if (name == "weights") return weights_tasks(o);
    if (name == "theorem") return theorem_tasks(o);
    if (name == "appendix") return appendix_tasks(o);
    if (name == "all") {
        std::vector<SuiteTask> all;
        for (auto& n : suite_names())
            for (auto& task : suite_tasks(n, o)) all.push_back({n + "/" + task.name, task.run});
        return all;
    }
    throw UnknownSuite(name);
}

/// Run the tasks on min(jobs, #tasks) threads. A task that throws becomes a failed check.
inline SuiteReport run_suite(const std::string& name, const SuiteOptions& o = {}) {
    auto tasks = suite_tasks(name, o);
    const auto start = std::chrono::steady_clock::now();
    std::vector<Report> out(tasks.size());
    auto run_one = [&](std::size_t i) {
        try {
            out[i] = tasks[i].run();
        } catch (const std::exception& e) {
            out[i] = Report(tasks[i].name);
            out[i].add("completed without error", false, e.what());
        }
    };
    const std::size_t workers = std::min<std::size_t>(std::max(1u, o.jobs), tasks.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < tasks.size(); i = next++) run_one(i);
            });
        for (auto& th : pool) th.join();
    }
    SuiteReport rep{name, o.seed, Report(name), 0};
    for (std::size_t i = 0; i < tasks.size(); ++i) rep.report.merge(out[i], tasks[i].name + ": ");
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace gtr
