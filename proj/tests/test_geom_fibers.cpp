#include <gtest/gtest.h>

#include "gtr/geom.hpp"
#include "gtr/presets.hpp"
#include "oracles.hpp"

using namespace gtr;

namespace {

RMat rm(const Ring& R, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::vector<RingElem>> e;
    for (auto& r : rows) {
        e.emplace_back();
        for (auto& x : r) e.back().push_back(parse_elem(R, x));
    }
    return RMat::from_rows(R, e);
}

void expect_ok(const Report& r) {
    for (auto& c : r.checks) EXPECT_TRUE(c.pass) << r.name << ": " << c.name << " " << c.witness;
}

// a connection over R' whose coefficients involve h
ConnectionModule module_over(const FiberExtension& F, std::uint64_t seed, std::size_t N) {
    ConnectionModule M = base_change(seeded_connection(F.base, {0, 1}, seed, N), F);
    M.A[1](0, 1) += F.h();
    M.A[0](0, 0) += F.h() * Rational(3);
    return M;
}

// M with h replaced by s
ConnectionModule specialize_h(const ConnectionModule& M, const FiberExtension& F, const RingElem& s) {
    Series A;
    for (auto& m : M.A) {
        RMat out(F.base, m.rows(), m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) {
                auto [x0, x1] = F.split(m(i, j));
                out(i, j) = x0 + x1 * s;
            }
        A.push_back(out);
    }
    return ConnectionModule::make(A, M.N);
}

ConnectionModule disguised(const RMat& nu, std::uint64_t seed, std::size_t N) { return disguised_constant(nu, seed, N); }

}  // namespace

TEST(Pushforward, RankDoublesAndH) {
    Ring Q = ring_Q();
    auto F = fiber_extension(rm(Q, {{"0", "1"}, {"0", "0"}}));
    EXPECT_EQ(F.ext->dim(), 2u);
    auto P = pushforward_finite(module_over(F, 1, 4), F);
    EXPECT_EQ(P.module.rank, 4u);
    expect_ok(check_pushforward(P, F));
    EXPECT_TRUE((P.h * P.h).is_zero());
    EXPECT_FALSE(P.h.is_zero());
}

TEST(Pushforward, TrivialConnection) {
    for (const Ring& R : {ring_Q(), ring_dual()}) {
        auto F = fiber_extension(R, RingElem::scalar(R, 2));
        auto P = pushforward_finite(ConnectionModule::constant(RMat(F.ext, 3, 3), 4), F);
        EXPECT_EQ(P.module, ConnectionModule::constant(RMat(R, 6, 6), 4));
    }
}

TEST(Pushforward, EtaleSplitting) {
    Ring D = ring_dual();
    RingElem q = parse_elem(D, "4 + e");
    auto F = fiber_extension(D, q);
    auto s = square_root(q);
    ASSERT_TRUE(s.has_value());
    EXPECT_EQ(*s * *s, q);
    auto M = module_over(F, 3, 4);
    auto P = pushforward_finite(M, F);
    expect_ok(check_pushforward(P, F));
    auto parts = etale_split(P, F);
    ASSERT_TRUE(parts.has_value());
    EXPECT_EQ(parts->first, specialize_h(M, F, *s));
    EXPECT_EQ(parts->second, specialize_h(M, F, -*s));
    // no rational square root of 2
    auto F2 = fiber_extension(ring_Q(), RingElem::scalar(ring_Q(), 2));
    EXPECT_FALSE(etale_split(pushforward_finite(ConnectionModule::constant(RMat(F2.ext, 1, 1), 2), F2), F2).has_value());
}

TEST(PushforwardCharacterization, Examples) {
    Ring Q = ring_Q();
    RMat E = rm(Q, {{"0", "1"}, {"0", "0"}});
    auto r1 = verify_pushforward_characterization(E, 1);
    expect_ok(r1);
    auto r2 = verify_pushforward_characterization(rm(Q, {{"1", "0"}, {"0", "-1"}}), 1);
    expect_ok(r2);
    bool etale_checked = false;
    for (auto& c : r2.checks) etale_checked |= c.name.rfind("etale", 0) == 0;
    EXPECT_TRUE(etale_checked);
    expect_ok(verify_pushforward_characterization(E, 2));
    EXPECT_THROW(verify_pushforward_characterization(RMat(Q, 2, 2), 1), AlgebraError);
}

TEST(PushforwardCharacterization, ArtinianBase) {
    Ring D = ring_dual();
    // q = e: a ramified fiber ring Q[e,h]/(e^2, h^2 - e)
    expect_ok(verify_pushforward_characterization(rm(D, {{"0", "1"}, {"e", "0"}}), 1));
    expect_ok(verify_pushforward_characterization(rm(D, {{"0", "1"}, {"e", "0"}}), 2));
    expect_ok(verify_pushforward_characterization(rm(D, {{"1 + e", "0"}, {"0", "-1"}}), 2));
}

TEST(Cech, LineBundles) {
    for (const Ring& R : {ring_Q(), ring_dual(), ring_zh()})
        for (long d = -3; d <= 3; ++d) {
            auto c = cech_p1(d, R);
            auto [h0, h1] = oracle::cech_line_bundle_dims(d);
            const long dim = static_cast<long>(R->dim());
            EXPECT_EQ(static_cast<long>(c.h0), h0 * dim) << d;
            EXPECT_EQ(static_cast<long>(c.h1), h1 * dim) << d;
            EXPECT_EQ(static_cast<long>(c.h0) - static_cast<long>(c.h1), (d + 1) * dim);
        }
}

TEST(Cech, ExplicitCocycle) {
    Ring Q = ring_Q();
    EXPECT_EQ(cech_p1(0, Q).h0, 1u);
    EXPECT_EQ(cech_p1(0, Q).h1, 0u);
    auto c = cech_p1(-1, Q);
    EXPECT_EQ(c.h0 + c.h1, 0u);
    // d = -2, bound 4: x^-1 sits in the weight -1 block and is not a coboundary
    auto c2 = cech_p1(-2, Q);
    QMat x(c2.total.dim, 1);
    x(static_cast<std::size_t>(-1 + 4), 0) = 1;
    EXPECT_EQ(rank(hcat(c2.image, x)), c2.image.cols() + 1);
    EXPECT_EQ(c2.h1, 1u);
    EXPECT_THROW(cech_p1(-2, Q, 3), AlgebraError);
}

TEST(Cech, CoefficientWindow) {
    // O(d) (x) (M / t^3 M) for a rank-2 module: dimensions scale by the window
    Ring Q = ring_Q();
    auto M = seeded_connection(Q, {0, 1}, 4, 3);
    for (long d : {-2, 0, 1}) {
        auto c = cech_p1(d, M, 3);
        auto [h0, h1] = oracle::cech_line_bundle_dims(d);
        EXPECT_EQ(static_cast<long>(c.h0), 6 * h0);
        EXPECT_EQ(static_cast<long>(c.h1), 6 * h1);
    }
}

TEST(ModificationCohomology, DeRham) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        Ring Q = ring_Q();
        auto Delta = disguised(RMat(Q, 2, 2), seed, 5);
        expect_ok(verify_modification_cohomology(Delta, 4));
    }
    expect_ok(verify_modification_cohomology(disguised(RMat(ring_dual(), 2, 2), 1, 4), 3));
}

TEST(ModificationCohomology, RejectsNonDeRham) {
    Ring Q = ring_Q();
    auto r = verify_modification_cohomology(ConnectionModule::constant(rm(Q, {{"0", "1"}, {"0", "0"}}), 4));
    EXPECT_FALSE(r.ok());
}

TEST(TranslateToRegular, DeRhamDirectSum) {
    Ring Q = ring_Q();
    for (std::uint64_t seed = 0; seed < 2; ++seed) expect_ok(verify_translate_to_regular(disguised(RMat(Q, 2, 2), seed, 5)));
}

TEST(TranslateToRegular, SelfExtensionAndPushforward) {
    Ring Q = ring_Q();
    RMat E = rm(Q, {{"0", "1"}, {"0", "0"}});
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
        auto r = verify_translate_to_regular(disguised(E, seed, 5));
        expect_ok(r);
        bool pushforward_checked = false;
        for (auto& c : r.checks) pushforward_checked |= c.name == "T Delta = f_* D over Q[h]/h^2";
        EXPECT_TRUE(pushforward_checked);
    }
}

TEST(TorFiber, Examples) {
    Ring Q = ring_Q();
    auto z = tor_fiber(RMat(Q, 2, 2));
    EXPECT_FALSE(z.flat);
    EXPECT_EQ(z.pieces, (std::vector<std::pair<long, int>>{{-2, 1}, {0, 0}}));
    EXPECT_EQ(z.ideal_twist, -2);
    EXPECT_EQ(tor_fiber(rm(Q, {{"3", "0"}, {"0", "3"}})).pieces, z.pieces);
    auto n = tor_fiber(rm(Q, {{"0", "1"}, {"0", "0"}}));
    EXPECT_TRUE(n.flat);
    EXPECT_EQ(n.pieces, (std::vector<std::pair<long, int>>{{0, 0}}));
    ASSERT_TRUE(n.ring);
    EXPECT_EQ(n.ring->dim(), 2u);
    EXPECT_EQ(n.ring->nilpotency_index(), 2);
}

TEST(TorFiber, ChartRelations) {
    // chart x: c - 2a x - b x^2; chart y = 1/x: c y^2 - 2a y - b
    auto e0 = stabilizer_relation({{0, 1}}, {{1, 1}});
    EXPECT_EQ(e0[2], (Laurent{{0, 1}}));
    EXPECT_EQ(e0[0], (Laurent{{1, -2}}));
    EXPECT_EQ(e0[1], (Laurent{{2, -1}}));
    EXPECT_TRUE(e0[3].empty());
}

TEST(Boxtimes, TwistAndTranslation) {
    auto M = tensor(build_Vk(2), build_Vk(1));
    auto P = boxtimes_p1(M, 5);
    EXPECT_EQ(P.twisted.casimir(), P.plain.casimir());
    EXPECT_EQ(P.twisted.up, P.plain.um * Rational(5));
    EXPECT_EQ(P.twisted.um * Rational(5), P.plain.up);
    auto r = verify_boxtimes_translation(M, {2, 1}, {3, 1}, 5);
    expect_ok(r);
    auto direct = translate_abstract(M, {2, 1}, {3, 1});
    EXPECT_EQ(translate_abstract(P.twisted, {2, 1}, {3, 1}).rank, direct.rank);
}

TEST(PsiRoundTrip, Seeded) {
    for (const Ring& R : {ring_Q(), ring_dual(), ring_zh()})
        for (long k = 0; k <= 2; ++k)
            expect_ok(psi_round_trip(seeded_connection(R, {0, k}, 60 + static_cast<std::uint64_t>(k), static_cast<std::size_t>(k) + 3)));
}
