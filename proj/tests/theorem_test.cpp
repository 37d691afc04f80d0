#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <random>
#include <sstream>

#include "fppinv/theorem.hpp"

using namespace fppinv;
using Rational = boost::multiprecision::cpp_rational;

TEST(AlphaBeta, WorkedExample) {
    const auto ab = choose_alpha_beta({0.8, 0.6});
    EXPECT_NEAR(ab.r, 3.0, 1e-12);
    EXPECT_NEAR(ab.beta, 0.5, 1e-12);
    EXPECT_NEAR(ab.alpha, 1.425, 1e-12);
    EXPECT_TRUE(alpha_beta_valid({0.8, 0.6}, ab.alpha, ab.beta));
}

TEST(AlphaBeta, FallbackNearRatioOne) {
    const std::vector<double> q = {0.6, 0.59};
    const auto ab = choose_alpha_beta(q);
    EXPECT_NEAR(ab.alpha, 0.5 * (1 + ab.beta * ab.r), 1e-12);
    EXPECT_GT(ab.alpha, 1.0);
    EXPECT_TRUE(alpha_beta_valid(q, ab.alpha, ab.beta));
}

TEST(AlphaBeta, RejectsNonSeparatedLevels) {
    EXPECT_THROW(choose_alpha_beta({0.7, 0.7}), DomainError);
    EXPECT_THROW(choose_alpha_beta({0.6, 0.7}), DomainError);
    EXPECT_THROW(choose_alpha_beta({0.8}), DomainError);
    EXPECT_THROW(choose_alpha_beta({0.8, 0.5}), DomainError);
}

TEST(AlphaBeta, RandomGeometricLevels) {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> ratio(1.05, 4.0);
    for (int t = 0; t < 500; ++t) {
        std::vector<double> q{0.5 + 0.5 * std::uniform_real_distribution<double>(0.2, 1.0)(rng)};
        for (int k = 0; k < 6; ++k) q.push_back(0.5 + (q.back() - 0.5) / ratio(rng));
        const auto ab = choose_alpha_beta(q);
        EXPECT_GT(ab.alpha, 1.0);
        EXPECT_LT(ab.beta, 1.0);
        EXPECT_GT(ab.beta, 0.0);
        for (std::size_t k = 0; k + 1 < q.size(); ++k)
            EXPECT_LT(0.5 + ab.alpha * (q[k + 1] - 0.5), 0.5 + ab.beta * (q[k] - 0.5));
    }
}

TEST(GoodSet, Examples) {
    EXPECT_EQ(good_indices({4, 2, 1, 0, 0}), (std::vector<int>{0, 1, 3}));
    EXPECT_EQ(good_indices({4, 2, 1, 0, 0}, true), (std::vector<int>{3}));
    EXPECT_EQ(good_indices({1, 1, 1}), (std::vector<int>{0, 1}));
    EXPECT_EQ(good_indices({8, 3, 1}), (std::vector<int>{}));
    EXPECT_THROW(good_indices({1, 2}), DomainError);
    EXPECT_THROW(good_indices({1, -1}), DomainError);
}

TEST(GoodIndexBound, ExactRationalSequences) {
    std::mt19937 rng(2);
    for (int t = 0; t < 300; ++t) {
        const int len = 2 + int(rng() % 14);
        std::vector<Rational> x{Rational(int(rng() % 1000) + 1, int(rng() % 50) + 1)};
        for (int k = 1; k < len; ++k) {
            const int mode = int(rng() % 4);
            if (mode == 0) x.push_back(x.back());
            else if (mode == 1) x.push_back(0);
            else x.push_back(x.back() * Rational(int(rng() % 97), 97 + int(rng() % 200)));
        }
        for (int n = 0; n + 1 < len; ++n) {
            const auto r = good_index_bound(x, n);
            Rational lhs = 0, rhs = 0;
            for (int k = 0; k <= n; ++k) {
                lhs += x[std::size_t(k)];
                const bool good = x[std::size_t(k)] < 2 * x[std::size_t(k + 1)] || x[std::size_t(k)] == 0;
                if (good) rhs += x[std::size_t(k + 1)];
            }
            rhs = 3 * x[0] + 3 * rhs;
            EXPECT_EQ(r.lhs, lhs);
            EXPECT_EQ(r.rhs, rhs);
            EXPECT_TRUE(r.holds) << "t=" << t << " n=" << n;
        }
    }
    EXPECT_THROW(good_index_bound(std::vector<Rational>{1, 1}, 1), DomainError);
}

TEST(EkSpecGeometry, BoxesAndIntervals) {
    const auto ab = choose_alpha_beta({0.9, 0.7, 0.6});
    const auto s = EkSpec::make(1, {0.9, 0.7, 0.6}, ab);
    EXPECT_EQ(s.scale(), 3);
    EXPECT_EQ(s.far_radius(), 243);
    EXPECT_TRUE(s.box(1).contains(Edge::between({0, 4}, {0, 5})));
    EXPECT_FALSE(s.box(1).contains(Edge::between({0, 2}, {0, 3})));
    EXPECT_TRUE(s.box(4).contains(Edge::between({9, 4}, {10, 4})));
    EXPECT_FALSE(s.box(4).contains(Edge::between({14, 0}, {15, 0})));
    const auto [lo, hi] = s.interval(2);
    EXPECT_DOUBLE_EQ(lo, 0.6);
    EXPECT_DOUBLE_EQ(hi, 0.5 + ab.alpha * 0.1);
    const auto [lo4, hi4] = s.interval(4);
    EXPECT_DOUBLE_EQ(lo4, 0.5 + ab.beta * 0.2);
    EXPECT_DOUBLE_EQ(hi4, 0.7);
    EXPECT_LT(hi, lo4);
    EXPECT_THROW(EkSpec::make(2, {0.9, 0.7, 0.6}, ab), DomainError);
}

TEST(EventA, RejectsBadSpecs) {
    EventASpec s;
    s.R = 10;
    EXPECT_THROW(s.validate(), DomainError);
    s.R = 25;
    EXPECT_THROW(s.validate(), DomainError);
    s = {};
    s.a = 3;
    EXPECT_THROW(s.validate(), DomainError);
    s = {};
    s.outer = 30;
    EXPECT_THROW(s.validate(), DomainError);
    EXPECT_NO_THROW(EventASpec{}.validate());
}

TEST(EventA, GapOnDeterministicConfiguration) {
    const EventASpec spec;
    const auto model = event_A_model(spec);
    const auto cfg = build_event_A_config(spec);

    std::vector<Edge> axis;
    for (int x = 0; x < spec.R; ++x) axis.push_back(Edge::between({x, 0}, {x + 1, 0}));
    EXPECT_DOUBLE_EQ(path_weight(model, cfg, axis), spec.b);

    const auto rep = verify_event_A(model, cfg, spec);
    ASSERT_EQ(rep.rows.size(), std::size_t(spec.R + 1));
    EXPECT_LE(rep.rows.front().T, 2.0);
    EXPECT_GE(rep.rows.front().T_inv, 4.0);
    EXPECT_TRUE(rep.gap_at_least_b);
    EXPECT_TRUE(rep.gap_constant);
    for (const auto& row : rep.rows) EXPECT_DOUBLE_EQ(row.gap, rep.rows.front().gap);
}

TEST(EventA, EdgeTableRoundTrip) {
    const EventASpec spec;
    const auto cfg = build_event_A_config(spec);
    std::stringstream ss;
    write_edge_table(ss, cfg);
    const auto back = LatticeConfig::from_table(cfg.box(), read_edge_table(ss));
    EXPECT_EQ(back.omegas(), cfg.omegas());
}

TEST(PaintedEk, WitnessAndGain) {
    const auto p = painted_ek_config();
    const auto w = detect_E_k(p.cfg, p.spec);
    ASSERT_TRUE(w);
    const auto check = verify_witness(p.cfg, p.spec, *w);
    EXPECT_TRUE(check.ok) << (check.failures.empty() ? "" : check.failures.front());
    EXPECT_EQ(w->e[1], Edge::between({0, 3}, {0, 4}));
    EXPECT_EQ(w->e[3], Edge::between({3, 0}, {4, 0}));
    EXPECT_EQ(w->gamma11.vertices.size(), 16u);
    EXPECT_EQ(w->gamma21.vertices.size(), 80u);

    const auto pair = circuit_pair(p.cfg, 0);
    ASSERT_TRUE(pair);
    const auto model = WeightModel::half_uniform(1.0);
    const auto inv = invade(p.cfg, StopRule::touch(p.spec.far_radius()));
    const auto g = check_gain_on_Ek(model, p.cfg, inv, p.spec, *pair);
    EXPECT_NEAR(g.t_inv, 0.72, 1e-12);
    EXPECT_NEAR(g.t, 0.4, 1e-12);
    EXPECT_TRUE(g.inv_ok);
    EXPECT_TRUE(g.t_ok);
}

TEST(PaintedEk, PerturbationsDestroyTheEvent) {
    const auto base = painted_ek_config();
    auto with = [&](Edge e, double w) {
        auto cfg = base.cfg;
        cfg.set_omega(e, w);
        return detect_E_k(cfg, base.spec).has_value();
    };
    EXPECT_FALSE(with(Edge::between({0, 3}, {0, 4}), 0.66));
    EXPECT_FALSE(with(Edge::between({3, 0}, {4, 0}), 0.62));
    EXPECT_FALSE(with(Edge::between({0, 7}, {0, 8}), 0.95));
    EXPECT_FALSE(with(Edge::between({2, 1}, {2, 2}), 0.95));
    EXPECT_FALSE(with(Edge::between({40, 0}, {41, 0}), 0.65));
    // a q_k-open detour from the e2 cluster back to the inner circuit
    auto cfg = base.cfg;
    cfg.set_omega(Edge::between({0, 3}, {1, 3}), 0.7);
    cfg.set_omega(Edge::between({1, 2}, {1, 3}), 0.7);
    EXPECT_FALSE(detect_E_k(cfg, base.spec).has_value());
    // harmless noise far from the construction
    EXPECT_TRUE(with(Edge::between({-30, 30}, {-30, 31}), 0.1));
}

TEST(PaintedEk, VerifierCatchesTampering) {
    const auto p = painted_ek_config();
    const auto w = *detect_E_k(p.cfg, p.spec);
    {
        auto bad = w;
        bad.gamma13.vertices.pop_back();
        EXPECT_FALSE(verify_witness(p.cfg, p.spec, bad).ok);
    }
    {
        auto bad = w;
        bad.open_paths[2] = {{0, 4}, {1, 4}};
        EXPECT_FALSE(verify_witness(p.cfg, p.spec, bad).ok);
    }
    {
        auto cfg = p.cfg;
        cfg.set_omega(w.e[0], 0.9);
        EXPECT_FALSE(verify_witness(cfg, p.spec, w).ok);
    }
    {
        auto bad = w;
        bad.far_path.pop_back();
        EXPECT_FALSE(verify_witness(p.cfg, p.spec, bad).ok);
    }
}

TEST(Gap, SmallRunHasNoViolationsAndIsJobInvariant) {
    const auto model = WeightModel::from_name("atom01");
    const std::vector<double> q = {0.85, 0.65, 0.57, 0.53};
    const auto ab = choose_alpha_beta(q);
    GapOptions o;
    o.samples = 6;
    o.seed = 3;
    const auto a = estimate_gap(model, 27, q, ab, o);
    o.jobs = 3;
    const auto b = estimate_gap(model, 27, q, ab, o);
    EXPECT_EQ(a.invariant_violations, 0);
    EXPECT_EQ(a.failures, 0);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        EXPECT_EQ(a.samples[i].T, b.samples[i].T);
        EXPECT_EQ(a.samples[i].T_inv, b.samples[i].T_inv);
        EXPECT_EQ(a.samples[i].event, b.samples[i].event);
        EXPECT_GE(a.samples[i].diff, 0.0);
        EXPECT_EQ(a.samples[i].event.size(), 1u);
    }
    EXPECT_DOUBLE_EQ(a.sums.s2, 3.0);
}
