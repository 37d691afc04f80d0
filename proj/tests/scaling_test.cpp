#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fppinv/scaling.hpp"
#include "fppinv/stats.hpp"

using namespace fppinv;

TEST(Stats, WilsonMatchesClosedForm) {
    for (auto [k, n] : {std::pair<std::int64_t, std::int64_t>{0, 10}, {5, 10}, {37, 200}, {200, 200}}) {
        const auto w = wilson(k, n);
        const double ph = double(k) / double(n), z = kZ95, z2 = z * z;
        const double c = (ph + z2 / (2.0 * double(n))) / (1 + z2 / double(n));
        const double h = z * std::sqrt(ph * (1 - ph) / double(n) + z2 / (4.0 * double(n * n))) / (1 + z2 / double(n));
        EXPECT_NEAR(w.lo, c - h, 1e-12);
        EXPECT_NEAR(w.hi, c + h, 1e-12);
        EXPECT_LE(w.lo, w.estimate);
        EXPECT_GE(w.hi, w.estimate);
    }
    EXPECT_THROW(wilson(3, 2), DomainError);
}

TEST(Stats, MeanInterval) {
    const auto m = mean_ci({1.0, 2.0, 3.0, 4.0});
    EXPECT_DOUBLE_EQ(m.mean, 2.5);
    EXPECT_NEAR(m.sd, std::sqrt(5.0 / 3.0), 1e-12);
    EXPECT_NEAR(m.hi - m.mean, kZ95 * m.sd / 2.0, 1e-12);
    const auto one = mean_ci({7.0});
    EXPECT_TRUE(std::isinf(one.lo) && std::isinf(one.hi));
}

TEST(Sigma, ExtremesAndCommonRandomNumbers) {
    EXPECT_EQ(estimate_sigma(4, 4, 0.0, 50, 1).freq.successes, 0);
    EXPECT_EQ(estimate_sigma(4, 4, 1.0, 50, 1).freq.successes, 50);
    std::int64_t prev = 0;
    for (double p = 0.3; p < 0.8; p += 0.1) {
        const auto s = estimate_sigma(6, 6, p, 300, 9);
        EXPECT_GE(s.freq.successes, prev);
        prev = s.freq.successes;
    }
}

TEST(Sigma, UnitSquareClosedForm) {
    const double p = 0.6;
    const auto s = estimate_sigma(1, 1, p, 20000, 3, 1, kZ99);
    const double want = 1 - (1 - p) * (1 - p);
    EXPECT_LE(s.freq.lo, want);
    EXPECT_GE(s.freq.hi, want);
}

TEST(Sigma, ParallelMatchesSerial) {
    const auto a = estimate_sigma(8, 7, 0.5, 257, 21, 1);
    const auto b = estimate_sigma(8, 7, 0.5, 257, 21, 4);
    EXPECT_EQ(a.freq.successes, b.freq.successes);
}

TEST(Scale, CorrelationLengthAtExtremes) {
    SearchOptions opt;
    opt.base_samples = 100;
    const auto L = estimate_L(1.0, 1, opt);
    EXPECT_TRUE(L.resolved);
    EXPECT_EQ(L.L, 1);
    EXPECT_THROW(estimate_L(0.5, 1, opt), DomainError);
    opt.max_scale = 4;
    const auto stuck = estimate_L(0.51, 1, opt);
    EXPECT_FALSE(stuck.resolved);
    EXPECT_EQ(stuck.bracket_lo, 4);
}

// L(p) <= 1 iff 1 - (1-p)^2 > 1 - eps, so p_1 sits at 1 - sqrt(eps).
TEST(Scale, PnAtUnitScale) {
    SearchOptions opt;
    opt.base_samples = 400;
    opt.max_samples = 6400;
    const auto est = estimate_p_n(1, 5, 0.005, opt);
    EXPECT_FALSE(est.degenerate);
    EXPECT_NEAR(est.p_hat, 1 - std::sqrt(opt.epsilon), 0.03);
    EXPECT_LE(est.hi - est.lo, 0.005);
}

TEST(Scale, Pi4MonteCarloMatchesExact) {
    const double exact = exact_pi4_n1();
    EXPECT_GT(exact, 0.0);
    EXPECT_LT(exact, 1.0);
    const auto mc = estimate_pi4(1, 20000, 4, 1, 0.5, kZ99);
    EXPECT_LE(mc.freq.lo, exact);
    EXPECT_GE(mc.freq.hi, exact);
}

TEST(Sums, PartialSumsByHand) {
    const auto hu = WeightModel::half_uniform(1.0);
    const auto s = partial_sums(hu, 8, {0.9, 0.7, 0.6});
    EXPECT_DOUBLE_EQ(s.s1, 1.0 + 0.5 + 0.25);
    EXPECT_NEAR(s.s2, 0.4, 1e-12);

    const auto atoms = WeightModel::from_name("atom01");
    const std::vector<double> q = {0.9, 0.8, 0.7, 0.6, 0.55};
    EXPECT_DOUBLE_EQ(partial_sums(atoms, 27, q).s2, 3.0);
    EXPECT_DOUBLE_EQ(partial_sums(atoms, 81, q).s2, 4.0);
    EXPECT_DOUBLE_EQ(partial_sums(atoms, 81, q).s1, 6.0);
    EXPECT_THROW(partial_sums(atoms, 243, q), DomainError);
    EXPECT_EQ(floor_log(80, 3), 3);
    EXPECT_EQ(floor_log(81, 3), 4);
    EXPECT_EQ(floor_log(1, 2), 0);
}

TEST(QTable, BothFormats) {
    std::istringstream csv(
        "# manifest: {}\nquantity,scale,p,estimate,ci_lo,ci_hi,samples,seed\n"
        "q,1,0,0.8,0.79,0.8,0,7\nq,3,0,0.6,0.59,0.6,0,7\nsigma,1,0.5,0.5,0.4,0.6,10,7\n");
    EXPECT_EQ(read_q_table(csv), (std::vector<double>{0.8, 0.6}));
    std::istringstream plain("k,q\n0,0.9\n1,0.7\n2,0.6\n");
    EXPECT_EQ(read_q_table(plain), (std::vector<double>{0.9, 0.7, 0.6}));
    std::istringstream gap("0,0.9\n2,0.6\n");
    EXPECT_THROW(read_q_table(gap), DomainError);
    std::istringstream bad("0,0.4\n");
    EXPECT_THROW(read_q_table(bad), DomainError);
}
