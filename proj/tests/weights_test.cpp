#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fppinv/weights.hpp"

using namespace fppinv;

TEST(Weights, HalfUniformInverse) {
    const auto m = WeightModel::half_uniform(2.0);
    EXPECT_EQ(m.inverse(0.3), 0.0);
    EXPECT_EQ(m.inverse(0.5), 0.0);
    EXPECT_DOUBLE_EQ(m.inverse(0.75), 1.0);
    EXPECT_DOUBLE_EQ(m.inverse(1.0), 2.0);
    EXPECT_THROW(m.inverse(0.0), DomainError);
    EXPECT_THROW(m.inverse(1.5), DomainError);
}

TEST(Weights, AtomInverseAndPreimage) {
    const auto m = WeightModel::from_name("atom01");
    EXPECT_EQ(m.inverse(0.5), 0.0);
    EXPECT_EQ(m.inverse(0.5000001), 1.0);
    EXPECT_EQ(m.inverse(1.0), 1.0);
    EXPECT_DOUBLE_EQ(m.omega_for_atom(1.0), 0.75);
    EXPECT_DOUBLE_EQ(m.omega_for_atom(0.0), 0.25);
    EXPECT_THROW(m.omega_for_atom(0.5), DomainError);
    EXPECT_THROW(WeightModel::atoms({{0.0, 0.4}, {1.0, 0.6}}), DomainError);
}

TEST(Weights, InverseIsGeneralizedInverseOfCdf) {
    for (const auto& m : {WeightModel::half_uniform(1.0), WeightModel::power_tail(0.5), WeightModel::power_tail(3.0),
                          WeightModel::atoms({{0.0, 0.5}, {0.25, 0.25}, {2.0, 0.25}}),
                          WeightModel::table({{0.0, 0.5}, {1.0, 0.7}, {1.0, 0.9}, {3.0, 1.0}})}) {
        for (int i = 1; i <= 400; ++i) {
            const double t = i / 400.0;
            const double x = m.inverse(t);
            EXPECT_GE(m.cdf(x) + 1e-12, t) << m.describe() << " t=" << t;
            if (x > 1e-9) EXPECT_LT(m.cdf(x - 1e-9), t + 1e-12) << m.describe() << " t=" << t;
        }
        EXPECT_DOUBLE_EQ(m.cdf(0.0), 0.5);
    }
}

TEST(Weights, InverseIsMonotone) {
    const auto m = WeightModel::power_tail(2.0);
    double prev = 0;
    for (int i = 1; i <= 1000; ++i) {
        const double x = m.inverse(i / 1000.0);
        EXPECT_GE(x, prev);
        prev = x;
    }
}

TEST(Weights, SamplingIsBoxIndependent) {
    const auto small = LatticeConfig::sample(Box::centered(3), 42);
    const auto big = LatticeConfig::sample(Box::centered(9), 42);
    for (const Edge& e : edges_of_box(Box::centered(3))) EXPECT_EQ(small.omega(e), big.omega(e));
    const auto other = LatticeConfig::sample(Box::centered(3), 43);
    int same = 0;
    for (const Edge& e : edges_of_box(Box::centered(3))) same += small.omega(e) == other.omega(e);
    EXPECT_EQ(same, 0);
    const auto sub = big.restricted(Box::rect(2, 3, {-1, -1}));
    for (const Edge& e : edges_of_box(sub.box())) EXPECT_EQ(sub.omega(e), big.omega(e));
}

TEST(Weights, UniformsLookUniform) {
    const auto cfg = LatticeConfig::sample(Box::centered(60), 5);
    std::vector<int> bins(10, 0);
    double mean = 0;
    for (double w : cfg.omegas()) {
        ASSERT_GT(w, 0.0);
        ASSERT_LT(w, 1.0);
        ++bins[std::size_t(w * 10)];
        mean += w;
    }
    const double n = double(cfg.omegas().size());
    EXPECT_NEAR(mean / n, 0.5, 0.01);
    for (int b : bins) EXPECT_NEAR(b / n, 0.1, 0.01);
}

TEST(Weights, OpennessIsMonotoneInP) {
    const auto cfg = LatticeConfig::sample(Box::centered(10), 9);
    for (std::int64_t e = 0; e < cfg.grid().num_edges(); ++e) {
        for (double p = 0.0; p < 1.0; p += 0.05) {
            if (cfg.open_at(e, p)) EXPECT_TRUE(cfg.open_at(e, p + 0.05));
        }
    }
}

TEST(Weights, DescriptorRoundTrip) {
    const auto cfg = LatticeConfig::sample(Box::rect(5, 4, {-2, -2}), 77);
    std::stringstream ss;
    write_descriptor(ss, cfg);
    const auto back = read_descriptor(ss);
    EXPECT_EQ(back.box(), cfg.box());
    EXPECT_EQ(back.omegas(), cfg.omegas());
    EXPECT_EQ(back.generator_id(), kGeneratorId);
}

TEST(Weights, EdgeTableRoundTrip) {
    const auto cfg = LatticeConfig::sample(Box::centered(2), 3);
    std::stringstream ss;
    write_edge_table(ss, cfg);
    const auto entries = read_edge_table(ss);
    EXPECT_EQ(bounding_box(entries), cfg.box());
    const auto back = LatticeConfig::from_table(cfg.box(), entries);
    EXPECT_EQ(back.omegas(), cfg.omegas());
    EXPECT_THROW(LatticeConfig::from_table(cfg.box(), {entries.begin(), entries.end() - 1}), DomainError);
}
