#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "gmcphd/assignment.hpp"
#include "gmcphd/evaluation.hpp"
#include "gmcphd/ospa.hpp"
#include "oracles/oracles.hpp"

namespace {

using namespace gmcphd;

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

std::vector<Vector> random_set(std::mt19937_64& rng, std::size_t max_size, double spread = 20.0) {
    std::uniform_real_distribution<double> u(-spread, spread);
    std::vector<Vector> s(rng() % (max_size + 1));
    for (auto& v : s) v = vec2(u(rng), u(rng));
    return s;
}

OspaResult run(const std::vector<Vector>& x, const std::vector<Vector>& y, double c, double ell) {
    return ospa(x, y, OspaParams{c, ell});
}

TEST(Ospa, IdenticalSetsAreZero) {
    const std::vector<Vector> x = {vec2(1, 2), vec2(3, 4), vec2(-5, 0)};
    const auto r = run(x, x, 30.0, 1.0);
    EXPECT_EQ(r.total, 0.0);
    EXPECT_EQ(r.localization, 0.0);
    EXPECT_EQ(r.cardinality, 0.0);
}

TEST(Ospa, EmptyVersusOneIsCutoff) {
    const auto r = run({}, {vec2(1, 1)}, 30.0, 1.0);
    EXPECT_EQ(r.total, 30.0);
    EXPECT_EQ(r.cardinality, 30.0);
    EXPECT_EQ(run({}, {}, 30.0, 1.0).total, 0.0);
}

TEST(Ospa, PicksCheaperAssignment) {
    const auto r = run({vec2(0, 0)}, {vec2(0, 3), vec2(100, 100)}, 30.0, 1.0);
    EXPECT_NEAR(r.total, 16.5, 1e-12);
    const auto o = oracle::ospa_exhaustive({vec2(0, 0)}, {vec2(0, 3), vec2(100, 100)}, 30.0, 1.0);
    EXPECT_NEAR(o.total, 16.5, 1e-12);
}

TEST(Ospa, MatchesExhaustiveSearch) {
    std::mt19937_64 rng(51);
    const double orders[] = {1.0, 2.0, 3.5, std::numeric_limits<double>::infinity()};
    for (int trial = 0; trial < 1000; ++trial) {
        const auto x = random_set(rng, 6), y = random_set(rng, 6);
        const double c = trial % 3 == 0 ? 5.0 : 30.0;
        const double ell = orders[trial % 4];
        const auto got = run(x, y, c, ell);
        const auto want = oracle::ospa_exhaustive(x, y, c, ell);
        EXPECT_NEAR(got.total, want.total, 1e-12) << "trial " << trial;
        EXPECT_NEAR(got.localization, want.localization, 1e-12) << "trial " << trial;
        EXPECT_NEAR(got.cardinality, want.cardinality, 1e-12) << "trial " << trial;
    }
}

TEST(Ospa, MetricAxiomsOnSamples) {
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto x = random_set(rng, 5), y = random_set(rng, 5), z = random_set(rng, 5);
        const double ell = trial % 2 ? 1.0 : 2.0;
        const double xy = run(x, y, 30.0, ell).total;
        EXPECT_EQ(xy, run(y, x, 30.0, ell).total);
        EXPECT_GE(xy, 0.0);
        EXPECT_LE(xy, 30.0);
        EXPECT_LE(run(x, z, 30.0, ell).total, xy + run(y, z, 30.0, ell).total + 1e-9);
        EXPECT_LE(run(x, y, 10.0, ell).total, xy + 1e-12);
        if (ell == 1.0) {
            const auto r = run(x, y, 30.0, 1.0);
            EXPECT_NEAR(r.total, r.localization + r.cardinality, 1e-12);
        }
    }
}

TEST(Ospa, InfiniteOrderUsesBottleneck) {
    const OspaParams p{30.0, std::numeric_limits<double>::infinity()};
    const std::vector<Vector> x = {vec2(0, 0), vec2(10, 0)};
    const std::vector<Vector> y = {vec2(1, 0), vec2(10, 4)};
    EXPECT_NEAR(ospa(x, y, p).total, 4.0, 1e-15);
    EXPECT_EQ(ospa(x, std::vector<Vector>{vec2(0, 0)}, p).total, 30.0);
}

TEST(Ospa, RejectsBadParameters) {
    EXPECT_THROW(run({vec2(0, 0)}, {vec2(1, 1)}, 0.0, 1.0), ConfigError);
    EXPECT_THROW(run({vec2(0, 0)}, {vec2(1, 1)}, 30.0, 0.5), ConfigError);
}

TEST(Assignment, MinCostRectangular) {
    Eigen::MatrixXd cost(2, 3);
    cost << 4, 1, 3,
            2, 0, 5;
    const auto a = assignment::solve_min_cost(cost);
    EXPECT_DOUBLE_EQ(assignment::assignment_cost(cost, a), 3.0);
}

TEST(OspaSeries, PerfectAndDroppedEstimates) {
    sim::GroundTruth truth;
    std::vector<Extraction> est(10);
    for (long t = 0; t < 10; ++t) {
        Vector a(4), b(4);
        a << t, 1, 0, 0;
        b << 0, 0, t, 1;
        truth.steps.push_back({{0, a}, {1, b}});
        est[static_cast<std::size_t>(t)].estimates.push_back({a, 1.0});
        if (t < 3 || t >= 8) est[static_cast<std::size_t>(t)].estimates.push_back({b, 1.0});
    }
    const auto s = ospa_series(truth, est, OspaParams{});
    ASSERT_EQ(s.per_step.size(), 10u);
    for (std::size_t t = 0; t < 10; ++t) {
        const bool dropped = t >= 3 && t < 8;
        EXPECT_NEAR(s.per_step[t].cardinality, dropped ? 15.0 : 0.0, 1e-12);
        EXPECT_NEAR(s.per_step[t].localization, 0.0, 1e-12);
    }
    EXPECT_NEAR(s.mean.total, 7.5, 1e-12);
    EXPECT_NEAR(s.max.total, 15.0, 1e-12);
}

}  // namespace
