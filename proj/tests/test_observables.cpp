#include <cmath>

#include <gtest/gtest.h>

#include "hybridq/observables.hpp"

using namespace hybridq;

namespace {

BasisSpec basis(int L, int N) {
    BasisSpec b;
    b.L = L;
    b.N = N;
    return b;
}

struct Solved {
    SpectralProblem prob;
    EigenSolution sol;
};

Solved solve_at(const PhysicalParams& p, const BasisSpec& b, int n) {
    auto prob = assemble(scale(p), b);
    auto sol = solve(prob, n);
    return {std::move(prob), std::move(sol)};
}

SweepSample sample(double x, std::vector<double> e, std::vector<double> z) {
    SweepSample s;
    s.parameter = x;
    s.energies = Eigen::Map<Eigen::VectorXd>(e.data(), static_cast<Eigen::Index>(e.size()));
    s.z_means = Eigen::Map<Eigen::VectorXd>(z.data(), static_cast<Eigen::Index>(z.size()));
    return s;
}

} // namespace

TEST(Observables, NoSlantingFieldGivesZeroSigmaX) {
    PhysicalParams p;
    p.bSLa = 0.0;
    const auto s = solve_at(p, basis(8, 10), 8);
    for (int j = 0; j < 8; ++j) EXPECT_NEAR(state_report(s.sol, j, s.prob).sx_mean, 0.0, 1e-12);
    EXPECT_NEAR(qubit_report(s.sol, s.prob, p.hw0).sx_contrast, 0.0, 1e-12);
}

TEST(Observables, WorkingPointLocalizationAndSpin) {
    const PhysicalParams p;
    const auto s = solve_at(p, BasisSpec{}, 6);
    const auto s0 = state_report(s.sol, 0, s.prob), s1 = state_report(s.sol, 1, s.prob);
    EXPECT_LT(s0.z_mean, -0.9); // leftmost well
    EXPECT_GT(s1.z_mean, 0.9);
    for (int j = 0; j < 6; ++j) {
        const auto r = state_report(s.sol, j, s.prob);
        EXPECT_EQ(r.index, j);
        EXPECT_DOUBLE_EQ(r.energy, s.sol.energies[j]);
        EXPECT_NEAR(r.norm_check, 1.0, 1e-10);
        EXPECT_LT(std::abs(r.sx_mean), 1.0);
        EXPECT_GT(std::abs(r.sx_mean), 0.5);
    }
    const auto q = qubit_report(s.sol, s.prob, p.hw0);
    EXPECT_TRUE(q.pair_flag);
    EXPECT_NEAR(q.gap, 2e-3, 0.5e-3);
    EXPECT_NEAR(q.gap_ueV, q.gap * p.hw0 * 1e3, 1e-12);
    EXPECT_GE(q.sx_contrast, 0.0);
    EXPECT_LE(q.sx_contrast, 2.0);
    EXPECT_GT(q.sx_contrast, 1.0); // opposite spin orientation in the two wells
}

TEST(Observables, SigmaXBoundedAndNormalizedForManyStates) {
    const auto s = solve_at(PhysicalParams{}, basis(10, 10), 20);
    double sum = 0.0;
    for (int j = 0; j < 20; ++j) {
        const auto r = state_report(s.sol, j, s.prob);
        EXPECT_LE(std::abs(r.sx_mean), 1.0 + 1e-10);
        EXPECT_NEAR(r.norm_check, 1.0, 1e-10);
        sum += std::abs(r.sx_mean);
    }
    EXPECT_LE(sum, 20.0);
}

TEST(Observables, TiltReversalSwapsLocalization) {
    PhysicalParams p;
    const auto a = solve_at(p, basis(10, 10), 2);
    p.gamma = -p.gamma;
    const auto b = solve_at(p, basis(10, 10), 2);
    const auto qa = qubit_report(a.sol, a.prob, p.hw0), qb = qubit_report(b.sol, b.prob, p.hw0);
    EXPECT_NEAR(qa.gap, qb.gap, 1e-10);
    EXPECT_LT(qa.z0, 0.0);
    EXPECT_GT(qb.z0, 0.0);
    EXPECT_NEAR(qa.z0, -qb.z0, 1e-6);
    EXPECT_NEAR(qa.z1, -qb.z1, 1e-6);
}

TEST(Observables, GroundSigmaXMonotoneInSlantingField) {
    PhysicalParams p;
    double prev = -1.0;
    double sign = 0.0;
    for (double b : {0.0, 0.25, 0.5, 1.0, 1.5, 2.0}) {
        p.bSLa = b;
        const auto s = solve_at(p, basis(12, 12), 2);
        const double sx = state_report(s.sol, 0, s.prob).sx_mean;
        if (b > 0) {
            if (sign == 0.0) sign = std::copysign(1.0, sx);
            EXPECT_EQ(std::copysign(1.0, sx), sign) << "sign change at bSLa=" << b;
        }
        EXPECT_GE(std::abs(sx), prev - 1e-12);
        EXPECT_LT(std::abs(sx), 1.0);
        prev = std::abs(sx);
    }
}

TEST(Observables, LargerZeemanFieldReducesSigmaX) {
    PhysicalParams p;
    p.bSLa = 1.0;
    double prev = 2.0;
    for (double b0 : {0.1, 0.5, 1.0, 1.5, 2.0}) {
        p.B0 = b0;
        const auto s = solve_at(p, basis(12, 12), 2);
        const double sx = std::abs(state_report(s.sol, 0, s.prob).sx_mean);
        EXPECT_LT(sx, prev) << "B0=" << b0;
        prev = sx;
    }
}

TEST(Observables, RejectsOutOfRangeState) {
    const auto s = solve_at(PhysicalParams{}, basis(3, 3), 2);
    EXPECT_THROW((void)state_report(s.sol, 2, s.prob), ParameterError);
    EXPECT_THROW((void)state_report(s.sol, -1, s.prob), ParameterError);
    const auto one = solve_at(PhysicalParams{}, basis(3, 3), 1);
    EXPECT_THROW((void)qubit_report(one.sol, one.prob, 30.0), ParameterError);
}

TEST(CrossingScan, ParallelLevelsHaveNoCrossings) {
    std::vector<SweepSample> s;
    for (int i = 0; i < 11; ++i) {
        const double x = 0.1 * i;
        s.push_back(sample(x, {x, x + 0.2, x + 0.4}, {-1, 1, -1}));
    }
    EXPECT_TRUE(crossing_scan(s, 3).empty());
}

TEST(CrossingScan, HyperbolaFlaggedAtVertex) {
    // two-level avoided crossing: E = +-sqrt(x^2 + d^2), states exchange wells
    const double d = 0.05;
    std::vector<SweepSample> s;
    for (int i = -10; i <= 10; ++i) {
        const double x = 0.1 * i + 0.013;
        const double e = std::sqrt(x * x + d * d);
        const double z = x / e;
        s.push_back(sample(x, {-e, e}, {-z, z}));
    }
    const auto c = crossing_scan(s, 2);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].lower_level, 0);
    EXPECT_EQ(c[0].index, 10u);
    EXPECT_NEAR(c[0].parameter, 0.013, 1e-12);
}

TEST(CrossingScan, GapMinimumWithoutWellExchangeIsNotFlagged) {
    std::vector<SweepSample> s;
    for (int i = -5; i <= 5; ++i) {
        const double x = 0.1 * i;
        s.push_back(sample(x, {0.0, 0.1 + x * x}, {-1, 1}));
    }
    EXPECT_TRUE(crossing_scan(s, 2).empty());
}

TEST(CrossingScan, NeedsThreePoints) {
    std::vector<SweepSample> s = {sample(0, {0, 1}, {0, 0}), sample(1, {0, 1}, {0, 0})};
    EXPECT_THROW((void)crossing_scan(s, 2), ParameterError);
}
