#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "hybridq/solver.hpp"

using namespace hybridq;

namespace {

Eigen::MatrixXcd random_hermitian(int n, std::mt19937& rng) {
    std::normal_distribution<double> d;
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(d(rng), d(rng));
    return 0.5 * (a + a.adjoint());
}

Eigen::MatrixXd random_spd(int n, std::mt19937& rng) {
    std::normal_distribution<double> d;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = d(rng);
    return a * a.transpose() + n * Eigen::MatrixXd::Identity(n, n);
}

BasisSpec basis(int L, int N) {
    BasisSpec b;
    b.L = L;
    b.N = N;
    return b;
}

} // namespace

TEST(DenseEigen, IdentityOverlapReducesToStandardProblem) {
    std::mt19937 rng(7);
    const auto h = random_hermitian(30, rng);
    const auto r = dense::generalized_lowest<Complex>(h, Eigen::MatrixXd::Identity(30, 30), 6);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    for (int j = 0; j < 6; ++j) EXPECT_NEAR(r.pairs.values[j], es.eigenvalues()[j], 1e-12);
    EXPECT_EQ(r.reduction, dense::Reduction::cholesky);
}

TEST(DenseEigen, MatchesEigenGeneralizedSolver) {
    std::mt19937 rng(11);
    const int n = 25;
    const Eigen::MatrixXd s = random_spd(n, rng);
    const Eigen::MatrixXd h = random_hermitian(n, rng).real();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ref(h, s);
    const auto r = dense::generalized_lowest<double>(h, s, 8);
    for (int j = 0; j < 8; ++j) EXPECT_NEAR(r.pairs.values[j], ref.eigenvalues()[j], 1e-11);
    const auto rc = dense::generalized_lowest<Complex>(h.cast<Complex>(), s, 8);
    for (int j = 0; j < 8; ++j) EXPECT_NEAR(rc.pairs.values[j], ref.eigenvalues()[j], 1e-11);
}

TEST(DenseEigen, CanonicalFallbackOnSingularOverlap) {
    // basis with an exact duplicate: S = B^T B is singular
    std::mt19937 rng(3);
    const int n = 12;
    const Eigen::MatrixXd s0 = random_spd(n, rng);
    const Eigen::MatrixXd h0 = random_hermitian(n, rng).real();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n + 1);
    t.leftCols(n).setIdentity();
    t(0, n) = 1.0; // the extra function duplicates function 0
    const Eigen::MatrixXd s = t.transpose() * s0 * t, h = t.transpose() * h0 * t;
    EXPECT_THROW((void)dense::generalized_lowest<double>(h, s, 4), IllConditionedBasisError);
    const auto r = dense::generalized_lowest<double>(h, s, 4, 1e-10);
    EXPECT_EQ(r.reduction, dense::Reduction::canonical);
    EXPECT_EQ(r.retained, n);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ref(h0, s0);
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(r.pairs.values[j], ref.eigenvalues()[j], 1e-9);
}

TEST(DenseEigen, PermutationInvariance) {
    const auto prob = assemble(scale(PhysicalParams{}), basis(6, 6));
    const int m = static_cast<int>(prob.dimension());
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937(5));
    Eigen::PermutationMatrix<Eigen::Dynamic> p(m);
    for (int i = 0; i < m; ++i) p.indices()[i] = perm[static_cast<std::size_t>(i)];
    const Eigen::MatrixXcd hp = p.transpose() * prob.H * p;
    const Eigen::MatrixXd sp = p.transpose() * prob.S * p;
    const auto a = dense::generalized_lowest<Complex>(prob.H, prob.S, 10);
    const auto b = dense::generalized_lowest<Complex>(hp, sp, 10);
    for (int j = 0; j < 10; ++j)
        EXPECT_NEAR(a.pairs.values[j], b.pairs.values[j], 1e-8 * std::abs(a.pairs.values[j]));
}

TEST(Solver, OrthonormalityAndResidualBounds) {
    const auto prob = assemble(scale(PhysicalParams{}), basis(14, 14));
    const auto sol = solve(prob, 16);
    const auto c = check(prob, sol);
    EXPECT_LT(c.orthonormality_error, 1e-10);
    EXPECT_LT(c.max_relative_residual, 1e-10);
    for (int j = 1; j < sol.size(); ++j) EXPECT_LE(sol.energies[j - 1], sol.energies[j]);
}

TEST(Solver, RealFastPathMatchesComplexPath) {
    PhysicalParams p;
    p.bSLa = 0.0;
    const auto prob = assemble(scale(p), basis(6, 8));
    const auto sol = solve(prob, 8);
    const auto ref = dense::generalized_lowest<Complex>(prob.H, prob.S, 8);
    for (int j = 0; j < 8; ++j) EXPECT_NEAR(sol.energies[j], ref.pairs.values[j], 1e-12);
}

TEST(Solver, VariationalMonotonicityUnderBasisEnlargement) {
    const auto sp = scale(PhysicalParams{});
    const int track = 8;
    Eigen::VectorXd prev;
    for (auto [L, N] : std::vector<std::pair<int, int>>{{6, 6}, {8, 6}, {8, 9}, {10, 10}, {12, 12}}) {
        const auto e = solve(assemble(sp, basis(L, N)), track).energies;
        if (prev.size())
            for (int j = 0; j < track; ++j) EXPECT_LE(e[j], prev[j] * (1 + 1e-10)) << "L=" << L << " N=" << N;
        prev = e;
    }
}

TEST(Solver, DegenerateLevelsOrderedByPosition) {
    // H = S makes every level degenerate at 1; ties are ordered by <z'>
    auto prob = assemble(scale(PhysicalParams{}), basis(3, 5));
    prob.H = prob.S.cast<Complex>();
    const auto sol = solve(prob, 4);
    std::vector<double> z;
    for (int j = 0; j < 4; ++j) {
        EXPECT_NEAR(sol.energies[j], 1.0, 1e-10);
        const Eigen::VectorXcd c = sol.coefficients.col(j);
        z.push_back(c.dot(apply_position(prob, c)).real());
    }
    EXPECT_TRUE(std::is_sorted(z.begin(), z.end()));
}

TEST(Solver, RejectsBadLevelCount) {
    const auto prob = assemble(scale(PhysicalParams{}), basis(2, 2));
    EXPECT_THROW((void)solve(prob, 0), ParameterError);
    EXPECT_THROW((void)solve(prob, 17), ParameterError);
}

TEST(Plateau, ConstantLevelCoversFullGrid) {
    const std::vector<double> grid = {0.1, 0.2, 0.3, 0.4, 0.5};
    const std::vector<double> v(5, 0.42);
    const auto p = widest_plateau(grid, v, 1e-4);
    ASSERT_TRUE(p.found);
    EXPECT_EQ(p.first, 0u);
    EXPECT_EQ(p.last, 4u);
    EXPECT_DOUBLE_EQ(p.lo, 0.1);
    EXPECT_DOUBLE_EQ(p.hi, 0.5);
}

TEST(Plateau, MonotoneLevelHasNoPlateau) {
    std::vector<double> grid, v;
    for (int i = 0; i < 11; ++i) {
        grid.push_back(0.3 + 0.1 * i);
        v.push_back(1.0 + 0.01 * i); // 10 % total variation
    }
    EXPECT_FALSE(widest_plateau(grid, v, 1e-4).found);
}

TEST(Plateau, FindsFlatMiddleAndNaNBreaksWindows) {
    const std::vector<double> grid = {1, 2, 3, 4, 5, 6, 7, 8};
    const std::vector<double> v = {2.0, 1.5, 1.0, 1.00001, 1.00002, 1.00001, 1.3, 1.8};
    const auto p = widest_plateau(grid, v, 1e-4);
    ASSERT_TRUE(p.found);
    EXPECT_EQ(p.first, 2u);
    EXPECT_EQ(p.last, 5u);
    EXPECT_LE(p.relative_variation, 1e-4);
    std::vector<double> w = v;
    w[3] = std::numeric_limits<double>::quiet_NaN();
    const auto q = widest_plateau(grid, w, 1e-4);
    ASSERT_TRUE(q.found);
    EXPECT_EQ(q.first, 3u + 1);
    EXPECT_EQ(q.last, 5u);
}

TEST(Plateau, PlateauIsSubIntervalOfGrid) {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> grid, v;
        double x = 0.0;
        for (int i = 0; i < 20; ++i) {
            x += 0.05 + 0.1 * (u(rng) + 1);
            grid.push_back(x);
            v.push_back(1.0 + 1e-4 * u(rng) * (i % 3));
        }
        const auto p = widest_plateau(grid, v, 1e-4);
        if (!p.found) continue;
        EXPECT_LE(p.first, p.last);
        EXPECT_LT(p.last, grid.size());
        EXPECT_EQ(p.lo, grid[p.first]);
        EXPECT_EQ(p.hi, grid[p.last]);
        EXPECT_LE(p.relative_variation, 1e-4);
    }
}

TEST(Stabilize, FailingPointsAreRecordedNotFatal) {
    const auto t = stabilize(PhysicalParams{}, basis(4, 20), StabilizedParameter::eta, {0.05, 4.0, 4.5, 5.0}, 3);
    EXPECT_FALSE(t.failures[0].empty());
    EXPECT_TRUE(std::isnan(t.levels(0, 0)));
    for (int i = 1; i < 4; ++i) {
        EXPECT_TRUE(t.failures[static_cast<std::size_t>(i)].empty());
        EXPECT_TRUE(std::isfinite(t.levels(i, 0)));
    }
    EXPECT_EQ(t.tracked(), 3);
    EXPECT_EQ(t.plateaus.size(), 3u);
}

TEST(Stabilize, ParallelMatchesSerial) {
    const std::vector<double> grid = {0.5, 0.6, 0.7, 0.8};
    const auto a = stabilize(PhysicalParams{}, basis(6, 6), StabilizedParameter::mu, grid, 4, 1e-4, 1);
    const auto b = stabilize(PhysicalParams{}, basis(6, 6), StabilizedParameter::mu, grid, 4, 1e-4, 3);
    EXPECT_EQ((a.levels - b.levels).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Stabilize, RejectsBadGrids) {
    EXPECT_THROW((void)stabilize(PhysicalParams{}, basis(2, 2), StabilizedParameter::mu, {}, 1), ParameterError);
    EXPECT_THROW((void)stabilize(PhysicalParams{}, basis(2, 2), StabilizedParameter::mu, {0.5, 0.4}, 1),
                 ParameterError);
    EXPECT_THROW((void)stabilize(PhysicalParams{}, basis(2, 2), StabilizedParameter::mu, {-0.1, 0.4}, 1),
                 ParameterError);
    EXPECT_THROW((void)stabilize(PhysicalParams{}, basis(2, 2), StabilizedParameter::mu, {0.5}, 99), ParameterError);
}
