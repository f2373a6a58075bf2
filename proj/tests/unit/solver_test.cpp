#include "test_support.hpp"

#include <dpp/oracle.hpp>
#include <dpp/screening.hpp>
#include <dpp/solver.hpp>

#include <gtest/gtest.h>

using namespace dpp;
using dpp::testing::random_instance;

namespace {

Dataset identity_data()
{
    Vector y(2);
    y << 3, 4;
    return Dataset::create(Matrix::Identity(2, 2), y);
}

} // namespace

TEST(SoftThreshold, Definition)
{
    EXPECT_DOUBLE_EQ(soft_threshold(2.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(soft_threshold(-0.5, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(soft_threshold(-3.0, 1.0), -2.0);
}

TEST(SolveLasso, OrthonormalDesign)
{
    const auto d = identity_data();
    const auto sol = solve_lasso(d, 1.0);
    EXPECT_NEAR(sol.beta[0], 2.0, 1e-10);
    EXPECT_NEAR(sol.beta[1], 3.0, 1e-10);
}

TEST(SolveLasso, ZeroAtLambdaMax)
{
    const auto d = identity_data();
    const auto sol = solve_lasso(d, 4.0);
    EXPECT_EQ(sol.beta, Vector::Zero(2));
    EXPECT_EQ(sol.iterations, 0);
}

TEST(SolveLasso, MatchesIndependentReference)
{
    const auto inst = random_instance(31, 0, 10, 10, 20, 20);
    const auto& d = inst.data;
    const double lam = 0.3 * lambda_max(d).value;
    SolverConfig cfg;
    cfg.gap_tol = 1e-12;
    const auto cd = solve_lasso(d, lam, std::nullopt, cfg);
    const auto ref = reference_lasso(d, lam, 1e-12);
    EXPECT_LE(dpp::testing::max_abs_diff(cd.beta, ref.beta), 1e-6);
}

TEST(SolveLasso, CertifiedGapAndMonotoneObjective)
{
    for (std::uint64_t k = 0; k < 10; ++k) {
        const auto inst = random_instance(32, k);
        const auto& d = inst.data;
        const double lam = 0.2 * lambda_max(d).value;
        SolverConfig cfg;
        double prev = std::numeric_limits<double>::infinity();
        bool monotone = true;
        cfg.on_iteration = [&](int, double obj) {
            monotone &= obj <= prev + 1e-12 * std::abs(prev);
            prev = obj;
        };
        const auto sol = solve_lasso(d, lam, std::nullopt, cfg);
        EXPECT_TRUE(monotone) << k;
        EXPECT_LE(sol.duality_gap, cfg.gap_tol * 0.5 * d.y().squaredNorm()) << k;
        EXPECT_NEAR(compute_duality_gap(d, sol.beta, lam), sol.duality_gap,
                    1e-12 * d.y().squaredNorm());
    }
}

TEST(SolveLasso, MaxItersCarriesBestIterate)
{
    const auto inst = random_instance(33, 1);
    SolverConfig cfg;
    cfg.max_iters = 1;
    cfg.check_every = 1;
    cfg.gap_tol = 1e-15;
    try {
        solve_lasso(inst.data, 0.05 * lambda_max(inst.data).value, std::nullopt, cfg);
        FAIL() << "expected MaxItersExceeded";
    } catch (const MaxItersExceeded& e) {
        EXPECT_EQ(e.best().beta.size(), inst.data.n_features());
    }
}

TEST(SolveLasso, ReducedSolveMatchesFullObjective)
{
    for (std::uint64_t k = 0; k < 10; ++k) {
        const auto inst = random_instance(34, k);
        const auto& d = inst.data;
        const auto lmax = lambda_max(d);
        const double lam = 0.6 * lmax.value;
        const DualPoint theta0{d.y() / lmax.value, lmax.value, 0.0};
        const auto ball = estimate_dual_ball(BallMethod::Edpp, d, theta0, lmax.value, lam, lmax);
        const auto mask = screen_with_ball(d, ball);
        SolverConfig cfg;
        cfg.gap_tol = 1e-12;
        const auto full = solve_lasso(d, lam, std::nullopt, cfg);
        const auto red = solve_lasso_reduced(d, lam, mask, std::nullopt, cfg);
        EXPECT_NEAR(primal_objective(d, red.beta, lam), primal_objective(d, full.beta, lam), 1e-9)
            << k;
        for (Index i = 0; i < d.n_features(); ++i) {
            if (mask.discard[static_cast<std::size_t>(i)]) {
                EXPECT_EQ(red.beta[i], 0.0);
            }
        }
    }
}

TEST(DualityGap, ZeroAtExactOptimum)
{
    const auto d = identity_data();
    Vector beta(2);
    beta << 2, 3;
    EXPECT_NEAR(compute_duality_gap(d, beta, 1.0), 0.0, 1e-12);
    EXPECT_NEAR(compute_duality_gap(d, Vector::Zero(2), 4.0), 0.0, 1e-12);
}

TEST(DualityGap, MatchesDirectEvaluation)
{
    const auto inst = random_instance(35, 2);
    const auto& d = inst.data;
    const double lam = 0.5 * lambda_max(d).value;
    const Vector beta = Vector::Zero(d.n_features());
    const double gap = compute_duality_gap(d, beta, lam);
    // theta_hat = y / lam scaled by max |x_i^T y| / lam = 2.
    const Vector theta = d.y() / lam / 2.0;
    const double direct = 0.5 * d.y().squaredNorm() -
                          (0.5 * d.y().squaredNorm() -
                           0.5 * lam * lam * (theta - d.y() / lam).squaredNorm());
    EXPECT_GT(gap, 0.0);
    EXPECT_NEAR(gap, direct, 1e-10 * direct);
    EXPECT_NEAR(primal_objective(d, beta, lam) - dual_objective(d, theta, lam), direct,
                1e-10 * direct);
}

TEST(DualPoint, RecoveryAtKnownPoints)
{
    const auto d = identity_data();
    const auto at_max = recover_dual_point(d, Vector::Zero(2), 4.0);
    EXPECT_NEAR(at_max.theta[0], 0.75, 1e-15);
    EXPECT_NEAR(at_max.theta[1], 1.0, 1e-15);

    Vector beta(2);
    beta << 2, 3;
    const auto t = recover_dual_point(d, beta, 1.0);
    EXPECT_NEAR(t.theta[0], 1.0, 1e-15);
    EXPECT_NEAR(t.theta[1], 1.0, 1e-15);
}

TEST(DualPoint, ScaleToFeasible)
{
    const auto d = identity_data();
    Vector feasible(2);
    feasible << 0.5, -0.25;
    EXPECT_EQ(scale_to_feasible(d, feasible).theta, feasible);

    Vector hat(2);
    hat << 2, 0;
    const auto s = scale_to_feasible(d, hat);
    EXPECT_NEAR(s.theta[0], 1.0, 1e-15);
    EXPECT_NEAR(s.theta[1], 0.0, 1e-15);
    EXPECT_NEAR(s.feasibility_slack, 1.0, 1e-15);
}

TEST(DualPoint, ApproximateSolutionScalesIntoFeasibleSet)
{
    for (std::uint64_t k = 0; k < 10; ++k) {
        const auto inst = random_instance(36, k);
        const auto& d = inst.data;
        const double lam = 0.3 * lambda_max(d).value;
        const auto sol = solve_lasso(d, lam);
        const auto t = recover_dual_point(d, sol.beta, lam);
        EXPECT_LE((d.x().transpose() * t.theta).cwiseAbs().maxCoeff(), 1.0 + 1e-15) << k;
        CounterRng rng(36, k);
        Vector hat(d.n_samples());
        for (Index i = 0; i < hat.size(); ++i) hat[i] = 10.0 * rng.gaussian();
        const auto s = scale_to_feasible(d, hat);
        EXPECT_NEAR((d.x().transpose() * s.theta).cwiseAbs().maxCoeff(), 1.0, 1e-12) << k;
    }
}

TEST(GroupLasso, ZeroAtAndAboveGroupLambdaMax)
{
    const auto gi = dpp::testing::random_group_instance(37, 0);
    const double lbar = group_lambda_max(gi.data, gi.groups).value;
    for (double f : {1.0, 1.5}) {
        const auto sol = solve_group_lasso(gi.data, gi.groups, f * lbar);
        EXPECT_EQ(sol.beta, Vector::Zero(gi.data.n_features()));
    }
    const auto below = solve_group_lasso(gi.data, gi.groups, 0.9 * lbar);
    EXPECT_GT(below.beta.cwiseAbs().maxCoeff(), 0.0);
}

TEST(GroupLasso, SingletonGroupsMatchLasso)
{
    for (std::uint64_t k = 0; k < 5; ++k) {
        const auto inst = random_instance(38, k);
        const auto& d = inst.data;
        const auto g = GroupLayout::from_sizes(std::vector<Index>(
            static_cast<std::size_t>(d.n_features()), 1));
        const double lam = 0.4 * lambda_max(d).value;
        SolverConfig cfg;
        cfg.gap_tol = 1e-14;
        cfg.max_iters = 1000000;
        const auto a = solve_lasso(d, lam, std::nullopt, cfg);
        const auto b = solve_group_lasso(d, g, lam, std::nullopt, cfg);
        EXPECT_LE(dpp::testing::max_abs_diff(a.beta, b.beta), 1e-8) << k;
    }
}

TEST(GroupLasso, CertifiedGap)
{
    for (std::uint64_t k = 0; k < 5; ++k) {
        const auto gi = dpp::testing::random_group_instance(39, k);
        const double lam = 0.3 * group_lambda_max(gi.data, gi.groups).value;
        SolverConfig cfg;
        const auto sol = solve_group_lasso(gi.data, gi.groups, lam, std::nullopt, cfg);
        EXPECT_LE(compute_duality_gap(gi.data, sol.beta, lam, &gi.groups),
                  cfg.gap_tol * 0.5 * gi.data.y().squaredNorm() * (1 + 1e-9))
            << k;
    }
}
