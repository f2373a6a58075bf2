#include "test_support.hpp"

#include <dpp/oracle.hpp>
#include <dpp/screening.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace dpp;
using dpp::testing::random_instance;

namespace {

Dataset identity_data()
{
    Vector y(2);
    y << 3, 4;
    return Dataset::create(Matrix::Identity(2, 2), y);
}

Vector gaussian_vector(Index n, std::uint64_t seed, std::uint64_t stream, double scale)
{
    CounterRng r(seed, stream);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = scale * r.gaussian();
    return v;
}

constexpr double kTol = 1e-8;

} // namespace

TEST(Dykstra, BoxProjection)
{
    const auto d = identity_data();
    Vector w(2);
    w << 2, 0;
    const Vector p = dykstra_project(ProjectionProblem::lasso(d, w), kTol);
    EXPECT_NEAR(p[0], 1.0, 10 * kTol);
    EXPECT_NEAR(p[1], 0.0, 10 * kTol);
}

TEST(Dykstra, InteriorPointUnchanged)
{
    const auto d = identity_data();
    Vector w(2);
    w << 0.3, -0.9;
    DykstraStats st;
    EXPECT_EQ(dykstra_project(ProjectionProblem::lasso(d, w), kTol, 50000, &st), w);
    EXPECT_EQ(st.cycles, 0);
}

TEST(Dykstra, ResultIsFeasibleAndMatchesKkt)
{
    for (std::uint64_t k = 0; k < 8; ++k) {
        const auto inst = random_instance(61, k);
        const auto& d = inst.data;
        const double lam = 0.3 * lambda_max(d).value;
        const auto prob = ProjectionProblem::lasso(d, d.y() / lam);
        const Vector th = dykstra_project(prob, kTol);
        EXPECT_LE(prob.max_ratio(th), 1.0) << k;
        const auto ref = reference_lasso(d, lam, 1e-12);
        EXPECT_LE((th - (d.y() - d.x() * ref.beta) / lam).norm(), 1e-6) << k;
    }
}

TEST(Dykstra, Idempotent)
{
    for (std::uint64_t k = 0; k < 8; ++k) {
        const auto inst = random_instance(62, k);
        const auto& d = inst.data;
        const Vector w = gaussian_vector(d.n_samples(), 62, k, 2.0);
        const Vector p1 = dykstra_project(ProjectionProblem::lasso(d, w), kTol);
        const Vector p2 = dykstra_project(ProjectionProblem::lasso(d, p1), kTol);
        EXPECT_LE((p1 - p2).norm(), 2 * kTol) << k;
    }
}

TEST(Dykstra, Nonexpansive)
{
    for (std::uint64_t k = 0; k < 8; ++k) {
        const auto inst = random_instance(63, k);
        const auto& d = inst.data;
        const Vector w1 = gaussian_vector(d.n_samples(), 63, 2 * k, 2.0);
        const Vector w2 = gaussian_vector(d.n_samples(), 63, 2 * k + 1, 2.0);
        const Vector p1 = dykstra_project(ProjectionProblem::lasso(d, w1), kTol);
        const Vector p2 = dykstra_project(ProjectionProblem::lasso(d, w2), kTol);
        EXPECT_LE((p1 - p2).norm(), (w1 - w2).norm() + 4 * kTol) << k;
    }
}

TEST(Dykstra, RayInvariance)
{
    for (std::uint64_t k = 0; k < 8; ++k) {
        const auto inst = random_instance(64, k);
        const auto& d = inst.data;
        const Vector w = gaussian_vector(d.n_samples(), 64, k, 5.0);
        const auto prob = ProjectionProblem::lasso(d, w);
        if (prob.max_ratio(w) <= 1.0) continue;
        const Vector p = dykstra_project(prob, kTol);
        for (double t : {0.5, 2.0, 10.0}) {
            const Vector q = dykstra_project(ProjectionProblem::lasso(d, p + t * (w - p)), kTol);
            EXPECT_LE((q - p).norm(), 2 * kTol) << k << " t=" << t;
        }
    }
}

TEST(Dykstra, GroupProjectionMatchesGroupKkt)
{
    for (std::uint64_t k = 0; k < 4; ++k) {
        const auto gi = dpp::testing::random_group_instance(65, k);
        const auto& d = gi.data;
        const double lam = 0.4 * group_lambda_max(d, gi.groups).value;
        const auto prob = ProjectionProblem::group(d, gi.groups, d.y() / lam);
        const Vector th = dykstra_project(prob, kTol);
        EXPECT_LE(prob.max_ratio(th), 1.0);
        SolverConfig cfg;
        cfg.gap_tol = 1e-14;
        cfg.max_iters = 1000000;
        const auto sol = solve_group_lasso(d, gi.groups, lam, std::nullopt, cfg);
        EXPECT_LE((th - (d.y() - d.x() * sol.beta) / lam).norm(), 1e-6) << k;
    }
}

TEST(Dykstra, NoConvergenceReported)
{
    const auto inst = random_instance(66, 0);
    const auto& d = inst.data;
    const auto prob = ProjectionProblem::lasso(d, d.y() / (0.05 * lambda_max(d).value));
    EXPECT_THROW(dykstra_project(prob, 1e-12, 1), NoConvergence);
    EXPECT_THROW(dykstra_project(prob, 0.0), InvalidArgument);
}

TEST(ProjectCylinder, LandsOnBoundaryAlongNormal)
{
    const Matrix a = Matrix::Identity(3, 2);
    const auto c = CylinderConstraint::make(a, 1.0);
    Vector w(3);
    w << 3, 4, 7;
    const Vector p = project_cylinder(c, w);
    EXPECT_NEAR(p[0], 0.6, 1e-12);
    EXPECT_NEAR(p[1], 0.8, 1e-12);
    EXPECT_NEAR(p[2], 7.0, 1e-12);
    Vector inside(3);
    inside << 0.1, 0.2, 9.0;
    EXPECT_EQ(project_cylinder(c, inside), inside);
}

TEST(ProjectSlab, ClipsToBound)
{
    Vector a(2);
    a << 0, 2;
    const SlabConstraint s{a, 1.0};
    Vector w(2);
    w << 5, 3;
    const Vector p = project_slab(s, w);
    EXPECT_NEAR(p[0], 5.0, 1e-15);
    EXPECT_NEAR(p[1], 0.5, 1e-15);
}

TEST(OrthonormalDesign, ClosedForm)
{
    Vector y(2);
    y << 3, 4;
    const Vector b = orthonormal_design_solution(y, 1.0);
    EXPECT_DOUBLE_EQ(b[0], 2.0);
    EXPECT_DOUBLE_EQ(b[1], 3.0);
    EXPECT_EQ(orthonormal_design_solution(y, 4.0), Vector::Zero(2));
}

TEST(OrthonormalDesign, AgreesWithSolver)
{
    const Vector y = gaussian_vector(12, 67, 0, 3.0);
    const auto d = Dataset::create(Matrix::Identity(12, 12), y);
    SolverConfig cfg;
    cfg.gap_tol = 1e-14;
    for (double lam : {0.5, 1.0, 2.5}) {
        const auto sol = solve_lasso(d, lam, std::nullopt, cfg);
        EXPECT_LE(dpp::testing::max_abs_diff(sol.beta, orthonormal_design_solution(y, lam)), 1e-8);
        EXPECT_LE(dpp::testing::max_abs_diff(
                      sol.beta, orthonormal_design_solution(Matrix::Identity(12, 12), y, lam)),
                  1e-8);
    }
}

TEST(FeasibleSamples, OriginFirstAndAllFeasible)
{
    const auto inst = random_instance(68, 1);
    const auto prob = ProjectionProblem::lasso(inst.data, inst.data.y());
    const auto one = sample_feasible_points(prob, 1, 5);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0], Vector::Zero(inst.data.n_samples()));
    const auto pts = sample_feasible_points(prob, 200, 5);
    ASSERT_EQ(pts.size(), 200u);
    for (const auto& p : pts) EXPECT_LE(prob.max_ratio(p), 1.0 + 1e-12);
    const auto again = sample_feasible_points(prob, 200, 5);
    for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(pts[i], again[i]);
}

TEST(ReferenceLasso, CertifiedGap)
{
    for (std::uint64_t k = 0; k < 5; ++k) {
        const auto inst = random_instance(69, k);
        const auto& d = inst.data;
        const double lam = 0.2 * lambda_max(d).value;
        const auto ref = reference_lasso(d, lam, 1e-12);
        EXPECT_LE(compute_duality_gap(d, ref.beta, lam), 1e-12 * 0.5 * d.y().squaredNorm()) << k;
    }
}
