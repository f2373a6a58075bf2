#pragma once

#include <dpp/solver.hpp>
#include <dpp/types.hpp>

#include <cstdint>
#include <vector>

namespace dpp {

/// |a^T theta| <= bound.
struct SlabConstraint
{
    Vector a;
    double bound = 1.0;
};

/// ||A^T theta||_2 <= bound, with the thin SVD A = U diag(s) V^T cached.
struct CylinderConstraint
{
    Matrix a;
    double bound = 1.0;
    Matrix u;
    Vector s;

    static CylinderConstraint make(Matrix a, double bound);
};

/**
 * Projection of `point` onto the intersection of symmetric slabs and
 * cylinders. Every constraint contains the origin, so the set is nonempty.
 */
struct ProjectionProblem
{
    Vector point;
    std::vector<SlabConstraint> slabs;
    std::vector<CylinderConstraint> cylinders;

    /// {theta : |x_i^T theta| <= 1 for all i}.
    static ProjectionProblem lasso(const Dataset& d, Vector point);
    /// {theta : ||X_g^T theta|| <= sqrt(n_g) for all g}.
    static ProjectionProblem group(const Dataset& d, const GroupLayout& g, Vector point);

    Index dim() const noexcept { return point.size(); }
    /// max over constraints of (constraint value / bound); <= 1 means feasible.
    double max_ratio(const Vector& theta) const;
};

struct DykstraStats
{
    int cycles = 0;
    /// Certified bound on ||result - P_F(point)|| from the projection duality gap,
    /// or, when polished, the feasibility rescaling applied to the KKT point.
    double error_bound = 0.0;
    /// True when the result came from the verified active-set polish.
    bool polished = false;
};

/**
 * Dykstra's cyclic projections. Stops once sqrt(2 * gap) <= tol, where gap is
 * the primal-dual gap of min 0.5 ||theta - point||^2 over F evaluated at the
 * rescaled (feasible) iterate and the Dykstra increments. Periodically the
 * constraints carrying nonzero increments are taken as an active set and the
 * projection's optimality system is solved by Newton; that point is accepted
 * only if its multipliers are nonnegative and it is feasible, which makes it
 * exact up to rounding. The returned point is feasible. Throws NoConvergence
 * after max_cycles.
 */
Vector dykstra_project(const ProjectionProblem& p, double tol = 1e-8, int max_cycles = 50000,
                       DykstraStats* stats = nullptr);

/// Projection onto a single cylinder: bisection on the multiplier of
/// theta(mu) = (I + mu A A^T)^{-1} w.
Vector project_cylinder(const CylinderConstraint& c, const Vector& w);
Vector project_slab(const SlabConstraint& c, const Vector& w);

/// Lasso with X = I: beta_i = soft_threshold(y_i, lambda).
Vector orthonormal_design_solution(const Vector& y, double lambda);
/// Lasso with orthonormal columns: beta = soft_threshold(X^T y, lambda).
Vector orthonormal_design_solution(const Matrix& x, const Vector& y, double lambda);

/// `count` feasible points; the first is always the origin. Deterministic in seed.
std::vector<Vector> sample_feasible_points(const ProjectionProblem& p, int count,
                                           std::uint64_t seed);

/**
 * High-accuracy Lasso solve that shares no code with the coordinate-descent
 * solver: FISTA with restart and backtracking, followed by an active-set
 * polish (sign-constrained normal equations) whose result is accepted only
 * if it satisfies the KKT conditions. gap_tol is relative to 0.5 ||y||^2.
 */
PrimalSolution reference_lasso(const Dataset& d, double lambda, double gap_tol = 1e-12,
                               int max_iters = 200000);

} // namespace dpp
