#pragma once

#include <dpp/errors.hpp>
#include <dpp/types.hpp>

#include <functional>
#include <optional>

namespace dpp {

struct SolverConfig
{
    /// Duality-gap tolerance, relative to 0.5 * ||y||^2.
    double gap_tol = 1e-8;
    /// Coordinate-descent sweeps (Lasso) or proximal steps (group Lasso).
    int max_iters = 100000;
    /// The gap is evaluated every check_every iterations.
    int check_every = 10;
    /// Optional observer called after each iteration with the primal objective.
    std::function<void(int iteration, double objective)> on_iteration;
};

/// Carries the best iterate when the iteration budget runs out.
class MaxItersExceeded : public Error
{
public:
    explicit MaxItersExceeded(PrimalSolution best);

    const PrimalSolution& best() const noexcept { return best_; }

private:
    PrimalSolution best_;
};

/// sign(z) * max(|z| - t, 0).
inline double soft_threshold(double z, double t) noexcept
{
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

/**
 * Lasso: min 0.5 ||y - X b||^2 + lambda ||b||_1 by cyclic coordinate descent.
 *
 * Returns once the duality gap is <= gap_tol * 0.5 ||y||^2. For lambda at or
 * above lambda_max the zero vector is returned without iterating.
 */
PrimalSolution solve_lasso(const Dataset& d, double lambda,
                           const std::optional<Vector>& warm_start = std::nullopt,
                           const SolverConfig& cfg = {});

/// Solves the problem restricted to the kept columns; discarded coefficients are
/// fixed at zero and the reported gap is the reduced problem's.
PrimalSolution solve_lasso_reduced(const Dataset& d, double lambda, const ScreenMask& mask,
                                   const std::optional<Vector>& warm_start = std::nullopt,
                                   const SolverConfig& cfg = {});

/**
 * Group Lasso: min 0.5 ||y - sum_g X_g b_g||^2 + lambda sum_g sqrt(n_g) ||b_g||_2
 * by FISTA with gradient-based restart. The step size comes from 30 power
 * iterations on X^T X, guarded by a backtracking check.
 */
PrimalSolution solve_group_lasso(const Dataset& d, const GroupLayout& g, double lambda,
                                 const std::optional<Vector>& warm_start = std::nullopt,
                                 const SolverConfig& cfg = {});

/// Group counterpart of solve_lasso_reduced; the mask is per group.
PrimalSolution solve_group_lasso_reduced(const Dataset& d, const GroupLayout& g, double lambda,
                                         const ScreenMask& group_mask,
                                         const std::optional<Vector>& warm_start = std::nullopt,
                                         const SolverConfig& cfg = {});

/// Primal objective 0.5 ||y - X b||^2 + penalty.
double primal_objective(const Dataset& d, const Vector& beta, double lambda,
                        const GroupLayout* groups = nullptr);

/// Dual objective 0.5 ||y||^2 - 0.5 lambda^2 ||theta - y / lambda||^2.
double dual_objective(const Dataset& d, const Vector& theta, double lambda);

/**
 * P(beta) - D(theta_hat) with theta_hat = scale_to_feasible((y - X beta) / lambda).
 *
 * Evaluated as 0.5 (1 - 1/s)^2 ||r||^2 + sum_i (lambda |b_i| - b_i x_i^T r / s),
 * with s = max(1, dual norm of r / lambda). The terms are individually
 * nonnegative, so the result keeps full relative accuracy near the optimum.
 */
double compute_duality_gap(const Dataset& d, const Vector& beta, double lambda,
                           const GroupLayout* groups = nullptr);

/// theta_hat / max(1, s), s = max_i |x_i^T theta_hat| or max_g ||X_g^T theta_hat|| / sqrt(n_g).
DualPoint scale_to_feasible(const Dataset& d, const Vector& theta_hat,
                            const GroupLayout* groups = nullptr);

/// theta = (y - X beta) / lambda, rescaled into the dual feasible set.
DualPoint recover_dual_point(const Dataset& d, const Vector& beta, double lambda,
                             const GroupLayout* groups = nullptr);

} // namespace dpp
