#pragma once

#include <dpp/solver.hpp>
#include <dpp/types.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace dpp {

struct LambdaMax
{
    double value = 0.0;
    /// Smallest index (feature, or group for the group variant) attaining the max.
    Index argmax = 0;
};

/// lambda_max = max_i |x_i^T y|. Throws DegenerateResponse when it is 0.
LambdaMax lambda_max(const Dataset& d);

/// max_g ||X_g^T y||_2 / sqrt(n_g).
LambdaMax group_lambda_max(const Dataset& d, const GroupLayout& g);

/// Ray direction v1, projection target v2 and the part of v2 orthogonal to v1.
struct VGeometry
{
    Vector v1;
    Vector v2;
    Vector v2_perp;
    double lambda0 = 0.0;
    double lambda = 0.0;
};

/**
 * v1(lambda0): y/lambda0 - theta0 below lambda_max; sign(x*^T y) x* at
 * lambda_max, where x* is the maximizing column. A point in the normal cone
 * of the dual feasible set at theta0, so theta0 + t v1 projects back onto
 * theta0 for every t >= 0.
 */
Vector compute_v1(const Dataset& d, const DualPoint& theta0, double lambda0);
Vector compute_v1(const Dataset& d, const DualPoint& theta0, double lambda0, const LambdaMax& lmax);

/// Requires 0 < lambda <= lambda0 <= lambda_max. Throws DegenerateV1 if ||v1|| == 0.
VGeometry compute_v_geometry(const Dataset& d, const DualPoint& theta0, double lambda0,
                             double lambda);
VGeometry compute_v_geometry(const Dataset& d, const DualPoint& theta0, double lambda0,
                             double lambda, const LambdaMax& lmax);

/// Group v1: y/lambda0 - theta0 below the group lambda_max, X* X*^T y at it.
Vector compute_group_v1(const Dataset& d, const GroupLayout& g, const DualPoint& theta0,
                        double lambda0);
VGeometry compute_group_v_geometry(const Dataset& d, const GroupLayout& g, const DualPoint& theta0,
                                   double lambda0, double lambda);

/**
 * Ball guaranteed to contain theta*(lambda), given theta0 = theta*(lambda0).
 *
 *   Safe: center y/lambda,                      radius ||y/lambda - theta0||
 *   Dpp:  center theta0,                        radius |1/lambda - 1/lambda0| ||y||
 *   Imp1: center theta0,                        radius ||v2_perp||
 *   Imp2: center theta0 + (1/lambda - 1/lambda0) y / 2,
 *                                               radius |1/lambda - 1/lambda0| ||y|| / 2
 *   Edpp: center theta0 + v2_perp / 2,          radius ||v2_perp|| / 2
 *
 * GroupEdpp is rejected here; use estimate_group_dual_ball.
 */
BallEstimate estimate_dual_ball(BallMethod method, const Dataset& d, const DualPoint& theta0,
                                double lambda0, double lambda);
BallEstimate estimate_dual_ball(BallMethod method, const Dataset& d, const DualPoint& theta0,
                                double lambda0, double lambda, const LambdaMax& lmax);

BallEstimate estimate_group_dual_ball(const Dataset& d, const GroupLayout& g,
                                      const DualPoint& theta0, double lambda0, double lambda);

/**
 * Sphere test: discard i when |x_i^T c| < 1 - radius ||x_i|| - margin ||x_i||.
 * The comparison keeps a few ulps of slack, so a feature sitting exactly on
 * the threshold is kept. Zero-norm columns are always discarded. margin
 * defaults to 0; a positive value shrinks every threshold to absorb inexact
 * dual points.
 */
ScreenMask screen_with_ball(const Dataset& d, const BallEstimate& ball, double safety_margin = 0.0);

/// ||X_g||_2 for each group (power iteration on the block Gram matrix).
Vector group_spectral_norms(const Dataset& d, const GroupLayout& g);

/// Discard g when ||X_g^T c|| < sqrt(n_g) - radius ||X_g||_2.
ScreenMask screen_groups_with_ball(const Dataset& d, const GroupLayout& g,
                                   const Vector& spectral_norms, const BallEstimate& ball,
                                   double safety_margin = 0.0);

/// Basic SAFE: |x_i^T y| < lambda - ||x_i|| ||y|| (lambda_max - lambda) / lambda_max.
ScreenMask screen_safe_basic(const Dataset& d, double lambda);

/// Sequential strong rule: discard i when |x_i^T (y - X beta_prev)| < 2 lambda - lambda_prev.
/// Heuristic: pair it with strong_kkt_violations after the reduced solve.
ScreenMask screen_strong_sequential(const Dataset& d, const Vector& beta_prev, double lambda_prev,
                                    double lambda);

/// Discarded features whose KKT condition fails: |x_i^T (y - X beta)| / lambda > 1 + tol.
std::vector<Index> strong_kkt_violations(const Dataset& d, const ScreenMask& mask,
                                         const Vector& beta, double lambda, double tol = 1e-7);

/// Basic (non-sequential) rule at lambda: anchored at lambda_max with theta = y / lambda_max.
/// Strong uses the basic strong rule |x_i^T y| < 2 lambda - lambda_max.
ScreenMask basic_screen(Rule rule, const Dataset& d, double lambda);

/// Solutions, masks and timings along one regularization path.
struct PathRun
{
    Rule rule = Rule::None;
    std::vector<double> lambdas;
    std::vector<PrimalSolution> solutions;
    std::vector<ScreenMask> masks;
    std::vector<double> screen_seconds;
    std::vector<double> solver_seconds;
    /// Strong rule only: features restored by the KKT check at each lambda.
    std::vector<std::vector<Index>> kkt_violations;
};

/// A solver failure along a path, tagged with the grid index.
class PathError : public Error
{
public:
    PathError(std::size_t index, double lambda, const std::string& what)
        : Error("path step " + std::to_string(index) + " (lambda=" + std::to_string(lambda) +
                "): " + what),
          index_(index), lambda_(lambda)
    {}

    std::size_t index() const noexcept { return index_; }
    double lambda() const noexcept { return lambda_; }

private:
    std::size_t index_;
    double lambda_;
};

struct ScreenOptions
{
    double safety_margin = 0.0;
    /// KKT tolerance used by the strong-rule repair loop.
    double kkt_tol = 1e-7;
};

/**
 * Sequential screening along grid (descending). Each lambda_{k+1} is
 * screened with the dual point recovered from the solution at lambda_k,
 * the reduced problem is solved with a warm start, and discarded
 * coefficients are zero-padded. The path is seeded with beta = 0 and
 * theta = y / lambda_max; grid points at lambda_max are returned as zero
 * with every feature discarded (Rule::None keeps everything).
 */
PathRun sequential_screen(Rule rule, const Dataset& d, const LambdaGrid& grid,
                          const SolverConfig& cfg = {}, const ScreenOptions& opts = {});

/// Group Lasso path with Rule::GroupEdpp (or Rule::None for the unscreened baseline).
PathRun group_sequential_screen(const Dataset& d, const GroupLayout& g, const LambdaGrid& grid,
                                const SolverConfig& cfg = {}, Rule rule = Rule::GroupEdpp,
                                const ScreenOptions& opts = {});

} // namespace dpp
