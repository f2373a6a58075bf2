#include <dpp/solver.hpp>

#include "detail.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dpp {

MaxItersExceeded::MaxItersExceeded(PrimalSolution best)
    : Error("solver hit max_iters at lambda=" + std::to_string(best.lambda) +
            " with duality gap " + std::to_string(best.duality_gap)),
      best_(std::move(best))
{}

namespace detail {

double lasso_gap(const Vector& beta, std::span<const Index> cols, const Vector& corr,
                 const Vector& r, double lambda)
{
    double s = 1.0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        s = std::max(s, std::abs(corr[static_cast<Index>(k)]) / lambda);
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const double b = beta[cols[k]];
        if (b != 0.0) sum += lambda * std::abs(b) - b * corr[static_cast<Index>(k)] / s;
    }
    const double shrink = 1.0 - 1.0 / s;
    return std::max(0.0, 0.5 * shrink * shrink * r.squaredNorm() + sum);
}

double group_dual_norm(const GroupLayout& g, std::span<const Index> groups, const Vector& corr)
{
    double s = 0.0;
    Index pos = 0;
    for (auto gi : groups) {
        const Index n = g.size(gi);
        s = std::max(s, corr.segment(pos, n).norm() / std::sqrt(static_cast<double>(n)));
        pos += n;
    }
    return s;
}

double group_gap(const GroupLayout& g, std::span<const Index> groups, const Vector& beta,
                 const Vector& corr, const Vector& r, double lambda)
{
    const double s = std::max(1.0, group_dual_norm(g, groups, corr) / lambda);
    double sum = 0.0;
    Index pos = 0;
    for (auto gi : groups) {
        const Index n = g.size(gi);
        const auto bg = beta.segment(g.begin(gi), n);
        const double nb = bg.norm();
        if (nb != 0.0) {
            sum += lambda * std::sqrt(static_cast<double>(n)) * nb -
                   bg.dot(corr.segment(pos, n)) / s;
        }
        pos += n;
    }
    const double shrink = 1.0 - 1.0 / s;
    return std::max(0.0, 0.5 * shrink * shrink * r.squaredNorm() + sum);
}

std::vector<Index> all_indices(Index n)
{
    std::vector<Index> out(static_cast<std::size_t>(n));
    std::iota(out.begin(), out.end(), Index{0});
    return out;
}

} // namespace detail

namespace {

void check_lambda(double lambda)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("lambda must be positive and finite");
    }
}

Vector initial_beta(const Dataset& d, const std::optional<Vector>& warm_start)
{
    if (!warm_start) return Vector::Zero(d.n_features());
    if (warm_start->size() != d.n_features()) {
        throw DimensionMismatch("warm start has length " + std::to_string(warm_start->size()) +
                                ", expected " + std::to_string(d.n_features()));
    }
    return *warm_start;
}

PrimalSolution coordinate_descent(const Dataset& d, double lambda, std::span<const Index> cols,
                                  Vector beta, const SolverConfig& cfg)
{
    const Matrix& x = d.x();
    const Vector& y = d.y();
    const Index n_cols = static_cast<Index>(cols.size());

    // Coefficients outside the working set are fixed at zero.
    {
        std::vector<bool> in_set(static_cast<std::size_t>(d.n_features()), false);
        for (auto j : cols) in_set[static_cast<std::size_t>(j)] = true;
        for (Index j = 0; j < d.n_features(); ++j) {
            if (!in_set[static_cast<std::size_t>(j)]) beta[j] = 0.0;
        }
        for (auto j : d.zero_columns()) beta[j] = 0.0;
    }

    PrimalSolution sol;
    sol.lambda = lambda;

    Vector corr(n_cols);
    double reduced_lmax = 0.0;
    for (Index k = 0; k < n_cols; ++k) {
        reduced_lmax = std::max(reduced_lmax, std::abs(x.col(cols[k]).dot(y)));
    }
    if (lambda >= reduced_lmax) {
        sol.beta = Vector::Zero(d.n_features());
        Vector r = y;
        for (Index k = 0; k < n_cols; ++k) corr[k] = x.col(cols[k]).dot(r);
        sol.duality_gap = detail::lasso_gap(sol.beta, cols, corr, r, lambda);
        return sol;
    }

    Vector sq(n_cols);
    for (Index k = 0; k < n_cols; ++k) sq[k] = d.col_norms()[cols[k]] * d.col_norms()[cols[k]];

    Vector r = y;
    for (auto j : cols) {
        if (beta[j] != 0.0) r.noalias() -= beta[j] * x.col(j);
    }

    const double tol = cfg.gap_tol * 0.5 * y.squaredNorm();
    const int check_every = std::max(1, cfg.check_every);

    auto gap_now = [&] {
        for (Index k = 0; k < n_cols; ++k) corr[k] = x.col(cols[k]).dot(r);
        return detail::lasso_gap(beta, cols, corr, r, lambda);
    };

    double gap = gap_now();
    if (gap <= tol) {
        sol.beta = std::move(beta);
        sol.duality_gap = gap;
        return sol;
    }

    for (int sweep = 1; sweep <= cfg.max_iters; ++sweep) {
        for (Index k = 0; k < n_cols; ++k) {
            if (sq[k] == 0.0) continue;
            const Index j = cols[k];
            const auto xj = x.col(j);
            const double old = beta[j];
            const double rho = xj.dot(r) + sq[k] * old;
            const double nw = soft_threshold(rho, lambda) / sq[k];
            if (nw != old) {
                r.noalias() -= (nw - old) * xj;
                beta[j] = nw;
            }
        }
        if (cfg.on_iteration) {
            double l1 = 0.0;
            for (auto j : cols) l1 += std::abs(beta[j]);
            cfg.on_iteration(sweep, 0.5 * r.squaredNorm() + lambda * l1);
        }
        if (sweep % check_every == 0 || sweep == cfg.max_iters) {
            gap = gap_now();
            if (gap <= tol) {
                sol.beta = std::move(beta);
                sol.duality_gap = gap;
                sol.iterations = sweep;
                return sol;
            }
        }
    }
    sol.beta = std::move(beta);
    sol.duality_gap = gap;
    sol.iterations = cfg.max_iters;
    throw MaxItersExceeded(std::move(sol));
}

} // namespace

PrimalSolution solve_lasso(const Dataset& d, double lambda, const std::optional<Vector>& warm_start,
                           const SolverConfig& cfg)
{
    check_lambda(lambda);
    const auto cols = detail::all_indices(d.n_features());
    return coordinate_descent(d, lambda, cols, initial_beta(d, warm_start), cfg);
}

PrimalSolution solve_lasso_reduced(const Dataset& d, double lambda, const ScreenMask& mask,
                                   const std::optional<Vector>& warm_start,
                                   const SolverConfig& cfg)
{
    check_lambda(lambda);
    if (mask.size() != d.n_features()) {
        throw DimensionMismatch("screen mask has " + std::to_string(mask.size()) +
                                " entries, dataset has " + std::to_string(d.n_features()) +
                                " features");
    }
    const auto cols = mask.kept();
    return coordinate_descent(d, lambda, cols, initial_beta(d, warm_start), cfg);
}

double primal_objective(const Dataset& d, const Vector& beta, double lambda,
                        const GroupLayout* groups)
{
    const double loss = 0.5 * (d.y() - d.x() * beta).squaredNorm();
    if (!groups) return loss + lambda * beta.lpNorm<1>();
    double pen = 0.0;
    for (Index g = 0; g < groups->n_groups(); ++g) {
        pen += std::sqrt(static_cast<double>(groups->size(g))) *
               beta.segment(groups->begin(g), groups->size(g)).norm();
    }
    return loss + lambda * pen;
}

double dual_objective(const Dataset& d, const Vector& theta, double lambda)
{
    return 0.5 * d.y().squaredNorm() - 0.5 * (lambda * theta - d.y()).squaredNorm();
}

double compute_duality_gap(const Dataset& d, const Vector& beta, double lambda,
                           const GroupLayout* groups)
{
    check_lambda(lambda);
    if (beta.size() != d.n_features()) throw DimensionMismatch("beta has the wrong length");
    const Vector r = d.y() - d.x() * beta;
    const Vector corr = d.x().transpose() * r;
    if (!groups) {
        const auto cols = detail::all_indices(d.n_features());
        return detail::lasso_gap(beta, cols, corr, r, lambda);
    }
    groups->check_compatible(d);
    const auto gs = detail::all_indices(groups->n_groups());
    return detail::group_gap(*groups, gs, beta, corr, r, lambda);
}

DualPoint scale_to_feasible(const Dataset& d, const Vector& theta_hat, const GroupLayout* groups)
{
    if (theta_hat.size() != d.n_samples()) throw DimensionMismatch("theta has the wrong length");
    const Vector corr = d.x().transpose() * theta_hat;
    double s = 0.0;
    if (groups) {
        groups->check_compatible(d);
        const auto gs = detail::all_indices(groups->n_groups());
        s = detail::group_dual_norm(*groups, gs, corr);
    } else {
        s = corr.cwiseAbs().maxCoeff();
    }
    DualPoint out;
    out.feasibility_slack = s - 1.0;
    out.theta = s > 1.0 ? Vector(theta_hat / s) : theta_hat;
    return out;
}

DualPoint recover_dual_point(const Dataset& d, const Vector& beta, double lambda,
                             const GroupLayout* groups)
{
    check_lambda(lambda);
    if (beta.size() != d.n_features()) throw DimensionMismatch("beta has the wrong length");
    Vector theta = (d.y() - d.x() * beta) / lambda;
    DualPoint out = scale_to_feasible(d, theta, groups);
    out.lambda = lambda;
    return out;
}

} // namespace dpp
