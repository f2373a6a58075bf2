#include <dpp/screening.hpp>

#include "detail.hpp"

namespace dpp {

namespace {

void check_grid(const LambdaGrid& grid, double lmax)
{
    if (grid.values().empty()) throw InvalidArgument("lambda grid is empty");
    if (grid.values().front() > lmax * (1.0 + 1e-12)) {
        throw InvalidArgument("grid starts above lambda_max (" + std::to_string(lmax) + ")");
    }
}

void reserve(PathRun& run, std::size_t n)
{
    run.lambdas.reserve(n);
    run.solutions.reserve(n);
    run.masks.reserve(n);
    run.screen_seconds.reserve(n);
    run.solver_seconds.reserve(n);
    run.kkt_violations.reserve(n);
}

} // namespace

PathRun sequential_screen(Rule rule, const Dataset& d, const LambdaGrid& grid,
                          const SolverConfig& cfg, const ScreenOptions& opts)
{
    if (rule == Rule::GroupEdpp) {
        throw InvalidArgument("group_edpp needs a group layout; use group_sequential_screen");
    }
    const LambdaMax lmax = lambda_max(d);
    check_grid(grid, lmax.value);

    PathRun run;
    run.rule = rule;
    reserve(run, grid.size());

    const Index p = d.n_features();
    Vector beta = Vector::Zero(p);
    DualPoint theta;
    theta.theta = d.y() / lmax.value;
    theta.lambda = lmax.value;
    double lambda_prev = lmax.value;

    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double lambda = grid.values()[k];
        detail::Stopwatch sw;
        double screen_t = 0.0;
        std::vector<Index> violations;

        ScreenMask mask;
        const bool trivial = lambda >= lmax.value;
        if (trivial) {
            mask = rule == Rule::None ? ScreenMask::keep_all(p, rule, lambda, lmax.value)
                                      : ScreenMask::discard_all(p, rule, lambda, lmax.value);
        } else {
            switch (rule) {
                case Rule::None:
                    mask = ScreenMask::keep_all(p, rule, lambda, lambda_prev);
                    break;
                case Rule::Strong:
                    mask = screen_strong_sequential(d, beta, lambda_prev, lambda);
                    break;
                default: {
                    const auto ball = estimate_dual_ball(*ball_method_for(rule), d, theta,
                                                         lambda_prev, lambda, lmax);
                    mask = screen_with_ball(d, ball, opts.safety_margin);
                    break;
                }
            }
            mask.rule = rule;
        }
        screen_t += sw.seconds();

        sw.reset();
        PrimalSolution sol;
        try {
            sol = solve_lasso_reduced(d, lambda, mask, beta, cfg);
            if (rule == Rule::Strong && !trivial) {
                for (;;) {
                    auto viol = strong_kkt_violations(d, mask, sol.beta, lambda, opts.kkt_tol);
                    if (viol.empty()) break;
                    for (auto i : viol) mask.discard[static_cast<std::size_t>(i)] = false;
                    violations.insert(violations.end(), viol.begin(), viol.end());
                    sol = solve_lasso_reduced(d, lambda, mask, sol.beta, cfg);
                }
            }
        } catch (const Error& e) {
            throw PathError(k, lambda, e.what());
        }
        const double solver_t = sw.seconds();

        if (!trivial && rule != Rule::None && rule != Rule::Strong) {
            sw.reset();
            theta = recover_dual_point(d, sol.beta, lambda);
            screen_t += sw.seconds();
            lambda_prev = lambda;
        } else if (!trivial) {
            lambda_prev = lambda;
        }
        beta = sol.beta;

        run.lambdas.push_back(lambda);
        run.solutions.push_back(std::move(sol));
        run.masks.push_back(std::move(mask));
        run.screen_seconds.push_back(screen_t);
        run.solver_seconds.push_back(solver_t);
        run.kkt_violations.push_back(std::move(violations));
    }
    return run;
}

PathRun group_sequential_screen(const Dataset& d, const GroupLayout& g, const LambdaGrid& grid,
                                const SolverConfig& cfg, Rule rule, const ScreenOptions& opts)
{
    if (rule != Rule::GroupEdpp && rule != Rule::None) {
        throw InvalidArgument("group paths support only group_edpp and none");
    }
    g.check_compatible(d);
    const LambdaMax lmax = group_lambda_max(d, g);
    check_grid(grid, lmax.value);

    PathRun run;
    run.rule = rule;
    reserve(run, grid.size());

    const Index n_groups = g.n_groups();
    Vector beta = Vector::Zero(d.n_features());
    DualPoint theta;
    theta.theta = d.y() / lmax.value;
    theta.lambda = lmax.value;
    double lambda_prev = lmax.value;
    Vector spectral;

    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double lambda = grid.values()[k];
        detail::Stopwatch sw;
        double screen_t = 0.0;

        ScreenMask mask;
        const bool trivial = lambda >= lmax.value;
        if (trivial) {
            mask = rule == Rule::None ? ScreenMask::keep_all(n_groups, rule, lambda, lmax.value)
                                      : ScreenMask::discard_all(n_groups, rule, lambda, lmax.value);
        } else if (rule == Rule::None) {
            mask = ScreenMask::keep_all(n_groups, rule, lambda, lambda_prev);
        } else {
            if (spectral.size() == 0) spectral = group_spectral_norms(d, g);
            const auto ball = estimate_group_dual_ball(d, g, theta, lambda_prev, lambda);
            mask = screen_groups_with_ball(d, g, spectral, ball, opts.safety_margin);
        }
        screen_t += sw.seconds();

        sw.reset();
        PrimalSolution sol;
        try {
            sol = solve_group_lasso_reduced(d, g, lambda, mask, beta, cfg);
        } catch (const Error& e) {
            throw PathError(k, lambda, e.what());
        }
        const double solver_t = sw.seconds();

        if (!trivial) {
            if (rule != Rule::None) {
                sw.reset();
                theta = recover_dual_point(d, sol.beta, lambda, &g);
                screen_t += sw.seconds();
            }
            lambda_prev = lambda;
        }
        beta = sol.beta;

        run.lambdas.push_back(lambda);
        run.solutions.push_back(std::move(sol));
        run.masks.push_back(std::move(mask));
        run.screen_seconds.push_back(screen_t);
        run.solver_seconds.push_back(solver_t);
        run.kkt_violations.emplace_back();
    }
    return run;
}

} // namespace dpp
