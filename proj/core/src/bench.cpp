#include <dpp/bench.hpp>
#include <dpp/random.hpp>

#include <algorithm>
#include <numeric>

namespace dpp {

namespace {

double median(std::vector<double> v)
{
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
    }
    return m;
}

Index count_zeros(const Vector& beta, double thr, const GroupLayout* groups)
{
    Index n = 0;
    if (!groups) {
        for (Index i = 0; i < beta.size(); ++i) n += std::abs(beta[i]) <= thr;
        return n;
    }
    for (Index g = 0; g < groups->n_groups(); ++g) {
        n += beta.segment(groups->begin(g), groups->size(g)).cwiseAbs().maxCoeff() <= thr;
    }
    return n;
}

PathRun run_arm(Rule rule, const Dataset& d, const LambdaGrid& grid, const BenchConfig& cfg,
                const GroupLayout* groups)
{
    if (groups) return group_sequential_screen(d, *groups, grid, cfg.solver, rule, cfg.screen);
    return sequential_screen(rule, d, grid, cfg.solver, cfg.screen);
}

} // namespace

LambdaGrid make_grid(const BenchConfig& cfg, double lambda_max)
{
    if (cfg.spacing == Spacing::Log) {
        return LambdaGrid::logarithmic(lambda_max, cfg.n_points, cfg.ratio_lo, cfg.ratio_hi);
    }
    return LambdaGrid::linear(lambda_max, cfg.n_points, cfg.ratio_lo, cfg.ratio_hi);
}

std::vector<PathRecord> path_records(const PathRun& run, const PathRun& baseline,
                                     double lambda_max, double zero_threshold,
                                     const GroupLayout* groups)
{
    if (run.lambdas.size() != baseline.lambdas.size()) {
        throw DimensionMismatch("run and baseline cover different grids");
    }
    std::vector<PathRecord> out;
    out.reserve(run.lambdas.size());
    const bool screened = run.rule != Rule::None;
    for (std::size_t k = 0; k < run.lambdas.size(); ++k) {
        PathRecord rec;
        rec.rule = std::string(to_string(run.rule));
        rec.lambda = run.lambdas[k];
        rec.lambda_ratio = run.lambdas[k] / lambda_max;
        rec.n_discarded = screened ? run.masks[k].n_discarded() : 0;
        rec.n_true_zero = count_zeros(baseline.solutions[k].beta, zero_threshold, groups);
        if (screened && rec.n_true_zero > 0) {
            rec.rejection_ratio =
                static_cast<double>(rec.n_discarded) / static_cast<double>(rec.n_true_zero);
        }
        rec.screen_seconds = run.screen_seconds[k];
        rec.solver_seconds = run.solver_seconds[k];
        out.push_back(std::move(rec));
    }
    return out;
}

RuleSummary summarize(const std::string& rule, const std::vector<PathRecord>& records,
                      double baseline_seconds)
{
    RuleSummary s;
    s.rule = rule;
    double ratio_sum = 0.0;
    int ratio_n = 0;
    for (const auto& r : records) {
        s.total_discarded += r.n_discarded;
        s.total_true_zero += r.n_true_zero;
        s.screen_seconds += r.screen_seconds;
        s.solver_seconds += r.solver_seconds;
        if (r.rejection_ratio) {
            ratio_sum += *r.rejection_ratio;
            ++ratio_n;
        }
    }
    if (ratio_n > 0) s.mean_rejection_ratio = ratio_sum / ratio_n;
    const double cost = s.screen_seconds + s.solver_seconds;
    s.speedup = cost > 0.0 ? baseline_seconds / cost : 0.0;
    return s;
}

PathResult run_path_benchmark(const Dataset& d, const BenchConfig& cfg, const GroupLayout* groups)
{
    if (cfg.n_points < 2) throw InvalidArgument("n_points must be at least 2");
    if (!(cfg.ratio_lo > 0.0 && cfg.ratio_lo < cfg.ratio_hi && cfg.ratio_hi <= 1.0)) {
        throw InvalidArgument("need 0 < ratio_lo < ratio_hi <= 1");
    }
    if (cfg.trials < 1) throw InvalidArgument("trials must be at least 1");
    if (groups) groups->check_compatible(d);

    const double lmax = groups ? group_lambda_max(d, *groups).value : lambda_max(d).value;
    const LambdaGrid grid = make_grid(cfg, lmax);
    const std::size_t n_lambda = grid.size();

    std::vector<Rule> arms{Rule::None};
    for (auto r : cfg.rules) {
        if (std::find(arms.begin(), arms.end(), r) == arms.end()) arms.push_back(r);
    }

    PathResult result;
    result.lambda_max = lmax;

    // runs[a] holds the first successful run of arm a; times[a][k] the per-trial samples.
    std::vector<std::optional<PathRun>> runs(arms.size());
    std::vector<std::vector<std::vector<double>>> screen_t(arms.size()), solver_t(arms.size());
    std::vector<bool> failed(arms.size(), false);
    for (std::size_t a = 0; a < arms.size(); ++a) {
        screen_t[a].assign(n_lambda, {});
        solver_t[a].assign(n_lambda, {});
    }

    std::vector<std::size_t> order(arms.size());
    for (int t = 0; t < cfg.trials; ++t) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        CounterRng rng(cfg.seed, static_cast<std::uint64_t>(t));
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[static_cast<std::size_t>(rng.below(i))]);
        }
        for (auto a : order) {
            if (failed[a]) continue;
            try {
                PathRun run = run_arm(arms[a], d, grid, cfg, groups);
                for (std::size_t k = 0; k < n_lambda; ++k) {
                    screen_t[a][k].push_back(run.screen_seconds[k]);
                    solver_t[a][k].push_back(run.solver_seconds[k]);
                }
                if (!runs[a]) runs[a] = std::move(run);
            } catch (const PathError& e) {
                failed[a] = true;
                result.failures.push_back(std::string(to_string(arms[a])) + ": " + e.what());
                if (a == 0) throw;
            }
        }
    }

    for (std::size_t a = 0; a < arms.size(); ++a) {
        if (failed[a]) continue;
        PathRun& run = *runs[a];
        for (std::size_t k = 0; k < n_lambda; ++k) {
            run.screen_seconds[k] = median(screen_t[a][k]);
            run.solver_seconds[k] = median(solver_t[a][k]);
        }
    }
    const PathRun& baseline = *runs[0];
    for (double s : baseline.solver_seconds) result.baseline_seconds += s;

    for (std::size_t a = 0; a < arms.size(); ++a) {
        if (failed[a]) continue;
        auto recs = path_records(*runs[a], baseline, lmax, cfg.zero_threshold, groups);
        result.summaries.push_back(
            summarize(std::string(to_string(arms[a])), recs, result.baseline_seconds));
        result.records.insert(result.records.end(), std::make_move_iterator(recs.begin()),
                              std::make_move_iterator(recs.end()));
    }
    return result;
}

} // namespace dpp
