#include "cli.hpp"

#include <dpp/bench.hpp>
#include <dpp/data.hpp>
#include <dpp/errors.hpp>
#include <dpp/screening.hpp>
#include <dpp/solver.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>

namespace dpp::cli {

namespace {

struct InputOpts
{
    std::string x;
    std::string y;
    std::string groups;
};

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

void add_input(CLI::App* sub, InputOpts& in)
{
    sub->add_option("--x", in.x, "Design matrix: CSV, or a .bin DPPS file holding X and y")
        ->required();
    sub->add_option("--y", in.y, "Response CSV (not needed with a .bin --x)");
    sub->add_option("--groups", in.groups, "Group sizes \"s1,s2,...\" for the group Lasso");
}

Dataset load_input(const InputOpts& in)
{
    const std::filesystem::path xp(in.x);
    if (xp.extension() == ".bin") return load_binary(xp);
    if (in.y.empty()) throw UsageError("--y is required for CSV input");
    return load_csv(xp, in.y);
}

std::optional<GroupLayout> load_groups(const InputOpts& in, const Dataset& d)
{
    if (in.groups.empty()) return std::nullopt;
    GroupLayout g = GroupLayout::parse(in.groups);
    g.check_compatible(d);
    return g;
}

Rule rule_or_throw(const std::string& name, bool grouped)
{
    auto r = parse_rule(name);
    if (!r) throw UsageError("unknown rule '" + name + "'");
    if (grouped && *r == Rule::Edpp) return Rule::GroupEdpp;
    if (grouped && *r != Rule::GroupEdpp && *r != Rule::None) {
        throw UsageError("with --groups only edpp (group_edpp) and none are available");
    }
    if (!grouped && *r == Rule::GroupEdpp) throw UsageError("group_edpp needs --groups");
    return *r;
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto pos = s.find(',', start);
        if (pos == std::string::npos) pos = s.size();
        if (pos > start) out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

ReportFormat format_or_throw(const std::string& f)
{
    if (f == "csv") return ReportFormat::Csv;
    if (f == "jsonl") return ReportFormat::JsonLines;
    throw UsageError("--format must be csv or jsonl");
}

Spacing spacing_or_throw(const std::string& s)
{
    if (s == "linear") return Spacing::Linear;
    if (s == "log") return Spacing::Log;
    throw UsageError("--spacing must be linear or log");
}

struct GridOpts
{
    Index points = 100;
    double lo = 0.05;
    double hi = 1.0;
    std::string spacing = "linear";
};

void add_grid(CLI::App* sub, GridOpts& g)
{
    sub->add_option("--points", g.points, "Number of lambda values")->capture_default_str();
    sub->add_option("--lo", g.lo, "Smallest lambda / lambda_max")->capture_default_str();
    sub->add_option("--hi", g.hi, "Largest lambda / lambda_max")->capture_default_str();
    sub->add_option("--spacing", g.spacing, "linear or log")->capture_default_str();
}

LambdaGrid build_grid(const GridOpts& g, double lmax)
{
    if (spacing_or_throw(g.spacing) == Spacing::Log) {
        return LambdaGrid::logarithmic(lmax, g.points, g.lo, g.hi);
    }
    return LambdaGrid::linear(lmax, g.points, g.lo, g.hi);
}

void add_solver(CLI::App* sub, SolverConfig& s)
{
    sub->add_option("--gap-tol", s.gap_tol, "Duality gap tolerance relative to ||y||^2 / 2")
        ->capture_default_str();
    sub->add_option("--max-iters", s.max_iters, "Iteration budget per solve")
        ->capture_default_str();
}

// gen ------------------------------------------------------------------------

struct GenOpts
{
    Index n = 0, p = 0, nnz = 0;
    double sigma = 0.1;
    std::string corr = "iid";
    std::uint64_t seed = 0;
    std::string out;
    std::string groups;
    bool binary = false;
};

int cmd_gen(const GenOpts& o, std::ostream& out)
{
    SyntheticSpec spec;
    spec.n = o.n;
    spec.p = o.p;
    spec.nnz = o.nnz;
    spec.sigma = o.sigma;
    std::tie(spec.correlation, spec.rho) = parse_correlation(o.corr);
    spec.seed = o.seed;
    if (!o.groups.empty()) spec.group_sizes = GroupLayout::parse(o.groups).sizes();

    const auto syn = generate_synthetic(spec);
    if (o.binary) {
        save_binary(syn.data, o.out + ".bin");
    } else {
        save_matrix_csv(syn.data.x(), o.out + ".x.csv");
    }
    save_vector_csv(syn.data.y(), o.out + ".y.csv");
    save_vector_csv(syn.beta_true, o.out + ".beta_true.csv");
    out << "wrote " << o.out << (o.binary ? ".bin" : ".x.csv") << ", " << o.out << ".y.csv, "
        << o.out << ".beta_true.csv\n";
    return kOk;
}

// solve ----------------------------------------------------------------------

struct SolveOpts
{
    InputOpts in;
    std::optional<double> lambda;
    std::optional<double> ratio;
    std::string out;
    SolverConfig solver;
};

int cmd_solve(const SolveOpts& o, std::ostream& out)
{
    const Dataset d = load_input(o.in);
    const auto groups = load_groups(o.in, d);
    const double lmax = groups ? group_lambda_max(d, *groups).value : lambda_max(d).value;
    if (o.lambda.has_value() == o.ratio.has_value()) {
        throw UsageError("give exactly one of --lambda and --ratio");
    }
    const double lambda = o.lambda ? *o.lambda : *o.ratio * lmax;

    const PrimalSolution sol = groups ? solve_group_lasso(d, *groups, lambda, std::nullopt, o.solver)
                                      : solve_lasso(d, lambda, std::nullopt, o.solver);
    if (!o.out.empty()) save_vector_csv(sol.beta, o.out);
    const auto nnz = (sol.beta.array() != 0.0).count();
    out << "lambda=" << format_double(lambda) << " lambda_max=" << format_double(lmax)
        << " nonzeros=" << nnz << " duality_gap=" << format_double(sol.duality_gap)
        << " iterations=" << sol.iterations << '\n';
    if (o.out.empty()) {
        for (Index i = 0; i < sol.beta.size(); ++i) out << format_double(sol.beta[i]) << '\n';
    }
    return kOk;
}

// path -----------------------------------------------------------------------

struct PathOpts
{
    InputOpts in;
    std::string rule = "edpp";
    GridOpts grid;
    std::string out = "report.csv";
    std::string format = "csv";
    std::string coef_out;
    SolverConfig solver;
};

void save_coefficients(const PathRun& run, const std::string& path)
{
    const Index p = run.solutions.empty() ? 0 : run.solutions.front().beta.size();
    Matrix m(static_cast<Index>(run.solutions.size()), p);
    for (std::size_t k = 0; k < run.solutions.size(); ++k) {
        m.row(static_cast<Index>(k)) = run.solutions[k].beta.transpose();
    }
    save_matrix_csv(m, path);
}

int cmd_path(const PathOpts& o, std::ostream& out)
{
    const Dataset d = load_input(o.in);
    const auto groups = load_groups(o.in, d);
    const Rule rule = rule_or_throw(o.rule, groups.has_value());
    const ReportFormat fmt = format_or_throw(o.format);
    const double lmax = groups ? group_lambda_max(d, *groups).value : lambda_max(d).value;
    const LambdaGrid grid = build_grid(o.grid, lmax);
    const GroupLayout* gp = groups ? &*groups : nullptr;

    auto run_rule = [&](Rule r) {
        return gp ? group_sequential_screen(d, *gp, grid, o.solver, r)
                  : sequential_screen(r, d, grid, o.solver);
    };
    const PathRun baseline = run_rule(Rule::None);
    const PathRun run = rule == Rule::None ? baseline : run_rule(rule);

    PathResult result;
    result.lambda_max = lmax;
    for (double s : baseline.solver_seconds) result.baseline_seconds += s;
    result.records = path_records(run, baseline, lmax, 1e-10, gp);
    result.summaries.push_back(
        summarize(std::string(to_string(rule)), result.records, result.baseline_seconds));
    emit_report(result, o.out, fmt);
    if (!o.coef_out.empty()) save_coefficients(run, o.coef_out);

    out << kReportHeader << '\n' << summary_csv_row(result.summaries.front()) << '\n';
    return kOk;
}

// bench ----------------------------------------------------------------------

struct BenchOpts
{
    InputOpts in;
    std::string rules = "edpp,dpp,safe";
    int trials = 3;
    std::uint64_t seed = 0;
    GridOpts grid;
    std::string out = "bench.csv";
    std::string format = "csv";
    SolverConfig solver;
};

int cmd_bench(const BenchOpts& o, std::ostream& out)
{
    const Dataset d = load_input(o.in);
    const auto groups = load_groups(o.in, d);
    BenchConfig cfg;
    cfg.n_points = o.grid.points;
    cfg.ratio_lo = o.grid.lo;
    cfg.ratio_hi = o.grid.hi;
    cfg.spacing = spacing_or_throw(o.grid.spacing);
    for (const auto& name : split_list(o.rules)) {
        const Rule r = rule_or_throw(name, groups.has_value());
        if (r != Rule::None) cfg.rules.push_back(r);
    }
    cfg.trials = o.trials;
    cfg.seed = o.seed;
    cfg.solver = o.solver;
    const ReportFormat fmt = format_or_throw(o.format);

    const PathResult result = run_path_benchmark(d, cfg, groups ? &*groups : nullptr);
    emit_report(result, o.out, fmt);

    out << kReportHeader << '\n';
    for (const auto& s : result.summaries) out << summary_csv_row(s) << '\n';
    for (const auto& f : result.failures) out << "failure: " << f << '\n';
    return kOk;
}

// screen-report --------------------------------------------------------------

struct ScreenReportOpts
{
    InputOpts in;
    std::string rules = "safe,dpp,imp1,imp2,edpp,strong";
    double ratio = 0.5;
    std::string out;
};

int cmd_screen_report(const ScreenReportOpts& o, std::ostream& out)
{
    const Dataset d = load_input(o.in);
    if (!o.in.groups.empty()) throw UsageError("screen-report covers the plain Lasso only");
    if (!(o.ratio > 0.0 && o.ratio <= 1.0)) throw UsageError("--ratio must lie in (0, 1]");
    const double lmax = lambda_max(d).value;
    const double lambda = o.ratio * lmax;

    std::vector<Rule> rules;
    for (const auto& name : split_list(o.rules)) rules.push_back(rule_or_throw(name, false));
    std::vector<ScreenMask> masks;
    for (auto r : rules) masks.push_back(basic_screen(r, d, lambda));

    out << "rule,lambda,lambda_over_lambda_max,n_features,n_discarded\n";
    for (std::size_t k = 0; k < rules.size(); ++k) {
        out << to_string(rules[k]) << ',' << format_double(lambda) << ',' << format_double(o.ratio)
            << ',' << d.n_features() << ',' << masks[k].n_discarded() << '\n';
    }
    if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) throw IoError("cannot open " + o.out + " for writing");
        f << "feature";
        for (auto r : rules) f << ',' << to_string(r);
        f << '\n';
        for (Index i = 0; i < d.n_features(); ++i) {
            f << i;
            for (const auto& m : masks) f << ',' << (m.discard[static_cast<std::size_t>(i)] ? 1 : 0);
            f << '\n';
        }
        if (!f) throw IoError("write failure on " + o.out);
    }
    return kOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Safe screening rules for the Lasso and group Lasso", "dpp"};
    app.require_subcommand(1);
    app.fallthrough(false);

    GenOpts gen;
    auto* g = app.add_subcommand("gen", "Generate a synthetic regression problem");
    g->add_option("--n", gen.n, "Number of samples")->required();
    g->add_option("--p", gen.p, "Number of features")->required();
    g->add_option("--nnz", gen.nnz, "Nonzero true coefficients")->required();
    g->add_option("--sigma", gen.sigma, "Noise scale")->capture_default_str();
    g->add_option("--corr", gen.corr, "iid or ar1:RHO")->capture_default_str();
    g->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
    g->add_option("--out", gen.out, "Output prefix")->required();
    g->add_option("--groups", gen.groups, "Group sizes \"s1,s2,...\" summing to p");
    g->add_flag("--binary", gen.binary, "Write X and y as PREFIX.bin instead of PREFIX.x.csv");

    SolveOpts solve;
    auto* s = app.add_subcommand("solve", "Solve the Lasso (or group Lasso) at one lambda");
    add_input(s, solve.in);
    s->add_option("--lambda", solve.lambda, "Regularization parameter");
    s->add_option("--ratio", solve.ratio, "lambda / lambda_max");
    s->add_option("--out", solve.out, "Coefficient CSV (printed when omitted)");
    add_solver(s, solve.solver);

    PathOpts path;
    auto* pth = app.add_subcommand("path", "Sequential screening along a lambda path");
    add_input(pth, path.in);
    pth->add_option("--rule", path.rule, "dpp|imp1|imp2|edpp|safe|strong|none")
        ->capture_default_str();
    add_grid(pth, path.grid);
    pth->add_option("--out", path.out, "Report file")->capture_default_str();
    pth->add_option("--format", path.format, "csv or jsonl")->capture_default_str();
    pth->add_option("--coef-out", path.coef_out, "CSV of coefficients, one row per lambda");
    add_solver(pth, path.solver);

    BenchOpts bench;
    auto* b = app.add_subcommand("bench", "Timed comparison of rules against the unscreened path");
    add_input(b, bench.in);
    b->add_option("--rules", bench.rules, "Comma-separated rules (empty: baseline only)")
        ->capture_default_str();
    b->add_option("--trials", bench.trials, "Timing repetitions (median reported)")
        ->capture_default_str();
    b->add_option("--seed", bench.seed, "Seed for the per-trial run order")->capture_default_str();
    add_grid(b, bench.grid);
    b->add_option("--out", bench.out, "Report file")->capture_default_str();
    b->add_option("--format", bench.format, "csv or jsonl")->capture_default_str();
    add_solver(b, bench.solver);

    ScreenReportOpts rep;
    auto* r = app.add_subcommand("screen-report",
                                 "Basic (lambda_max-anchored) screening counts at one lambda");
    add_input(r, rep.in);
    r->add_option("--rules", rep.rules, "Comma-separated rules")->capture_default_str();
    r->add_option("--ratio", rep.ratio, "lambda / lambda_max")->capture_default_str();
    r->add_option("--out", rep.out, "Per-feature discard flags as CSV");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    try {
        if (g->parsed()) return cmd_gen(gen, out);
        if (s->parsed()) return cmd_solve(solve, out);
        if (pth->parsed()) return cmd_path(path, out);
        if (b->parsed()) return cmd_bench(bench, out);
        if (r->parsed()) return cmd_screen_report(rep, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InvalidSpec& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const DimensionMismatch& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const NonFiniteInput& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const Error& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kNumericFailure;
    }
    return kUsage;
}

} // namespace dpp::cli
