#pragma once

#include <dpp/screening.hpp>
#include <dpp/solver.hpp>
#include <dpp/types.hpp>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace dpp {

enum class Spacing
{
    Linear,
    Log,
};

struct BenchConfig
{
    Index n_points = 100;
    double ratio_lo = 0.05;
    double ratio_hi = 1.0;
    Spacing spacing = Spacing::Linear;
    /// Screened arms. The unscreened baseline always runs and is reported as "none".
    std::vector<Rule> rules;
    /// Timing repetitions; per-lambda times are the median over trials.
    int trials = 1;
    /// Seeds the order in which arms run inside each trial.
    std::uint64_t seed = 0;
    SolverConfig solver;
    ScreenOptions screen;
    /// |beta_i| <= zero_threshold counts as a true zero in the baseline solve.
    double zero_threshold = 1e-10;
};

LambdaGrid make_grid(const BenchConfig& cfg, double lambda_max);

/**
 * Runs the baseline path and one screened path per rule on the same grid.
 *
 * Rejection ratio at each lambda is n_discarded / n_true_zero, with the
 * zeros taken from the baseline solve (groups when a layout is given).
 * speedup = baseline seconds / (screen seconds + reduced solver seconds).
 * A rule whose path fails is listed in failures and skipped.
 */
PathResult run_path_benchmark(const Dataset& d, const BenchConfig& cfg,
                              const GroupLayout* groups = nullptr);

/// Bench records for a single PathRun, measured against a baseline run.
std::vector<PathRecord> path_records(const PathRun& run, const PathRun& baseline,
                                     double lambda_max, double zero_threshold,
                                     const GroupLayout* groups = nullptr);

RuleSummary summarize(const std::string& rule, const std::vector<PathRecord>& records,
                      double baseline_seconds);

enum class ReportFormat
{
    Csv,
    JsonLines,
};

inline constexpr const char* kReportHeader =
    "rule,lambda,lambda_over_lambda_max,n_discarded,n_true_zero,rejection_ratio,screen_seconds,"
    "solver_seconds";

/**
 * CSV: one row per record, then one "<rule>:summary" row per rule. Summary
 * rows leave lambda empty, carry the speedup in lambda_over_lambda_max,
 * totals in the count and seconds columns and the mean ratio in
 * rejection_ratio. JSON lines carry the same fields under their own names.
 */
void emit_report(const PathResult& r, const std::filesystem::path& path, ReportFormat format);

struct ParsedReport
{
    std::vector<PathRecord> records;
    std::vector<RuleSummary> summaries;
};

ParsedReport parse_report_csv(const std::filesystem::path& path);

/// The summary row as CSV (no trailing newline).
std::string summary_csv_row(const RuleSummary& s);

} // namespace dpp
