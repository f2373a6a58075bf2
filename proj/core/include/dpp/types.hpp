#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dpp {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd; // column-major: every screening test is a column dot product
using Vector = Eigen::VectorXd;

/**
 * Design matrix X (N x p), response y (N) and cached norms.
 *
 * Immutable after construction. Zero-norm columns are allowed; they are
 * listed in zero_columns() and always screened out.
 */
class Dataset
{
public:
    /// Validates shapes and finiteness, then caches ||x_i||_2 and ||y||_2.
    static Dataset create(Matrix x, Vector y);

    const Matrix& x() const noexcept { return x_; }
    const Vector& y() const noexcept { return y_; }
    const Vector& col_norms() const noexcept { return col_norms_; }
    double y_norm() const noexcept { return y_norm_; }

    Index n_samples() const noexcept { return x_.rows(); }
    Index n_features() const noexcept { return x_.cols(); }

    const std::vector<Index>& zero_columns() const noexcept { return zero_columns_; }
    bool has_zero_columns() const noexcept { return !zero_columns_.empty(); }

private:
    Dataset() = default;

    Matrix x_;
    Vector y_;
    Vector col_norms_;
    double y_norm_ = 0.0;
    std::vector<Index> zero_columns_;
};

/// Same as Dataset::create.
Dataset validate_dataset(Matrix x, Vector y);

/// Partition of the p columns into G contiguous groups.
class GroupLayout
{
public:
    static GroupLayout from_sizes(std::vector<Index> sizes);

    /// Parses "3,2,5". Throws InvalidArgument on malformed input.
    static GroupLayout parse(std::string_view text);

    Index n_groups() const noexcept { return static_cast<Index>(sizes_.size()); }
    Index n_features() const noexcept { return offsets_.back(); }
    Index size(Index g) const { return sizes_[static_cast<std::size_t>(g)]; }
    Index begin(Index g) const { return offsets_[static_cast<std::size_t>(g)]; }

    const std::vector<Index>& sizes() const noexcept { return sizes_; }
    /// G + 1 prefix sums; group g spans [offsets[g], offsets[g+1]).
    const std::vector<Index>& offsets() const noexcept { return offsets_; }

    /// Throws DimensionMismatch unless the groups cover exactly d's columns.
    void check_compatible(const Dataset& d) const;

private:
    GroupLayout() = default;

    std::vector<Index> sizes_;
    std::vector<Index> offsets_;
};

/// Descending regularization path lambda_max >= values[0] > values[1] > ... > 0.
class LambdaGrid
{
public:
    /// Ratios must be strictly descending and lie in (0, 1].
    static LambdaGrid from_ratios(double lambda_max, std::vector<double> ratios);

    /// n_points ratios equally spaced from hi down to lo (hi only when n_points == 1).
    static LambdaGrid linear(double lambda_max, Index n_points, double lo, double hi);

    /// n_points ratios equally spaced in log scale from hi down to lo.
    static LambdaGrid logarithmic(double lambda_max, Index n_points, double lo, double hi);

    double lambda_max() const noexcept { return lambda_max_; }
    const std::vector<double>& ratios() const noexcept { return ratios_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    LambdaGrid() = default;

    double lambda_max_ = 0.0;
    std::vector<double> ratios_;
    std::vector<double> values_;
};

struct PrimalSolution
{
    Vector beta;
    double lambda = 0.0;
    double duality_gap = 0.0;
    int iterations = 0;
};

struct DualPoint
{
    Vector theta;
    double lambda = std::numeric_limits<double>::quiet_NaN();
    /// max constraint ratio minus one, measured before any rescaling (<= 0 is feasible).
    double feasibility_slack = 0.0;
};

enum class BallMethod
{
    Safe,
    Dpp,
    Imp1,
    Imp2,
    Edpp,
    GroupEdpp,
};

std::string_view to_string(BallMethod m) noexcept;

/// A ball B(center, radius) known to contain the dual optimum at `lambda`.
struct BallEstimate
{
    Vector center;
    double radius = 0.0;
    BallMethod method = BallMethod::Dpp;
    double lambda0 = 0.0;
    double lambda = 0.0;

    /// Checks radius >= 0, finite, and lambda <= lambda0.
    static BallEstimate make(Vector center, double radius, BallMethod method,
                             double lambda0, double lambda);
};

enum class Rule
{
    None,
    Safe,
    Dpp,
    Imp1,
    Imp2,
    Edpp,
    Strong,
    GroupEdpp,
};

std::string_view to_string(Rule r) noexcept;
/// Accepts the lower-case names printed by to_string ("edpp", "group_edpp", ...).
std::optional<Rule> parse_rule(std::string_view name) noexcept;
/// Ball method behind a safe sphere rule; nullopt for None and Strong.
std::optional<BallMethod> ball_method_for(Rule r) noexcept;

/// Per-feature (or per-group) discard decisions for one lambda.
struct ScreenMask
{
    std::vector<bool> discard;
    Rule rule = Rule::None;
    double lambda = 0.0;
    double lambda0 = 0.0;

    static ScreenMask keep_all(Index size, Rule rule, double lambda, double lambda0);
    static ScreenMask discard_all(Index size, Rule rule, double lambda, double lambda0);

    Index size() const noexcept { return static_cast<Index>(discard.size()); }
    Index n_discarded() const noexcept;
    std::vector<Index> kept() const;
};

/// One row of a path benchmark: a rule evaluated at one lambda.
struct PathRecord
{
    std::string rule;
    double lambda = 0.0;
    double lambda_ratio = 0.0;
    Index n_discarded = 0;
    Index n_true_zero = 0;
    /// n_discarded / n_true_zero; absent when n_true_zero == 0 or no screening ran.
    std::optional<double> rejection_ratio;
    double screen_seconds = 0.0;
    double solver_seconds = 0.0;
};

struct RuleSummary
{
    std::string rule;
    Index total_discarded = 0;
    Index total_true_zero = 0;
    std::optional<double> mean_rejection_ratio;
    double screen_seconds = 0.0;
    double solver_seconds = 0.0;
    /// baseline solver seconds / (screen_seconds + solver_seconds).
    double speedup = 0.0;
};

struct PathResult
{
    double lambda_max = 0.0;
    std::vector<PathRecord> records;
    std::vector<RuleSummary> summaries;
    double baseline_seconds = 0.0;
    std::vector<std::string> failures;
};

} // namespace dpp
