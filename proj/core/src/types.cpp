#include <dpp/errors.hpp>
#include <dpp/types.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>

namespace dpp {

Dataset Dataset::create(Matrix x, Vector y)
{
    if (x.rows() < 1 || x.cols() < 1) {
        throw DimensionMismatch("design matrix must have at least one row and one column");
    }
    if (y.size() != x.rows()) {
        throw DimensionMismatch("response has length " + std::to_string(y.size()) +
                                " but design matrix has " + std::to_string(x.rows()) +
                                " rows");
    }
    if (!x.allFinite()) {
        throw NonFiniteInput("design matrix contains NaN or Inf");
    }
    if (!y.allFinite()) {
        throw NonFiniteInput("response contains NaN or Inf");
    }

    Dataset d;
    d.col_norms_ = x.colwise().norm().transpose();
    d.y_norm_ = y.norm();
    for (Index i = 0; i < x.cols(); ++i) {
        if (d.col_norms_[i] == 0.0) d.zero_columns_.push_back(i);
    }
    d.x_ = std::move(x);
    d.y_ = std::move(y);
    return d;
}

Dataset validate_dataset(Matrix x, Vector y)
{
    return Dataset::create(std::move(x), std::move(y));
}

GroupLayout GroupLayout::from_sizes(std::vector<Index> sizes)
{
    if (sizes.empty()) throw InvalidArgument("group layout needs at least one group");
    GroupLayout g;
    g.offsets_.reserve(sizes.size() + 1);
    g.offsets_.push_back(0);
    for (auto s : sizes) {
        if (s < 1) throw InvalidArgument("group sizes must be positive");
        g.offsets_.push_back(g.offsets_.back() + s);
    }
    g.sizes_ = std::move(sizes);
    return g;
}

GroupLayout GroupLayout::parse(std::string_view text)
{
    std::vector<Index> sizes;
    while (!text.empty()) {
        auto comma = text.find(',');
        auto tok = text.substr(0, comma);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        long long v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
            throw InvalidArgument("malformed group size '" + std::string(tok) + "'");
        }
        sizes.push_back(static_cast<Index>(v));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return from_sizes(std::move(sizes));
}

void GroupLayout::check_compatible(const Dataset& d) const
{
    if (n_features() != d.n_features()) {
        throw DimensionMismatch("group sizes sum to " + std::to_string(n_features()) +
                                " but dataset has " + std::to_string(d.n_features()) +
                                " features");
    }
}

LambdaGrid LambdaGrid::from_ratios(double lambda_max, std::vector<double> ratios)
{
    if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) {
        throw InvalidArgument("lambda_max must be positive and finite");
    }
    if (ratios.empty()) throw InvalidArgument("lambda grid is empty");
    for (std::size_t k = 0; k < ratios.size(); ++k) {
        if (!(ratios[k] > 0.0 && ratios[k] <= 1.0)) {
            throw InvalidArgument("lambda ratios must lie in (0, 1]");
        }
        if (k > 0 && !(ratios[k] < ratios[k - 1])) {
            throw InvalidArgument("lambda ratios must be strictly descending");
        }
    }
    LambdaGrid grid;
    grid.lambda_max_ = lambda_max;
    grid.values_.reserve(ratios.size());
    for (double r : ratios) grid.values_.push_back(r * lambda_max);
    grid.ratios_ = std::move(ratios);
    return grid;
}

LambdaGrid LambdaGrid::linear(double lambda_max, Index n_points, double lo, double hi)
{
    if (n_points < 1) throw InvalidArgument("grid needs at least one point");
    if (n_points > 1 && !(0.0 < lo && lo < hi && hi <= 1.0)) {
        throw InvalidArgument("grid bounds must satisfy 0 < lo < hi <= 1");
    }
    std::vector<double> ratios(static_cast<std::size_t>(n_points));
    if (n_points == 1) {
        ratios[0] = hi;
    } else {
        const double step = (hi - lo) / static_cast<double>(n_points - 1);
        for (Index k = 0; k < n_points; ++k) {
            ratios[static_cast<std::size_t>(k)] = hi - step * static_cast<double>(k);
        }
        ratios.back() = lo;
    }
    return from_ratios(lambda_max, std::move(ratios));
}

LambdaGrid LambdaGrid::logarithmic(double lambda_max, Index n_points, double lo, double hi)
{
    if (n_points < 1) throw InvalidArgument("grid needs at least one point");
    if (n_points > 1 && !(0.0 < lo && lo < hi && hi <= 1.0)) {
        throw InvalidArgument("grid bounds must satisfy 0 < lo < hi <= 1");
    }
    std::vector<double> ratios(static_cast<std::size_t>(n_points));
    if (n_points == 1) {
        ratios[0] = hi;
    } else {
        const double a = std::log(hi);
        const double step = (std::log(lo) - a) / static_cast<double>(n_points - 1);
        for (Index k = 0; k < n_points; ++k) {
            ratios[static_cast<std::size_t>(k)] = std::exp(a + step * static_cast<double>(k));
        }
        ratios.front() = hi;
        ratios.back() = lo;
    }
    return from_ratios(lambda_max, std::move(ratios));
}

std::string_view to_string(BallMethod m) noexcept
{
    switch (m) {
        case BallMethod::Safe: return "safe";
        case BallMethod::Dpp: return "dpp";
        case BallMethod::Imp1: return "imp1";
        case BallMethod::Imp2: return "imp2";
        case BallMethod::Edpp: return "edpp";
        case BallMethod::GroupEdpp: return "group_edpp";
    }
    return "?";
}

BallEstimate BallEstimate::make(Vector center, double radius, BallMethod method,
                                double lambda0, double lambda)
{
    if (!(radius >= 0.0) || !std::isfinite(radius)) {
        throw InvalidArgument("ball radius must be finite and nonnegative");
    }
    if (!(lambda <= lambda0)) {
        throw InvalidArgument("ball estimate requires lambda <= lambda0");
    }
    return BallEstimate{std::move(center), radius, method, lambda0, lambda};
}

std::string_view to_string(Rule r) noexcept
{
    switch (r) {
        case Rule::None: return "none";
        case Rule::Safe: return "safe";
        case Rule::Dpp: return "dpp";
        case Rule::Imp1: return "imp1";
        case Rule::Imp2: return "imp2";
        case Rule::Edpp: return "edpp";
        case Rule::Strong: return "strong";
        case Rule::GroupEdpp: return "group_edpp";
    }
    return "?";
}

std::optional<Rule> parse_rule(std::string_view name) noexcept
{
    for (auto r : {Rule::None, Rule::Safe, Rule::Dpp, Rule::Imp1, Rule::Imp2, Rule::Edpp,
                   Rule::Strong, Rule::GroupEdpp}) {
        if (to_string(r) == name) return r;
    }
    return std::nullopt;
}

std::optional<BallMethod> ball_method_for(Rule r) noexcept
{
    switch (r) {
        case Rule::Safe: return BallMethod::Safe;
        case Rule::Dpp: return BallMethod::Dpp;
        case Rule::Imp1: return BallMethod::Imp1;
        case Rule::Imp2: return BallMethod::Imp2;
        case Rule::Edpp: return BallMethod::Edpp;
        case Rule::GroupEdpp: return BallMethod::GroupEdpp;
        case Rule::None:
        case Rule::Strong: return std::nullopt;
    }
    return std::nullopt;
}

ScreenMask ScreenMask::keep_all(Index size, Rule rule, double lambda, double lambda0)
{
    return ScreenMask{std::vector<bool>(static_cast<std::size_t>(size), false), rule, lambda,
                      lambda0};
}

ScreenMask ScreenMask::discard_all(Index size, Rule rule, double lambda, double lambda0)
{
    return ScreenMask{std::vector<bool>(static_cast<std::size_t>(size), true), rule, lambda,
                      lambda0};
}

Index ScreenMask::n_discarded() const noexcept
{
    return static_cast<Index>(std::count(discard.begin(), discard.end(), true));
}

std::vector<Index> ScreenMask::kept() const
{
    std::vector<Index> out;
    out.reserve(discard.size());
    for (std::size_t i = 0; i < discard.size(); ++i) {
        if (!discard[i]) out.push_back(static_cast<Index>(i));
    }
    return out;
}

} // namespace dpp
