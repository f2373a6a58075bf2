#include <dpp/screening.hpp>

#include "detail.hpp"

#include <cmath>
#include <limits>

namespace dpp {

namespace {

void check_pair(double lambda0, double lambda)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("lambda must be positive and finite");
    }
    if (!(lambda <= lambda0)) throw InvalidArgument("screening requires lambda <= lambda0");
}

void check_below_max(double lambda0, double lmax)
{
    if (lambda0 > lmax * (1.0 + 1e-12)) {
        throw InvalidArgument("lambda0 = " + std::to_string(lambda0) + " exceeds lambda_max = " +
                              std::to_string(lmax));
    }
}

Rule rule_for(BallMethod m)
{
    switch (m) {
        case BallMethod::Safe: return Rule::Safe;
        case BallMethod::Dpp: return Rule::Dpp;
        case BallMethod::Imp1: return Rule::Imp1;
        case BallMethod::Imp2: return Rule::Imp2;
        case BallMethod::Edpp: return Rule::Edpp;
        case BallMethod::GroupEdpp: return Rule::GroupEdpp;
    }
    return Rule::None;
}

} // namespace

LambdaMax lambda_max(const Dataset& d)
{
    const Vector xty = d.x().transpose() * d.y();
    LambdaMax out;
    for (Index i = 0; i < xty.size(); ++i) {
        const double v = std::abs(xty[i]);
        if (v > out.value) {
            out.value = v;
            out.argmax = i;
        }
    }
    if (out.value == 0.0) {
        throw DegenerateResponse("response is orthogonal to every feature (lambda_max = 0)");
    }
    return out;
}

Vector compute_v1(const Dataset& d, const DualPoint& theta0, double lambda0)
{
    return compute_v1(d, theta0, lambda0, lambda_max(d));
}

Vector compute_v1(const Dataset& d, const DualPoint& theta0, double lambda0, const LambdaMax& lmax)
{
    if (!(lambda0 > 0.0)) throw InvalidArgument("lambda0 must be positive");
    check_below_max(lambda0, lmax.value);
    if (detail::at_lambda_max(lambda0, lmax.value)) {
        const auto xs = d.x().col(lmax.argmax);
        return xs.dot(d.y()) >= 0.0 ? Vector(xs) : Vector(-xs);
    }
    return d.y() / lambda0 - theta0.theta;
}

VGeometry compute_v_geometry(const Dataset& d, const DualPoint& theta0, double lambda0,
                             double lambda)
{
    return compute_v_geometry(d, theta0, lambda0, lambda, lambda_max(d));
}

VGeometry compute_v_geometry(const Dataset& d, const DualPoint& theta0, double lambda0,
                             double lambda, const LambdaMax& lmax)
{
    check_pair(lambda0, lambda);
    VGeometry geo;
    geo.lambda0 = lambda0;
    geo.lambda = lambda;
    geo.v1 = compute_v1(d, theta0, lambda0, lmax);
    const double v1sq = geo.v1.squaredNorm();
    if (v1sq == 0.0) throw DegenerateV1("v1 vanished at lambda0 = " + std::to_string(lambda0));
    geo.v2 = d.y() / lambda - theta0.theta;
    geo.v2_perp = geo.v2 - (geo.v1.dot(geo.v2) / v1sq) * geo.v1;
    return geo;
}

BallEstimate estimate_dual_ball(BallMethod method, const Dataset& d, const DualPoint& theta0,
                                double lambda0, double lambda)
{
    return estimate_dual_ball(method, d, theta0, lambda0, lambda, lambda_max(d));
}

BallEstimate estimate_dual_ball(BallMethod method, const Dataset& d, const DualPoint& theta0,
                                double lambda0, double lambda, const LambdaMax& lmax)
{
    check_pair(lambda0, lambda);
    check_below_max(lambda0, lmax.value);
    if (theta0.theta.size() != d.n_samples()) throw DimensionMismatch("theta0 has the wrong length");

    const double inv_gap = 1.0 / lambda - 1.0 / lambda0;
    switch (method) {
        case BallMethod::Safe: {
            Vector c = d.y() / lambda;
            const double rad = (c - theta0.theta).norm();
            return BallEstimate::make(std::move(c), rad, method, lambda0, lambda);
        }
        case BallMethod::Dpp:
            return BallEstimate::make(theta0.theta, std::abs(inv_gap) * d.y_norm(), method, lambda0,
                                      lambda);
        case BallMethod::Imp1: {
            const auto geo = compute_v_geometry(d, theta0, lambda0, lambda, lmax);
            return BallEstimate::make(theta0.theta, geo.v2_perp.norm(), method, lambda0, lambda);
        }
        case BallMethod::Imp2:
            return BallEstimate::make(theta0.theta + 0.5 * inv_gap * d.y(),
                                      0.5 * std::abs(inv_gap) * d.y_norm(), method, lambda0,
                                      lambda);
        case BallMethod::Edpp: {
            const auto geo = compute_v_geometry(d, theta0, lambda0, lambda, lmax);
            return BallEstimate::make(theta0.theta + 0.5 * geo.v2_perp, 0.5 * geo.v2_perp.norm(),
                                      method, lambda0, lambda);
        }
        case BallMethod::GroupEdpp:
            throw InvalidArgument("group EDPP needs a group layout; use estimate_group_dual_ball");
    }
    throw InvalidArgument("unknown ball method");
}

ScreenMask screen_with_ball(const Dataset& d, const BallEstimate& ball, double safety_margin)
{
    if (ball.center.size() != d.n_samples()) throw DimensionMismatch("ball center has the wrong length");
    const Vector corr = d.x().transpose() * ball.center;
    const Vector& norms = d.col_norms();
    const double rad = ball.radius + safety_margin;

    ScreenMask mask =
        ScreenMask::keep_all(d.n_features(), rule_for(ball.method), ball.lambda, ball.lambda0);
    // A few ulps of slack so that rounding can only ever keep a feature.
    const double bound = 1.0 - 4.0 * std::numeric_limits<double>::epsilon();
    for (Index i = 0; i < corr.size(); ++i) {
        mask.discard[static_cast<std::size_t>(i)] =
            norms[i] == 0.0 || std::abs(corr[i]) + rad * norms[i] < bound;
    }
    return mask;
}

ScreenMask screen_safe_basic(const Dataset& d, double lambda)
{
    const auto lmax = lambda_max(d);
    if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
    check_below_max(lambda, lmax.value);
    const Vector xty = d.x().transpose() * d.y();
    const double shrink = (lmax.value - lambda) / lmax.value;

    ScreenMask mask = ScreenMask::keep_all(d.n_features(), Rule::Safe, lambda, lmax.value);
    for (Index i = 0; i < xty.size(); ++i) {
        mask.discard[static_cast<std::size_t>(i)] =
            d.col_norms()[i] == 0.0 ||
            std::abs(xty[i]) < lambda - d.col_norms()[i] * d.y_norm() * shrink;
    }
    return mask;
}

ScreenMask screen_strong_sequential(const Dataset& d, const Vector& beta_prev, double lambda_prev,
                                    double lambda)
{
    check_pair(lambda_prev, lambda);
    if (beta_prev.size() != d.n_features()) throw DimensionMismatch("beta_prev has the wrong length");
    const Vector r = d.y() - d.x() * beta_prev;
    const Vector corr = d.x().transpose() * r;
    const double thr = 2.0 * lambda - lambda_prev;

    ScreenMask mask = ScreenMask::keep_all(d.n_features(), Rule::Strong, lambda, lambda_prev);
    for (Index i = 0; i < corr.size(); ++i) {
        mask.discard[static_cast<std::size_t>(i)] = std::abs(corr[i]) < thr;
    }
    return mask;
}

std::vector<Index> strong_kkt_violations(const Dataset& d, const ScreenMask& mask,
                                         const Vector& beta, double lambda, double tol)
{
    if (mask.size() != d.n_features()) throw DimensionMismatch("mask has the wrong length");
    const Vector r = d.y() - d.x() * beta;
    std::vector<Index> out;
    for (Index i = 0; i < d.n_features(); ++i) {
        if (!mask.discard[static_cast<std::size_t>(i)]) continue;
        if (std::abs(d.x().col(i).dot(r)) / lambda > 1.0 + tol) out.push_back(i);
    }
    return out;
}

ScreenMask basic_screen(Rule rule, const Dataset& d, double lambda)
{
    const auto lmax = lambda_max(d);
    if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
    check_below_max(lambda, lmax.value);
    const double lam = std::min(lambda, lmax.value);

    switch (rule) {
        case Rule::None:
            return ScreenMask::keep_all(d.n_features(), Rule::None, lambda, lmax.value);
        case Rule::Safe:
            return screen_safe_basic(d, lam);
        case Rule::Strong: {
            const Vector xty = d.x().transpose() * d.y();
            ScreenMask mask = ScreenMask::keep_all(d.n_features(), Rule::Strong, lambda, lmax.value);
            for (Index i = 0; i < xty.size(); ++i) {
                mask.discard[static_cast<std::size_t>(i)] = std::abs(xty[i]) < 2.0 * lam - lmax.value;
            }
            return mask;
        }
        case Rule::Dpp:
        case Rule::Imp1:
        case Rule::Imp2:
        case Rule::Edpp: {
            DualPoint theta0;
            theta0.theta = d.y() / lmax.value;
            theta0.lambda = lmax.value;
            theta0.feasibility_slack = 0.0;
            const auto ball = estimate_dual_ball(*ball_method_for(rule), d, theta0, lmax.value,
                                                 lam, lmax);
            auto mask = screen_with_ball(d, ball);
            mask.lambda = lambda;
            return mask;
        }
        case Rule::GroupEdpp:
            break;
    }
    throw InvalidArgument("basic_screen does not support rule '" + std::string(to_string(rule)) +
                          "'");
}

} // namespace dpp
