#include <dpp/linalg.hpp>
#include <dpp/screening.hpp>

#include "detail.hpp"

#include <cmath>
#include <limits>

namespace dpp {

LambdaMax group_lambda_max(const Dataset& d, const GroupLayout& g)
{
    g.check_compatible(d);
    const Vector xty = d.x().transpose() * d.y();
    LambdaMax out;
    for (Index gi = 0; gi < g.n_groups(); ++gi) {
        const double v = xty.segment(g.begin(gi), g.size(gi)).norm() /
                         std::sqrt(static_cast<double>(g.size(gi)));
        if (v > out.value) {
            out.value = v;
            out.argmax = gi;
        }
    }
    if (out.value == 0.0) {
        throw DegenerateResponse("response is orthogonal to every group (lambda_max = 0)");
    }
    return out;
}

namespace {

Vector group_v1(const Dataset& d, const GroupLayout& g, const DualPoint& theta0, double lambda0,
                const LambdaMax& lmax)
{
    if (!(lambda0 > 0.0)) throw InvalidArgument("lambda0 must be positive");
    if (lambda0 > lmax.value * (1.0 + 1e-12)) {
        throw InvalidArgument("lambda0 exceeds the group lambda_max");
    }
    if (detail::at_lambda_max(lambda0, lmax.value)) {
        const auto xs = d.x().middleCols(g.begin(lmax.argmax), g.size(lmax.argmax));
        return xs * (xs.transpose() * d.y());
    }
    return d.y() / lambda0 - theta0.theta;
}

VGeometry group_geometry(const Dataset& d, const GroupLayout& g, const DualPoint& theta0,
                         double lambda0, double lambda, const LambdaMax& lmax)
{
    if (!(lambda > 0.0) || !(lambda <= lambda0)) {
        throw InvalidArgument("screening requires 0 < lambda <= lambda0");
    }
    VGeometry geo;
    geo.lambda0 = lambda0;
    geo.lambda = lambda;
    geo.v1 = group_v1(d, g, theta0, lambda0, lmax);
    const double v1sq = geo.v1.squaredNorm();
    if (v1sq == 0.0) throw DegenerateV1("group v1 vanished at lambda0 = " + std::to_string(lambda0));
    geo.v2 = d.y() / lambda - theta0.theta;
    geo.v2_perp = geo.v2 - (geo.v1.dot(geo.v2) / v1sq) * geo.v1;
    return geo;
}

} // namespace

Vector compute_group_v1(const Dataset& d, const GroupLayout& g, const DualPoint& theta0,
                        double lambda0)
{
    return group_v1(d, g, theta0, lambda0, group_lambda_max(d, g));
}

VGeometry compute_group_v_geometry(const Dataset& d, const GroupLayout& g, const DualPoint& theta0,
                                   double lambda0, double lambda)
{
    return group_geometry(d, g, theta0, lambda0, lambda, group_lambda_max(d, g));
}

BallEstimate estimate_group_dual_ball(const Dataset& d, const GroupLayout& g,
                                      const DualPoint& theta0, double lambda0, double lambda)
{
    const auto geo = group_geometry(d, g, theta0, lambda0, lambda, group_lambda_max(d, g));
    return BallEstimate::make(theta0.theta + 0.5 * geo.v2_perp, 0.5 * geo.v2_perp.norm(),
                              BallMethod::GroupEdpp, lambda0, lambda);
}

Vector group_spectral_norms(const Dataset& d, const GroupLayout& g)
{
    g.check_compatible(d);
    Vector out(g.n_groups());
    for (Index gi = 0; gi < g.n_groups(); ++gi) {
        if (g.size(gi) == 1) {
            out[gi] = d.col_norms()[g.begin(gi)];
        } else {
            out[gi] = spectral_norm(d.x().middleCols(g.begin(gi), g.size(gi)), 30, 1e-10);
        }
    }
    return out;
}

ScreenMask screen_groups_with_ball(const Dataset& d, const GroupLayout& g,
                                   const Vector& spectral_norms, const BallEstimate& ball,
                                   double safety_margin)
{
    g.check_compatible(d);
    if (spectral_norms.size() != g.n_groups()) {
        throw DimensionMismatch("need one spectral norm per group");
    }
    if (ball.center.size() != d.n_samples()) throw DimensionMismatch("ball center has the wrong length");
    const Vector corr = d.x().transpose() * ball.center;
    const double rad = ball.radius + safety_margin;
    // Same rounding slack as the Lasso test, so singleton groups agree with it.
    const double slack = 1.0 - 4.0 * std::numeric_limits<double>::epsilon();

    ScreenMask mask = ScreenMask::keep_all(g.n_groups(), Rule::GroupEdpp, ball.lambda, ball.lambda0);
    for (Index gi = 0; gi < g.n_groups(); ++gi) {
        const Index n = g.size(gi);
        const double lhs = n == 1 ? std::abs(corr[g.begin(gi)]) : corr.segment(g.begin(gi), n).norm();
        const double bound = std::sqrt(static_cast<double>(n)) * slack;
        mask.discard[static_cast<std::size_t>(gi)] =
            spectral_norms[gi] == 0.0 || lhs + rad * spectral_norms[gi] < bound;
    }
    return mask;
}

} // namespace dpp
