#include <dpp/linalg.hpp>
#include <dpp/solver.hpp>

#include "detail.hpp"

#include <cmath>

namespace dpp {

namespace {

struct Block
{
    Index group;
    Index local_begin;
    Index size;
    double weight; // sqrt(n_g)
};

// Block soft-thresholding: (1 - t w / ||u_g||)_+ u_g per group.
void group_prox(const std::vector<Block>& blocks, const Vector& u, double t, Vector& out)
{
    for (const auto& b : blocks) {
        const auto ug = u.segment(b.local_begin, b.size);
        const double nrm = ug.norm();
        const double thr = t * b.weight;
        if (nrm <= thr) {
            out.segment(b.local_begin, b.size).setZero();
        } else {
            out.segment(b.local_begin, b.size) = (1.0 - thr / nrm) * ug;
        }
    }
}

PrimalSolution fista(const Dataset& d, const GroupLayout& g, double lambda,
                     const std::vector<Index>& groups, Vector beta_full, const SolverConfig& cfg)
{
    const Vector& y = d.y();
    std::vector<Block> blocks;
    blocks.reserve(groups.size());
    Index pa = 0;
    for (auto gi : groups) {
        blocks.push_back({gi, pa, g.size(gi), std::sqrt(static_cast<double>(g.size(gi)))});
        pa += g.size(gi);
    }

    // Kept groups are gathered into one dense block so each iteration is two GEMVs.
    Matrix xa(d.n_samples(), pa);
    Vector b(pa);
    for (const auto& blk : blocks) {
        xa.middleCols(blk.local_begin, blk.size) = d.x().middleCols(g.begin(blk.group), blk.size);
        b.segment(blk.local_begin, blk.size) = beta_full.segment(g.begin(blk.group), blk.size);
    }

    PrimalSolution sol;
    sol.lambda = lambda;

    auto scatter = [&](const Vector& local) {
        Vector full = Vector::Zero(d.n_features());
        for (const auto& blk : blocks) {
            full.segment(g.begin(blk.group), blk.size) = local.segment(blk.local_begin, blk.size);
        }
        return full;
    };

    const Vector corr_y = xa.transpose() * y;
    if (lambda >= detail::group_dual_norm(g, groups, corr_y)) {
        sol.beta = Vector::Zero(d.n_features());
        sol.duality_gap = detail::group_gap(g, groups, sol.beta, corr_y, y, lambda);
        return sol;
    }

    const double tol = cfg.gap_tol * 0.5 * y.squaredNorm();
    const int check_every = std::max(1, cfg.check_every);

    Vector xb = xa * b;
    Vector r = y - xb;
    Vector corr = xa.transpose() * r;
    double gap = detail::group_gap(g, groups, scatter(b), corr, r, lambda);
    if (gap <= tol) {
        sol.beta = scatter(b);
        sol.duality_gap = gap;
        return sol;
    }

    double lip = power_iteration_gram(xa, 30, 1e-10).eigenvalue;
    if (!(lip > 0.0)) lip = 1.0;

    auto penalty = [&](const Vector& v) {
        double s = 0.0;
        for (const auto& blk : blocks) s += blk.weight * v.segment(blk.local_begin, blk.size).norm();
        return lambda * s;
    };

    Vector b_prev = b, xb_prev = xb;
    Vector z(pa), grad(pa), bn(pa);
    Vector xz(d.n_samples()), xbn(d.n_samples()), rz(d.n_samples());
    double t = 1.0, t_prev = 1.0;

    for (int it = 1; it <= cfg.max_iters; ++it) {
        const double mom = (t_prev - 1.0) / t;
        z = b + mom * (b - b_prev);
        xz = xb + mom * (xb - xb_prev);
        rz = y - xz;
        grad.noalias() = -(xa.transpose() * rz);
        const double fz = 0.5 * rz.squaredNorm();

        double fn = 0.0;
        for (;;) {
            group_prox(blocks, z - grad / lip, lambda / lip, bn);
            xbn.noalias() = xa * bn;
            fn = 0.5 * (y - xbn).squaredNorm();
            const Vector step = bn - z;
            const double model = fz + grad.dot(step) + 0.5 * lip * step.squaredNorm();
            if (fn <= model + 1e-12 * std::max(1.0, std::abs(fz))) break;
            lip *= 2.0;
        }

        if ((z - bn).dot(bn - b) > 0.0) {
            t_prev = 1.0;
            t = 1.0;
        } else {
            t_prev = t;
            t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        }
        b_prev.swap(b);
        xb_prev.swap(xb);
        b = bn;
        xb = xbn;

        if (cfg.on_iteration) cfg.on_iteration(it, fn + penalty(b));

        if (it % check_every == 0 || it == cfg.max_iters) {
            r = y - xb;
            corr.noalias() = xa.transpose() * r;
            Vector full = scatter(b);
            gap = detail::group_gap(g, groups, full, corr, r, lambda);
            if (gap <= tol) {
                sol.beta = std::move(full);
                sol.duality_gap = gap;
                sol.iterations = it;
                return sol;
            }
        }
    }
    sol.beta = scatter(b);
    sol.duality_gap = gap;
    sol.iterations = cfg.max_iters;
    throw MaxItersExceeded(std::move(sol));
}

void check_inputs(const Dataset& d, const GroupLayout& g, double lambda,
                  const std::optional<Vector>& warm_start)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("lambda must be positive and finite");
    }
    g.check_compatible(d);
    if (warm_start && warm_start->size() != d.n_features()) {
        throw DimensionMismatch("warm start has the wrong length");
    }
}

} // namespace

PrimalSolution solve_group_lasso(const Dataset& d, const GroupLayout& g, double lambda,
                                 const std::optional<Vector>& warm_start, const SolverConfig& cfg)
{
    check_inputs(d, g, lambda, warm_start);
    Vector beta = warm_start ? *warm_start : Vector::Zero(d.n_features());
    return fista(d, g, lambda, detail::all_indices(g.n_groups()), std::move(beta), cfg);
}

PrimalSolution solve_group_lasso_reduced(const Dataset& d, const GroupLayout& g, double lambda,
                                         const ScreenMask& group_mask,
                                         const std::optional<Vector>& warm_start,
                                         const SolverConfig& cfg)
{
    check_inputs(d, g, lambda, warm_start);
    if (group_mask.size() != g.n_groups()) {
        throw DimensionMismatch("group mask has " + std::to_string(group_mask.size()) +
                                " entries, layout has " + std::to_string(g.n_groups()) +
                                " groups");
    }
    Vector beta = warm_start ? *warm_start : Vector::Zero(d.n_features());
    return fista(d, g, lambda, group_mask.kept(), std::move(beta), cfg);
}

} // namespace dpp
