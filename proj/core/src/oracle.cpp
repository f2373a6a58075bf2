#include <dpp/errors.hpp>
#include <dpp/oracle.hpp>
#include <dpp/random.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace dpp {

CylinderConstraint CylinderConstraint::make(Matrix a, double bound)
{
    if (!(bound > 0.0)) throw InvalidArgument("constraint bound must be positive");
    CylinderConstraint c;
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
    c.u = svd.matrixU();
    c.s = svd.singularValues();
    c.a = std::move(a);
    c.bound = bound;
    return c;
}

ProjectionProblem ProjectionProblem::lasso(const Dataset& d, Vector point)
{
    if (point.size() != d.n_samples()) throw DimensionMismatch("point has the wrong length");
    ProjectionProblem p;
    p.point = std::move(point);
    p.slabs.reserve(static_cast<std::size_t>(d.n_features()));
    for (Index i = 0; i < d.n_features(); ++i) p.slabs.push_back({d.x().col(i), 1.0});
    return p;
}

ProjectionProblem ProjectionProblem::group(const Dataset& d, const GroupLayout& g, Vector point)
{
    g.check_compatible(d);
    if (point.size() != d.n_samples()) throw DimensionMismatch("point has the wrong length");
    ProjectionProblem p;
    p.point = std::move(point);
    for (Index gi = 0; gi < g.n_groups(); ++gi) {
        const double bound = std::sqrt(static_cast<double>(g.size(gi)));
        p.cylinders.push_back(
            CylinderConstraint::make(d.x().middleCols(g.begin(gi), g.size(gi)), bound));
    }
    return p;
}

double ProjectionProblem::max_ratio(const Vector& theta) const
{
    double m = 0.0;
    for (const auto& s : slabs) m = std::max(m, std::abs(s.a.dot(theta)) / s.bound);
    for (const auto& c : cylinders) m = std::max(m, (c.a.transpose() * theta).norm() / c.bound);
    return m;
}

Vector project_slab(const SlabConstraint& c, const Vector& w)
{
    const double t = c.a.dot(w);
    if (std::abs(t) <= c.bound) return w;
    const double sq = c.a.squaredNorm();
    return w - ((t - std::copysign(c.bound, t)) / sq) * c.a;
}

Vector project_cylinder(const CylinderConstraint& c, const Vector& w)
{
    const Vector z = c.u.transpose() * w;
    const Vector sz = c.s.cwiseProduct(z);
    const double c2 = c.bound * c.bound;
    if (sz.squaredNorm() <= c2) return w;

    // ||A^T theta(mu)||^2 = sum s_j^2 z_j^2 / (1 + mu s_j^2)^2, decreasing in mu.
    auto h = [&](double mu) {
        double acc = 0.0;
        for (Index j = 0; j < z.size(); ++j) {
            const double den = 1.0 + mu * c.s[j] * c.s[j];
            acc += sz[j] * sz[j] / (den * den);
        }
        return acc;
    };
    double lo = 0.0, hi = 1.0;
    while (h(hi) > c2) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) > c2 ? lo : hi) = mid;
    }
    Vector shrink(z.size());
    for (Index j = 0; j < z.size(); ++j) {
        const double s2 = c.s[j] * c.s[j];
        shrink[j] = hi * s2 / (1.0 + hi * s2) * z[j];
    }
    return w - c.u * shrink;
}

namespace {

// Support function of the cylinder at its Dykstra increment.
double cylinder_support(const CylinderConstraint& c, const Vector& q)
{
    const Vector uq = c.u.transpose() * q;
    double acc = 0.0;
    for (Index j = 0; j < uq.size(); ++j) {
        if (c.s[j] > 0.0) acc += (uq[j] / c.s[j]) * (uq[j] / c.s[j]);
    }
    return c.bound * std::sqrt(acc);
}

// Constraints are indexed uniformly: k < ns is a slab, the rest are cylinders.
// A slab is a one-column cylinder, so both share M_k = A_k A_k^T.
struct ConstraintView
{
    const ProjectionProblem& p;

    std::size_t ns() const { return p.slabs.size(); }
    double bound(std::size_t k) const
    {
        return k < ns() ? p.slabs[k].bound : p.cylinders[k - ns()].bound;
    }
    double value(std::size_t k, const Vector& t) const
    {
        if (k < ns()) return std::abs(p.slabs[k].a.dot(t));
        return (p.cylinders[k - ns()].a.transpose() * t).norm();
    }
    Vector m_times(std::size_t k, const Vector& t) const
    {
        if (k < ns()) return p.slabs[k].a * p.slabs[k].a.dot(t);
        const Matrix& a = p.cylinders[k - ns()].a;
        return a * (a.transpose() * t);
    }
    void add_m(std::size_t k, double mu, Eigen::Ref<Matrix> j) const
    {
        if (k < ns()) {
            const Vector& a = p.slabs[k].a;
            j.noalias() += mu * a * a.transpose();
        } else {
            const Matrix& a = p.cylinders[k - ns()].a;
            j.noalias() += mu * a * a.transpose();
        }
    }
};

// Newton on the KKT system of the projection with the given constraints held
// active: theta + sum mu_k M_k theta = w and ||A_k^T theta|| = c_k.
bool newton_kkt(const ConstraintView& cv, const Vector& w, const std::vector<std::size_t>& act,
                Vector& theta, std::vector<double>& mu)
{
    const Index n = w.size();
    const Index m = static_cast<Index>(act.size());
    const double scale = 1.0 + w.norm();
    for (int it = 0; it < 50; ++it) {
        Matrix jac = Matrix::Zero(n + m, n + m);
        jac.topLeftCorner(n, n).setIdentity();
        Vector f(n + m);
        f.head(n) = theta - w;
        for (Index j = 0; j < m; ++j) {
            const std::size_t k = act[static_cast<std::size_t>(j)];
            const Vector g = cv.m_times(k, theta);
            const double muj = mu[static_cast<std::size_t>(j)];
            cv.add_m(k, muj, jac.topLeftCorner(n, n));
            f.head(n) += muj * g;
            jac.block(0, n + j, n, 1) = g;
            jac.block(n + j, 0, 1, n) = g.transpose();
            const double c = cv.bound(k);
            f[n + j] = 0.5 * (theta.dot(g) - c * c);
        }
        Eigen::FullPivLU<Matrix> lu(jac);
        if (!lu.isInvertible()) return false;
        const Vector step = lu.solve(-f);
        if (!step.allFinite()) return false;
        theta += step.head(n);
        for (Index j = 0; j < m; ++j) mu[static_cast<std::size_t>(j)] += step[n + j];
        if (step.norm() <= 1e-15 * scale) return true;
    }
    return false;
}

// Active-set polish started from a Dykstra iterate. Accepts theta only when
// the multipliers are nonnegative and every constraint holds, i.e. theta
// satisfies the optimality conditions of the projection.
bool kkt_polish(const ProjectionProblem& p, const Vector& x, const std::vector<double>& eta,
                const std::vector<Vector>& qc, Vector& out)
{
    const ConstraintView cv{p};
    const std::size_t ns = p.slabs.size(), total = ns + p.cylinders.size();
    std::vector<std::size_t> act;
    std::vector<double> mu;
    for (std::size_t k = 0; k < total; ++k) {
        const bool on = k < ns ? eta[k] != 0.0 : qc[k - ns].squaredNorm() > 0.0;
        if (!on) continue;
        const Vector g = cv.m_times(k, x);
        const double gg = g.squaredNorm();
        if (gg == 0.0) return false;
        const Vector q = k < ns ? Vector(eta[k] * p.slabs[k].a) : qc[k - ns];
        act.push_back(k);
        mu.push_back(std::max(0.0, q.dot(g) / gg));
    }
    Vector theta = x;
    for (std::size_t round = 0; round < 2 * total + 2; ++round) {
        if (!act.empty() && !newton_kkt(cv, p.point, act, theta, mu)) return false;
        auto neg = std::min_element(mu.begin(), mu.end());
        if (neg != mu.end() && *neg < -1e-12) {
            const auto j = static_cast<std::size_t>(neg - mu.begin());
            act.erase(act.begin() + static_cast<std::ptrdiff_t>(j));
            mu.erase(neg);
            continue;
        }
        double worst = 1.0 + 1e-12;
        std::size_t add = total;
        for (std::size_t k = 0; k < total; ++k) {
            const double r = cv.value(k, theta) / cv.bound(k);
            if (r > worst && std::find(act.begin(), act.end(), k) == act.end()) {
                worst = r;
                add = k;
            }
        }
        if (add == total) {
            out = theta;
            return true;
        }
        act.push_back(add);
        mu.push_back(0.0);
    }
    return false;
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

} // namespace

Vector dykstra_project(const ProjectionProblem& p, double tol, int max_cycles, DykstraStats* stats)
{
    if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
    const Vector& w = p.point;
    const std::size_t ns = p.slabs.size(), nc = p.cylinders.size();
    if (ns + nc == 0 || p.max_ratio(w) <= 1.0) {
        if (stats) *stats = DykstraStats{};
        return w;
    }

    // Slab increments are multiples of a_i, so only the scalar is stored.
    std::vector<double> eta(ns, 0.0);
    std::vector<Vector> qc(nc, Vector::Zero(w.size()));
    Vector x = w;

    auto rescale = [&](const Vector& t) {
        const double ratio = p.max_ratio(t);
        return ratio > 1.0 ? Vector(t / ratio) : t;
    };
    auto certificate = [&](Vector& feasible) {
        feasible = rescale(x);
        // Dual value of the projection problem at the increments (x = w - sum q).
        double support = 0.0;
        for (std::size_t i = 0; i < ns; ++i) {
            support += std::abs(eta[i]) * p.slabs[i].bound;
        }
        for (std::size_t i = 0; i < nc; ++i) support += cylinder_support(p.cylinders[i], qc[i]);
        const double primal = 0.5 * (feasible - w).squaredNorm();
        const double dual = 0.5 * w.squaredNorm() - 0.5 * x.squaredNorm() - support;
        // Rounding in the cancelling terms; the certificate never claims better.
        const double noise = 16.0 * std::numeric_limits<double>::epsilon() *
                             (w.squaredNorm() + x.squaredNorm() + support + primal);
        return std::sqrt(2.0 * (std::max(0.0, primal - dual) + noise));
    };

    Vector feasible;
    double bound = certificate(feasible);
    bool polished = false;
    int cycle = 0, next_polish = 10;
    while (bound > tol) {
        if (cycle >= next_polish) {
            // The certificate cannot resolve distances much below sqrt(eps) * |w|,
            // so tight tolerances rely on the verified polish.
            Vector t;
            if (kkt_polish(p, x, eta, qc, t)) {
                feasible = rescale(t);
                bound = (feasible - t).norm();
                polished = true;
                break;
            }
            next_polish = cycle + std::min(std::max(cycle, 10), 2000);
        }
        if (cycle >= max_cycles) {
            throw NoConvergence("Dykstra projection did not reach tol " + fmt(tol) + " in " +
                                std::to_string(max_cycles) + " cycles (bound " + fmt(bound) +
                                ")");
        }
        for (std::size_t i = 0; i < ns; ++i) {
            const auto& s = p.slabs[i];
            const double sq = s.a.squaredNorm();
            if (sq == 0.0) continue;
            // y = x + eta a; project y onto the slab; new eta from y - P(y).
            const double t = s.a.dot(x) + eta[i] * sq;
            double excess = 0.0;
            if (t > s.bound) excess = t - s.bound;
            else if (t < -s.bound) excess = t + s.bound;
            const double next = excess / sq;
            x += (eta[i] - next) * s.a;
            eta[i] = next;
        }
        for (std::size_t i = 0; i < nc; ++i) {
            const Vector y = x + qc[i];
            x = project_cylinder(p.cylinders[i], y);
            qc[i] = y - x;
        }
        ++cycle;
        if (cycle % 5 == 0 || cycle == max_cycles) bound = certificate(feasible);
    }
    if (stats) {
        stats->cycles = cycle;
        stats->error_bound = bound;
        stats->polished = polished;
    }
    return feasible;
}

Vector orthonormal_design_solution(const Vector& y, double lambda)
{
    Vector b(y.size());
    for (Index i = 0; i < y.size(); ++i) b[i] = soft_threshold(y[i], lambda);
    return b;
}

Vector orthonormal_design_solution(const Matrix& x, const Vector& y, double lambda)
{
    return orthonormal_design_solution(Vector(x.transpose() * y), lambda);
}

std::vector<Vector> sample_feasible_points(const ProjectionProblem& p, int count, std::uint64_t seed)
{
    if (count < 1) throw InvalidArgument("count must be at least 1");
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(count));
    out.push_back(Vector::Zero(p.dim()));
    for (int k = 1; k < count; ++k) {
        CounterRng rng(seed, static_cast<std::uint64_t>(k));
        Vector g(p.dim());
        for (Index i = 0; i < g.size(); ++i) g[i] = rng.gaussian();
        const double ratio = p.max_ratio(g);
        // Radii in (0, 2] of the boundary distance give both interior and boundary points.
        if (ratio > 0.0) g *= (2.0 * (1.0 - rng.uniform())) / ratio;
        const double after = p.max_ratio(g);
        if (after > 1.0) g /= after;
        out.push_back(std::move(g));
    }
    return out;
}

namespace {

double reference_gap(const Matrix& x, const Vector& y, const Vector& beta, double lambda)
{
    const Vector r = y - x * beta;
    const Vector c = x.transpose() * r;
    const double s = std::max(1.0, c.cwiseAbs().maxCoeff() / lambda);
    double g = 0.5 * (1.0 - 1.0 / s) * (1.0 - 1.0 / s) * r.squaredNorm();
    for (Index i = 0; i < beta.size(); ++i) g += lambda * std::abs(beta[i]) - beta[i] * c[i] / s;
    return std::max(0.0, g);
}

// Solves the equality KKT system on the current support; returns false when
// the result is not a valid Lasso solution.
bool polish(const Matrix& x, const Vector& y, double lambda, Vector& beta)
{
    std::vector<Index> sup;
    for (Index i = 0; i < beta.size(); ++i) {
        if (beta[i] != 0.0) sup.push_back(i);
    }
    const auto k = static_cast<Index>(sup.size());
    if (k == 0 || k > x.rows()) return false;

    Matrix xs(x.rows(), k);
    Vector sign(k);
    for (Index j = 0; j < k; ++j) {
        xs.col(j) = x.col(sup[static_cast<std::size_t>(j)]);
        sign[j] = beta[sup[static_cast<std::size_t>(j)]] > 0.0 ? 1.0 : -1.0;
    }
    Eigen::LDLT<Matrix> ldlt(xs.transpose() * xs);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
    const Vector bs = ldlt.solve(xs.transpose() * y - lambda * sign);
    for (Index j = 0; j < k; ++j) {
        if (bs[j] * sign[j] <= 0.0) return false;
    }
    Vector cand = Vector::Zero(beta.size());
    for (Index j = 0; j < k; ++j) cand[sup[static_cast<std::size_t>(j)]] = bs[j];
    const Vector corr = x.transpose() * (y - x * cand);
    if (corr.cwiseAbs().maxCoeff() > lambda * (1.0 + 1e-9)) return false;
    beta = std::move(cand);
    return true;
}

} // namespace

PrimalSolution reference_lasso(const Dataset& d, double lambda, double gap_tol, int max_iters)
{
    if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
    const Matrix& x = d.x();
    const Vector& y = d.y();
    const double target = gap_tol * 0.5 * y.squaredNorm();

    PrimalSolution sol;
    sol.lambda = lambda;
    Vector b = Vector::Zero(d.n_features());
    if ((x.transpose() * y).cwiseAbs().maxCoeff() <= lambda) {
        sol.beta = b;
        sol.duality_gap = reference_gap(x, y, b, lambda);
        return sol;
    }

    // Lipschitz constant of the smooth part from a full eigensolve: the oracle
    // avoids the power iteration used by the production solvers.
    Eigen::SelfAdjointEigenSolver<Matrix> eig(x.transpose() * x, Eigen::EigenvaluesOnly);
    double lip = std::max(eig.eigenvalues().maxCoeff(), 1e-300);

    auto f = [&](const Vector& v) { return 0.5 * (y - x * v).squaredNorm(); };
    Vector b_prev = b, z = b, bn(b.size());
    double t = 1.0;
    for (int it = 1; it <= max_iters; ++it) {
        const Vector grad = -(x.transpose() * (y - x * z));
        const double fz = f(z);
        for (;;) {
            const Vector u = z - grad / lip;
            for (Index i = 0; i < u.size(); ++i) bn[i] = soft_threshold(u[i], lambda / lip);
            const Vector step = bn - z;
            if (f(bn) <= fz + grad.dot(step) + 0.5 * lip * step.squaredNorm() +
                             1e-14 * std::max(1.0, fz)) {
                break;
            }
            lip *= 2.0;
        }
        const bool restart = (z - bn).dot(bn - b) > 0.0;
        b_prev = b;
        b = bn;
        const double t_next = restart ? 1.0 : 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        z = restart ? b : Vector(b + ((t - 1.0) / t_next) * (b - b_prev));
        t = t_next;

        if (it % 50 == 0) {
            double gap = reference_gap(x, y, b, lambda);
            if (gap <= target) {
                sol.beta = b;
                sol.duality_gap = gap;
                sol.iterations = it;
                return sol;
            }
            Vector cand = b;
            if (polish(x, y, lambda, cand)) {
                gap = reference_gap(x, y, cand, lambda);
                if (gap <= target) {
                    sol.beta = std::move(cand);
                    sol.duality_gap = gap;
                    sol.iterations = it;
                    return sol;
                }
            }
        }
    }
    throw NoConvergence("reference solve did not reach the gap target at lambda = " +
                        std::to_string(lambda));
}

} // namespace dpp
