#include <dpp/linalg.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>

namespace dpp {

PowerIterationResult power_iteration_gram(const Matrix& a, int max_steps, double tol)
{
    PowerIterationResult out;
    if (a.cols() == 0 || a.rows() == 0) {
        out.converged = true;
        return out;
    }
    Vector v = Vector::Ones(a.cols()) / std::sqrt(static_cast<double>(a.cols()));
    Vector av(a.rows());
    double prev = 0.0;
    for (int step = 1; step <= max_steps; ++step) {
        av.noalias() = a * v;
        const double rq = av.squaredNorm(); // v^T A^T A v with ||v|| = 1
        Vector w = a.transpose() * av;
        const double wn = w.norm();
        out.eigenvalue = rq;
        out.iterations = step;
        if (wn == 0.0) {
            out.converged = true;
            return out;
        }
        v = w / wn;
        if (step > 1 && std::abs(rq - prev) <= tol * rq) {
            out.converged = true;
            return out;
        }
        prev = rq;
    }
    return out;
}

double spectral_norm(const Matrix& a, int max_steps, double tol)
{
    if (a.cols() == 1) return a.col(0).norm();
    const auto pi = power_iteration_gram(a, max_steps, tol);
    if (pi.converged || a.cols() > 1024) return std::sqrt(pi.eigenvalue);
    // Power iteration under-estimates when the top eigenvalues are close;
    // an underestimate would make the group test unsafe.
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.transpose() * a, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

} // namespace dpp
