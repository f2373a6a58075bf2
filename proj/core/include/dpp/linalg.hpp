#pragma once

#include <dpp/types.hpp>

namespace dpp {

struct PowerIterationResult
{
    double eigenvalue = 0.0;
    int iterations = 0;
    bool converged = false;
};

/**
 * Largest eigenvalue of the symmetric PSD matrix A^T A by power iteration,
 * never forming A^T A. Starts from the all-ones vector (deterministic) and
 * stops once the Rayleigh quotient changes by less than tol relative.
 */
PowerIterationResult power_iteration_gram(const Matrix& a, int max_steps, double tol);

/// Spectral norm ||A||_2. Blocks of up to 1024 columns that have not met tol
/// after max_steps fall back to a dense symmetric eigensolve.
double spectral_norm(const Matrix& a, int max_steps = 30, double tol = 1e-10);

} // namespace dpp
