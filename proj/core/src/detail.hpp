#pragma once

#include <dpp/types.hpp>

#include <chrono>
#include <span>

namespace dpp::detail {

/// Gap of the Lasso restricted to `cols`, given r = y - X b and c = X_cols^T r.
double lasso_gap(const Vector& beta, std::span<const Index> cols, const Vector& corr,
                 const Vector& r, double lambda);

/// max_g ||c_g||_2 / sqrt(n_g) over the given groups.
double group_dual_norm(const GroupLayout& g, std::span<const Index> groups, const Vector& corr);

double group_gap(const GroupLayout& g, std::span<const Index> groups, const Vector& beta,
                 const Vector& corr, const Vector& r, double lambda);

std::vector<Index> all_indices(Index n);

/// True when lambda0 equals lambda_max up to a relative 1e-12.
inline bool at_lambda_max(double lambda0, double lambda_max)
{
    return std::abs(lambda0 / lambda_max - 1.0) <= 1e-12;
}

class Stopwatch
{
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}

    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    void reset() { start_ = std::chrono::steady_clock::now(); }

private:
    std::chrono::steady_clock::time_point start_;
};

} // namespace dpp::detail
