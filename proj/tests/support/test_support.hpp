#pragma once

#include <dpp/data.hpp>
#include <dpp/random.hpp>
#include <dpp/screening.hpp>
#include <dpp/solver.hpp>

#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

namespace dpp::testing {

struct Instance
{
    Dataset data;
    Vector beta_true;
    std::uint64_t seed = 0;
    bool ar1 = false;
};

/// Random Lasso instance: N in [n_lo, n_hi], p in [p_lo, p_hi], IID or AR1(0.5) by parity of k.
inline Instance random_instance(std::uint64_t master, std::uint64_t k, Index n_lo = 10,
                                Index n_hi = 50, Index p_lo = 20, Index p_hi = 100)
{
    CounterRng rng(master, k);
    SyntheticSpec s;
    s.n = n_lo + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n_hi - n_lo + 1)));
    s.p = p_lo + static_cast<Index>(rng.below(static_cast<std::uint64_t>(p_hi - p_lo + 1)));
    s.nnz = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(std::min<Index>(s.p, 10))));
    s.sigma = 0.1;
    s.seed = rng.next_u64();
    const bool ar1 = k % 2 == 1;
    if (ar1) {
        s.correlation = Correlation::Ar1;
        s.rho = 0.5;
    }
    auto syn = generate_synthetic(s);
    return {std::move(syn.data), std::move(syn.beta_true), s.seed, ar1};
}

struct GroupInstance
{
    Dataset data;
    GroupLayout groups;
};

/// G in [g_lo, g_hi] groups of size [1, max_size]; N in [20, 60].
inline GroupInstance random_group_instance(std::uint64_t master, std::uint64_t k, Index g_lo = 5,
                                           Index g_hi = 40, Index max_size = 8)
{
    CounterRng rng(master, k);
    const Index n_groups =
        g_lo + static_cast<Index>(rng.below(static_cast<std::uint64_t>(g_hi - g_lo + 1)));
    std::vector<Index> sizes;
    Index p = 0;
    for (Index g = 0; g < n_groups; ++g) {
        sizes.push_back(1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(max_size))));
        p += sizes.back();
    }
    SyntheticSpec s;
    s.n = 20 + static_cast<Index>(rng.below(41));
    s.p = p;
    s.nnz = std::min<Index>(p, 1 + static_cast<Index>(rng.below(10)));
    s.seed = rng.next_u64();
    if (k % 2 == 1) {
        s.correlation = Correlation::Ar1;
        s.rho = 0.5;
    }
    s.group_sizes = sizes;
    auto syn = generate_synthetic(s);
    return {std::move(syn.data), std::move(*syn.groups)};
}

inline LambdaGrid standard_grid(double lambda_max, Index points = 20)
{
    return LambdaGrid::linear(lambda_max, points, 0.05, 1.0);
}

/// Warm-started unscreened solves along the grid.
inline std::vector<PrimalSolution> reference_path(const Dataset& d, const LambdaGrid& grid,
                                                  double gap_tol = 1e-12)
{
    SolverConfig cfg;
    cfg.gap_tol = gap_tol;
    std::vector<PrimalSolution> out;
    std::optional<Vector> warm;
    for (double lam : grid.values()) {
        out.push_back(solve_lasso(d, lam, warm, cfg));
        warm = out.back().beta;
    }
    return out;
}

inline std::vector<PrimalSolution> reference_group_path(const Dataset& d, const GroupLayout& g,
                                                        const LambdaGrid& grid,
                                                        double gap_tol = 1e-12)
{
    SolverConfig cfg;
    cfg.gap_tol = gap_tol;
    cfg.max_iters = 1000000;
    std::vector<PrimalSolution> out;
    std::optional<Vector> warm;
    for (double lam : grid.values()) {
        out.push_back(solve_group_lasso(d, g, lam, warm, cfg));
        warm = out.back().beta;
    }
    return out;
}

inline double max_abs_diff(const Vector& a, const Vector& b)
{
    return (a - b).cwiseAbs().maxCoeff();
}

/// Unique scratch directory under the system temp dir, removed on destruction.
class TempDir
{
public:
    explicit TempDir(const std::string& tag)
    {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("dpp_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace dpp::testing
