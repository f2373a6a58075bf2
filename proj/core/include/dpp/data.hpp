#pragma once

#include <dpp/types.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace dpp {

enum class Correlation
{
    Iid,
    Ar1,
};

struct SyntheticSpec
{
    Index n = 0;
    Index p = 0;
    /// Number of nonzero true coefficients. 0 is accepted (y is pure noise).
    Index nnz = 0;
    double sigma = 0.1;
    Correlation correlation = Correlation::Iid;
    /// AR(1) coefficient; ignored for Iid.
    double rho = 0.0;
    std::uint64_t seed = 0;
    /// When set, the sizes must sum to p and are returned as a GroupLayout.
    std::optional<std::vector<Index>> group_sizes;
};

struct SyntheticData
{
    Dataset data;
    Vector beta_true;
    std::optional<GroupLayout> groups;
};

/**
 * y = X beta* + sigma eps.
 *
 * Column j of X is drawn from RNG stream j, so growing p leaves earlier
 * columns untouched. Under Ar1, x_j = rho x_{j-1} + sqrt(1 - rho^2) z_j,
 * giving corr(x_i, x_j) = rho^|i-j|. The support is nnz indices chosen
 * uniformly without replacement, with values Uniform[-1, 1].
 */
SyntheticData generate_synthetic(const SyntheticSpec& spec);

/// Parses "iid" or "ar1:RHO". Throws InvalidSpec.
std::pair<Correlation, double> parse_correlation(std::string_view text);

/// Comma-separated numbers. A single non-numeric first row is treated as a header.
Dataset load_csv(const std::filesystem::path& x_path, const std::filesystem::path& y_path);
Matrix load_matrix_csv(const std::filesystem::path& path);
Vector load_vector_csv(const std::filesystem::path& path);

/// Shortest round-trip formatting; no header.
void save_csv(const Dataset& d, const std::filesystem::path& x_path,
              const std::filesystem::path& y_path);
void save_matrix_csv(const Matrix& m, const std::filesystem::path& path);
void save_vector_csv(const Vector& v, const std::filesystem::path& path);

/**
 * "DPPS" binary: magic, u16 version (1), u64 N, u64 p, then X column-major
 * and y as little-endian doubles.
 */
void save_binary(const Dataset& d, const std::filesystem::path& path);
Dataset load_binary(const std::filesystem::path& path);

/// Optionally subtract column (and y) means, then divide columns by their norms.
/// Zero-norm columns are left as they are; they remain listed in zero_columns().
Dataset center_and_scale(const Dataset& d, bool center, bool scale);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

} // namespace dpp
