#pragma once

#include <cstdint>

namespace dpp {

/**
 * Counter-based 64-bit generator with independent streams.
 *
 * Output k of stream s under seed S is
 *
 *     key = mix64(S ^ mix64(s + 0x632BE59BD9B4E019))
 *     out = mix64(key + (k + 1) * 0x9E3779B97F4A7C15)
 *
 * where mix64 is the SplitMix64 finalizer. Because every draw is a pure
 * function of (seed, stream, counter), giving each matrix column its own
 * stream means growing p never changes the earlier columns.
 *
 * Uniform doubles take the top 53 bits. Gaussians use the Marsaglia polar
 * method, consuming uniform pairs until one lands inside the unit disc and
 * caching the second variate.
 */
class CounterRng
{
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

    std::uint64_t next_u64() noexcept;

    /// Uniform in [0, 1).
    double uniform() noexcept;
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) noexcept;
    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) noexcept;
    /// Standard normal.
    double gaussian() noexcept;

    static std::uint64_t mix64(std::uint64_t z) noexcept;

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace dpp
