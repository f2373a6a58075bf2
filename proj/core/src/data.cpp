#include <dpp/data.hpp>
#include <dpp/errors.hpp>
#include <dpp/random.hpp>

#include <charconv>
#include <cmath>
#include <numeric>
#include <string>

namespace dpp {

namespace {

// Streams above every column index.
constexpr std::uint64_t kSupportStream = 0x8000000000000000ULL;
constexpr std::uint64_t kNoiseStream = 0x8000000000000001ULL;

void check_spec(const SyntheticSpec& s)
{
    if (s.n < 1 || s.p < 1) throw InvalidSpec("n and p must be at least 1");
    if (s.nnz < 0 || s.nnz > s.p) {
        throw InvalidSpec("nnz must lie in [0, p], got " + std::to_string(s.nnz));
    }
    if (!(s.sigma >= 0.0) || !std::isfinite(s.sigma)) throw InvalidSpec("sigma must be >= 0");
    if (s.correlation == Correlation::Ar1 && !(s.rho >= 0.0 && s.rho < 1.0)) {
        throw InvalidSpec("ar1 rho must lie in [0, 1)");
    }
    if (s.group_sizes) {
        Index total = 0;
        for (auto sz : *s.group_sizes) {
            if (sz < 1) throw InvalidSpec("group sizes must be positive");
            total += sz;
        }
        if (total != s.p) {
            throw InvalidSpec("group sizes sum to " + std::to_string(total) + ", expected p = " +
                              std::to_string(s.p));
        }
    }
}

} // namespace

std::pair<Correlation, double> parse_correlation(std::string_view text)
{
    if (text == "iid") return {Correlation::Iid, 0.0};
    if (text.starts_with("ar1:")) {
        const auto num = text.substr(4);
        double rho = 0.0;
        const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), rho);
        if (ec == std::errc{} && ptr == num.data() + num.size() && rho >= 0.0 && rho < 1.0) {
            return {Correlation::Ar1, rho};
        }
    }
    throw InvalidSpec("correlation must be 'iid' or 'ar1:RHO' with RHO in [0, 1), got '" +
                      std::string(text) + "'");
}

SyntheticData generate_synthetic(const SyntheticSpec& spec)
{
    check_spec(spec);
    const Index n = spec.n, p = spec.p;

    Matrix x(n, p);
    const double tail = std::sqrt(1.0 - spec.rho * spec.rho);
    for (Index j = 0; j < p; ++j) {
        CounterRng rng(spec.seed, static_cast<std::uint64_t>(j));
        for (Index i = 0; i < n; ++i) x(i, j) = rng.gaussian();
        if (spec.correlation == Correlation::Ar1 && j > 0) {
            x.col(j) = spec.rho * x.col(j - 1) + tail * x.col(j);
        }
    }

    // Partial Fisher-Yates picks the support without replacement.
    Vector beta = Vector::Zero(p);
    {
        CounterRng rng(spec.seed, kSupportStream);
        std::vector<Index> idx(static_cast<std::size_t>(p));
        std::iota(idx.begin(), idx.end(), Index{0});
        for (Index k = 0; k < spec.nnz; ++k) {
            const auto pick = k + static_cast<Index>(rng.below(static_cast<std::uint64_t>(p - k)));
            std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(pick)]);
        }
        for (Index k = 0; k < spec.nnz; ++k) {
            beta[idx[static_cast<std::size_t>(k)]] = rng.uniform(-1.0, 1.0);
        }
    }

    Vector y = x * beta;
    if (spec.sigma > 0.0) {
        CounterRng rng(spec.seed, kNoiseStream);
        for (Index i = 0; i < n; ++i) y[i] += spec.sigma * rng.gaussian();
    }

    std::optional<GroupLayout> groups;
    if (spec.group_sizes) groups = GroupLayout::from_sizes(*spec.group_sizes);
    return {Dataset::create(std::move(x), std::move(y)), std::move(beta), std::move(groups)};
}

Dataset center_and_scale(const Dataset& d, bool center, bool scale)
{
    Matrix x = d.x();
    Vector y = d.y();
    if (center) {
        x.rowwise() -= x.colwise().mean();
        y.array() -= y.mean();
    }
    if (scale) {
        for (Index j = 0; j < x.cols(); ++j) {
            const double nrm = x.col(j).norm();
            if (nrm > 0.0) x.col(j) /= nrm;
        }
    }
    return Dataset::create(std::move(x), std::move(y));
}

std::string format_double(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace dpp
