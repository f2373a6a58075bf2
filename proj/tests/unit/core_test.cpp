#include <dpp/errors.hpp>
#include <dpp/linalg.hpp>
#include <dpp/random.hpp>
#include <dpp/types.hpp>

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

using namespace dpp;

namespace {

Matrix identity2() { return Matrix::Identity(2, 2); }

Vector vec(std::initializer_list<double> v)
{
    Vector out(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

} // namespace

TEST(Dataset, CachesNormsOfIdentityDesign)
{
    const Dataset d = Dataset::create(identity2(), vec({3, 4}));
    EXPECT_DOUBLE_EQ(d.col_norms()[0], 1.0);
    EXPECT_DOUBLE_EQ(d.col_norms()[1], 1.0);
    EXPECT_DOUBLE_EQ(d.y_norm(), 5.0);
    EXPECT_FALSE(d.has_zero_columns());
}

TEST(Dataset, RejectsLengthMismatch)
{
    EXPECT_THROW(validate_dataset(identity2(), vec({3, 4, 5})), DimensionMismatch);
}

TEST(Dataset, RejectsNonFiniteEntries)
{
    Matrix x = identity2();
    x(0, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(Dataset::create(x, vec({3, 4})), NonFiniteInput);
    EXPECT_THROW(Dataset::create(identity2(), vec({3, std::numeric_limits<double>::infinity()})),
                 NonFiniteInput);
}

TEST(Dataset, FlagsZeroColumns)
{
    Matrix x = Matrix::Zero(3, 3);
    x(0, 0) = 1.0;
    x(2, 2) = 2.0;
    const Dataset d = Dataset::create(x, vec({1, 1, 1}));
    ASSERT_EQ(d.zero_columns().size(), 1u);
    EXPECT_EQ(d.zero_columns()[0], 1);
}

TEST(Dataset, NormsMatchRecomputation)
{
    CounterRng rng(1, 0);
    Matrix x(15, 7);
    for (Index j = 0; j < x.cols(); ++j)
        for (Index i = 0; i < x.rows(); ++i) x(i, j) = rng.gaussian() * (j + 1);
    Vector y(15);
    for (Index i = 0; i < 15; ++i) y[i] = rng.gaussian();
    const Dataset d = Dataset::create(x, y);
    for (Index j = 0; j < x.cols(); ++j) {
        EXPECT_NEAR(d.col_norms()[j], x.col(j).norm(), 1e-12 * x.col(j).norm());
    }
}

TEST(GroupLayout, OffsetsReconstructSizes)
{
    const auto g = GroupLayout::parse("3,2,5");
    ASSERT_EQ(g.n_groups(), 3);
    EXPECT_EQ(g.n_features(), 10);
    for (Index k = 0; k < g.n_groups(); ++k) {
        EXPECT_EQ(g.offsets()[static_cast<std::size_t>(k + 1)] -
                      g.offsets()[static_cast<std::size_t>(k)],
                  g.size(k));
    }
    EXPECT_EQ(g.begin(2), 5);
}

TEST(GroupLayout, RejectsMalformedText)
{
    EXPECT_THROW(GroupLayout::parse("3,,2"), InvalidArgument);
    EXPECT_THROW(GroupLayout::parse("3,x"), InvalidArgument);
    EXPECT_THROW(GroupLayout::parse("0"), InvalidArgument);
    EXPECT_THROW(GroupLayout::parse(""), InvalidArgument);
}

TEST(GroupLayout, CompatibilityCheck)
{
    const Dataset d = Dataset::create(Matrix::Identity(3, 3), vec({1, 2, 3}));
    EXPECT_NO_THROW(GroupLayout::from_sizes({1, 2}).check_compatible(d));
    EXPECT_THROW(GroupLayout::from_sizes({1, 1}).check_compatible(d), DimensionMismatch);
}

TEST(LambdaGrid, LinearEndpointsAndOrder)
{
    const auto g = LambdaGrid::linear(2.0, 5, 0.2, 1.0);
    ASSERT_EQ(g.size(), 5u);
    EXPECT_DOUBLE_EQ(g.values().front(), 2.0);
    EXPECT_DOUBLE_EQ(g.values().back(), 0.4);
    for (std::size_t k = 1; k < g.size(); ++k) EXPECT_LT(g.values()[k], g.values()[k - 1]);
}

TEST(LambdaGrid, SinglePointIsHi)
{
    const auto g = LambdaGrid::linear(3.0, 1, 0.05, 1.0);
    ASSERT_EQ(g.size(), 1u);
    EXPECT_DOUBLE_EQ(g.values()[0], 3.0);
}

TEST(LambdaGrid, LogarithmicIsGeometric)
{
    const auto g = LambdaGrid::logarithmic(1.0, 3, 0.01, 1.0);
    ASSERT_EQ(g.size(), 3u);
    EXPECT_NEAR(g.values()[1], 0.1, 1e-15);
    EXPECT_NEAR(g.values()[2], 0.01, 1e-15);
}

TEST(LambdaGrid, RejectsBadRatios)
{
    EXPECT_THROW(LambdaGrid::from_ratios(1.0, {0.5, 0.7}), InvalidArgument);
    EXPECT_THROW(LambdaGrid::from_ratios(1.0, {1.5}), InvalidArgument);
    EXPECT_THROW(LambdaGrid::from_ratios(1.0, {}), InvalidArgument);
    EXPECT_THROW(LambdaGrid::linear(1.0, 4, 0.5, 0.2), InvalidArgument);
    EXPECT_THROW(LambdaGrid::linear(0.0, 4, 0.1, 1.0), InvalidArgument);
}

TEST(BallEstimate, EnforcesLambdaOrderAndRadius)
{
    EXPECT_THROW(BallEstimate::make(vec({0, 0}), 1.0, BallMethod::Dpp, 1.0, 2.0), InvalidArgument);
    EXPECT_THROW(BallEstimate::make(vec({0, 0}), -1.0, BallMethod::Dpp, 2.0, 1.0),
                 InvalidArgument);
    EXPECT_NO_THROW(BallEstimate::make(vec({0, 0}), 0.0, BallMethod::Dpp, 1.0, 1.0));
}

TEST(Rule, NamesRoundTrip)
{
    for (Rule r : {Rule::None, Rule::Safe, Rule::Dpp, Rule::Imp1, Rule::Imp2, Rule::Edpp,
                   Rule::Strong, Rule::GroupEdpp}) {
        auto back = parse_rule(to_string(r));
        ASSERT_TRUE(back.has_value());
        EXPECT_EQ(*back, r);
    }
    EXPECT_FALSE(parse_rule("bogus").has_value());
    EXPECT_FALSE(ball_method_for(Rule::Strong).has_value());
    EXPECT_EQ(*ball_method_for(Rule::Edpp), BallMethod::Edpp);
}

TEST(ScreenMask, CountsAndKeptIndices)
{
    auto m = ScreenMask::keep_all(4, Rule::Dpp, 1.0, 2.0);
    EXPECT_EQ(m.n_discarded(), 0);
    m.discard[1] = true;
    m.discard[3] = true;
    EXPECT_EQ(m.n_discarded(), 2);
    EXPECT_EQ(m.kept(), (std::vector<Index>{0, 2}));
    EXPECT_EQ(ScreenMask::discard_all(3, Rule::Dpp, 1.0, 1.0).n_discarded(), 3);
}

TEST(CounterRng, DeterministicAndStreamIndependent)
{
    CounterRng a(42, 3), b(42, 3), c(42, 4);
    std::set<std::uint64_t> seen;
    bool differs = false;
    for (int k = 0; k < 100; ++k) {
        const auto va = a.next_u64();
        EXPECT_EQ(va, b.next_u64());
        differs |= va != c.next_u64();
        seen.insert(va);
    }
    EXPECT_TRUE(differs);
    EXPECT_EQ(seen.size(), 100u);
}

TEST(CounterRng, UniformAndBelowRanges)
{
    CounterRng r(7, 0);
    for (int k = 0; k < 10000; ++k) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        ASSERT_LT(r.below(13), 13u);
    }
}

TEST(CounterRng, GaussianMoments)
{
    CounterRng r(9, 1);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double g = r.gaussian();
        s += g;
        s2 += g * g;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(SpectralNorm, MatchesSingularValue)
{
    CounterRng r(11, 0);
    for (Index cols : {1, 3, 8, 20}) {
        Matrix a(25, cols);
        for (Index j = 0; j < cols; ++j)
            for (Index i = 0; i < 25; ++i) a(i, j) = r.gaussian();
        const double expect = Eigen::JacobiSVD<Matrix>(a).singularValues()[0];
        EXPECT_NEAR(spectral_norm(a), expect, 1e-6 * expect) << cols;
    }
}

TEST(SpectralNorm, PowerIterationConvergesOnDiagonal)
{
    Matrix a = Matrix::Zero(3, 3);
    a.diagonal() << 3.0, 1.0, 0.5;
    const auto res = power_iteration_gram(a, 500, 1e-14);
    EXPECT_TRUE(res.converged);
    EXPECT_NEAR(res.eigenvalue, 9.0, 1e-10);
}
