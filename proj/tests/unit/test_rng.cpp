#include "isac/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

using isac::CounterRng;

TEST(CounterRng, SameKeyReplaysSameSequence) {
    CounterRng a(42, 7);
    CounterRng b(42, 7);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.normal(), b.normal());
}

TEST(CounterRng, NeighbouringStreamsDiffer) {
    std::set<std::uint64_t> firsts;
    for (std::uint64_t s = 0; s < 10000; ++s) firsts.insert(CounterRng(1, s)());
    EXPECT_EQ(firsts.size(), 10000u);
    EXPECT_NE(CounterRng(1, 0)(), CounterRng(2, 0)());
}

TEST(CounterRng, NormalMomentsAndTails) {
    CounterRng rng(3, 0);
    const int n = 1'000'000;
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    int beyond2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sum2 += x * x;
        sum4 += x * x * x * x;
        beyond2 += std::abs(x) > 2.0;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.005);
    EXPECT_NEAR(sum2 / n, 1.0, 0.01);
    EXPECT_NEAR(sum4 / n, 3.0, 0.05);
    // Pr(|X| > 2) = erfc(sqrt 2)
    EXPECT_NEAR(static_cast<double>(beyond2) / n, std::erfc(std::sqrt(2.0)), 0.001);
}

TEST(CounterRng, NormalPassesKolmogorovSmirnov) {
    CounterRng rng(11, 5);
    std::vector<double> xs(100000);
    for (double& x : xs) x = rng.normal();
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-xs[i] / std::sqrt(2.0));
        d = std::max({d, std::abs(cdf - i / n), std::abs((i + 1) / n - cdf)});
    }
    // 1% critical value 1.628 / sqrt(n)
    EXPECT_LT(d, 1.628 / std::sqrt(n));
}

TEST(CounterRng, ComplexNormalIsCircularUnitVariance) {
    CounterRng rng(9, 1);
    const int n = 500000;
    double re2 = 0.0, im2 = 0.0, cross = 0.0;
    std::complex<double> pseudo = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto z = rng.complex_normal();
        re2 += z.real() * z.real();
        im2 += z.imag() * z.imag();
        cross += z.real() * z.imag();
        pseudo += z * z;
    }
    EXPECT_NEAR(re2 / n, 0.5, 0.005);
    EXPECT_NEAR(im2 / n, 0.5, 0.005);
    EXPECT_NEAR(cross / n, 0.0, 0.005);
    EXPECT_NEAR(std::abs(pseudo) / n, 0.0, 0.01);
}

TEST(DeriveSeed, LabelsGiveDistinctSeeds) {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t label = 0; label < 1000; ++label) seeds.insert(isac::derive_seed(5, label));
    EXPECT_EQ(seeds.size(), 1000u);
    EXPECT_EQ(isac::derive_seed(5, 3), isac::derive_seed(5, 3));
}
