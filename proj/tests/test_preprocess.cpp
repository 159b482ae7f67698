#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "recurconnect/preprocess.hpp"
#include "recurconnect/random.hpp"

using namespace recurconnect;

TEST(Normalize, HandComputedValues) {
    const std::vector<double> x{1, 2, 3};
    const auto n = normalize(x);
    // mean 2, population std sqrt(2/3)
    EXPECT_NEAR(n.values[0], -1.224745, 1e-6);
    EXPECT_NEAR(n.values[1], 0.0, 1e-15);
    EXPECT_NEAR(n.values[2], 1.224745, 1e-6);
    EXPECT_DOUBLE_EQ(n.source_mean, 2.0);
    EXPECT_NEAR(n.source_std, std::sqrt(2.0 / 3.0), 1e-15);
}

TEST(Normalize, Errors) {
    EXPECT_THROW(normalize(std::vector<double>{5, 5, 5}), DataError);
    EXPECT_THROW(normalize(std::vector<double>{5}), DataError);
    EXPECT_THROW(normalize(std::vector<double>{0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1}), DataError);
}

TEST(Normalize, IdempotentAndAffineInvariant) {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(2 + rng.below(200));
        for (auto& v : x) v = 10.0 * rng.normal() + 3.0;
        const auto n = normalize(x);
        double m = 0, s = 0;
        for (double v : n.values) m += v;
        m /= static_cast<double>(n.size());
        for (double v : n.values) s += (v - m) * (v - m);
        EXPECT_NEAR(m, 0.0, 1e-10);
        EXPECT_NEAR(std::sqrt(s / static_cast<double>(n.size())), 1.0, 1e-10);

        const auto again = normalize(n.values);
        for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(again.values[i], n.values[i], 1e-10);

        const double a = (rng.uniform01() < 0.5 ? -1.0 : 1.0) * (0.1 + 5.0 * rng.uniform01());
        const double b = 100.0 * rng.normal();
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i] + b;
        const auto ny = normalize(y);
        for (std::size_t i = 0; i < x.size(); ++i)
            EXPECT_NEAR(ny.values[i], (a > 0 ? 1.0 : -1.0) * n.values[i], 1e-9);
    }
}

TEST(Autocorrelation, LagZeroIsOneAndBounded) {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(10 + rng.below(100));
        for (auto& v : x) v = rng.normal();
        const auto acf = autocorrelation(x, x.size() - 1);
        EXPECT_DOUBLE_EQ(acf[0], 1.0);
        for (std::size_t k = 0; k < acf.size(); ++k) {
            EXPECT_LE(std::abs(acf[k]), 1.0 + 1e-12);
            EXPECT_NEAR(acf[k], oracle::acf_at(x, k), 1e-12);
        }
        // ACF is affine-invariant, so the normalized series has the same ACF.
        const auto an = autocorrelation(normalize(x).values, x.size() - 1);
        for (std::size_t k = 0; k < acf.size(); ++k) EXPECT_NEAR(an[k], acf[k], 1e-12);
    }
}

TEST(Autocorrelation, AlternatingSeries) {
    std::vector<double> x(1000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = i % 2 ? -1.0 : 1.0;
    const auto acf = autocorrelation(x, 2);
    // lag-1 products are all -1 over 999 pairs, divided by 1000
    EXPECT_NEAR(acf[1], -0.999, 1e-12);
    EXPECT_NEAR(acf[2], 0.998, 1e-12);
}

TEST(Autocorrelation, Ar1MatchesAnalyticDecay) {
    Rng rng(2024);
    const auto x = oracle::ar1(10000, 0.9, rng);
    const auto acf = autocorrelation(x, 10);
    for (std::size_t k = 1; k <= 10; ++k) EXPECT_NEAR(acf[k], std::pow(0.9, k), 0.05) << "lag " << k;
}

TEST(Autocorrelation, Errors) {
    const std::vector<double> x{1, 2, 3};
    EXPECT_THROW(autocorrelation(x, 3), UsageError);
    EXPECT_THROW(autocorrelation(std::vector<double>{2, 2, 2}, 1), DataError);
}

TEST(AutocorrelationTime, WhiteNoiseIsOne) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        std::vector<double> x(2000);
        for (auto& v : x) v = rng.uniform01();
        EXPECT_EQ(autocorrelation_time(x), 1u);
    }
}

// 0.9^tau first drops below 1/e at tau = 10 (-1/ln 0.9 = 9.49). Use the exact
// ACF shape by feeding a long series whose sample ACF is close to analytic.
TEST(AutocorrelationTime, Ar1IsTen) {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(100 + seed);
        const auto x = oracle::ar1(200000, 0.9, rng);
        hits += autocorrelation_time(x) == 10u;
    }
    EXPECT_GE(hits, 9);
}

TEST(AutocorrelationTime, FirstCrossingAgreesWithSummary) {
    Rng rng(9);
    const auto x = oracle::ar1(3000, 0.8, rng);
    const auto summary = acf_summary(x);
    EXPECT_EQ(summary.tau_c, autocorrelation_time(x));
    EXPECT_LT(summary.acf[summary.tau_c], std::exp(-1.0));
    for (std::size_t k = 1; k < summary.tau_c; ++k) EXPECT_GE(summary.acf[k], std::exp(-1.0));
}

// The biased ACF sums to -1/2 over positive lags, so it cannot stay above
// 1/e for N/2 lags: even trends and steps decorrelate within the search range.
TEST(AutocorrelationTime, AlwaysFoundWithinHalfLength) {
    Rng rng(10);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(300);
        std::vector<double> x(n);
        const int shape = trial % 4;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i);
            x[i] = shape == 0 ? t * t : shape == 1 ? (2 * i < n ? 0.0 : 1.0) : shape == 2 ? std::exp(t / 10.0) : rng.normal();
        }
        if (detail::negligible_spread(detail::std_of(x, detail::mean_of(x)), x)) continue;
        const std::size_t tau = autocorrelation_time(x);
        EXPECT_GE(tau, 1u);
        EXPECT_LE(tau, std::max<std::size_t>(n / 2, 1));
        EXPECT_LT(oracle::acf_at(x, tau), std::exp(-1.0) + 1e-12);
    }
}

TEST(MutualInformation, SelfInformationIsBinnedEntropy) {
    Rng rng(5);
    std::vector<double> x(1600);
    for (auto& v : x) v = rng.normal();
    // 16 equally filled bins: H = ln 16
    EXPECT_NEAR(mutual_information(x, x), std::log(16.0), 1e-12);
}

TEST(MutualInformation, NegationMatchesSelf) {
    Rng rng(6);
    std::vector<double> x(10000), y(10000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = rng.normal();
        y[i] = -x[i];
    }
    EXPECT_NEAR(mutual_information(x, y), mutual_information(x, x), 1e-12);
}

// Brute force: for small N divisible by 16, reversing ranks maps bin b to 15-b.
TEST(MutualInformation, ReversedBinsArePermutation) {
    for (std::size_t n : {64u, 128u, 320u}) {
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = std::sin(static_cast<double>(i) * 1.7);
            y[i] = -x[i];
        }
        const auto bx = quantile_bins(x), by = quantile_bins(y);
        for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(bx[i] + by[i], 15u);
    }
}

TEST(MutualInformation, IndependentNoiseNearZero) {
    Rng rng(8);
    std::vector<double> x(10000), y(10000);
    for (auto& v : x) v = rng.uniform01();
    for (auto& v : y) v = rng.uniform01();
    EXPECT_LT(mutual_information(x, y), 0.05);
    EXPECT_GE(mutual_information(x, y), 0.0);
}

TEST(MutualInformation, Symmetric) {
    Rng rng(10);
    std::vector<double> x(500), y(500);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = rng.normal();
        y[i] = x[i] * x[i] + 0.3 * rng.normal();
    }
    EXPECT_DOUBLE_EQ(mutual_information(x, y), mutual_information(y, x));
}

TEST(MutualInformation, Errors) {
    std::vector<double> x(100, 1.0), y(100);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<double>(i);
    EXPECT_THROW(mutual_information(x, y), DataError);
    EXPECT_THROW(mutual_information(std::vector<double>(100), std::vector<double>(99)), DataError);
    EXPECT_THROW(mutual_information(std::vector<double>(10, 1.0), std::vector<double>(10, 2.0)), DataError);
}
