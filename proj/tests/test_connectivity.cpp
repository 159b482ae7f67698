#include <gtest/gtest.h>

#include "oracles.hpp"
#include "recurconnect/connectivity.hpp"
#include "recurconnect/random.hpp"

using namespace recurconnect;

namespace {

TauRecurrenceProfile random_profile(Rng& rng, std::size_t tau_max, std::size_t head) {
    TauRecurrenceProfile p{std::vector<double>(tau_max + 1)};
    for (std::size_t t = 0; t <= tau_max; ++t) p.p[t] = 0.3 * rng.uniform01();
    // Shared head: p(0) = 1 decaying linearly to 0.3 at the autocorrelation time.
    for (std::size_t t = 0; t <= head; ++t)
        p.p[t] = 1.0 - 0.7 * static_cast<double>(t) / static_cast<double>(std::max<std::size_t>(head, 1));
    return p;
}

}  // namespace

TEST(Cpr, IdenticalProfilesGiveOne) {
    Rng rng(1);
    const auto p = random_profile(rng, 100, 5);
    EXPECT_NEAR(cpr(p, p, 5, 3).value, 1.0, 1e-12);
    EXPECT_NEAR(cpr_uncorrected(p, p).value, 1.0, 1e-12);
}

TEST(Cpr, ReflectedProfileGivesMinusOne) {
    Rng rng(2);
    const auto px = random_profile(rng, 100, 5);
    auto py = px;
    double mean = 0.0;
    for (std::size_t t = 6; t <= 100; ++t) mean += px.p[t];
    mean /= 95.0;
    for (std::size_t t = 6; t <= 100; ++t) py.p[t] = 2.0 * mean - px.p[t];
    EXPECT_NEAR(cpr(px, py, 5, 5).value, -1.0, 1e-12);
}

TEST(Cpr, UsesLargerAutocorrelationTime) {
    Rng rng(3);
    const auto px = random_profile(rng, 60, 2);
    const auto py = random_profile(rng, 60, 2);
    const auto m = cpr(px, py, 4, 9);
    EXPECT_EQ(m.tau_c_used, 9u);
    EXPECT_EQ(m.kind, MeasureKind::cpr);
    // brute force: correlation over tau = 10..60
    const std::vector<double> a(px.p.begin() + 10, px.p.end()), b(py.p.begin() + 10, py.p.end());
    EXPECT_NEAR(m.value, oracle::correlation(a, b), 1e-12);
}

TEST(Cpr, HeadIsIgnoredBitExactly) {
    Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t tau_c = 1 + rng.below(20);
        auto px = random_profile(rng, 80, tau_c);
        auto py = random_profile(rng, 80, tau_c);
        const double before = cpr(px, py, tau_c, rng.below(tau_c + 1)).value;
        for (std::size_t t = 0; t <= tau_c; ++t) {
            px.p[t] = 1e6 * rng.normal();
            py.p[t] = -1e6 * rng.uniform01();
        }
        EXPECT_EQ(cpr(px, py, rng.below(tau_c + 1), tau_c).value, before);
    }
}

TEST(Cpr, UncorrectedDiffersWhenOnlyTheHeadDiffers) {
    Rng rng(5);
    auto px = random_profile(rng, 80, 8);
    auto py = random_profile(rng, 80, 8);
    for (std::size_t t = 9; t <= 80; ++t) py.p[t] = px.p[t];
    for (std::size_t t = 1; t <= 8; ++t) py.p[t] = 0.1 * static_cast<double>(t % 3);
    EXPECT_NEAR(cpr(px, py, 8, 8).value, 1.0, 1e-12);
    EXPECT_LT(cpr_uncorrected(px, py).value, 1.0 - 1e-3);
}

// The shared p(tau <= tau_c) head pulls the uncorrected estimate upwards.
TEST(Cpr, SharedHeadInflatesUncorrectedEstimate) {
    Rng rng(6);
    double sum_corrected = 0.0, sum_uncorrected = 0.0;
    int raised = 0;
    const int trials = 1000;
    for (int trial = 0; trial < trials; ++trial) {
        const std::size_t tau_c = 3 + rng.below(15);
        const auto px = random_profile(rng, 120, tau_c);
        const auto py = random_profile(rng, 120, tau_c);
        const double corrected = cpr(px, py, tau_c, tau_c).value;
        const double uncorrected = cpr_uncorrected(px, py).value;
        sum_corrected += corrected;
        sum_uncorrected += uncorrected;
        raised += uncorrected > corrected;
    }
    EXPECT_GT(sum_uncorrected / trials, sum_corrected / trials + 0.5);
    EXPECT_EQ(raised, trials);
}

TEST(Cpr, Errors) {
    Rng rng(7);
    const auto px = random_profile(rng, 30, 3);
    const auto shorter = random_profile(rng, 29, 3);
    EXPECT_THROW(cpr(px, shorter, 3, 3), UsageError);
    EXPECT_NO_THROW(cpr(px, px, 20, 0));  // exactly 10 lags: 21..30
    EXPECT_THROW(cpr(px, px, 21, 0), DataError);
    TauRecurrenceProfile flat{std::vector<double>(50, 1.0)};
    EXPECT_THROW(cpr(flat, flat, 2, 2), DataError);
    EXPECT_THROW(cpr_uncorrected(flat, flat), DataError);
}

TEST(Pearson, HandComputed) {
    const std::vector<double> x{1, 2, 3, 4}, y{1, 3, 2, 4};
    EXPECT_NEAR(pearson(x, y).value, 0.8, 1e-12);
    EXPECT_NEAR(pearson(x, x).value, 1.0, 1e-12);
    const std::vector<double> neg{-1, -2, -3, -4};
    EXPECT_NEAR(pearson(x, neg).value, -1.0, 1e-12);
    EXPECT_EQ(pearson(x, y).kind, MeasureKind::pearson);
}

TEST(Pearson, LengthMismatch) {
    EXPECT_THROW(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}), DataError);
}

TEST(MeasureProperties, BoundedSymmetricAndAffineInvariant) {
    Rng rng(8);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = 20 + rng.below(200);
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.normal();
            y[i] = 0.5 * x[i] + rng.normal();
        }
        const double r = pearson(x, y).value;
        EXPECT_LE(std::abs(r), 1.0 + 1e-9);
        EXPECT_DOUBLE_EQ(r, pearson(y, x).value);
        std::vector<double> xs(n);
        for (std::size_t i = 0; i < n; ++i) xs[i] = 3.0 * x[i] + 11.0;
        EXPECT_NEAR(pearson(xs, y).value, r, 1e-12);
        EXPECT_NEAR(r, oracle::correlation(x, y), 1e-12);

        const std::size_t tau_c = 1 + rng.below(10);
        const auto px = random_profile(rng, 60, tau_c);
        const auto py = random_profile(rng, 60, 1 + rng.below(10));
        const std::size_t other = rng.below(12);
        const double c = cpr(px, py, tau_c, other).value;
        EXPECT_LE(std::abs(c), 1.0 + 1e-9);
        EXPECT_EQ(c, cpr(py, px, other, tau_c).value);
    }
}
