#pragma once

// Synthetic datasets shared by the analysis, CLI and acceptance suites.

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "recurconnect/ingest.hpp"
#include "recurconnect/random.hpp"

namespace fixture {

using recurconnect::Date;
using recurconnect::TimeSeries;

inline Date day(int offset) {
    return Date{std::chrono::year{2000} / std::chrono::January / 1} + std::chrono::days{offset};
}

inline std::vector<Date> daily_dates(std::size_t n) {
    std::vector<Date> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = day(static_cast<int>(i));
    return d;
}

/// Monday-to-Friday calendar starting on a Monday, with each business day
/// independently dropped with probability `holiday` (0 for a gap-free week).
inline std::vector<Date> business_calendar(std::size_t n, double holiday, recurconnect::Rng& rng) {
    std::vector<Date> out;
    Date d = Date{std::chrono::year{1990} / std::chrono::December / 3};  // a Monday
    while (out.size() < n) {
        const std::chrono::weekday wd{d};
        if (wd != std::chrono::Saturday && wd != std::chrono::Sunday && rng.uniform01() >= holiday) out.push_back(d);
        d += std::chrono::days{1};
    }
    return out;
}

/// Five series on one daily axis: two independent AR(1) drivers, a noisy copy
/// of each, and one independent series.
inline std::vector<TimeSeries> five_series(std::size_t n, std::uint64_t seed) {
    recurconnect::Rng rng(seed);
    const auto a = oracle::ar1(n, 0.9, rng);
    const auto b = oracle::ar1(n, 0.9, rng);
    const auto c = oracle::ar1(n, 0.9, rng);
    std::vector<double> a2(n), b2(n);
    for (std::size_t i = 0; i < n; ++i) {
        a2[i] = a[i] + 0.3 * rng.normal();
        b2[i] = b[i] + 0.8 * rng.normal();
    }
    const auto dates = daily_dates(n);
    return {TimeSeries("alpha", dates, a), TimeSeries("alpha_copy", dates, a2), TimeSeries("beta", dates, b),
            TimeSeries("beta_copy", dates, b2), TimeSeries("gamma", dates, c)};
}

/// A bubble-shaped pair: a sharp rise to a peak followed by an exponential
/// decline over 250 points with little noise, surrounded by stronger noise.
/// `y` is the same shape 60 points later with its own noise.
struct ShiftedBumps {
    TimeSeries x;
    TimeSeries y;
    std::size_t x_peak;
    std::size_t y_peak;
};

inline ShiftedBumps shifted_bumps(std::uint64_t seed, std::size_t n = 1600, std::size_t peak = 800,
                                  std::size_t shift = 60) {
    recurconnect::Rng rng(seed);
    auto shape = [&](long i) {
        const long u = i - static_cast<long>(peak);
        return (u < 0 || u >= 250) ? 0.0 : std::exp(-static_cast<double>(u) / 60.0);
    };
    auto noise = [&](long i) {
        const long u = i - static_cast<long>(peak);
        return (u < 0 || u >= 250) ? 0.15 : 0.02;
    };
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long t = static_cast<long>(i);
        x[i] = shape(t) + noise(t) * rng.normal();
        y[i] = shape(t - static_cast<long>(shift)) + noise(t - static_cast<long>(shift)) * rng.normal();
    }
    const auto dates = daily_dates(n);
    return {TimeSeries("x", dates, x), TimeSeries("y", dates, y), peak, peak + shift};
}

}  // namespace fixture
