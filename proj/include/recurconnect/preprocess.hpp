#pragma once

// Normalization and linear/nonlinear dependence diagnostics. All standard
// deviations use the population convention (divide by N).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "recurconnect/error.hpp"

namespace recurconnect {

/// Values rescaled to zero mean and unit population standard deviation,
/// together with the statistics of the source they were computed from.
struct NormalizedSeries {
    std::vector<double> values;
    double source_mean = 0.0;
    double source_std = 1.0;

    std::size_t size() const noexcept { return values.size(); }
};

namespace detail {

inline double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Population standard deviation around `mean`.
inline double std_of(std::span<const double> v, double mean) {
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

inline double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Deviations at rounding level relative to the magnitude of the data are
// treated as no variance at all.
inline bool negligible_spread(double std_dev, std::span<const double> v) {
    return !(std_dev > 1e-12 * std::max(1.0, max_abs(v)));
}

}  // namespace detail

inline NormalizedSeries normalize(std::span<const double> values) {
    if (values.size() < 2) throw DataError("normalize needs at least 2 values");
    const double mean = detail::mean_of(values);
    const double sd = detail::std_of(values, mean);
    if (detail::negligible_spread(sd, values)) throw DataError("cannot normalize a constant series");
    NormalizedSeries out{std::vector<double>(values.size()), mean, sd};
    for (std::size_t i = 0; i < values.size(); ++i) out.values[i] = (values[i] - mean) / sd;
    return out;
}

/// Biased (divide-by-N) autocorrelation estimate for lags 0..max_lag.
inline std::vector<double> autocorrelation(std::span<const double> values, std::size_t max_lag) {
    const std::size_t n = values.size();
    if (max_lag >= n)
        throw UsageError("max_lag " + std::to_string(max_lag) + " must be below the series length " +
                         std::to_string(n));
    const double mean = detail::mean_of(values);
    std::vector<double> centered(n);
    for (std::size_t i = 0; i < n; ++i) centered[i] = values[i] - mean;
    double c0 = 0.0;
    for (double c : centered) c0 += c * c;
    if (detail::negligible_spread(std::sqrt(c0 / static_cast<double>(n)), values))
        throw DataError("autocorrelation of a constant series");

    std::vector<double> acf(max_lag + 1);
    acf[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double ck = 0.0;
        for (std::size_t i = 0; i + k < n; ++i) ck += centered[i] * centered[i + k];
        acf[k] = ck / c0;
    }
    return acf;
}

struct AcfSummary {
    std::vector<double> acf;  // lags 0..max_lag
    std::size_t tau_c = 0;    // first lag with acf < 1/e
};

namespace detail {

inline std::size_t first_below_inv_e(std::span<const double> acf) {
    const double threshold = std::exp(-1.0);
    for (std::size_t k = 1; k < acf.size(); ++k)
        if (acf[k] < threshold) return k;
    return 0;
}

}  // namespace detail

/// Smallest lag at which the autocorrelation drops strictly below 1/e,
/// searched over lags 1..N/2.
inline std::size_t autocorrelation_time(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw DataError("autocorrelation time needs at least 2 values");
    const double mean = detail::mean_of(values);
    std::vector<double> centered(n);
    for (std::size_t i = 0; i < n; ++i) centered[i] = values[i] - mean;
    double c0 = 0.0;
    for (double c : centered) c0 += c * c;
    if (detail::negligible_spread(std::sqrt(c0 / static_cast<double>(n)), values))
        throw DataError("autocorrelation of a constant series");

    const double threshold = std::exp(-1.0);
    const std::size_t max_lag = std::max<std::size_t>(n / 2, 1);
    for (std::size_t k = 1; k <= max_lag && k < n; ++k) {
        double ck = 0.0;
        for (std::size_t i = 0; i + k < n; ++i) ck += centered[i] * centered[i + k];
        if (ck / c0 < threshold) return k;
    }
    throw DataError("no decorrelation: autocorrelation stays above 1/e for " +
                    std::to_string(max_lag) + " lags");
}

/// ACF over lags 0..N/2 plus the autocorrelation time.
inline AcfSummary acf_summary(std::span<const double> values) {
    if (values.size() < 2) throw DataError("autocorrelation needs at least 2 values");
    AcfSummary out;
    out.acf = autocorrelation(values, std::max<std::size_t>(values.size() / 2, 1));
    out.tau_c = detail::first_below_inv_e(out.acf);
    if (out.tau_c == 0) throw DataError("no decorrelation: autocorrelation stays above 1/e");
    return out;
}

constexpr std::size_t kMutualInformationBins = 16;

/// Equiprobable bin index (0..bins-1) of each value, from its rank. Tied
/// values share the rank of their first occurrence and hence one bin.
inline std::vector<std::size_t> quantile_bins(std::span<const double> values,
                                              std::size_t bins = kMutualInformationBins) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::size_t> bin(n);
    std::size_t rank = 0;
    for (std::size_t r = 0; r < n; ++r) {
        if (r == 0 || values[order[r]] != values[order[r - 1]]) rank = r;
        bin[order[r]] = rank * bins / n;
    }
    return bin;
}

/// Histogram mutual information in nats with 16 equiprobable bins per axis.
inline double mutual_information(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError("mutual information: length mismatch");
    if (x.size() < 64) throw DataError("mutual information needs at least 64 samples");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw DataError("mutual information: non-finite value");
    auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double a) { return a == v.front(); });
    };
    if (constant(x) || constant(y)) throw DataError("mutual information of a constant series");

    constexpr std::size_t B = kMutualInformationBins;
    const auto bx = quantile_bins(x);
    const auto by = quantile_bins(y);
    std::vector<double> joint(B * B, 0.0), px(B, 0.0), py(B, 0.0);
    const double w = 1.0 / static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        joint[bx[i] * B + by[i]] += w;
        px[bx[i]] += w;
        py[by[i]] += w;
    }
    double mi = 0.0;
    for (std::size_t a = 0; a < B; ++a)
        for (std::size_t b = 0; b < B; ++b) {
            const double pab = joint[a * B + b];
            if (pab > 0.0) mi += pab * std::log(pab / (px[a] * py[b]));
        }
    return std::max(mi, 0.0);
}

}  // namespace recurconnect
