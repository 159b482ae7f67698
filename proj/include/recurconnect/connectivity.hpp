#pragma once

// Pairwise connectivity: correlation of recurrence probabilities (CPR) and
// the Pearson coefficient.

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>

#include "recurconnect/error.hpp"
#include "recurconnect/preprocess.hpp"
#include "recurconnect/recurrence.hpp"

namespace recurconnect {

enum class MeasureKind { cpr, pearson };

struct MeasureValue {
    double value = 0.0;
    MeasureKind kind = MeasureKind::cpr;
    std::size_t tau_c_used = 0;  // CPR only
};

/// A CPR estimate needs at least this many lags beyond the autocorrelation time.
constexpr std::size_t kMinCprLags = 10;

namespace detail {

inline double normalized_dot_mean(std::span<const double> a, std::span<const double> b) {
    const auto na = normalize(a);
    const auto nb = normalize(b);
    double s = 0.0;
    for (std::size_t i = 0; i < na.values.size(); ++i) s += na.values[i] * nb.values[i];
    return s / static_cast<double>(na.values.size());
}

inline void check_profiles(const TauRecurrenceProfile& px, const TauRecurrenceProfile& py) {
    if (px.p.size() != py.p.size())
        throw UsageError("recurrence profiles differ in tau_max (" + std::to_string(px.tau_max()) +
                         " vs " + std::to_string(py.tau_max()) + ")");
}

inline double segment_correlation(const TauRecurrenceProfile& px, const TauRecurrenceProfile& py,
                                  std::size_t first) {
    const std::size_t count = px.p.size() - std::min(first, px.p.size());
    if (count < kMinCprLags)
        throw DataError("only " + std::to_string(count) + " lags beyond the autocorrelation time; " +
                        std::to_string(kMinCprLags) + " required");
    const std::span<const double> sx(px.p.data() + first, count);
    const std::span<const double> sy(py.p.data() + first, count);
    try {
        return normalized_dot_mean(sx, sy);
    } catch (const DataError&) {
        throw DataError("recurrence profile is constant beyond the autocorrelation time");
    }
}

}  // namespace detail

/// CPR over the lags tau > max(tau_c_x, tau_c_y): both profile segments are
/// normalized and the mean of their product is returned.
inline MeasureValue cpr(const TauRecurrenceProfile& px, const TauRecurrenceProfile& py,
                        std::size_t tau_c_x, std::size_t tau_c_y) {
    detail::check_profiles(px, py);
    const std::size_t tau_c = std::max(tau_c_x, tau_c_y);
    return {detail::segment_correlation(px, py, tau_c + 1), MeasureKind::cpr, tau_c};
}

/// CPR over the whole profile, tau = 0 included. Biased towards high values by
/// the p(0) = 1 head shared by every profile.
inline MeasureValue cpr_uncorrected(const TauRecurrenceProfile& px, const TauRecurrenceProfile& py) {
    detail::check_profiles(px, py);
    return {detail::segment_correlation(px, py, 0), MeasureKind::cpr, 0};
}

inline MeasureValue pearson(const NormalizedSeries& x, const NormalizedSeries& y) {
    if (x.size() != y.size()) throw DataError("pearson: length mismatch");
    if (x.size() < 2) throw DataError("pearson needs at least 2 values");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x.values[i] * y.values[i];
    return {s / static_cast<double>(x.size()), MeasureKind::pearson, 0};
}

/// Pearson coefficient of two raw series.
inline MeasureValue pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError("pearson: length mismatch");
    return pearson(normalize(x), normalize(y));
}

}  // namespace recurconnect
