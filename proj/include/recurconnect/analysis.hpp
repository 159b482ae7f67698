#pragma once

// Windowed connectivity analysis: sliding-window CPR and Pearson trends with
// twin-surrogate significance, three-level binning, peak-aligned comparison,
// and window-span statistics of a date axis.
//
// Seeds. A measurement of series pair (i, j) in window w uses the stream
// derive_seed(seed, {i, j, w}); surrogate k of that measurement uses
// surrogate_seed(stream, k). Peak alignment uses derive_seed(seed, {offset
// position}). Results therefore do not depend on the worker count.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "recurconnect/connectivity.hpp"
#include "recurconnect/error.hpp"
#include "recurconnect/ingest.hpp"
#include "recurconnect/parallel.hpp"
#include "recurconnect/preprocess.hpp"
#include "recurconnect/random.hpp"
#include "recurconnect/recurrence.hpp"
#include "recurconnect/surrogate.hpp"

namespace recurconnect {

struct WindowSpec {
    std::size_t size = 250;
    std::size_t step = 10;

    void validate() const {
        if (size < 50) throw UsageError("window size must be at least 50");
        if (step < 1 || step > size) throw UsageError("window step must lie in [1, size]");
    }

    /// Number of whole windows over a series of length n.
    std::size_t count(std::size_t n) const { return n < size ? 0 : (n - size) / step + 1; }
};

/// Parameters of the surrogate significance test applied to each measurement.
struct TestConfig {
    std::size_t n_surrogates = 100;
    double alpha = 0.1;
    std::uint64_t seed = 0;
    /// p(tau) is evaluated for tau <= tau_cap * (N - 1).
    double tau_cap = 1.0;
    /// Also test against surrogates of the first series and keep the larger p-value.
    bool symmetric = false;

    void validate() const {
        if (n_surrogates < 2) throw UsageError("at least 2 surrogates are required");
        if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must lie in (0, 1)");
        if (!(tau_cap > 0.0 && tau_cap <= 1.0)) throw UsageError("tau cap must lie in (0, 1]");
    }
};

enum class WindowStatus {
    ok,
    constant_segment,       // a window segment has no variance; nothing computed
    no_decorrelation,       // ACF never fell below 1/e; CPR not computed
    too_few_lags,           // fewer than kMinCprLags lags beyond tau_c; CPR not computed
    constant_profile,       // p(tau) beyond tau_c is flat; CPR not computed
    degenerate_surrogates,  // surrogate CPR distribution unusable; CPR not tested
};

inline const char* to_string(WindowStatus s) {
    switch (s) {
        case WindowStatus::ok: return "ok";
        case WindowStatus::constant_segment: return "constant_segment";
        case WindowStatus::no_decorrelation: return "no_decorrelation";
        case WindowStatus::too_few_lags: return "too_few_lags";
        case WindowStatus::constant_profile: return "constant_profile";
        case WindowStatus::degenerate_surrogates: return "degenerate_surrogates";
    }
    return "?";
}

/// CPR and Pearson results for one pair of equally long segments. Observed
/// values are NaN when they could not be computed; a test result is empty when
/// the value or its surrogate distribution is unavailable. `status` names the
/// first obstacle met. Pearson is still reported when only the CPR failed.
struct PairMeasurement {
    WindowStatus status = WindowStatus::ok;
    double cpr_observed = std::numeric_limits<double>::quiet_NaN();
    double rho_observed = std::numeric_limits<double>::quiet_NaN();
    std::optional<SignificanceResult> cpr;
    std::optional<SignificanceResult> rho;
};

namespace detail {

/// Recurrence quantities of one normalized segment.
struct SegmentProfile {
    NormalizedSeries series;
    TauRecurrenceProfile profile;
    std::optional<std::size_t> tau_c;  // empty when the ACF never decorrelates
};

inline std::optional<SegmentProfile> profile_segment(std::span<const double> raw,
                                                     const RecurrenceConfig& rc,
                                                     std::size_t tau_max) {
    SegmentProfile out;
    try {
        out.series = normalize(raw);
    } catch (const DataError&) {
        return std::nullopt;
    }
    out.profile = tau_recurrence_profile(Trajectory::from_scalar(out.series.values), rc, tau_max);
    try {
        out.tau_c = autocorrelation_time(out.series.values);
    } catch (const DataError&) {
        out.tau_c.reset();
    }
    return out;
}

/// Classifies why a CPR between two segments cannot be evaluated, if it cannot.
inline std::optional<WindowStatus> cpr_obstacle(const SegmentProfile& a, const SegmentProfile& b) {
    if (!a.tau_c || !b.tau_c) return WindowStatus::no_decorrelation;
    const std::size_t tau_c = std::max(*a.tau_c, *b.tau_c);
    const std::size_t lags = a.profile.p.size() > tau_c + 1 ? a.profile.p.size() - tau_c - 1 : 0;
    if (lags < kMinCprLags) return WindowStatus::too_few_lags;
    auto flat = [&](const TauRecurrenceProfile& p) {
        const std::span<const double> seg(p.p.data() + tau_c + 1, lags);
        const double m = mean_of(seg);
        return negligible_spread(std_of(seg, m), seg);
    };
    if (flat(a.profile) || flat(b.profile)) return WindowStatus::constant_profile;
    return std::nullopt;
}

struct SurrogateDistribution {
    std::vector<double> cpr;
    std::vector<double> rho;
};

/// Measures of `fixed` against twin surrogates of `source`.
inline SurrogateDistribution surrogate_distribution(const SegmentProfile& fixed,
                                                    const SegmentProfile& source,
                                                    const RecurrenceConfig& rc,
                                                    std::size_t n_surrogates,
                                                    std::uint64_t stream, bool want_cpr) {
    const auto source_points = Trajectory::from_scalar(source.series.values);
    const auto twins = find_twins(recurrence_matrix(source_points, rc));
    const std::size_t tau_max = fixed.profile.tau_max();

    SurrogateDistribution out;
    out.cpr.reserve(n_surrogates);
    out.rho.reserve(n_surrogates);
    for (std::size_t k = 0; k < n_surrogates; ++k) {
        const auto values = twin_surrogate(source.series.values, twins, surrogate_seed(stream, k));
        const auto surrogate = profile_segment(values, rc, tau_max);
        if (!surrogate) continue;
        out.rho.push_back(pearson(fixed.series, surrogate->series).value);
        if (want_cpr && !cpr_obstacle(fixed, *surrogate))
            out.cpr.push_back(cpr(fixed.profile, surrogate->profile, *fixed.tau_c,
                                  *surrogate->tau_c).value);
    }
    return out;
}

inline std::optional<SignificanceResult> try_test(double observed, const std::vector<double>& values,
                                                  double alpha) {
    try {
        return significance_test(observed, values, alpha);
    } catch (const DataError&) {
        return std::nullopt;
    } catch (const UsageError&) {
        return std::nullopt;
    }
}

inline std::optional<SignificanceResult> weaker(std::optional<SignificanceResult> a,
                                                std::optional<SignificanceResult> b) {
    if (!a || !b) return std::nullopt;
    return a->p_value >= b->p_value ? a : b;
}

}  // namespace detail

/// Corrected CPR and Pearson coefficient of two equally long raw segments,
/// each tested against twin surrogates of `b` (and of `a` as well when
/// `test.symmetric`). Segments are normalized before anything else.
inline PairMeasurement measure_pair(std::span<const double> a, std::span<const double> b,
                                    const RecurrenceConfig& rc, const TestConfig& test,
                                    std::uint64_t stream) {
    if (a.size() != b.size()) throw UsageError("segments differ in length");
    if (a.size() < 2) throw UsageError("segments need at least 2 points");
    const std::size_t tau_max = default_tau_max(a.size(), test.tau_cap);

    PairMeasurement out;
    const auto pa = detail::profile_segment(a, rc, tau_max);
    const auto pb = detail::profile_segment(b, rc, tau_max);
    if (!pa || !pb) {
        out.status = WindowStatus::constant_segment;
        return out;
    }

    const double rho_observed = pearson(pa->series, pb->series).value;
    const auto obstacle = detail::cpr_obstacle(*pa, *pb);
    std::optional<double> cpr_observed;
    if (obstacle)
        out.status = *obstacle;
    else
        cpr_observed = cpr(pa->profile, pb->profile, *pa->tau_c, *pb->tau_c).value;

    auto test_against = [&](const detail::SegmentProfile& fixed,
                            const detail::SegmentProfile& source, std::uint64_t s) {
        const auto dist = detail::surrogate_distribution(fixed, source, rc, test.n_surrogates, s,
                                                         cpr_observed.has_value());
        std::pair<std::optional<SignificanceResult>, std::optional<SignificanceResult>> r;
        r.second = detail::try_test(rho_observed, dist.rho, test.alpha);
        if (cpr_observed) r.first = detail::try_test(*cpr_observed, dist.cpr, test.alpha);
        return r;
    };

    auto [cpr_result, rho_result] = test_against(*pa, *pb, stream);
    if (test.symmetric) {
        auto [cpr_rev, rho_rev] = test_against(*pb, *pa, derive_seed(stream, {1}));
        cpr_result = detail::weaker(cpr_result, cpr_rev);
        rho_result = detail::weaker(rho_result, rho_rev);
    }
    out.rho_observed = rho_observed;
    out.rho = rho_result;
    if (cpr_observed) {
        out.cpr_observed = *cpr_observed;
        out.cpr = cpr_result;
        if (!cpr_result) out.status = WindowStatus::degenerate_surrogates;
    }
    return out;
}

struct WindowRecord {
    std::size_t start_index = 0;
    Date start_date{};
    Date end_date{};
    PairMeasurement measurement;
};

struct PairTrend {
    std::size_t first = 0;  // series indices into the dataset
    std::size_t second = 0;
    std::pair<std::string, std::string> labels;
    std::vector<WindowRecord> records;
};

/// All pairs (i < j) of the dataset, each over the sliding-window grid
/// [w * step, w * step + size). Pair/window tasks run on `workers` threads.
inline std::vector<PairTrend> sliding_pairwise(const AlignedDataset& data, const WindowSpec& spec,
                                               const RecurrenceConfig& rc, const TestConfig& test,
                                               std::size_t workers = 1) {
    spec.validate();
    test.validate();
    const std::size_t n = data.length();
    if (n < spec.size)
        throw DataError("series length " + std::to_string(n) + " is shorter than the window " +
                        std::to_string(spec.size));
    const std::size_t windows = spec.count(n);
    const auto& series = data.series();

    std::vector<PairTrend> trends;
    for (std::size_t i = 0; i < series.size(); ++i)
        for (std::size_t j = i + 1; j < series.size(); ++j) {
            PairTrend t;
            t.first = i;
            t.second = j;
            t.labels = {series[i].label(), series[j].label()};
            t.records.resize(windows);
            trends.push_back(std::move(t));
        }

    parallel_for(trends.size() * windows, workers, [&](std::size_t task) {
        PairTrend& trend = trends[task / windows];
        const std::size_t w = task % windows;
        const std::size_t start = w * spec.step;
        const std::span<const double> a(series[trend.first].values().data() + start, spec.size);
        const std::span<const double> b(series[trend.second].values().data() + start, spec.size);
        WindowRecord& rec = trend.records[w];
        rec.start_index = start;
        rec.start_date = data.dates()[start];
        rec.end_date = data.dates()[start + spec.size - 1];
        rec.measurement = measure_pair(a, b, rc, test, derive_seed(test.seed, {trend.first, trend.second, w}));
    });
    return trends;
}

struct BinThresholds {
    double strong = 0.8;
    double moderate = 0.5;

    void validate() const {
        if (!(moderate > 0.0 && moderate < strong && strong <= 1.0))
            throw UsageError("bin thresholds must satisfy 0 < moderate < strong <= 1");
    }
};

enum class ConnectivityBin { strong, moderate, weak };

/// strong = [strong, 1], moderate = [moderate, strong), weak = [0, moderate) on |CPR|.
inline ConnectivityBin classify(double cpr_value, const BinThresholds& t) {
    const double a = std::abs(cpr_value);
    if (a >= t.strong) return ConnectivityBin::strong;
    if (a >= t.moderate) return ConnectivityBin::moderate;
    return ConnectivityBin::weak;
}

struct BinCounts {
    std::size_t window_start_index = 0;
    std::size_t strong_sig = 0, strong_all = 0;
    std::size_t moderate_sig = 0, moderate_all = 0;
    std::size_t weak_sig = 0, weak_all = 0;

    std::size_t strong(bool significant_only) const { return significant_only ? strong_sig : strong_all; }
    std::size_t moderate(bool significant_only) const {
        return significant_only ? moderate_sig : moderate_all;
    }
    std::size_t weak(bool significant_only) const { return significant_only ? weak_sig : weak_all; }
    std::size_t total_all() const { return strong_all + moderate_all + weak_all; }
};

struct ConnectivityBins {
    std::size_t pair_count = 0;
    std::vector<BinCounts> windows;
};

/// Per-window counts of pairs in each |CPR| bin, over all pairs and over the
/// significant ones only. A window whose CPR could not be evaluated counts as
/// weak; an untested CPR is never significant.
inline ConnectivityBins bin_connectivity(const std::vector<PairTrend>& trends,
                                         const BinThresholds& thresholds = {}) {
    thresholds.validate();
    ConnectivityBins out;
    out.pair_count = trends.size();
    if (trends.empty()) return out;
    const auto& grid = trends.front().records;
    for (const auto& t : trends) {
        if (t.records.size() != grid.size())
            throw UsageError("pair trends do not share one window grid");
        for (std::size_t w = 0; w < grid.size(); ++w)
            if (t.records[w].start_index != grid[w].start_index)
                throw UsageError("pair trends do not share one window grid");
    }

    out.windows.resize(grid.size());
    for (std::size_t w = 0; w < grid.size(); ++w) {
        BinCounts& c = out.windows[w];
        c.window_start_index = grid[w].start_index;
        for (const auto& t : trends) {
            const auto& m = t.records[w].measurement;
            const ConnectivityBin bin =
                std::isfinite(m.cpr_observed) ? classify(m.cpr_observed, thresholds) : ConnectivityBin::weak;
            const bool sig = m.cpr && m.cpr->significant;
            switch (bin) {
                case ConnectivityBin::strong: ++c.strong_all; c.strong_sig += sig; break;
                case ConnectivityBin::moderate: ++c.moderate_all; c.moderate_sig += sig; break;
                case ConnectivityBin::weak: ++c.weak_all; c.weak_sig += sig; break;
            }
        }
        if (c.total_all() != trends.size())
            throw std::logic_error("bin counts do not add up to the pair count");
    }
    return out;
}

struct DateInterval {
    Date first;
    Date last;
};

struct PeakRecord {
    long offset = 0;              // window start relative to each series' peak
    std::size_t x_start = 0;      // window start indices in x and y
    std::size_t y_start = 0;
    PairMeasurement measurement;
};

struct PeakAlignment {
    std::pair<std::string, std::string> labels;
    std::size_t x_peak = 0, y_peak = 0;
    Date x_peak_date{}, y_peak_date{};
    std::vector<PeakRecord> records;
};

struct OffsetRange {
    long first = -500;
    long last = 250;
};

/// Index of the largest value dated within `search` (earliest on ties).
inline std::size_t peak_index(const TimeSeries& s, const DateInterval& search) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.dates()[i] < search.first || search.last < s.dates()[i]) continue;
        if (!best || s.values()[i] > s.values()[*best]) best = i;
    }
    if (!best)
        throw DataError("series '" + s.label() + "' has no dates in the peak search interval " +
                        format_date(search.first) + ".." + format_date(search.last));
    return *best;
}

/// Windows starting at peak + offset in each series, for offsets
/// first, first + step, ..., up to last.
inline PeakAlignment peak_align(const TimeSeries& x, const TimeSeries& y, const DateInterval& search,
                                const WindowSpec& spec, const RecurrenceConfig& rc,
                                const TestConfig& test, const OffsetRange& offsets = {},
                                std::size_t workers = 1) {
    spec.validate();
    test.validate();
    if (search.last < search.first) throw UsageError("empty peak search interval");
    if (offsets.last < offsets.first) throw UsageError("empty offset range");

    PeakAlignment out;
    out.labels = {x.label(), y.label()};
    out.x_peak = peak_index(x, search);
    out.y_peak = peak_index(y, search);
    out.x_peak_date = x.dates()[out.x_peak];
    out.y_peak_date = y.dates()[out.y_peak];

    const auto size = static_cast<long>(spec.size);
    auto check = [&](const TimeSeries& s, std::size_t peak) {
        for (long o = offsets.first; o <= offsets.last; o += static_cast<long>(spec.step)) {
            const long start = static_cast<long>(peak) + o;
            if (start < 0 || start + size > static_cast<long>(s.size()))
                throw DataError("insufficient history around the peak of '" + s.label() + "' (" +
                                format_date(s.dates()[peak]) + ") for offset " + std::to_string(o));
        }
    };
    check(x, out.x_peak);
    check(y, out.y_peak);

    for (long o = offsets.first; o <= offsets.last; o += static_cast<long>(spec.step)) {
        PeakRecord r;
        r.offset = o;
        r.x_start = static_cast<std::size_t>(static_cast<long>(out.x_peak) + o);
        r.y_start = static_cast<std::size_t>(static_cast<long>(out.y_peak) + o);
        out.records.push_back(r);
    }
    parallel_for(out.records.size(), workers, [&](std::size_t k) {
        PeakRecord& r = out.records[k];
        r.measurement = measure_pair(std::span(x.values().data() + r.x_start, spec.size),
                                     std::span(y.values().data() + r.y_start, spec.size), rc, test,
                                     derive_seed(test.seed, {k}));
    });
    return out;
}

struct SpanStats {
    std::size_t size = 0;
    std::size_t windows = 0;
    double mean_days = 0.0;
    double std_days = 0.0;  // population
};

/// Calendar-day range (last date - first date) of every window of each size
/// in [min_size, max_size], windows advanced by `step`.
inline std::vector<SpanStats> window_span_stats(const std::vector<Date>& dates, std::size_t min_size,
                                                std::size_t max_size, std::size_t step) {
    const std::size_t n = dates.size();
    if (min_size == 0 || min_size > max_size) throw UsageError("invalid window size range");
    if (max_size >= n)
        throw UsageError("window size " + std::to_string(max_size) + " must be below the length " +
                         std::to_string(n));
    if (step == 0) throw UsageError("step must be positive");

    std::vector<SpanStats> out;
    for (std::size_t size = min_size; size <= max_size; ++size) {
        std::vector<double> spans;
        for (std::size_t start = 0; start + size <= n; start += step)
            spans.push_back(static_cast<double>((dates[start + size - 1] - dates[start]).count()));
        const double mean = detail::mean_of(spans);
        out.push_back({size, spans.size(), mean, detail::std_of(spans, mean)});
    }
    return out;
}

}  // namespace recurconnect
