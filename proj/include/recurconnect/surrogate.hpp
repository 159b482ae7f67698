#pragma once

// Twin surrogates and the Z-test against a surrogate distribution.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "recurconnect/error.hpp"
#include "recurconnect/preprocess.hpp"
#include "recurconnect/random.hpp"
#include "recurconnect/recurrence.hpp"

namespace recurconnect {

/// Source indices visited by one twin surrogate of length N.
///
/// The walk starts at a uniformly drawn index. From source index l it jumps to
/// a uniformly chosen member j of l's twin class (j = l when l has no twins)
/// and moves on to j's successor. The successor of the last point is the
/// first point, so the walk never runs off the end of the data.
inline std::vector<std::size_t> twin_surrogate_indices(const TwinClasses& twins, Rng& rng) {
    const std::size_t n = twins.size();
    if (n < 2) throw DataError("twin surrogates need at least 2 points");
    std::vector<std::size_t> path;
    path.reserve(n);
    path.push_back(static_cast<std::size_t>(rng.below(n)));
    while (path.size() < n) {
        const auto& cls = twins.twins_of(path.back());
        const std::size_t jump =
            cls.size() == 1 ? cls.front() : cls[static_cast<std::size_t>(rng.below(cls.size()))];
        path.push_back(jump + 1 == n ? 0 : jump + 1);
    }
    return path;
}

inline Trajectory twin_surrogate(const Trajectory& points, const TwinClasses& twins,
                                 std::uint64_t seed) {
    if (twins.size() != points.size())
        throw UsageError("twin classes do not match the trajectory length");
    Rng rng(seed);
    const auto path = twin_surrogate_indices(twins, rng);
    std::vector<std::vector<double>> out;
    out.reserve(path.size());
    for (std::size_t i : path) {
        const auto p = points.point(i);
        out.emplace_back(p.begin(), p.end());
    }
    return Trajectory::from_points(out);
}

/// Scalar convenience form.
inline std::vector<double> twin_surrogate(std::span<const double> values, const TwinClasses& twins,
                                          std::uint64_t seed) {
    if (twins.size() != values.size())
        throw UsageError("twin classes do not match the series length");
    Rng rng(seed);
    const auto path = twin_surrogate_indices(twins, rng);
    std::vector<double> out(path.size());
    for (std::size_t k = 0; k < path.size(); ++k) out[k] = values[path[k]];
    return out;
}

struct SurrogateEnsemble {
    std::vector<Trajectory> surrogates;
    std::uint64_t seed = 0;
    std::string source_label;
};

/// Seed of surrogate `index` within an ensemble seeded with `seed`.
constexpr std::uint64_t surrogate_seed(std::uint64_t seed, std::size_t index) noexcept {
    return derive_seed(seed, {static_cast<std::uint64_t>(index)});
}

inline SurrogateEnsemble generate_ensemble(const Trajectory& points, const TwinClasses& twins,
                                           std::size_t count, std::uint64_t seed,
                                           std::string source_label = {}) {
    if (count < 2) throw UsageError("a surrogate ensemble needs at least 2 members");
    SurrogateEnsemble out{{}, seed, std::move(source_label)};
    out.surrogates.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        out.surrogates.push_back(twin_surrogate(points, twins, surrogate_seed(seed, k)));
    return out;
}

struct SignificanceResult {
    double observed = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
    double z = 0.0;
    double p_value = 1.0;
    double alpha = 0.1;
    bool significant = false;
    std::size_t n_surrogates = 0;
};

/// Two-sided standard-normal tail probability 2 (1 - Phi(|z|)).
inline double two_sided_p_value(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

/// Z = (observed - mu) / sigma with mu, sigma the mean and population standard
/// deviation of the surrogate values.
inline SignificanceResult significance_test(double observed, std::span<const double> surrogate_values,
                                            double alpha) {
    if (surrogate_values.size() < 2) throw UsageError("significance test needs at least 2 surrogate values");
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must lie in (0, 1)");
    const double mu = detail::mean_of(surrogate_values);
    const double sigma = detail::std_of(surrogate_values, mu);
    if (detail::negligible_spread(sigma, surrogate_values))
        throw DataError("surrogate distribution has zero spread");

    SignificanceResult r;
    r.observed = observed;
    r.mu = mu;
    r.sigma = sigma;
    r.z = (observed - mu) / sigma;
    r.p_value = two_sided_p_value(r.z);
    r.alpha = alpha;
    r.significant = r.p_value < alpha;
    r.n_surrogates = surrogate_values.size();
    return r;
}

}  // namespace recurconnect
