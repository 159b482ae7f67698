#pragma once

// Deterministic test signals: uniform white noise and the Lorenz system.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "recurconnect/error.hpp"
#include "recurconnect/random.hpp"
#include "recurconnect/recurrence.hpp"

namespace recurconnect {

/// i.i.d. uniform values on [0, 1).
inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw UsageError("white noise length must be positive");
    Rng rng(derive_seed(seed, {0x77686974ULL}));
    std::vector<double> out(n);
    for (auto& v : out) v = rng.uniform01();
    return out;
}

struct LorenzParams {
    double sigma = 10.0;
    double rho = 28.0;
    double beta = 10.0 / 3.0;
    double dt = 0.01;
    std::size_t n = 5000;
    std::array<double, 3> initial{1.0, 1.0, 1.0};
    std::size_t transient = 1000;

    /// The parameter set of the original reproduction figures (beta = 10/3).
    static LorenzParams reproduction() { return {}; }

    /// The textbook parameter set (beta = 8/3).
    static LorenzParams classical() {
        LorenzParams p;
        p.beta = 8.0 / 3.0;
        return p;
    }
};

inline std::array<double, 3> lorenz_field(const LorenzParams& p, const std::array<double, 3>& s) {
    return {p.sigma * (s[1] - s[0]), s[0] * (p.rho - s[2]) - s[1], s[0] * s[1] - p.beta * s[2]};
}

/// One classical fourth-order Runge-Kutta step.
inline std::array<double, 3> lorenz_step(const LorenzParams& p, const std::array<double, 3>& s,
                                         double dt) {
    auto axpy = [](const std::array<double, 3>& a, double h, const std::array<double, 3>& k) {
        return std::array<double, 3>{a[0] + h * k[0], a[1] + h * k[1], a[2] + h * k[2]};
    };
    const auto k1 = lorenz_field(p, s);
    const auto k2 = lorenz_field(p, axpy(s, dt / 2, k1));
    const auto k3 = lorenz_field(p, axpy(s, dt / 2, k2));
    const auto k4 = lorenz_field(p, axpy(s, dt, k3));
    std::array<double, 3> out;
    for (int d = 0; d < 3; ++d) out[d] = s[d] + dt / 6.0 * (k1[d] + 2 * k2[d] + 2 * k3[d] + k4[d]);
    return out;
}

/// Fixed-step RK4 integration; the first `transient` steps are discarded and
/// the next `n` states are returned as a 3-dimensional trajectory.
inline Trajectory lorenz(const LorenzParams& params) {
    if (!(params.dt > 0.0) || !std::isfinite(params.dt)) throw UsageError("dt must be positive");
    if (params.n == 0) throw UsageError("trajectory length must be positive");
    std::array<double, 3> state = params.initial;
    std::vector<std::vector<double>> points;
    points.reserve(params.n);
    const std::size_t total = params.transient + params.n;
    for (std::size_t step = 0; step < total; ++step) {
        if (step >= params.transient) points.push_back({state[0], state[1], state[2]});
        state = lorenz_step(params, state, params.dt);
        if (!std::isfinite(state[0]) || !std::isfinite(state[1]) || !std::isfinite(state[2]))
            throw DataError("Lorenz integration diverged at step " + std::to_string(step + 1));
    }
    return Trajectory::from_points(points);
}

}  // namespace recurconnect
