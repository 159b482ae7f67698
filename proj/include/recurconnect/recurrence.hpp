#pragma once

// Recurrence matrices, tau-recurrence profiles and twin classes.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "recurconnect/error.hpp"

namespace recurconnect {

/// A trajectory of N points in R^m, stored row-major.
class Trajectory {
public:
    static Trajectory from_scalar(std::span<const double> values) {
        return Trajectory(values.size(), 1, std::vector<double>(values.begin(), values.end()));
    }

    static Trajectory from_points(const std::vector<std::vector<double>>& points) {
        if (points.empty()) throw DataError("empty trajectory");
        const std::size_t dim = points.front().size();
        if (dim == 0) throw DataError("zero-dimensional phase points");
        std::vector<double> flat;
        flat.reserve(points.size() * dim);
        for (const auto& p : points) {
            if (p.size() != dim) throw DataError("phase points differ in dimension");
            flat.insert(flat.end(), p.begin(), p.end());
        }
        return Trajectory(points.size(), dim, std::move(flat));
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t dimension() const noexcept { return dim_; }
    std::span<const double> point(std::size_t i) const noexcept {
        return {data_.data() + i * dim_, dim_};
    }
    /// Flat coordinates; for a scalar trajectory this is the series itself.
    std::span<const double> data() const noexcept { return data_; }

private:
    Trajectory(std::size_t n, std::size_t dim, std::vector<double> data)
        : n_(n), dim_(dim), data_(std::move(data)) {
        for (double v : data_)
            if (!std::isfinite(v)) throw DataError("trajectory has a non-finite coordinate");
    }

    std::size_t n_;
    std::size_t dim_;
    std::vector<double> data_;
};

enum class Norm { absolute, euclidean, maximum };

inline const char* to_string(Norm norm) {
    switch (norm) {
        case Norm::absolute: return "absolute";
        case Norm::euclidean: return "euclidean";
        case Norm::maximum: return "maximum";
    }
    return "?";
}

struct RecurrenceConfig {
    double epsilon = 0.1;
    Norm norm = Norm::absolute;

    /// Absolute difference for scalars, Euclidean distance otherwise.
    static RecurrenceConfig for_dimension(std::size_t dim, double epsilon = 0.1) {
        return {epsilon, dim == 1 ? Norm::absolute : Norm::euclidean};
    }
};

inline double distance(std::span<const double> a, std::span<const double> b, Norm norm) {
    switch (norm) {
        case Norm::absolute:
            return std::abs(a[0] - b[0]);
        case Norm::euclidean: {
            double ss = 0.0;
            for (std::size_t k = 0; k < a.size(); ++k) ss += (a[k] - b[k]) * (a[k] - b[k]);
            return std::sqrt(ss);
        }
        case Norm::maximum: {
            double m = 0.0;
            for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
            return m;
        }
    }
    return 0.0;
}

namespace detail {

inline void check_config(const Trajectory& points, const RecurrenceConfig& config) {
    if (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon))
        throw UsageError("epsilon must be a positive finite number");
    if (config.norm == Norm::absolute && points.dimension() != 1)
        throw UsageError("the absolute norm applies to scalar series only");
}

}  // namespace detail

/// Symmetric binary matrix R(i,j) = [dist(x_i, x_j) <= epsilon], bit-packed by rows.
class RecurrenceMatrix {
public:
    static constexpr std::size_t kWordBits = 64;

    /// Builds from explicit 0/1 rows; the rows must form a valid recurrence
    /// matrix (square, symmetric, unit diagonal).
    static RecurrenceMatrix from_dense(const std::vector<std::vector<int>>& rows,
                                       RecurrenceConfig config = {}) {
        const std::size_t n = rows.size();
        RecurrenceMatrix r(n, config);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n) throw DataError("recurrence matrix must be square");
            for (std::size_t j = 0; j < n; ++j) {
                if (rows[i][j] != 0 && rows[i][j] != 1) throw DataError("entries must be 0 or 1");
                if (rows[i][j] != rows[j][i]) throw DataError("recurrence matrix must be symmetric");
                if (rows[i][j]) r.set(i, j);
            }
            if (!rows[i][i]) throw DataError("recurrence matrix diagonal must be 1");
        }
        return r;
    }

    std::size_t size() const noexcept { return n_; }
    const RecurrenceConfig& config() const noexcept { return config_; }

    bool operator()(std::size_t i, std::size_t j) const noexcept {
        return (bits_[i * words_ + j / kWordBits] >> (j % kWordBits)) & 1U;
    }

    /// Packed row i; bit j%64 of word j/64 is R(i,j). Padding bits are zero.
    std::span<const std::uint64_t> row(std::size_t i) const noexcept {
        return {bits_.data() + i * words_, words_};
    }

    std::size_t count_ones() const noexcept {
        std::size_t c = 0;
        for (auto w : bits_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    friend bool operator==(const RecurrenceMatrix& a, const RecurrenceMatrix& b) noexcept {
        return a.n_ == b.n_ && a.bits_ == b.bits_;
    }

private:
    friend RecurrenceMatrix recurrence_matrix(const Trajectory&, const RecurrenceConfig&);

    RecurrenceMatrix(std::size_t n, RecurrenceConfig config)
        : n_(n), words_((n + kWordBits - 1) / kWordBits), bits_(n * words_, 0), config_(config) {}

    void set(std::size_t i, std::size_t j) noexcept {
        bits_[i * words_ + j / kWordBits] |= std::uint64_t{1} << (j % kWordBits);
    }

    std::size_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
    RecurrenceConfig config_;
};

/// Threshold test uses dist <= epsilon, i.e. a pair exactly epsilon apart recurs.
inline RecurrenceMatrix recurrence_matrix(const Trajectory& points, const RecurrenceConfig& config) {
    const std::size_t n = points.size();
    if (n < 2) throw DataError("a recurrence matrix needs at least 2 points");
    detail::check_config(points, config);

    RecurrenceMatrix r(n, config);
    if (points.dimension() == 1) {
        const auto x = points.data();
        for (std::size_t i = 0; i < n; ++i) {
            r.set(i, i);
            for (std::size_t j = i + 1; j < n; ++j)
                if (std::abs(x[i] - x[j]) <= config.epsilon) {
                    r.set(i, j);
                    r.set(j, i);
                }
        }
        return r;
    }
    for (std::size_t i = 0; i < n; ++i) {
        r.set(i, i);
        for (std::size_t j = i + 1; j < n; ++j)
            if (distance(points.point(i), points.point(j), config.norm) <= config.epsilon) {
                r.set(i, j);
                r.set(j, i);
            }
    }
    return r;
}

/// p(tau) for tau = 0..tau_max: the fraction of recurrent pairs on the tau-th
/// diagonal.
struct TauRecurrenceProfile {
    std::vector<double> p;

    std::size_t tau_max() const noexcept { return p.empty() ? 0 : p.size() - 1; }
};

inline void check_tau_max(std::size_t n, std::size_t tau_max) {
    if (tau_max == 0 || tau_max >= n)
        throw UsageError("tau_max must lie in [1, N-1]; got " + std::to_string(tau_max) +
                         " for N = " + std::to_string(n));
}

/// tau_max = floor(cap * (N - 1)), at least 1.
inline std::size_t default_tau_max(std::size_t n, double cap_fraction = 1.0) {
    const auto t = static_cast<std::size_t>(cap_fraction * static_cast<double>(n - 1));
    return std::clamp<std::size_t>(t, 1, n - 1);
}

inline TauRecurrenceProfile tau_recurrence_rate(const RecurrenceMatrix& r, std::size_t tau_max) {
    const std::size_t n = r.size();
    check_tau_max(n, tau_max);
    std::vector<std::size_t> counts(tau_max + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = r.row(i);
        const std::size_t last = std::min(n - 1, i + tau_max);
        for (std::size_t j = i; j <= last; ++j)
            counts[j - i] += (row[j / 64] >> (j % 64)) & 1U;
    }
    TauRecurrenceProfile out{std::vector<double>(tau_max + 1)};
    for (std::size_t t = 0; t <= tau_max; ++t)
        out.p[t] = static_cast<double>(counts[t]) / static_cast<double>(n - t);
    return out;
}

/// Same profile as tau_recurrence_rate(recurrence_matrix(points, config), tau_max)
/// computed straight from the distances, without materializing the matrix.
inline TauRecurrenceProfile tau_recurrence_profile(const Trajectory& points,
                                                   const RecurrenceConfig& config,
                                                   std::size_t tau_max) {
    const std::size_t n = points.size();
    if (n < 2) throw DataError("a recurrence profile needs at least 2 points");
    detail::check_config(points, config);
    check_tau_max(n, tau_max);

    TauRecurrenceProfile out{std::vector<double>(tau_max + 1)};
    out.p[0] = 1.0;
    const double eps = config.epsilon;
    if (points.dimension() == 1) {
        const double* x = points.data().data();
        for (std::size_t t = 1; t <= tau_max; ++t) {
            std::size_t count = 0;
            const std::size_t m = n - t;
            for (std::size_t i = 0; i < m; ++i) count += std::abs(x[i] - x[i + t]) <= eps;
            out.p[t] = static_cast<double>(count) / static_cast<double>(m);
        }
        return out;
    }
    for (std::size_t t = 1; t <= tau_max; ++t) {
        std::size_t count = 0;
        for (std::size_t i = 0; i + t < n; ++i)
            count += distance(points.point(i), points.point(i + t), config.norm) <= eps;
        out.p[t] = static_cast<double>(count) / static_cast<double>(n - t);
    }
    return out;
}

/// Partition of point indices into groups whose matrix columns are identical.
struct TwinClasses {
    std::vector<std::vector<std::size_t>> classes;  // each sorted; ordered by first member
    std::vector<std::size_t> class_of;              // point index -> position in `classes`

    std::size_t size() const noexcept { return class_of.size(); }
    const std::vector<std::size_t>& twins_of(std::size_t i) const { return classes[class_of[i]]; }
};

/// Two points are twins when their columns (equivalently rows, by symmetry)
/// agree in all N entries.
inline TwinClasses find_twins(const RecurrenceMatrix& r) {
    const std::size_t n = r.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto less = [&](std::size_t a, std::size_t b) {
        const auto ra = r.row(a), rb = r.row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    };
    auto same = [&](std::size_t a, std::size_t b) {
        const auto ra = r.row(a), rb = r.row(b);
        return std::equal(ra.begin(), ra.end(), rb.begin());
    };
    std::stable_sort(order.begin(), order.end(), less);

    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < n; ++k) {
        if (k == 0 || !same(order[k - 1], order[k])) groups.emplace_back();
        groups.back().push_back(order[k]);
    }
    for (auto& g : groups) std::sort(g.begin(), g.end());
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    TwinClasses out;
    out.class_of.resize(n);
    for (std::size_t c = 0; c < groups.size(); ++c)
        for (std::size_t i : groups[c]) out.class_of[i] = c;
    out.classes = std::move(groups);
    return out;
}

/// Plain PBM (P1) rendering; row i of the image is row i of R, 1 = black.
inline void write_pbm(std::ostream& out, const RecurrenceMatrix& r) {
    const std::size_t n = r.size();
    out << "P1\n" << n << ' ' << n << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t column = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (column + 2 > 70) {
                out << '\n';
                column = 0;
            }
            if (column > 0) {
                out << ' ';
                ++column;
            }
            out << (r(i, j) ? '1' : '0');
            ++column;
        }
        out << '\n';
    }
}

}  // namespace recurconnect
