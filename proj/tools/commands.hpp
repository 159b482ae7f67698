#pragma once

// Command-line driver: `trends`, `peak`, `synth` and `diagnose` subcommands.
// Exit codes: 0 success, 1 runtime/data error, 2 usage error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "recurconnect/recurconnect.hpp"

namespace recurconnect::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kSuccess = 0, kDataError = 1, kUsageError = 2 };

struct RunConfig {
    std::vector<std::string> inputs;
    WindowSpec window;
    double epsilon = 0.1;
    TestConfig test;
    BinThresholds bins;
    std::size_t workers = 1;
    std::string out_dir = ".";

    // peak
    std::string search_from = "1999-01-01";
    std::string search_to = "2001-12-31";
    long offset_min = -500;
    long offset_max = 250;

    // synth
    std::string synth_kind = "white";
    std::size_t synth_n = 2000;
    std::string synth_output;
    LorenzParams lorenz;
    bool lorenz_classical = false;
    std::string lorenz_component;

    // diagnose
    bool eps_sweep = false;
    bool write_rp = false;
    std::size_t max_lag = 100;
};

/// `%.6g`: six significant digits, ties resolved on the exact binary value
/// under the default round-to-nearest-even mode. Non-finite values print as nan.
inline std::string format_number(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string label_from_path(const std::string& path) { return fs::path(path).stem().string(); }

/// Collects output files in memory and writes them in one go, removing any
/// already written file when a later write fails.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

    std::ostringstream& open(const std::string& name) {
        names_.push_back(name);
        return contents_[name];
    }

    void commit() {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw DataError("cannot create output directory '" + dir_.string() + "'");
        std::vector<fs::path> written;
        for (const auto& name : names_) {
            const fs::path path = dir_ / name;
            std::ofstream out(path, std::ios::binary);
            out << contents_[name].str();
            out.close();
            if (!out) {
                for (const auto& p : written) fs::remove(p, ec);
                fs::remove(path, ec);
                throw DataError("cannot write '" + path.string() + "'");
            }
            written.push_back(path);
        }
    }

    const std::vector<std::string>& names() const { return names_; }

private:
    fs::path dir_;
    std::vector<std::string> names_;
    std::map<std::string, std::ostringstream> contents_;
};

inline std::vector<TimeSeries> load_inputs(const RunConfig& cfg, std::ostream& log) {
    std::vector<TimeSeries> out;
    std::vector<std::string> warnings;
    for (const auto& path : cfg.inputs) out.push_back(parse_csv_file(path, label_from_path(path), &warnings));
    for (const auto& w : warnings) log << "warning: " << w << '\n';
    return out;
}

inline RecurrenceConfig recurrence_config(const RunConfig& cfg) { return {cfg.epsilon, Norm::absolute}; }

inline void write_measure_columns(std::ostream& os, const PairMeasurement& m) {
    auto p = [](const std::optional<SignificanceResult>& r) {
        return r ? format_number(r->p_value) : std::string("nan");
    };
    auto sig = [](const std::optional<SignificanceResult>& r) { return r && r->significant ? "1" : "0"; };
    os << format_number(m.cpr_observed) << ',' << p(m.cpr) << ',' << sig(m.cpr) << ','
       << format_number(m.rho_observed) << ',' << p(m.rho) << ',' << sig(m.rho) << ','
       << to_string(m.status) << '\n';
}

inline constexpr const char* kTrendHeader =
    "window_start_index,start_date,end_date,cpr,cpr_p,cpr_significant,rho,rho_p,rho_significant,status";
inline constexpr const char* kBinsHeader =
    "window_start_index,strong_sig,strong_all,moderate_sig,moderate_all,weak_sig,weak_all";
inline constexpr const char* kPeakHeader =
    "offset,x_start_date,y_start_date,cpr,cpr_p,cpr_significant,rho,rho_p,rho_significant,status";

inline std::string trend_file_name(const PairTrend& t) {
    return "trend_" + t.labels.first + "__" + t.labels.second + ".csv";
}

inline void cmd_trends(const RunConfig& cfg, std::ostream& log) {
    if (cfg.inputs.size() < 2) throw UsageError("trends needs at least 2 input files");
    cfg.window.validate();
    cfg.test.validate();
    cfg.bins.validate();
    const auto dataset = align(load_inputs(cfg, log));
    log << "aligned " << dataset.series().size() << " series on " << dataset.length()
        << " shared dates\n";

    const auto trends = sliding_pairwise(dataset, cfg.window, recurrence_config(cfg), cfg.test, cfg.workers);
    const auto bins = bin_connectivity(trends, cfg.bins);

    OutputSet out(cfg.out_dir);
    for (const auto& t : trends) {
        auto& os = out.open(trend_file_name(t));
        os << kTrendHeader << '\n';
        for (const auto& r : t.records) {
            os << r.start_index << ',' << format_date(r.start_date) << ',' << format_date(r.end_date) << ',';
            write_measure_columns(os, r.measurement);
        }
    }
    auto& os = out.open("bins.csv");
    os << kBinsHeader << '\n';
    for (const auto& b : bins.windows)
        os << b.window_start_index << ',' << b.strong_sig << ',' << b.strong_all << ',' << b.moderate_sig
           << ',' << b.moderate_all << ',' << b.weak_sig << ',' << b.weak_all << '\n';
    out.commit();
    log << "wrote " << out.names().size() << " files to " << cfg.out_dir << '\n';
}

inline Date parse_date_option(const std::string& text, const char* what) {
    const auto d = parse_date(text);
    if (!d) throw UsageError(std::string(what) + ": malformed date '" + text + "'");
    return *d;
}

inline void cmd_peak(const RunConfig& cfg, std::ostream& log) {
    if (cfg.inputs.size() != 2) throw UsageError("peak needs exactly 2 input files");
    cfg.window.validate();
    cfg.test.validate();
    const DateInterval search{parse_date_option(cfg.search_from, "--search-from"),
                              parse_date_option(cfg.search_to, "--search-to")};
    if (search.last < search.first) throw UsageError("peak search interval is empty");
    const auto series = load_inputs(cfg, log);
    for (const auto& s : series)
        if (search.last < s.dates().front() || s.dates().back() < search.first)
            throw UsageError("peak search interval lies outside the data range of '" + s.label() + "'");

    const auto result = peak_align(series[0], series[1], search, cfg.window, recurrence_config(cfg),
                                   cfg.test, {cfg.offset_min, cfg.offset_max}, cfg.workers);
    log << result.labels.first << " peaks on " << format_date(result.x_peak_date) << ", "
        << result.labels.second << " on " << format_date(result.y_peak_date) << '\n';

    OutputSet out(cfg.out_dir);
    auto& os = out.open("peak_" + result.labels.first + "__" + result.labels.second + ".csv");
    os << kPeakHeader << '\n';
    for (const auto& r : result.records) {
        os << r.offset << ',' << format_date(series[0].dates()[r.x_start]) << ','
           << format_date(series[1].dates()[r.y_start]) << ',';
        write_measure_columns(os, r.measurement);
    }
    out.commit();
}

/// Synthetic dates: consecutive days from 2000-01-01.
inline Date synthetic_date(std::size_t i) {
    return Date{std::chrono::year{2000} / std::chrono::January / 1} + std::chrono::days{static_cast<long>(i)};
}

inline void cmd_synth(const RunConfig& cfg, std::ostream& log) {
    if (cfg.synth_output.empty()) throw UsageError("synth needs --output");
    const fs::path path(cfg.synth_output);
    OutputSet out(path.has_parent_path() ? path.parent_path() : fs::path("."));
    auto& os = out.open(path.filename().string());
    if (cfg.synth_kind == "white") {
        const auto values = white_noise(cfg.synth_n, cfg.test.seed);
        os << "date,close\n";
        for (std::size_t i = 0; i < values.size(); ++i)
            os << format_date(synthetic_date(i)) << ',' << format_number(values[i]) << '\n';
    } else if (cfg.synth_kind == "lorenz") {
        LorenzParams params = cfg.lorenz;
        if (cfg.lorenz_classical) params.beta = LorenzParams::classical().beta;
        params.n = cfg.synth_n;
        const auto traj = lorenz(params);
        int component = -1;
        if (!cfg.lorenz_component.empty()) {
            const std::string names = "xyz";
            const auto pos = names.find(cfg.lorenz_component);
            if (cfg.lorenz_component.size() != 1 || pos == std::string::npos)
                throw UsageError("--component must be one of x, y, z");
            component = static_cast<int>(pos);
        }
        os << (component < 0 ? "date,x,y,z\n" : "date,close\n");
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const auto p = traj.point(i);
            os << format_date(synthetic_date(i));
            if (component < 0)
                os << ',' << format_number(p[0]) << ',' << format_number(p[1]) << ',' << format_number(p[2]);
            else
                os << ',' << format_number(p[static_cast<std::size_t>(component)]);
            os << '\n';
        }
    } else {
        throw UsageError("unknown synthetic series '" + cfg.synth_kind + "' (white, lorenz)");
    }
    out.commit();
    log << "wrote " << cfg.synth_output << '\n';
}

inline void cmd_diagnose(const RunConfig& cfg, std::ostream& log) {
    if (cfg.inputs.empty()) throw UsageError("diagnose needs at least 1 input file");
    const auto all = load_inputs(cfg, log);
    OutputSet out(cfg.out_dir);
    for (const auto& s : all) {
        const auto norm = normalize(s.values());
        const auto points = Trajectory::from_scalar(norm.values);
        const std::size_t n = points.size();
        const std::size_t tau_max = default_tau_max(n, cfg.test.tau_cap);
        const RecurrenceConfig rc = recurrence_config(cfg);
        const auto r = recurrence_matrix(points, rc);
        const auto profile = tau_recurrence_rate(r, tau_max);

        auto& ptau = out.open(s.label() + "_ptau.csv");
        ptau << "tau,p\n";
        for (std::size_t t = 0; t <= tau_max; ++t) ptau << t << ',' << format_number(profile.p[t]) << '\n';

        const std::size_t max_lag = std::min(cfg.max_lag, n - 1);
        const auto acf = autocorrelation(norm.values, max_lag);
        auto& acf_os = out.open(s.label() + "_acf.csv");
        acf_os << "lag,acf\n";
        for (std::size_t k = 0; k <= max_lag; ++k) acf_os << k << ',' << format_number(acf[k]) << '\n';

        auto& mi_os = out.open(s.label() + "_mi.csv");
        mi_os << "lag,mi\n";
        for (std::size_t k = 0; k <= max_lag && n - k >= 64; ++k) {
            const std::span<const double> v(norm.values);
            mi_os << k << ',' << format_number(mutual_information(v.first(n - k), v.subspan(k))) << '\n';
        }

        auto& summary = out.open(s.label() + "_summary.csv");
        summary << "key,value\n";
        summary << "points," << n << '\n';
        summary << "epsilon," << format_number(rc.epsilon) << '\n';
        summary << "recurrence_rate," << format_number(static_cast<double>(r.count_ones()) / (static_cast<double>(n) * static_cast<double>(n))) << '\n';
        try {
            summary << "tau_c," << autocorrelation_time(norm.values) << '\n';
        } catch (const DataError&) {
            summary << "tau_c,nan\n";
        }
        const auto [lo, hi] = std::minmax_element(norm.values.begin(), norm.values.end());
        const double max_distance = *hi - *lo;
        summary << "max_distance," << format_number(max_distance) << '\n';

        if (cfg.eps_sweep) {
            const double fractions[] = {0.01, 0.02, 0.03};
            std::vector<TauRecurrenceProfile> curves;
            for (double f : fractions)
                curves.push_back(tau_recurrence_profile(points, {f * max_distance, Norm::absolute}, tau_max));
            auto& sweep = out.open(s.label() + "_ptau_sweep.csv");
            sweep << "tau,p_eps1pct,p_eps2pct,p_eps3pct\n";
            for (std::size_t t = 0; t <= tau_max; ++t)
                sweep << t << ',' << format_number(curves[0].p[t]) << ',' << format_number(curves[1].p[t])
                      << ',' << format_number(curves[2].p[t]) << '\n';
        }
        if (cfg.write_rp) write_pbm(out.open(s.label() + "_rp.pbm"), r);
    }
    out.commit();
    log << "wrote " << out.names().size() << " files to " << cfg.out_dir << '\n';
}

/// Parses arguments, dispatches, and maps failures to exit codes.
inline int run(int argc, const char* const* argv, std::ostream& log = std::cerr) {
    CLI::App app{"Recurrence-based connectivity analysis of time series", "recurconnect"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML-style file of option values (flags override)");

    RunConfig cfg;
    std::uint64_t seed = 0;
    auto env = [](const char* name) { return std::string("RECURCONNECT_") + name; };
    auto common = [&](CLI::App* sub) {
        sub->add_option("--window", cfg.window.size, "Window size in time points")->envname(env("WINDOW"));
        sub->add_option("--step", cfg.window.step, "Window step in time points")->envname(env("STEP"));
        sub->add_option("--epsilon", cfg.epsilon, "Recurrence threshold (normalized units)")->envname(env("EPSILON"));
        sub->add_option("--surrogates", cfg.test.n_surrogates, "Twin surrogates per test")->envname(env("SURROGATES"));
        sub->add_option("--alpha", cfg.test.alpha, "Significance level")->envname(env("ALPHA"));
        sub->add_option("--seed", seed, "Random seed")->envname(env("SEED"));
        sub->add_option("--tau-cap", cfg.test.tau_cap, "Largest tau as a fraction of N-1")->envname(env("TAU_CAP"));
        sub->add_flag("--symmetric", cfg.test.symmetric, "Also test against surrogates of the first series")
            ->envname(env("SYMMETRIC"));
        sub->add_option("--workers", cfg.workers, "Worker threads")->envname(env("WORKERS"));
        sub->add_option("--out", cfg.out_dir, "Output directory")->envname(env("OUT"));
    };

    auto* trends = app.add_subcommand("trends", "Sliding-window CPR/rho trends for all pairs, plus bin counts");
    common(trends);
    trends->add_option("--strong", cfg.bins.strong, "Strong |CPR| threshold")->envname(env("STRONG"));
    trends->add_option("--moderate", cfg.bins.moderate, "Moderate |CPR| threshold")->envname(env("MODERATE"));
    trends->add_option("inputs", cfg.inputs, "date,close CSV files")->required();

    auto* peak = app.add_subcommand("peak", "Peak-aligned CPR/rho for one pair");
    common(peak);
    peak->add_option("--search-from", cfg.search_from, "Start of the peak search interval")->envname(env("SEARCH_FROM"));
    peak->add_option("--search-to", cfg.search_to, "End of the peak search interval")->envname(env("SEARCH_TO"));
    peak->add_option("--offset-min", cfg.offset_min, "First window offset from the peak")->envname(env("OFFSET_MIN"));
    peak->add_option("--offset-max", cfg.offset_max, "Last window offset from the peak")->envname(env("OFFSET_MAX"));
    peak->add_option("inputs", cfg.inputs, "Two date,close CSV files")->required();

    auto* synth = app.add_subcommand("synth", "Write a synthetic series as CSV");
    synth->add_option("kind", cfg.synth_kind, "white or lorenz")->required();
    synth->add_option("--n", cfg.synth_n, "Number of points")->envname(env("N"));
    synth->add_option("--seed", seed, "Random seed")->envname(env("SEED"));
    synth->add_option("--output", cfg.synth_output, "Output CSV path")->required();
    synth->add_option("--sigma", cfg.lorenz.sigma, "Lorenz sigma");
    synth->add_option("--rho", cfg.lorenz.rho, "Lorenz rho");
    synth->add_option("--beta", cfg.lorenz.beta, "Lorenz beta (default 10/3)");
    synth->add_flag("--classical", cfg.lorenz_classical, "Use beta = 8/3");
    synth->add_option("--dt", cfg.lorenz.dt, "RK4 step");
    synth->add_option("--transient", cfg.lorenz.transient, "Discarded initial steps");
    synth->add_option("--component", cfg.lorenz_component, "Emit only x, y or z as a date,close series");

    auto* diagnose = app.add_subcommand("diagnose", "Recurrence plot, p(tau), ACF and MI reports per series");
    diagnose->add_option("--epsilon", cfg.epsilon, "Recurrence threshold (normalized units)")->envname(env("EPSILON"));
    diagnose->add_option("--tau-cap", cfg.test.tau_cap, "Largest tau as a fraction of N-1")->envname(env("TAU_CAP"));
    diagnose->add_option("--max-lag", cfg.max_lag, "Largest ACF/MI lag");
    diagnose->add_flag("--eps-sweep", cfg.eps_sweep, "Also emit p(tau) at 1%, 2%, 3% of the maximum distance");
    diagnose->add_flag("--rp", cfg.write_rp, "Write the recurrence plot as a PBM image");
    diagnose->add_option("--out", cfg.out_dir, "Output directory")->envname(env("OUT"));
    diagnose->add_option("inputs", cfg.inputs, "date,close CSV files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream err;
        const int code = app.exit(e, std::cout, err);
        log << err.str();
        return code == 0 ? kSuccess : kUsageError;
    }
    cfg.test.seed = seed;

    try {
        if (*trends) cmd_trends(cfg, log);
        else if (*peak) cmd_peak(cfg, log);
        else if (*synth) cmd_synth(cfg, log);
        else if (*diagnose) cmd_diagnose(cfg, log);
        return kSuccess;
    } catch (const UsageError& e) {
        log << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kDataError;
    }
}

}  // namespace recurconnect::cli
