#pragma once

// Dated scalar series: CSV ingestion and date-intersection alignment.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "recurconnect/error.hpp"

namespace recurconnect {

using Date = std::chrono::sys_days;

/// Parses a strict ISO-8601 calendar date `YYYY-MM-DD`.
inline std::optional<Date> parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    auto field = [&](std::size_t pos, std::size_t len, int& out) {
        const char* first = text.data() + pos;
        const char* last = first + len;
        if (!std::all_of(first, last, [](char c) { return c >= '0' && c <= '9'; })) return false;
        return std::from_chars(first, last, out).ec == std::errc{};
    };
    int y = 0, m = 0, d = 0;
    if (!field(0, 4, y) || !field(5, 2, m) || !field(8, 2, d)) return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return Date{ymd};
}

inline std::string format_date(Date date) {
    const std::chrono::year_month_day ymd{date};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

/// A labelled series of daily values. Dates are strictly increasing and every
/// value is finite; enforced on construction.
class TimeSeries {
public:
    TimeSeries(std::string label, std::vector<Date> dates, std::vector<double> values)
        : label_(std::move(label)), dates_(std::move(dates)), values_(std::move(values)) {
        if (dates_.empty()) throw DataError("series '" + label_ + "' is empty");
        if (dates_.size() != values_.size())
            throw DataError("series '" + label_ + "': dates and values differ in length");
        for (std::size_t i = 1; i < dates_.size(); ++i)
            if (!(dates_[i - 1] < dates_[i]))
                throw DataError("series '" + label_ + "': dates not strictly increasing at " +
                                format_date(dates_[i]));
        for (double v : values_)
            if (!std::isfinite(v)) throw DataError("series '" + label_ + "' has a non-finite value");
    }

    const std::string& label() const noexcept { return label_; }
    const std::vector<Date>& dates() const noexcept { return dates_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    std::string label_;
    std::vector<Date> dates_;
    std::vector<double> values_;
};

/// Two or more series sharing one date axis.
class AlignedDataset {
public:
    explicit AlignedDataset(std::vector<TimeSeries> series) : series_(std::move(series)) {
        if (series_.size() < 2) throw UsageError("an aligned dataset needs at least 2 series");
        for (const auto& s : series_)
            if (s.dates() != series_.front().dates())
                throw DataError("series '" + s.label() + "' is not on the shared date axis");
    }

    const std::vector<TimeSeries>& series() const noexcept { return series_; }
    const std::vector<Date>& dates() const noexcept { return series_.front().dates(); }
    std::size_t length() const noexcept { return series_.front().size(); }

private:
    std::vector<TimeSeries> series_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

}  // namespace detail

/// Reads a `date,close` CSV. Records are returned sorted by date. A record
/// with an empty close field is treated as an absent date. Extra columns are
/// ignored; a note is appended to `warnings` when given.
inline TimeSeries parse_csv(std::istream& source, const std::string& label,
                            std::vector<std::string>* warnings = nullptr) {
    std::string raw;
    std::size_t line_no = 0;
    bool have_header = false;

    struct Record {
        Date date;
        double value;
        std::size_t line;
    };
    std::vector<Record> records;

    while (std::getline(source, raw)) {
        ++line_no;
        const std::string_view line = detail::trim(raw);
        if (line.empty()) continue;
        const auto fields = detail::split_fields(line);
        if (!have_header) {
            if (fields.size() < 2 || fields[0] != "date" || fields[1] != "close")
                throw ParseError(line_no, "expected header 'date,close'");
            if (fields.size() > 2 && warnings)
                warnings->push_back(label + ": ignoring " + std::to_string(fields.size() - 2) +
                                    " extra column(s)");
            have_header = true;
            continue;
        }
        if (fields.size() < 2) throw ParseError(line_no, "expected at least 2 fields");
        const auto date = parse_date(fields[0]);
        if (!date) throw ParseError(line_no, "malformed date '" + std::string(fields[0]) + "'");
        if (fields[1].empty()) continue;
        double value = 0.0;
        const char* first = fields[1].data();
        const char* last = first + fields[1].size();
        if (*first == '+') ++first;
        const auto [end, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || end != last || !std::isfinite(value))
            throw ParseError(line_no, "non-numeric close '" + std::string(fields[1]) + "'");
        records.push_back({*date, value, line_no});
    }
    if (!have_header) throw ParseError(std::max<std::size_t>(line_no, 1), "empty file");
    if (records.empty()) throw ParseError(line_no + 1, "no data records");

    std::stable_sort(records.begin(), records.end(),
                     [](const Record& a, const Record& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].date == records[i - 1].date) {
            const std::size_t line = std::max(records[i].line, records[i - 1].line);
            throw ParseError(line, "duplicate date " + format_date(records[i].date));
        }
    }

    std::vector<Date> dates;
    std::vector<double> values;
    dates.reserve(records.size());
    values.reserve(records.size());
    for (const auto& r : records) {
        dates.push_back(r.date);
        values.push_back(r.value);
    }
    return TimeSeries(label, std::move(dates), std::move(values));
}

inline TimeSeries parse_csv_file(const std::string& path, const std::string& label,
                                 std::vector<std::string>* warnings = nullptr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    try {
        return parse_csv(in, label, warnings);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.message(), path);
    }
}

/// Restricts every series to the dates present in all of them, keeping the
/// input order of the series.
inline AlignedDataset align(const std::vector<TimeSeries>& series_list) {
    if (series_list.size() < 2) throw UsageError("align needs at least 2 series");

    std::vector<Date> shared = series_list.front().dates();
    for (std::size_t k = 1; k < series_list.size() && !shared.empty(); ++k) {
        std::vector<Date> next;
        const auto& dates = series_list[k].dates();
        std::set_intersection(shared.begin(), shared.end(), dates.begin(), dates.end(),
                              std::back_inserter(next));
        shared = std::move(next);
    }
    if (shared.empty()) throw DataError("the input series share no dates");

    std::vector<TimeSeries> out;
    out.reserve(series_list.size());
    for (const auto& s : series_list) {
        std::vector<double> values;
        values.reserve(shared.size());
        std::size_t j = 0;
        for (std::size_t i = 0; i < s.size() && j < shared.size(); ++i) {
            if (s.dates()[i] == shared[j]) {
                values.push_back(s.values()[i]);
                ++j;
            }
        }
        out.emplace_back(s.label(), shared, std::move(values));
    }
    return AlignedDataset(std::move(out));
}

}  // namespace recurconnect
