#include "trec/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>

#include "trec/errors.hpp"

namespace trec {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string lowered(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool is_missing_token(const std::string& cell) {
    if (cell.empty()) return true;
    const std::string low = lowered(cell);
    return low == "na" || low == "nan";
}

bool parse_number(const std::string& cell, double& out) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (begin != end && *begin == '+') ++begin;
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delimiter, start);
        if (pos == std::string::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return cells;
}

}  // namespace

bool is_missing(double v) { return std::isnan(v); }

std::string CleanDataset::original_name(const std::string& canonical) const {
    for (const auto& [orig, canon] : name_map) {
        if (canon == canonical) return orig;
    }
    return {};
}

TimeSeriesDataset parse_dataset(std::istream& in, const CsvFormat& format) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    // Allow trailing blank lines only.
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw DataError("empty input: expected a header row and data rows");

    const std::vector<std::string> header = split_line(lines.front(), format.delimiter);
    if (header.size() < 2) {
        throw DataError("expected a time column and at least one variable column, got " +
                        std::to_string(header.size()) + " column(s)");
    }

    TimeSeriesDataset d;
    d.variables.resize(header.size() - 1);
    for (std::size_t j = 1; j < header.size(); ++j) d.variables[j - 1].name = header[j];

    for (std::size_t r = 1; r < lines.size(); ++r) {
        if (trim(lines[r]).empty()) {
            throw DataError("blank row at line " + std::to_string(r + 1));
        }
        const std::vector<std::string> cells = split_line(lines[r], format.delimiter);
        if (cells.size() != header.size()) {
            throw DataError("line " + std::to_string(r + 1) + " has " +
                            std::to_string(cells.size()) + " cells, header has " +
                            std::to_string(header.size()));
        }
        double t = 0.0;
        if (is_missing_token(cells[0]) || !parse_number(cells[0], t)) {
            throw DataError("non-numeric time label '" + cells[0] + "' at line " +
                            std::to_string(r + 1));
        }
        if (!d.time_labels.empty()) {
            if (t == d.time_labels.back()) {
                throw DataError("duplicate time label '" + cells[0] + "' at line " +
                                std::to_string(r + 1));
            }
            if (t < d.time_labels.back()) {
                throw DataError("time labels not increasing at line " + std::to_string(r + 1));
            }
        }
        d.time_labels.push_back(t);
        for (std::size_t j = 1; j < cells.size(); ++j) {
            double v = kMissing;
            if (!is_missing_token(cells[j]) && !parse_number(cells[j], v)) {
                throw DataError("non-numeric value '" + cells[j] + "' at line " +
                                std::to_string(r + 1) + ", column '" + header[j] + "'");
            }
            d.variables[j - 1].values.push_back(v);
        }
    }

    if (d.steps() < 4) {
        throw DataError("at least 4 time steps required, got " + std::to_string(d.steps()));
    }
    return d;
}

std::pair<TimeSeriesDataset, std::vector<std::string>>
interpolate_and_filter(const TimeSeriesDataset& d) {
    TimeSeriesDataset out;
    out.time_labels = d.time_labels;
    std::vector<std::string> removed;
    const std::size_t n = d.steps();

    for (const Column& var : d.variables) {
        if (n == 0 || is_missing(var.values.front()) || is_missing(var.values.back())) {
            removed.push_back(var.name);
            continue;
        }
        Column filled = var;
        std::size_t i = 1;
        while (i + 1 < n) {
            if (!is_missing(filled.values[i])) {
                ++i;
                continue;
            }
            const std::size_t lo = i - 1;  // last observed
            std::size_t hi = i;
            while (is_missing(filled.values[hi])) ++hi;  // endpoints observed, so hi < n
            // Linear in the time-label coordinate between the two neighbours.
            const double t0 = d.time_labels[lo];
            const double t1 = d.time_labels[hi];
            const double v0 = filled.values[lo];
            const double v1 = filled.values[hi];
            for (std::size_t k = lo + 1; k < hi; ++k) {
                const double w = (d.time_labels[k] - t0) / (t1 - t0);
                filled.values[k] = v0 + w * (v1 - v0);
            }
            i = hi + 1;
        }
        out.variables.push_back(std::move(filled));
    }

    if (out.variables.empty()) {
        throw DataError("no variables remain after removing variables with boundary gaps");
    }
    return {std::move(out), std::move(removed)};
}

CleanDataset standardize(const TimeSeriesDataset& filtered) {
    CleanDataset clean;
    clean.time_labels = filtered.time_labels;
    const std::size_t n = filtered.steps();

    for (const Column& var : filtered.variables) {
        for (double v : var.values) {
            if (is_missing(v)) {
                throw DataError("standardize: variable '" + var.name + "' has a missing value");
            }
        }
        Column z;
        z.name = var.name;
        z.values.resize(n);

        const auto [mn, mx] = std::minmax_element(var.values.begin(), var.values.end());
        if (*mn == *mx) {
            // Zero variance: keep the variable as an all-zero series.
            std::fill(z.values.begin(), z.values.end(), 0.0);
            clean.warnings.push_back("constant variable '" + var.name + "' standardized to zeros");
            clean.variables.push_back(std::move(z));
            continue;
        }

        double mean = 0.0;
        for (double v : var.values) mean += v;
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (double v : var.values) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        for (std::size_t i = 0; i < n; ++i) z.values[i] = (var.values[i] - mean) / sd;
        clean.variables.push_back(std::move(z));
    }
    return clean;
}

CleanDataset ingest(TimeSeriesDataset parsed, TimeSeriesDataset* filtered_raw) {
    // Canonical V-names follow the original column order, before any removal,
    // so a dropped variable leaves a hole in the retained numbering.
    std::vector<std::pair<std::string, std::string>> name_map;
    name_map.reserve(parsed.variables.size());
    for (std::size_t i = 0; i < parsed.variables.size(); ++i) {
        const std::string canonical = "V" + std::to_string(i + 1);
        name_map.emplace_back(parsed.variables[i].name, canonical);
        parsed.variables[i].name = canonical;
    }

    auto [filtered, removed] = interpolate_and_filter(parsed);
    CleanDataset clean = standardize(filtered);
    clean.removed = std::move(removed);
    clean.name_map = std::move(name_map);
    if (filtered_raw != nullptr) *filtered_raw = std::move(filtered);
    return clean;
}

CleanDataset ingest(std::istream& in, const CsvFormat& format) {
    return ingest(parse_dataset(in, format));
}

}  // namespace trec
