#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace trec {

/// A single named series. Missing observations are stored as NaN.
struct Column {
    std::string name;
    std::vector<double> values;
};

/// Tabular multivariate time series as read from disk. Every variable has
/// exactly one value slot per time label; time labels are strictly increasing.
struct TimeSeriesDataset {
    std::vector<double> time_labels;
    std::vector<Column> variables;

    std::size_t steps() const { return time_labels.size(); }
};

/// Fully observed, standardized data plus the bookkeeping produced on the way
/// there: which variables were dropped and how names map to canonical V-names.
struct CleanDataset {
    std::vector<double> time_labels;
    std::vector<Column> variables;  // canonical names, z-scored
    std::vector<std::string> removed;  // canonical names of dropped variables
    std::vector<std::pair<std::string, std::string>> name_map;  // original -> canonical
    std::vector<std::string> warnings;

    std::size_t steps() const { return time_labels.size(); }
    /// Original name for a canonical V-name ("" when unknown).
    std::string original_name(const std::string& canonical) const;
};

struct CsvFormat {
    char delimiter = ',';
};

bool is_missing(double v);

/// Parses a delimited table. The header row is required; column 1 holds the
/// numeric time labels. Cells that are empty, "NA", or "NaN" are missing.
TimeSeriesDataset parse_dataset(std::istream& in, const CsvFormat& format = {});

/// Fills interior gaps by linear interpolation in the time-label coordinate
/// and drops variables that are missing at the first or last time step.
/// Returns the filtered dataset and the names of the dropped variables.
std::pair<TimeSeriesDataset, std::vector<std::string>>
interpolate_and_filter(const TimeSeriesDataset& d);

/// Z-scores every variable (sample standard deviation, divisor N-1).
/// Constant variables become all zeros and produce a warning.
CleanDataset standardize(const TimeSeriesDataset& filtered);

/// Canonical V-naming + gap handling + standardization of an already parsed
/// dataset. When `filtered_raw` is given it receives the interpolated,
/// pre-standardization data (for raw-data plots).
CleanDataset ingest(TimeSeriesDataset parsed, TimeSeriesDataset* filtered_raw = nullptr);

/// parse + canonical V-naming + gap handling + standardization in one step.
CleanDataset ingest(std::istream& in, const CsvFormat& format = {});

}  // namespace trec
