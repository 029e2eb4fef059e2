#pragma once

#include <filesystem>
#include <iosfwd>

#include "extremo/time_series.hpp"

namespace extremo {

/// Read a series from CSV: one observation per row, d comma-separated
/// columns. `has_header` skips the first line.
TimeSeries read_series_csv(std::istream& in, bool has_header = false);
TimeSeries read_series_csv(const std::filesystem::path& path, bool has_header = false);

/// Write a series as CSV, one observation per row, full double precision.
void write_series_csv(const TimeSeries& series, std::ostream& out);
void write_series_csv(const TimeSeries& series, const std::filesystem::path& path);

/// Deterministic shortest-exact formatting used by all report writers.
std::string format_double(double x);

}  // namespace extremo
