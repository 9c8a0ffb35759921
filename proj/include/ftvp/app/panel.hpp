#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ftvp/numerics/linalg.hpp"

namespace ftvp::app {

struct Period {
  int year = 0, quarter = 1;

  bool operator==(const Period&) const = default;
  auto operator<=>(const Period&) const = default;
  Period next() const { return quarter == 4 ? Period{year + 1, 1} : Period{year, quarter + 1}; }
  std::string str() const;  // "1960Q1"
};

// "YYYYQn" with n in 1..4; throws MalformedDate.
Period parse_period(const std::string& s);

struct TimeSeriesPanel {
  Mat values;  // T x n
  std::vector<std::string> names;
  std::vector<Period> periods;
  std::vector<int> codes;  // code applied to each output column

  int T() const { return int(values.rows()); }
  int n() const { return int(values.cols()); }
};

// Transformation codes: 0 auxiliary (dropped), 1 level, 4 log, 5 100 Δlog.
// `codes` has one entry per non-date column; empty means all 1.
// Empty cells, "NA" and "." are missing. Leading rows left incomplete by the
// transformations are dropped; any other missing value throws MissingValue.
// Row numbers in errors count data rows from 1 (header excluded).
TimeSeriesPanel ingest(std::istream& csv, const std::vector<int>& codes = {});
TimeSeriesPanel ingest_file(const std::string& path, const std::vector<int>& codes = {});

// Date column named "date"; 17 significant digits so values round-trip.
void write_panel(const TimeSeriesPanel& p, std::ostream& os);

}  // namespace ftvp::app
