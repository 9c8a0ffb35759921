#include "ftvp/app/panel.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ftvp/numerics/error.hpp"

namespace ftvp::app {

std::string Period::str() const { return std::to_string(year) + "Q" + std::to_string(quarter); }

Period parse_period(const std::string& s) {
  if (s.size() != 6 || (s[4] != 'Q' && s[4] != 'q')) throw Error(Errc::MalformedDate, "expected YYYYQn, got '" + s + "'");
  for (int i = 0; i < 4; ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw Error(Errc::MalformedDate, "bad year in '" + s + "'");
  if (s[5] < '1' || s[5] > '4') throw Error(Errc::MalformedDate, "quarter must be 1..4 in '" + s + "'");
  return {std::stoi(s.substr(0, 4)), s[5] - '0'};
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool is_missing(const std::string& s) { return s.empty() || s == "NA" || s == "."; }

}  // namespace

TimeSeriesPanel ingest(std::istream& in, const std::vector<int>& codes_in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::Io, "empty csv");
  const auto header = split_line(line);
  if (header.size() < 2) throw Error(Errc::RaggedRows, "need a date column and at least one series");
  const int nc = int(header.size()) - 1;
  std::vector<int> codes = codes_in.empty() ? std::vector<int>(nc, 1) : codes_in;
  if (int(codes.size()) != nc)
    throw Error(Errc::InvalidArgument, "got " + std::to_string(codes.size()) + " codes for " + std::to_string(nc) + " series");
  for (int c : codes)
    if (c != 0 && c != 1 && c != 4 && c != 5) throw Error(Errc::InvalidArgument, "unknown transformation code " + std::to_string(c));

  std::vector<Period> periods;
  std::vector<std::vector<double>> raw;
  int row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split_line(line);
    if (int(cells.size()) != nc + 1)
      throw Error(Errc::RaggedRows, "row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                                        " fields, header has " + std::to_string(nc + 1), row);
    Period p = parse_period(cells[0]);
    if (!periods.empty() && !(periods.back() < p))
      throw Error(Errc::MalformedDate, "period " + p.str() + " at row " + std::to_string(row) + " is not increasing", row);
    periods.push_back(p);
    std::vector<double> v(nc);
    for (int j = 0; j < nc; ++j) {
      if (is_missing(cells[j + 1])) {
        v[j] = NAN;
        continue;
      }
      size_t used = 0;
      try {
        v[j] = std::stod(cells[j + 1], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cells[j + 1].size())
        throw Error(Errc::InvalidArgument, "row " + std::to_string(row) + ", column " + header[j + 1] + ": not a number", row);
    }
    raw.push_back(std::move(v));
  }
  const int T = int(raw.size());

  TimeSeriesPanel out;
  std::vector<int> keep;
  for (int j = 0; j < nc; ++j)
    if (codes[j] != 0) keep.push_back(j);
  Mat v = Mat::Constant(T, int(keep.size()), NAN);
  for (size_t k = 0; k < keep.size(); ++k) {
    const int j = keep[k];
    out.names.push_back(header[j + 1]);
    out.codes.push_back(codes[j]);
    for (int t = 0; t < T; ++t) {
      const double x = raw[t][j];
      if ((codes[j] == 4 || codes[j] == 5) && !std::isnan(x) && x <= 0)
        throw Error(Errc::NonPositiveLogInput,
                    "row " + std::to_string(t + 1) + ", column " + header[j + 1] + ": log of " + std::to_string(x), t + 1);
      switch (codes[j]) {
        case 1: v(t, k) = x; break;
        case 4: v(t, k) = std::log(x); break;
        case 5: v(t, k) = t == 0 ? NAN : 100.0 * (std::log(x) - std::log(raw[t - 1][j])); break;
      }
    }
  }
  // leading incomplete rows are consumed by the transformations
  int first = 0;
  while (first < T && !v.row(first).allFinite()) ++first;
  for (int t = first; t < T; ++t)
    for (int k = 0; k < v.cols(); ++k)
      if (!std::isfinite(v(t, k)))
        throw Error(Errc::MissingValue, "row " + std::to_string(t + 1) + ", column " + out.names[k] + " is missing", t + 1);
  out.values = v.bottomRows(T - first);
  out.periods.assign(periods.begin() + first, periods.end());
  return out;
}

TimeSeriesPanel ingest_file(const std::string& path, const std::vector<int>& codes) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::Io, "cannot open " + path);
  return ingest(f, codes);
}

void write_panel(const TimeSeriesPanel& p, std::ostream& os) {
  os << "date";
  for (const auto& n : p.names) os << ',' << n;
  os << '\n' << std::setprecision(17);
  for (int t = 0; t < p.T(); ++t) {
    os << p.periods[t].str();
    for (int j = 0; j < p.n(); ++j) os << ',' << p.values(t, j);
    os << '\n';
  }
}

}  // namespace ftvp::app
