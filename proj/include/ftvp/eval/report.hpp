#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ftvp/eval/metrics.hpp"
#include "ftvp/forecast/recursive.hpp"

namespace ftvp::eval {

struct EvalConfig {
  std::string benchmark = "CP";
  std::vector<int> horizons{1, 2, 4, 8};
  double level = 0.68;
  std::vector<std::string> variables;  // defaults to y1..yn
};

// NaN marks a statistic that is undefined for the cell (benchmark vs itself,
// degenerate losses or hits, too few origins).
struct EvalCell {
  std::string model, variable;
  int horizon = 0;
  int n_eval = 0;  // evaluable origins
  double rmse = 0, rmse_ratio = 0;
  double dm_stat = 0, dm_p = 0;
  int hits = 0;
  double coverage = 0, coverage_p = 0, mean_length = 0;
  double lr_cov = 0, lr_ind = 0, lr_cc = 0, p_cov = 0, p_ind = 0, p_cc = 0;
  double crps = 0, crps_ratio = 0, crps_p = 0;
};

struct EvalReport {
  std::string benchmark;
  double level = 0.68;
  std::vector<EvalCell> cells;

  const EvalCell* find(const std::string& model, const std::string& variable, int horizon) const;
};

// An (origin, h) pair is evaluable when its realization is finite and the
// model produced draws. Comparisons with the benchmark use the origins both
// models can evaluate.
EvalReport evaluate(const forecast::RecursiveRun& run, const EvalConfig& cfg = {});

void write_csv(const EvalReport& r, std::ostream& os);
// Benchmark RMSE level row, then RMSE ratios with DM stars; coverage and CRPS
// blocks follow the same layout.
std::string format_table(const EvalReport& r);

}  // namespace ftvp::eval
