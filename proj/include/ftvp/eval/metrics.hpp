#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ftvp/numerics/linalg.hpp"

namespace ftvp::eval {

double normal_cdf(double x);
double chi2_sf(double x, int df);  // df = 1 or 2

// Bartlett-kernel long-run variance of x (mean removed) with truncation lag L.
double hac_variance(const Vec& x, int lag);

double rmse(const Vec& errors);

struct TestResult {
  double stat = 0;
  double p = 1;
};

// Diebold-Mariano on d = loss_a - loss_b with a Bartlett HAC variance at lag
// h - 1. p is one-sided against "b is more accurate" (E d > 0).
// Needs at least 10 pairs; throws DegenerateLosses when d has zero variance.
TestResult dm_test(const Vec& loss_a, const Vec& loss_b, int h);

// Shortest window over the sorted draws that contains ceil(level n) of them.
std::pair<double, double> hpd_interval(Vec draws, double level);

struct IntervalResult {
  double coverage = 0, mean_length = 0;
  int hits = 0, n = 0;
  TestResult t;  // two-sided test of coverage = level, HAC lag h - 1
  std::vector<int> hit_seq;
};

// One draws vector per origin (at least 100 each, TooFewDraws otherwise).
IntervalResult interval_eval(const std::vector<Vec>& draws, const Vec& realized, double level, int h);

struct ChristoffersenResult {
  double lr_cov = 0, lr_ind = 0, lr_cc = 0;
  double p_cov = 1, p_ind = 1, p_cc = 1;
};

// Unconditional coverage LR against hit probability `level`.
TestResult lr_coverage(const std::vector<int>& hits, double level);
// Needs at least 20 hits; throws DegenerateHits when all are 0 or all 1.
ChristoffersenResult christoffersen(const std::vector<int>& hits, double level);

// E|Y - y| - 0.5 E|Y - Y'| under the empirical distribution of the draws
// (all pairs, via order statistics).
// Needs at least 100 draws.
double crps(const Vec& draws, double y);
// Two-sided t-test of equal mean CRPS with HAC lag h - 1.
TestResult crps_test(const Vec& crps_a, const Vec& crps_b, int h = 1);

// "***", "**", "*" at 1, 5 and 10 percent.
std::string stars(double p);

}  // namespace ftvp::eval
