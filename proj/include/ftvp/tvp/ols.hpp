#pragma once

#include "ftvp/numerics/linalg.hpp"

namespace ftvp::tvp {

struct OlsResult {
  Mat coef;       // k x n, one column per equation
  Mat resid;      // T x n
  Mat sigma;      // residual covariance, divided by T - k
  Mat coef_cov;   // (n k) x (n k), sigma ⊗ (X'X)^{-1}, equation-major
  Vec se;         // sqrt of the coef_cov diagonal, same ordering
  bool degenerate = false;  // residual covariance exactly zero
};

// Least squares of each column of y on the common regressors X.
// Throws RankDeficientRegressors when X does not have full column rank.
OlsResult ols_regression(const Mat& y, const Mat& X);

// VAR(p) with intercept on the rows of data (T x n). The regressor matrix uses
// rows p..T-1 so the effective sample is T - p. coef is (1 + n p) x n; column i
// stacked is the b block of equation i. Throws InsufficientTrainingData when
// T <= n p + 1.
OlsResult ols_var(const Mat& data, int p);

// The design matrix used by ols_var.
Mat var_design(const Mat& data, int p);

}  // namespace ftvp::tvp
