#include "ftvp/tvp/ols.hpp"

#include "ftvp/numerics/error.hpp"
#include "ftvp/tvp/layout.hpp"

namespace ftvp::tvp {

OlsResult ols_regression(const Mat& y, const Mat& X) {
  if (y.rows() != X.rows()) throw Error(Errc::DimensionMismatch, "y and X row counts differ");
  const int T = int(X.rows()), k = int(X.cols());
  if (T <= k) throw Error(Errc::InsufficientTrainingData, "fewer observations than regressors");
  if (!X.allFinite() || !y.allFinite()) throw Error(Errc::InvalidArgument, "non-finite regression data");

  Eigen::ColPivHouseholderQR<Mat> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < k) throw Error(Errc::RankDeficientRegressors, "regressors are collinear");

  OlsResult r;
  r.coef = qr.solve(y);
  r.resid = y - X * r.coef;
  r.sigma = r.resid.transpose() * r.resid / double(T - k);
  symmetrize(r.sigma);
  // exact fits leave rounding-level residuals; treat those as zero
  const double scale = std::max(1.0, max_abs(y));
  if (max_abs(r.resid) <= 1e-12 * scale) {
    r.resid.setZero();
    r.sigma.setZero();
    r.degenerate = true;
  }
  Mat xtx_inv = spd_inverse(X.transpose() * X);
  r.coef_cov = kron(r.sigma, xtx_inv);
  r.se = r.coef_cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return r;
}

Mat var_design(const Mat& data, int p) {
  const int T = int(data.rows()), n = int(data.cols());
  Mat X(T - p, 1 + n * p);
  for (int t = p; t < T; ++t) X.row(t - p) = regressors(data, t, p).transpose();
  return X;
}

OlsResult ols_var(const Mat& data, int p) {
  const int T = int(data.rows()), n = int(data.cols());
  if (p < 1 || n < 1) throw Error(Errc::InvalidArgument, "need p >= 1 and n >= 1");
  if (T <= n * p + 1 + p) throw Error(Errc::InsufficientTrainingData, "too few observations for VAR(p)");
  return ols_regression(data.bottomRows(T - p), var_design(data, p));
}

}  // namespace ftvp::tvp
