#include "ftvp/tvp/prior.hpp"

#include <algorithm>
#include <cmath>

#include "ftvp/numerics/error.hpp"
#include "ftvp/tvp/ols.hpp"

namespace ftvp::tvp {

namespace {

void check_psd(const Mat& m, const char* what) {
  if (m.size() == 0) return;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()));
  if (es.eigenvalues().minCoeff() < -1e-10 * std::max(1.0, max_abs(m)))
    throw Error(Errc::NonPsdCovariance, what);
}

}  // namespace

void PriorSpec::validate() const {
  check_psd(b_cov, "b prior covariance");
  check_psd(a_cov, "a prior covariance");
  check_psd(h_cov, "h prior covariance");
  check_psd(omega_b_scale, "Omega_b scale");
  check_psd(omega_h_scale, "Omega_h scale");
  if (omega_b_df < omega_b_scale.rows() + 1 || omega_h_df < omega_h_scale.rows() + 1)
    throw Error(Errc::InvalidConfig, "inverse-Wishart df below dimension + 1");
  for (size_t i = 0; i < omega_a_scale.size(); ++i) {
    check_psd(omega_a_scale[i], "Omega_a scale");
    if (omega_a_df[i] < omega_a_scale[i].rows() + 1)
      throw Error(Errc::InvalidConfig, "inverse-Wishart df below dimension + 1");
  }
}

void PriorSpec::set_kappas(double kb, double ka, double kh) {
  kappa_b = kb;
  kappa_a = ka;
  kappa_h = kh;
  omega_b_scale = kb * kb * omega_b_df * b_ols_cov;
  for (size_t i = 0; i < a_ols_cov.size(); ++i)
    omega_a_scale[i] = ka * ka * omega_a_df[i] * a_ols_cov[i];
  omega_h_scale = kh * kh * omega_h_df * Mat::Identity(n, n);
}

PriorSpec calibrate_prior(const Mat& training, int p, const PriorKnobs& knobs) {
  const int n = int(training.cols());
  if (p < 1 || n < 1) throw Error(Errc::InvalidArgument, "need p >= 1 and n >= 1");
  if (training.rows() < 2 * (n * p + 1))
    throw Error(Errc::InsufficientTrainingData, "training window shorter than 2 (n p + 1)");
  if (knobs.variance_mult < 0 || knobs.kappa_b < 0 || knobs.kappa_a < 0 || knobs.kappa_h < 0)
    throw Error(Errc::InvalidConfig, "negative prior knob");

  OlsResult ols = ols_var(training, p);
  const int k = 1 + n * p;
  PriorSpec pr;
  pr.n = n;
  pr.p = p;
  pr.training_rows = int(training.rows());
  pr.degenerate = ols.degenerate;
  pr.variance_mult = knobs.variance_mult;

  pr.b_mean.resize(n * k);
  for (int i = 0; i < n; ++i) pr.b_mean.segment(i * k, k) = ols.coef.col(i);
  pr.b_ols_cov = ols.coef_cov;

  // Triangular decomposition of the residuals: u_i = -a_i' u_{1..i-1} + e_i.
  const Mat& U = ols.resid;
  const int Te = int(U.rows());
  pr.a_mean = Vec::Zero(n * (n - 1) / 2);
  pr.a_cov = Mat::Zero(pr.a_mean.size(), pr.a_mean.size());
  pr.h_mean.resize(n);
  pr.a_ols_cov.clear();
  for (int i = 0; i < n; ++i) {
    double s2;
    if (i == 0) {
      s2 = U.col(0).squaredNorm() / Te;
    } else if (pr.degenerate) {
      s2 = 0.0;
      pr.a_ols_cov.push_back(Mat::Zero(i, i));
    } else {
      OlsResult aux = ols_regression(U.col(i), U.leftCols(i));
      const int off = i * (i - 1) / 2;
      pr.a_mean.segment(off, i) = -aux.coef.col(0);
      pr.a_ols_cov.push_back(aux.coef_cov);
      pr.a_cov.block(off, off, i, i) = knobs.variance_mult * aux.coef_cov;
      s2 = aux.sigma(0, 0);
    }
    // log of a zero variance is replaced by a very small floor; the prior is flagged
    pr.h_mean[i] = std::log(std::max(s2, 1e-300));
    if (s2 <= 0) pr.degenerate = true;
  }
  pr.b_cov = knobs.variance_mult * ols.coef_cov;
  pr.h_cov = Mat::Identity(n, n);

  pr.omega_b_df = std::max(knobs.nu_b, double(n * k + 1));
  pr.omega_h_df = std::max(knobs.nu_h, double(n + 1));
  pr.omega_a_df.clear();
  pr.omega_a_scale.assign(n - 1, Mat());
  for (int i = 1; i < n; ++i) pr.omega_a_df.push_back(double(i + 1));
  pr.set_kappas(knobs.kappa_b, knobs.kappa_a, knobs.kappa_h);
  return pr;
}

}  // namespace ftvp::tvp
