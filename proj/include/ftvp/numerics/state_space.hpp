#pragma once

#include <vector>

#include "ftvp/numerics/linalg.hpp"
#include "ftvp/numerics/random.hpp"

namespace ftvp {

// Linear Gaussian state space, periods t = 0..T-1:
//   x_t = c_t + T_t x_{t-1} + w_t,   w_t ~ N(0, Q_t)
//   y_t = d_t + Z_t x_t + v_t,       v_t ~ N(0, H_t)
// x0_mean / x0_cov describe the state before the first transition.
// Each per-period vector holds either one element (broadcast) or T.
struct StateSpaceModel {
  int T = 0;
  std::vector<Mat> trans;
  std::vector<Vec> trans_c;
  std::vector<Mat> trans_cov;
  std::vector<Mat> meas;
  std::vector<Vec> meas_d;
  std::vector<Mat> meas_cov;
  Vec x0_mean;
  Mat x0_cov;

  int state_dim() const { return int(x0_mean.size()); }
  int obs_dim() const { return meas.empty() ? 0 : int(meas[0].rows()); }

  const Mat& Tm(int t) const { return trans.size() == 1 ? trans[0] : trans[t]; }
  const Vec& c(int t) const { return trans_c.size() == 1 ? trans_c[0] : trans_c[t]; }
  const Mat& Q(int t) const { return trans_cov.size() == 1 ? trans_cov[0] : trans_cov[t]; }
  const Mat& Z(int t) const { return meas.size() == 1 ? meas[0] : meas[t]; }
  const Vec& d(int t) const { return meas_d.size() == 1 ? meas_d[0] : meas_d[t]; }
  const Mat& H(int t) const { return meas_cov.size() == 1 ? meas_cov[0] : meas_cov[t]; }

  // Throws DimensionMismatch / NonPsdCovariance.
  void validate() const;
};

inline constexpr double kDiffuseScale = 1e7;

struct SmootherOutput {
  std::vector<Vec> filtered_mean;
  std::vector<Mat> filtered_cov;
  std::vector<Vec> smoothed_mean;
  std::vector<Mat> smoothed_cov;
  double loglik = 0.0;
};

SmootherOutput kalman_smooth(const StateSpaceModel& model, const Mat& y);

// One Carter-Kohn draw of x_0..x_{T-1} given y; returns T x s.
Mat simulation_smoother(const StateSpaceModel& model, const Mat& y, Rng& rng);

// Forward filter only; returns the log-likelihood.
double kalman_loglik(const StateSpaceModel& model, const Mat& y);

}  // namespace ftvp
