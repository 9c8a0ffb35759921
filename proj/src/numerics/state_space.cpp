#include "ftvp/numerics/state_space.hpp"

#include <cmath>

#include "ftvp/numerics/error.hpp"

namespace ftvp {

namespace {

void check_psd(const Mat& m, const char* what) {
  if (m.rows() != m.cols()) throw Error(Errc::DimensionMismatch, std::string(what) + " not square");
  if (m.size() == 0) return;
  if (max_abs(m - m.transpose()) > 1e-10 * std::max(1.0, max_abs(m)))
    throw Error(Errc::NonPsdCovariance, std::string(what) + " not symmetric");
  psd_factor(m, 1e-10);
}

template <class V>
void check_len(const V& v, int T, const char* what) {
  if (v.size() != 1 && int(v.size()) != T)
    throw Error(Errc::DimensionMismatch, std::string(what) + ": need 1 or T entries");
}

struct Filtered {
  std::vector<Vec> a_pred, a_filt;
  std::vector<Mat> p_pred, p_filt;
  double loglik = 0.0;
};

bool identity_transition(const StateSpaceModel& m) {
  return m.trans.size() == 1 && m.trans[0].isIdentity(0.0);
}

Filtered forward(const StateSpaceModel& m, const Mat& y, bool keep) {
  const int T = m.T, s = m.state_dim(), k = m.obs_dim();
  if (y.rows() != T || y.cols() != k)
    throw Error(Errc::DimensionMismatch, "observations must be T x k");
  if (!y.allFinite()) throw Error(Errc::InvalidArgument, "observations must be finite");
  Filtered f;
  if (keep) {
    f.a_pred.resize(T);
    f.a_filt.resize(T);
    f.p_pred.resize(T);
    f.p_filt.resize(T);
  }
  const bool ident = identity_transition(m);
  const double log2pi = std::log(2.0 * M_PI);
  Vec a = m.x0_mean;
  Mat p = m.x0_cov;
  Mat pz(s, k), kg(s, k);
  for (int t = 0; t < T; ++t) {
    Vec ap;
    Mat pp;
    if (ident) {
      ap = m.c(t) + a;
      pp = p + m.Q(t);
    } else {
      ap = m.c(t) + m.Tm(t) * a;
      pp = m.Tm(t) * p * m.Tm(t).transpose() + m.Q(t);
    }
    symmetrize(pp);
    const Mat& zt = m.Z(t);
    Vec v = y.row(t).transpose() - m.d(t) - zt * ap;
    pz.noalias() = pp * zt.transpose();
    Mat fm = zt * pz + m.H(t);
    symmetrize(fm);
    Eigen::LLT<Mat> llt(fm);
    if (llt.info() != Eigen::Success)
      throw Error(Errc::NonPsdCovariance, "innovation covariance not positive definite", t);
    Vec fv = llt.solve(v);
    double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    f.loglik += -0.5 * (k * log2pi + logdet + v.dot(fv));
    kg = llt.solve(pz.transpose()).transpose();
    a = ap + kg * v;
    p = pp - kg * pz.transpose();
    symmetrize(p);
    if (keep) {
      f.a_pred[t] = std::move(ap);
      f.p_pred[t] = std::move(pp);
      f.a_filt[t] = a;
      f.p_filt[t] = p;
    }
  }
  return f;
}

// Gain J = P_f T' P_pred^{-1}, falling back to a pseudo-inverse when the
// predicted covariance is singular.
Mat backward_gain(const Mat& pf, const Mat& tnext, const Mat& ppred, bool ident) {
  Mat ptt = ident ? pf : Mat(pf * tnext.transpose());
  Eigen::LLT<Mat> llt(ppred);
  if (llt.info() == Eigen::Success) {
    Mat j = llt.solve(ptt.transpose()).transpose();
    if (j.allFinite()) return j;
  }
  return ptt * pinv(ppred, 1e-12);
}

}  // namespace

void StateSpaceModel::validate() const {
  const int s = state_dim();
  check_len(trans, T, "trans");
  check_len(trans_c, T, "trans_c");
  check_len(trans_cov, T, "trans_cov");
  check_len(meas, T, "meas");
  check_len(meas_d, T, "meas_d");
  check_len(meas_cov, T, "meas_cov");
  if (x0_cov.rows() != s || x0_cov.cols() != s)
    throw Error(Errc::DimensionMismatch, "x0_cov dimension");
  check_psd(x0_cov, "x0_cov");
  const int k = obs_dim();
  for (const auto& m : trans)
    if (m.rows() != s || m.cols() != s) throw Error(Errc::DimensionMismatch, "trans dimension");
  for (const auto& v : trans_c)
    if (v.size() != s) throw Error(Errc::DimensionMismatch, "trans_c dimension");
  for (const auto& m : trans_cov) {
    if (m.rows() != s) throw Error(Errc::DimensionMismatch, "trans_cov dimension");
    check_psd(m, "trans_cov");
  }
  for (const auto& m : meas)
    if (m.rows() != k || m.cols() != s) throw Error(Errc::DimensionMismatch, "meas dimension");
  for (const auto& v : meas_d)
    if (v.size() != k) throw Error(Errc::DimensionMismatch, "meas_d dimension");
  for (const auto& m : meas_cov) {
    if (m.rows() != k) throw Error(Errc::DimensionMismatch, "meas_cov dimension");
    check_psd(m, "meas_cov");
  }
}

SmootherOutput kalman_smooth(const StateSpaceModel& m, const Mat& y) {
  Filtered f = forward(m, y, true);
  const int T = m.T;
  const bool ident = identity_transition(m);
  SmootherOutput out;
  out.loglik = f.loglik;
  out.filtered_mean = f.a_filt;
  out.filtered_cov = f.p_filt;
  out.smoothed_mean.resize(T);
  out.smoothed_cov.resize(T);
  if (T == 0) return out;
  out.smoothed_mean[T - 1] = f.a_filt[T - 1];
  out.smoothed_cov[T - 1] = f.p_filt[T - 1];
  for (int t = T - 2; t >= 0; --t) {
    Mat j = backward_gain(f.p_filt[t], m.Tm(t + 1), f.p_pred[t + 1], ident);
    out.smoothed_mean[t] = f.a_filt[t] + j * (out.smoothed_mean[t + 1] - f.a_pred[t + 1]);
    Mat ps = f.p_filt[t] + j * (out.smoothed_cov[t + 1] - f.p_pred[t + 1]) * j.transpose();
    symmetrize(ps);
    out.smoothed_cov[t] = std::move(ps);
  }
  return out;
}

double kalman_loglik(const StateSpaceModel& m, const Mat& y) { return forward(m, y, false).loglik; }

Mat simulation_smoother(const StateSpaceModel& m, const Mat& y, Rng& rng) {
  Filtered f = forward(m, y, true);
  const int T = m.T, s = m.state_dim();
  const bool ident = identity_transition(m);
  Mat draws(T, s);
  if (T == 0) return draws;
  Vec x = mvn_draw(f.a_filt[T - 1], f.p_filt[T - 1], rng);
  draws.row(T - 1) = x.transpose();
  for (int t = T - 2; t >= 0; --t) {
    const Mat& tn = m.Tm(t + 1);
    Mat j = backward_gain(f.p_filt[t], tn, f.p_pred[t + 1], ident);
    Vec mean = f.a_filt[t] + j * (x - f.a_pred[t + 1]);
    Mat cov = ident ? Mat(f.p_filt[t] - j * f.p_filt[t]) : Mat(f.p_filt[t] - j * tn * f.p_filt[t]);
    symmetrize(cov);
    x = mvn_draw(mean, cov, rng);
    draws.row(t) = x.transpose();
  }
  return draws;
}

}  // namespace ftvp
