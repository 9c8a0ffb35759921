#include "ftvp/numerics/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "ftvp/numerics/error.hpp"

namespace ftvp {

Mat psd_factor(const Mat& s, double tol) {
  const int n = int(s.rows());
  if (s.cols() != n) throw Error(Errc::DimensionMismatch, "psd_factor: not square");
  if (n == 0) return Mat(0, 0);
  Eigen::LLT<Mat> llt(s);
  if (llt.info() == Eigen::Success) {
    Mat l = llt.matrixL();
    if (l.allFinite()) return l;
  }
  Mat sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -tol * scale)
    throw Error(Errc::NonPsdCovariance, "matrix has a negative eigenvalue " +
                                            std::to_string(es.eigenvalues().minCoeff()));
  Vec d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  // Q sqrt(D) is a valid (non-triangular) square root; triangularize by QR
  // so callers get a lower factor.
  Mat r = (es.eigenvectors() * d.asDiagonal()).transpose();
  Eigen::HouseholderQR<Mat> qr(r);
  Mat up = qr.matrixQR().triangularView<Eigen::Upper>();
  Mat l = up.transpose();
  for (int j = 0; j < n; ++j)
    if (l(j, j) < 0) l.col(j) = -l.col(j);
  return l;
}

Mat spd_inverse(const Mat& s) {
  Eigen::LLT<Mat> llt(s);
  if (llt.info() != Eigen::Success)
    throw Error(Errc::NonPsdCovariance, "spd_inverse: matrix not positive definite");
  Mat inv = llt.solve(Mat::Identity(s.rows(), s.cols()));
  symmetrize(inv);
  return inv;
}

Mat pinv(const Mat& a, double rtol) {
  if (a.size() == 0) return Mat(a.cols(), a.rows());
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& sv = svd.singularValues();
  double cut = rtol * (sv.size() ? sv[0] : 0.0);
  Vec inv = Vec::Zero(sv.size());
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > cut && sv[i] > 0) inv[i] = 1.0 / sv[i];
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Mat orth_basis(const Mat& a, double rtol) {
  if (a.size() == 0) return Mat(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
  const Vec& sv = svd.singularValues();
  double cut = rtol * std::max(sv.size() ? sv[0] : 0.0, 0.0);
  int r = 0;
  while (r < sv.size() && sv[r] > cut && sv[r] > 0) ++r;
  return svd.matrixU().leftCols(r);
}

int numerical_rank(const Mat& a, double rtol) { return int(orth_basis(a, rtol).cols()); }

double spectral_radius(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::EigenSolver<Mat> es(a, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Mat kron(const Mat& a, const Mat& b) {
  Mat k(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

// Doubling: X = sum_j A^j Q A'^j, squaring A each round.
Mat discrete_lyapunov(const Mat& a, const Mat& q) {
  if (spectral_radius(a) >= 1.0)
    throw Error(Errc::UnstableInput, "discrete_lyapunov: spectral radius >= 1");
  Mat x = q;
  Mat ak = a;
  for (int it = 0; it < 200; ++it) {
    Mat dx = ak * x * ak.transpose();
    x += dx;
    ak = (ak * ak).eval();
    if (max_abs(dx) <= 1e-16 * std::max(1.0, max_abs(x))) break;
  }
  symmetrize(x);
  return x;
}

Vec mvn_draw(const Vec& mean, const Mat& cov, Rng& rng) {
  Mat l = psd_factor(cov);
  return mean + l * rng.normal_vector(int(mean.size()));
}

// Bartlett decomposition of W ~ Wishart(scale^{-1}, df), then X = W^{-1}.
Mat inv_wishart_draw(const Mat& scale, double df, Rng& rng) {
  const int d = int(scale.rows());
  Mat sinv = spd_inverse(scale);
  Mat l = psd_factor(sinv);
  Mat a = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    a(i, i) = std::sqrt(rng.chi2(df - i));
    for (int j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  Mat la = l * a;
  // X = (la la')^{-1} = la'^{-1} la^{-1}
  Mat lainv = la.triangularView<Eigen::Lower>().solve(Mat::Identity(d, d));
  Mat x = lainv.transpose() * lainv;
  symmetrize(x);
  return x;
}

double inv_wishart_logkernel(const Mat& x, const Mat& scale, double df) {
  const int d = int(x.rows());
  Eigen::LLT<Mat> lx(x), ls(scale);
  double ldx = 2.0 * lx.matrixLLT().diagonal().array().log().sum();
  double lds = 2.0 * ls.matrixLLT().diagonal().array().log().sum();
  double tr = lx.solve(scale).trace();
  return 0.5 * df * lds - 0.5 * (df + d + 1) * ldx - 0.5 * tr;
}

Mat companion(const std::vector<Mat>& lags) {
  const int p = int(lags.size());
  if (p == 0) return Mat(0, 0);
  const int n = int(lags[0].rows());
  Mat c = Mat::Zero(n * p, n * p);
  for (int l = 0; l < p; ++l) c.block(0, l * n, n, n) = lags[l];
  if (p > 1) c.block(n, 0, n * (p - 1), n * (p - 1)).setIdentity();
  return c;
}

}  // namespace ftvp
