#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ftvp/numerics/random.hpp"

namespace ftvp {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;

inline void symmetrize(Mat& a) { a = 0.5 * (a + a.transpose()).eval(); }

inline double max_abs(const Mat& a) {
  return a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
}

// Lower factor L with S = L L'. Falls back to a clamped eigen square root when
// S is only semidefinite; throws NonPsdCovariance when S has an eigenvalue
// below -tol * max(1, |S|).
Mat psd_factor(const Mat& s, double tol = 1e-10);

// Inverse of a symmetric positive definite matrix.
Mat spd_inverse(const Mat& s);

// Moore-Penrose pseudo-inverse.
Mat pinv(const Mat& a, double rtol = 1e-12);

// Orthonormal basis of the column space of a (numerical rank at rtol).
Mat orth_basis(const Mat& a, double rtol = 1e-10);

int numerical_rank(const Mat& a, double rtol = 1e-10);

double spectral_radius(const Mat& a);

Mat kron(const Mat& a, const Mat& b);

// Solves X = A X A' + Q for stable A.
Mat discrete_lyapunov(const Mat& a, const Mat& q);

Vec mvn_draw(const Vec& mean, const Mat& cov, Rng& rng);

// Draw from IW(scale, df): density ∝ |X|^{-(df+d+1)/2} exp(-tr(scale X^{-1})/2).
Mat inv_wishart_draw(const Mat& scale, double df, Rng& rng);

// log density of IW(scale, df) at x, up to the normalizing gamma terms in df.
double inv_wishart_logkernel(const Mat& x, const Mat& scale, double df);

// Companion matrix of y_t = sum_l B_l y_{t-l}.
Mat companion(const std::vector<Mat>& lags);

}  // namespace ftvp
