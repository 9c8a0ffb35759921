#pragma once

#include <vector>

#include "ftvp/numerics/linalg.hpp"

namespace ftvp::tvp {

// Dimensions of a TVP-VAR(p) with n variables. θ_t = (b_t', a_t', h_t')' where
//   b = vec([c B_1 ... B_p]'), one block of 1 + n p coefficients per equation,
//   a = strictly lower entries of A_t stacked by rows (a21, a31, a32, ...),
//   h = log variances of the structural shocks.
struct TvpVarSpec {
  int n = 0;
  int p = 1;
  int T = 0;

  int k() const { return 1 + n * p; }  // regressors per equation
  int nb() const { return n * k(); }
  int na() const { return n * (n - 1) / 2; }
  int nh() const { return n; }
  int m() const { return nb() + na() + nh(); }
  int a_offset(int row) const { return row * (row - 1) / 2; }  // first a index of row `row`
  void validate() const;  // T > n p + 1
};

struct VarCoefficients {
  Vec c;               // n
  std::vector<Mat> B;  // p matrices n x n
};

// b block <-> (c, B_1..B_p)
VarCoefficients unpack_b(const Vec& b, int n, int p);
Vec pack_b(const VarCoefficients& v);

// unit lower triangular A from its free entries
Mat unpack_a(const Vec& a, int n);
Vec pack_a(const Mat& A);

// Regressor row [1, y_{t-1}', ..., y_{t-p}'] for the observation at row t of y.
Vec regressors(const Mat& y, int t, int p);

struct TvpPath {
  Mat b;  // T x nb
  Mat a;  // T x na
  Mat h;  // T x n

  int T() const { return int(b.rows()); }
  Vec theta(int t) const;   // stacked (b, a, h) at t
  Mat theta_matrix() const;  // T x m
  static TvpPath from_theta(const Mat& theta, const TvpVarSpec& spec);
  VarCoefficients coefficients(int t, int n, int p) const { return unpack_b(b.row(t).transpose(), n, p); }
  Mat A(int t, int n) const { return unpack_a(a.row(t).transpose(), n); }
  Mat Sigma(int t) const { return h.row(t).array().exp().matrix().asDiagonal(); }
  // reduced-form covariance A^{-1} Σ A^{-1}'
  Mat reduced_cov(int t, int n) const;
};

// Spectral radius of the companion matrix of B_1..B_p.
double companion_radius(const VarCoefficients& v);

}  // namespace ftvp::tvp
