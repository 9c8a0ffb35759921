#include "ftvp/tvp/layout.hpp"

#include "ftvp/numerics/error.hpp"

namespace ftvp::tvp {

void TvpVarSpec::validate() const {
  if (n < 1 || p < 1) throw Error(Errc::InvalidArgument, "need n >= 1 and p >= 1");
  if (T <= n * p + 1) throw Error(Errc::InsufficientTrainingData, "need T > n p + 1");
}

VarCoefficients unpack_b(const Vec& b, int n, int p) {
  const int k = 1 + n * p;
  if (b.size() != n * k) throw Error(Errc::DimensionMismatch, "b has the wrong length");
  VarCoefficients v;
  v.c.resize(n);
  v.B.assign(p, Mat(n, n));
  for (int i = 0; i < n; ++i) {
    v.c[i] = b[i * k];
    for (int l = 0; l < p; ++l)
      for (int j = 0; j < n; ++j) v.B[l](i, j) = b[i * k + 1 + l * n + j];
  }
  return v;
}

Vec pack_b(const VarCoefficients& v) {
  const int n = int(v.c.size()), p = int(v.B.size()), k = 1 + n * p;
  Vec b(n * k);
  for (int i = 0; i < n; ++i) {
    b[i * k] = v.c[i];
    for (int l = 0; l < p; ++l)
      for (int j = 0; j < n; ++j) b[i * k + 1 + l * n + j] = v.B[l](i, j);
  }
  return b;
}

Mat unpack_a(const Vec& a, int n) {
  if (a.size() != n * (n - 1) / 2) throw Error(Errc::DimensionMismatch, "a has the wrong length");
  Mat A = Mat::Identity(n, n);
  int idx = 0;
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) A(i, j) = a[idx++];
  return A;
}

Vec pack_a(const Mat& A) {
  const int n = int(A.rows());
  Vec a(n * (n - 1) / 2);
  int idx = 0;
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) a[idx++] = A(i, j);
  return a;
}

Vec regressors(const Mat& y, int t, int p) {
  const int n = int(y.cols());
  Vec x(1 + n * p);
  x[0] = 1.0;
  for (int l = 1; l <= p; ++l) x.segment(1 + (l - 1) * n, n) = y.row(t - l).transpose();
  return x;
}

Vec TvpPath::theta(int t) const {
  Vec th(b.cols() + a.cols() + h.cols());
  th << b.row(t).transpose(), a.row(t).transpose(), h.row(t).transpose();
  return th;
}

Mat TvpPath::theta_matrix() const {
  Mat m(b.rows(), b.cols() + a.cols() + h.cols());
  m << b, a, h;
  return m;
}

TvpPath TvpPath::from_theta(const Mat& theta, const TvpVarSpec& spec) {
  if (theta.cols() != spec.m()) throw Error(Errc::DimensionMismatch, "theta has the wrong width");
  TvpPath p;
  p.b = theta.leftCols(spec.nb());
  p.a = theta.middleCols(spec.nb(), spec.na());
  p.h = theta.rightCols(spec.nh());
  return p;
}

Mat TvpPath::reduced_cov(int t, int n) const {
  Mat ai = A(t, n).triangularView<Eigen::UnitLower>().solve(Mat::Identity(n, n));
  return ai * Sigma(t) * ai.transpose();
}

double companion_radius(const VarCoefficients& v) { return spectral_radius(companion(v.B)); }

}  // namespace ftvp::tvp
