#include <doctest.h>

#include <Eigen/QR>
#include <cmath>

#include "ftvp/numerics/error.hpp"
#include "ftvp/numerics/linalg.hpp"
#include "ftvp/numerics/qz.hpp"
#include "ftvp/numerics/random.hpp"
#include "ftvp/numerics/state_space.hpp"
#include "oracles.hpp"

using namespace ftvp;

namespace {

Mat random_orthogonal(int n, Rng& rng) {
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(a);
  return qr.householderQ() * Mat::Identity(n, n);
}

Mat random_spd(int n, Rng& rng, double ridge = 0.5) {
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
  return a * a.transpose() / n + ridge * Mat::Identity(n, n);
}

StateSpaceModel scalar_model(int T, double q, double h, double p0) {
  StateSpaceModel m;
  m.T = T;
  m.trans = {Mat::Identity(1, 1)};
  m.trans_c = {Vec::Zero(1)};
  m.trans_cov = {Mat::Constant(1, 1, q)};
  m.meas = {Mat::Identity(1, 1)};
  m.meas_d = {Vec::Zero(1)};
  m.meas_cov = {Mat::Constant(1, 1, h)};
  m.x0_mean = Vec::Zero(1);
  m.x0_cov = Mat::Constant(1, 1, p0);
  return m;
}

}  // namespace

TEST_CASE("philox known answers") {
  auto z = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(z[0] == 0x6627e8d5u);
  CHECK(z[1] == 0xe169c58du);
  CHECK(z[2] == 0xbc57ac4cu);
  CHECK(z[3] == 0x9b00dbd8u);
  auto o = philox4x32({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u});
  CHECK(o[0] == 0x408f276du);
  CHECK(o[1] == 0x41c83b0eu);
  CHECK(o[2] == 0xa20bc7c6u);
  CHECK(o[3] == 0x6d5451fdu);
}

TEST_CASE("rng is reproducible and splits into distinct streams") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) REQUIRE(a.normal() == b.normal());
  Rng c = Rng(42).split(1), d = Rng(42).split(2);
  int same = 0;
  for (int i = 0; i < 100; ++i) same += c.next_u32() == d.next_u32();
  CHECK(same < 3);

  Rng r(7);
  const int n = 200000;
  double s = 0, s2 = 0, g = 0, u = 0;
  for (int i = 0; i < n; ++i) {
    double x = r.normal();
    s += x;
    s2 += x * x;
    g += r.gamma(0.7);
    double v = r.uniform();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
    u += v;
  }
  CHECK(std::abs(s / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
  CHECK(std::abs(g / n - 0.7) < 4.0 * std::sqrt(0.7 / n));
  CHECK(std::abs(u / n - 0.5) < 0.005);
}

TEST_CASE("categorical follows its weights") {
  Rng r(3);
  double w[3] = {1.0, 2.0, 7.0};
  int cnt[3] = {0, 0, 0};
  for (int i = 0; i < 100000; ++i) ++cnt[r.categorical(w, 3)];
  CHECK(std::abs(cnt[2] / 100000.0 - 0.7) < 0.01);
  CHECK(std::abs(cnt[0] / 100000.0 - 0.1) < 0.01);
}

TEST_CASE("qz on a diagonal pencil") {
  Mat g0 = Mat::Identity(2, 2);
  Mat g1 = Mat::Zero(2, 2);
  g1(0, 0) = 0.5;
  g1(1, 1) = 2.0;
  auto f = qz_decompose(g0, g1);
  CHECK(f.n_explosive == 1);
  CHECK(f.moduli[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.moduli[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(qz_reconstruction_error(f, g0, g1) < 1e-12);
}

TEST_CASE("qz with zero transition") {
  Mat g0 = Mat::Identity(3, 3), g1 = Mat::Zero(3, 3);
  auto f = qz_decompose(g0, g1);
  CHECK(f.n_explosive == 0);
  CHECK(f.Omega.cwiseAbs().maxCoeff() < 1e-14);
  CHECK((f.Lambda.cwiseAbs() - CMat::Identity(3, 3).cwiseAbs()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("qz recovers planted generalized eigenvalues") {
  Rng rng(11);
  const int n = 5;
  Vec d0(n), d1(n);
  d0 << 1.0, 2.0, 0.5, 1.5, 1.0;
  d1 << 0.3, 2.4, 0.9, 3.0, 0.1;  // moduli 0.3 1.2 1.8 2.0 0.1
  Mat U = random_orthogonal(n, rng), V = random_orthogonal(n, rng);
  Mat g0 = U * d0.asDiagonal() * V, g1 = U * d1.asDiagonal() * V;
  auto f = qz_decompose(g0, g1);
  CHECK(f.n_explosive == 3);
  std::vector<double> got(f.moduli.data(), f.moduli.data() + n), want = {0.3, 1.2, 1.8, 2.0, 0.1};
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  for (int i = 0; i < n; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-8);
  // stable block first
  for (int i = 0; i < n - f.n_explosive; ++i) CHECK(f.moduli[i] < 1.0);
  CHECK(qz_reconstruction_error(f, g0, g1) < 1e-9 * std::max(max_abs(g0), max_abs(g1)));
  CHECK(qz_unitarity_error(f) < 1e-10);
}

TEST_CASE("qz errors") {
  Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
  a(0, 0) = 1.0;
  b(0, 0) = 0.5;
  CHECK_THROWS_AS(qz_decompose(a, b), Error);
  try {
    qz_decompose(a, b);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SingularPencil);
  }
  try {
    qz_decompose(Mat::Identity(2, 2), Mat::Identity(3, 3));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DimensionMismatch);
  }
}

TEST_CASE("linear algebra helpers") {
  Rng rng(5);
  Mat s = random_spd(4, rng);
  Mat l = psd_factor(s);
  CHECK(max_abs(l * l.transpose() - s) < 1e-12);
  CHECK(max_abs(spd_inverse(s) * s - Mat::Identity(4, 4)) < 1e-10);

  Mat semi = Mat::Zero(3, 3);
  semi(0, 0) = 2.0;
  Mat ls = psd_factor(semi);
  CHECK(max_abs(ls * ls.transpose() - semi) < 1e-12);
  Mat bad = Mat::Identity(2, 2);
  bad(1, 1) = -1.0;
  CHECK_THROWS_AS(psd_factor(bad), Error);

  Mat a(3, 2);
  a << 1, 2, 2, 4, 3, 6;
  CHECK(numerical_rank(a) == 1);
  Mat pa = pinv(a);
  CHECK(max_abs(a * pa * a - a) < 1e-12);

  Mat A(2, 2);
  A << 0.5, 0.2, 0.1, 0.4;
  Mat q = random_spd(2, rng);
  Mat p = discrete_lyapunov(A, q);
  CHECK(max_abs(p - (A * p * A.transpose() + q)) < 1e-12);
  CHECK(max_abs(p - oracle::var1_autocov(A, q, 0)[0]) < 1e-12);
  Mat unstable = Mat::Identity(2, 2) * 1.01;
  CHECK_THROWS_AS(discrete_lyapunov(unstable, q), Error);

  Mat k = kron(Mat::Identity(2, 2), A);
  CHECK(k.rows() == 4);
  CHECK(k(3, 2) == doctest::Approx(A(1, 0)));

  std::vector<Mat> lags = {A, 0.5 * A};
  Mat c = companion(lags);
  CHECK(c.rows() == 4);
  CHECK(max_abs(c.block(0, 2, 2, 2) - 0.5 * A) == 0.0);
  CHECK(max_abs(c.block(2, 0, 2, 2) - Mat::Identity(2, 2)) == 0.0);
}

TEST_CASE("inverse Wishart draws have the right mean") {
  Rng rng(9);
  Mat S(2, 2);
  S << 2.0, 0.3, 0.3, 1.0;
  const double df = 12;
  Mat mean = Mat::Zero(2, 2);
  const int n = 40000;
  for (int i = 0; i < n; ++i) mean += inv_wishart_draw(S, df, rng);
  mean /= n;
  Mat want = S / (df - 2 - 1);
  CHECK(max_abs(mean - want) < 0.02 * max_abs(want) + 0.003);
}

TEST_CASE("static scalar state under a diffuse prior gives the GLS mean") {
  auto m = scalar_model(3, 0.0, 1.0, kDiffuseScale);
  Mat y(3, 1);
  y << 1, 2, 3;
  auto out = kalman_smooth(m, y);
  const double exact = 6.0 / (3.0 + 1.0 / kDiffuseScale);  // posterior mean with prior variance 1e7
  for (int t = 0; t < 3; ++t) {
    CHECK(std::abs(out.smoothed_mean[t][0] - exact) < 1e-8);
    CHECK(std::abs(out.smoothed_mean[t][0] - 2.0) < 1e-6);
  }
}

TEST_CASE("zero measurement noise reproduces the observations") {
  StateSpaceModel m = scalar_model(5, 1.0, 0.0, 0.0);
  m.trans = {Mat::Identity(2, 2)};
  m.trans_c = {Vec::Zero(2)};
  m.trans_cov = {Mat::Identity(2, 2)};
  m.meas = {Mat::Identity(2, 2)};
  m.meas_d = {Vec::Zero(2)};
  m.meas_cov = {Mat::Zero(2, 2)};
  m.x0_mean = Vec::Zero(2);
  m.x0_cov = Mat::Zero(2, 2);
  Rng rng(1);
  Mat y(5, 2);
  for (int t = 0; t < 5; ++t) y.row(t) = rng.normal_vector(2).transpose();
  auto out = kalman_smooth(m, y);
  for (int t = 0; t < 5; ++t) CHECK((out.smoothed_mean[t] - y.row(t).transpose()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("random walk plus noise matches the dense joint posterior") {
  auto m = scalar_model(10, 0.3, 1.2, 2.0);
  Rng rng(2);
  Mat y(10, 1);
  for (int t = 0; t < 10; ++t) y(t, 0) = 0.5 * t + rng.normal();
  auto out = kalman_smooth(m, y);
  auto ref = oracle::dense_posterior(m, y);
  for (int t = 0; t < 10; ++t) {
    CHECK(std::abs(out.smoothed_mean[t][0] - ref.mean[t]) < 1e-8);
    CHECK(std::abs(out.smoothed_cov[t](0, 0) - ref.cov(t, t)) < 1e-8);
  }
  CHECK(std::abs(out.loglik - ref.loglik) < 1e-8);
  CHECK(std::abs(kalman_loglik(m, y) - ref.loglik) < 1e-10);
}

TEST_CASE("multivariate time-varying model matches the dense posterior") {
  Rng rng(4);
  const int T = 8, s = 3, k = 2;
  StateSpaceModel m;
  m.T = T;
  for (int t = 0; t < T; ++t) {
    Mat a(s, s), z(k, s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) a(i, j) = 0.3 * rng.normal();
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < s; ++j) z(i, j) = rng.normal();
    m.trans.push_back(a);
    m.trans_c.push_back(rng.normal_vector(s) * 0.1);
    m.trans_cov.push_back(random_spd(s, rng, 0.1));
    m.meas.push_back(z);
    m.meas_d.push_back(rng.normal_vector(k));
    m.meas_cov.push_back(random_spd(k, rng, 0.2));
  }
  m.x0_mean = rng.normal_vector(s);
  m.x0_cov = random_spd(s, rng);
  Mat y(T, k);
  for (int t = 0; t < T; ++t) y.row(t) = rng.normal_vector(k).transpose();
  auto out = kalman_smooth(m, y);
  auto ref = oracle::dense_posterior(m, y);
  for (int t = 0; t < T; ++t) {
    CHECK((out.smoothed_mean[t] - ref.mean.segment(s * t, s)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(max_abs(out.smoothed_cov[t] - ref.cov.block(s * t, s * t, s, s)) < 1e-8);
  }
  CHECK(std::abs(out.loglik - ref.loglik) < 1e-8);
}

TEST_CASE("non positive definite innovation covariance is reported with its period") {
  auto m = scalar_model(3, 0.0, 0.0, 0.0);
  Mat y = Mat::Zero(3, 1);
  try {
    kalman_smooth(m, y);
    FAIL("expected NonPsdCovariance");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonPsdCovariance);
    CHECK(e.index() == 0);
  }
}

TEST_CASE("simulation smoother without state noise returns the smoothed path") {
  auto m = scalar_model(6, 0.0, 1.0, 0.0);
  m.x0_mean = Vec::Constant(1, 0.7);
  Mat y(6, 1);
  y << 1, 0, 2, 1, 0, 1;
  auto sm = kalman_smooth(m, y);
  Rng rng(8);
  for (int r = 0; r < 5; ++r) {
    Mat d = simulation_smoother(m, y, rng);
    for (int t = 0; t < 6; ++t) CHECK(std::abs(d(t, 0) - sm.smoothed_mean[t][0]) < 1e-12);
  }
}

TEST_CASE("simulation smoother moments match the smoother") {
  const int T = 20, n = 50000;
  auto m = scalar_model(T, 0.2, 0.5, 1.0);
  Rng rng(21);
  Mat y(T, 1);
  for (int t = 0; t < T; ++t) y(t, 0) = std::sin(0.3 * t) + 0.7 * rng.normal();
  auto sm = kalman_smooth(m, y);
  Vec mean = Vec::Zero(T), sq = Vec::Zero(T);
  Rng draw_rng(77);
  for (int i = 0; i < n; ++i) {
    Mat d = simulation_smoother(m, y, draw_rng);
    mean += d.col(0);
    sq += d.col(0).cwiseProduct(d.col(0));
  }
  mean /= n;
  for (int t = 0; t < T; ++t) {
    const double sd = std::sqrt(sm.smoothed_cov[t](0, 0));
    CHECK(std::abs(mean[t] - sm.smoothed_mean[t][0]) < 4.0 * sd / std::sqrt(double(n)));
    const double var = sq[t] / n - mean[t] * mean[t];
    CHECK(std::abs(var / sm.smoothed_cov[t](0, 0) - 1.0) < 0.05);
  }
}
