#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ftvp/irf/irf.hpp"
#include "ftvp/numerics/error.hpp"
#include "ftvp/numerics/random.hpp"

using namespace ftvp;
using namespace ftvp::irf;

namespace {

Vec make_theta(const tvp::VarCoefficients& v, const Vec& a, const Vec& h) {
  Vec b = tvp::pack_b(v);
  Vec th(b.size() + a.size() + h.size());
  th << b, a, h;
  return th;
}

}  // namespace

TEST_CASE("decoupled system") {
  tvp::VarCoefficients v;
  v.c = Vec::Zero(2);
  Mat B = Mat::Zero(2, 2);
  B(0, 0) = 0.8;
  B(1, 1) = -0.5;
  v.B = {B};
  Vec th = make_theta(v, Vec::Zero(1), Vec::Zero(2));
  Mat r = irf_at(th, 2, 1, 0, 10, ShockNorm::OneSd);
  for (int h = 0; h <= 10; ++h) {
    CHECK(r(0, h) == doctest::Approx(std::pow(0.8, h)).epsilon(1e-14));
    CHECK(r(1, h) == 0.0);
  }
}

TEST_CASE("companion-power oracle and normalizations") {
  Rng rng(1);
  const int n = 2, p = 2;
  tvp::VarCoefficients v;
  v.c = Vec::Constant(n, 0.3);
  v.B = {Mat(n, n), Mat(n, n)};
  v.B[0] << 0.5, 0.2, -0.1, 0.3;
  v.B[1] << 0.1, 0.0, 0.05, -0.2;
  Vec a = Vec::Constant(1, -0.4), h(2);
  h << std::log(0.5), std::log(2.0);
  Vec th = make_theta(v, a, h);

  Mat F = Mat::Zero(4, 4);
  F.block(0, 0, 2, 2) = v.B[0];
  F.block(0, 2, 2, 2) = v.B[1];
  F.block(2, 0, 2, 2) = Mat::Identity(2, 2);
  Mat A = Mat::Identity(2, 2);
  A(1, 0) = -0.4;
  Mat impact = A.inverse() * h.array().exp().sqrt().matrix().asDiagonal();
  for (int j = 0; j < n; ++j) {
    Mat r = irf_at(th, n, p, j, 4, ShockNorm::OneSd);
    Vec s = Vec::Zero(4);
    s.head(2) = impact.col(j);
    Mat Fh = Mat::Identity(4, 4);
    for (int k = 0; k <= 4; ++k) {
      CHECK(max_abs((Fh * s).head(2) - r.col(k)) < 1e-12);
      Fh = F * Fh;
    }
    CHECK(r(j, 0) == doctest::Approx(std::exp(0.5 * h[j])));

    Mat pct = irf_at(th, n, p, j, 4, ShockNorm::OnePercent);
    CHECK(pct(j, 0) == 0.01);
    CHECK(max_abs(pct - r * (0.01 / r(j, 0))) < 1e-15);

    // rescaling Σ leaves OnePercent responses unchanged and scales OneSd ones
    Vec th4 = th;
    th4.tail(2).array() += std::log(4.0);
    CHECK(max_abs(irf_at(th4, n, p, j, 4, ShockNorm::OnePercent) - pct) < 1e-15);
    CHECK(max_abs(irf_at(th4, n, p, j, 4, ShockNorm::OneSd) - 2.0 * r) < 1e-12);
  }
  CHECK_THROWS_AS(irf_at(th, n, p, 2, 4, ShockNorm::OneSd), Error);
  CHECK_THROWS_AS(irf_at(th.head(5), n, p, 0, 4, ShockNorm::OneSd), Error);
  CHECK(parse_norm(norm_name(ShockNorm::OnePercent)) == ShockNorm::OnePercent);
}

TEST_CASE("surfaces, quantiles and csv") {
  Rng rng(2);
  tvp::TvpVarSpec spec{2, 1, 5};
  Mat theta(5, spec.m());
  for (int t = 0; t < 5; ++t) {
    tvp::VarCoefficients v;
    v.c = Vec::Zero(2);
    v.B = {Mat::Identity(2, 2) * (0.1 * t)};
    theta.row(t) = make_theta(v, Vec::Constant(1, 0.2), Vec::Constant(2, -1.0)).transpose();
  }
  tvp::TvpPath path = tvp::TvpPath::from_theta(theta, spec);
  IrfSurface s = irf_surface(path, 2, 1, 1, 6, ShockNorm::OneSd);
  REQUIRE(s.periods() == 5);
  for (int t = 0; t < 5; ++t) CHECK(s.point[t](1, 2) == doctest::Approx(std::exp(-0.5) * std::pow(0.1 * t, 2)));

  std::vector<tvp::TvpPath> same(7, path);
  IrfSurface q = irf_quantiles(same, 2, 1, 1, 6, ShockNorm::OneSd);
  for (int t = 0; t < 5; ++t) {
    CHECK(max_abs(q.q16[t] - s.point[t]) < 1e-15);
    CHECK(max_abs(q.q84[t] - s.point[t]) < 1e-15);
  }

  // quantiles across draws that differ only in the volatility level
  std::vector<tvp::TvpPath> spread;
  for (int d = 0; d < 101; ++d) {
    Mat th = theta;
    th.rightCols(2).array() += 2.0 * std::log(1.0 + 0.01 * d);
    spread.push_back(tvp::TvpPath::from_theta(th, spec));
  }
  IrfSurface qs = irf_quantiles(spread, 2, 1, 1, 0, ShockNorm::OneSd);
  CHECK(qs.q50[0](1, 0) == doctest::Approx(std::exp(-0.5) * 1.5));
  CHECK(qs.q16[0](1, 0) == doctest::Approx(std::exp(-0.5) * 1.16));

  std::ostringstream os;
  write_csv(s, os, {"gdp", "spread"});
  std::string out = os.str();
  int lines = 0;
  for (char c : out) lines += c == '\n';
  CHECK(lines == 1 + 5 * 7 * 2);
  CHECK(out.find("4,6,spread,point,") != std::string::npos);
  CHECK_THROWS_AS(irf_quantiles({}, 2, 1, 0, 3, ShockNorm::OneSd), Error);
}
