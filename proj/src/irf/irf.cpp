#include "ftvp/irf/irf.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "ftvp/numerics/error.hpp"

namespace ftvp::irf {

std::string norm_name(ShockNorm s) { return s == ShockNorm::OneSd ? "OneSd" : "OnePercent"; }

ShockNorm parse_norm(const std::string& s) {
  if (s == "OneSd") return ShockNorm::OneSd;
  if (s == "OnePercent") return ShockNorm::OnePercent;
  throw Error(Errc::InvalidConfig, "unknown shock normalization '" + s + "'");
}

Mat irf_at(const Vec& theta, int n, int p, int shock, int horizon, ShockNorm norm) {
  tvp::TvpVarSpec spec{n, p, 1};
  if (theta.size() != spec.m()) throw Error(Errc::DimensionMismatch, "theta has the wrong length");
  if (shock < 0 || shock >= n) throw Error(Errc::InvalidArgument, "shocked variable out of range");
  if (horizon < 0) throw Error(Errc::InvalidArgument, "horizon must be >= 0");
  tvp::VarCoefficients v = tvp::unpack_b(theta.head(spec.nb()), n, p);
  Mat A = tvp::unpack_a(theta.segment(spec.nb(), spec.na()), n);
  // unit lower triangular, so always invertible
  assert((A.diagonal().array() == 1.0).all());
  Vec e = Vec::Zero(n);
  e[shock] = std::exp(0.5 * theta[spec.nb() + spec.na() + shock]);
  Vec impact = A.triangularView<Eigen::UnitLower>().solve(e);
  if (norm == ShockNorm::OnePercent) impact *= 0.01 / impact[shock];

  Mat r = Mat::Zero(n, horizon + 1);
  r.col(0) = impact;
  for (int h = 1; h <= horizon; ++h)
    for (int l = 1; l <= std::min(p, h); ++l) r.col(h) += v.B[l - 1] * r.col(h - l);
  return r;
}

IrfSurface irf_surface(const tvp::TvpPath& path, int n, int p, int shock, int horizon, ShockNorm norm) {
  IrfSurface s;
  s.norm = norm;
  s.shock = shock;
  s.n = n;
  s.horizon = horizon;
  for (int t = 0; t < path.b.rows(); ++t) s.point.push_back(irf_at(path.theta(t), n, p, shock, horizon, norm));
  return s;
}

namespace {

double quantile(std::vector<double>& x, double q) {
  std::sort(x.begin(), x.end());
  const double pos = q * double(x.size() - 1);
  const size_t lo = size_t(std::floor(pos));
  const size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (pos - double(lo)) * (x[hi] - x[lo]);
}

}  // namespace

IrfSurface irf_quantiles(const std::vector<tvp::TvpPath>& draws, int n, int p, int shock, int horizon,
                         ShockNorm norm) {
  if (draws.empty()) throw Error(Errc::TooFewDraws, "no posterior paths");
  const int T = int(draws[0].b.rows());
  for (const auto& d : draws)
    if (d.b.rows() != T) throw Error(Errc::PathLengthMismatch, "posterior paths differ in length");
  IrfSurface s;
  s.norm = norm;
  s.shock = shock;
  s.n = n;
  s.horizon = horizon;
  std::vector<double> buf(draws.size());
  std::vector<Mat> per(draws.size());
  for (int t = 0; t < T; ++t) {
    for (size_t d = 0; d < draws.size(); ++d) per[d] = irf_at(draws[d].theta(t), n, p, shock, horizon, norm);
    Mat a(n, horizon + 1), b(n, horizon + 1), c(n, horizon + 1);
    for (int i = 0; i < n; ++i)
      for (int h = 0; h <= horizon; ++h) {
        for (size_t d = 0; d < draws.size(); ++d) buf[d] = per[d](i, h);
        a(i, h) = quantile(buf, 0.16);
        b(i, h) = quantile(buf, 0.50);
        c(i, h) = quantile(buf, 0.84);
      }
    s.q16.push_back(a);
    s.q50.push_back(b);
    s.q84.push_back(c);
  }
  return s;
}

void write_csv(const IrfSurface& s, std::ostream& os, const std::vector<std::string>& names) {
  auto name = [&](int i) { return i < int(names.size()) ? names[i] : "y" + std::to_string(i + 1); };
  os << "t,horizon,variable,quantile,value\n" << std::setprecision(12);
  auto emit = [&](const std::vector<Mat>& m, const char* tag) {
    for (size_t t = 0; t < m.size(); ++t)
      for (int h = 0; h <= s.horizon; ++h)
        for (int i = 0; i < s.n; ++i) os << t << ',' << h << ',' << name(i) << ',' << tag << ',' << m[t](i, h) << '\n';
  };
  emit(s.point, "point");
  emit(s.q16, "q16");
  emit(s.q50, "q50");
  emit(s.q84, "q84");
}

}  // namespace ftvp::irf
