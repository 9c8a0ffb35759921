#include "ftvp/eval/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ftvp/numerics/error.hpp"

namespace ftvp::eval {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double chi2_sf(double x, int df) {
  if (x <= 0) return 1.0;
  if (df == 1) return std::erfc(std::sqrt(0.5 * x));
  if (df == 2) return std::exp(-0.5 * x);
  throw Error(Errc::InvalidArgument, "chi2_sf supports 1 or 2 degrees of freedom");
}

double hac_variance(const Vec& x, int lag) {
  const int T = int(x.size());
  if (T < 2) throw Error(Errc::InvalidArgument, "need at least two observations");
  Vec d = x.array() - x.mean();
  double v = d.squaredNorm() / T;
  for (int j = 1; j <= std::min(lag, T - 1); ++j) {
    const double g = d.head(T - j).dot(d.tail(T - j)) / T;
    v += 2.0 * (1.0 - double(j) / (lag + 1)) * g;
  }
  return v;
}

double rmse(const Vec& e) {
  if (e.size() == 0) throw Error(Errc::InvalidArgument, "no errors to average");
  return std::sqrt(e.squaredNorm() / double(e.size()));
}

namespace {

TestResult mean_test(const Vec& d, int h, bool one_sided) {
  const double lrv = hac_variance(d, std::max(0, h - 1));
  const double scale = d.cwiseAbs().maxCoeff();
  if (!(lrv > 1e-28 * std::max(1.0, scale * scale))) throw Error(Errc::DegenerateLosses, "loss differential has zero variance");
  TestResult r;
  r.stat = d.mean() / std::sqrt(lrv / double(d.size()));
  r.p = one_sided ? 1.0 - normal_cdf(r.stat) : 2.0 * (1.0 - normal_cdf(std::abs(r.stat)));
  return r;
}

double xlogy(double x, double y) { return x == 0 ? 0.0 : x * std::log(y); }

}  // namespace

TestResult dm_test(const Vec& a, const Vec& b, int h) {
  if (a.size() != b.size()) throw Error(Errc::DimensionMismatch, "loss series differ in length");
  if (a.size() < 10) throw Error(Errc::InvalidArgument, "DM test needs at least 10 losses");
  if (h < 1) throw Error(Errc::InvalidArgument, "horizon must be >= 1");
  return mean_test(a - b, h, true);
}

std::pair<double, double> hpd_interval(Vec x, double level) {
  const int n = int(x.size());
  if (n < 1) throw Error(Errc::TooFewDraws, "no draws");
  if (!(level > 0 && level < 1)) throw Error(Errc::InvalidArgument, "level must lie in (0, 1)");
  std::sort(x.data(), x.data() + n);
  const int k = std::max(1, int(std::ceil(level * n - 1e-9)));
  int best = 0;
  for (int i = 1; i + k - 1 < n; ++i)
    if (x[i + k - 1] - x[i] < x[best + k - 1] - x[best]) best = i;
  return {x[best], x[best + k - 1]};
}

IntervalResult interval_eval(const std::vector<Vec>& draws, const Vec& realized, double level, int h) {
  const int T = int(draws.size());
  if (T != realized.size()) throw Error(Errc::DimensionMismatch, "one draw set per realization");
  if (T < 2) throw Error(Errc::InvalidArgument, "need at least two origins");
  IntervalResult r;
  r.n = T;
  Vec hit(T);
  double len = 0;
  for (int t = 0; t < T; ++t) {
    if (draws[t].size() < 100) throw Error(Errc::TooFewDraws, "interval needs at least 100 draws", t);
    auto [lo, hi] = hpd_interval(draws[t], level);
    const int in = realized[t] >= lo && realized[t] <= hi;
    r.hit_seq.push_back(in);
    hit[t] = in;
    r.hits += in;
    len += hi - lo;
  }
  r.coverage = double(r.hits) / T;
  r.mean_length = len / T;
  const double lrv = hac_variance(hit, std::max(0, h - 1));
  if (lrv <= 0) {
    r.t.stat = r.coverage == level ? 0.0 : std::copysign(INFINITY, r.coverage - level);
    r.t.p = r.coverage == level ? 1.0 : 0.0;
  } else {
    r.t.stat = (r.coverage - level) / std::sqrt(lrv / T);
    r.t.p = 2.0 * (1.0 - normal_cdf(std::abs(r.t.stat)));
  }
  return r;
}

TestResult lr_coverage(const std::vector<int>& hits, double level) {
  const double n = double(hits.size());
  if (n < 1) throw Error(Errc::InvalidArgument, "empty hit sequence");
  double n1 = 0;
  for (int x : hits) n1 += x;
  const double n0 = n - n1, pi = n1 / n;
  TestResult r;
  r.stat = std::max(0.0, -2.0 * (xlogy(n1, level) + xlogy(n0, 1 - level) - xlogy(n1, pi) - xlogy(n0, 1 - pi)));
  r.p = chi2_sf(r.stat, 1);
  return r;
}

ChristoffersenResult christoffersen(const std::vector<int>& hits, double level) {
  if (hits.size() < 20) throw Error(Errc::InvalidArgument, "hit sequence needs at least 20 entries");
  int ones = 0;
  for (int x : hits) ones += x != 0;
  if (ones == 0 || ones == int(hits.size())) throw Error(Errc::DegenerateHits, "all hits identical");
  double n[2][2] = {{0, 0}, {0, 0}};
  for (size_t t = 1; t < hits.size(); ++t) n[hits[t - 1] != 0][hits[t] != 0] += 1;
  const double p01 = n[0][1] / std::max(1.0, n[0][0] + n[0][1]);
  const double p11 = n[1][1] / std::max(1.0, n[1][0] + n[1][1]);
  const double pi = (n[0][1] + n[1][1]) / (n[0][0] + n[0][1] + n[1][0] + n[1][1]);
  const double l_null = xlogy(n[0][0] + n[1][0], 1 - pi) + xlogy(n[0][1] + n[1][1], pi);
  const double l_alt = xlogy(n[0][0], 1 - p01) + xlogy(n[0][1], p01) + xlogy(n[1][0], 1 - p11) + xlogy(n[1][1], p11);
  ChristoffersenResult r;
  TestResult cov = lr_coverage(hits, level);
  r.lr_cov = cov.stat;
  r.p_cov = cov.p;
  r.lr_ind = std::max(0.0, -2.0 * (l_null - l_alt));
  r.p_ind = chi2_sf(r.lr_ind, 1);
  r.lr_cc = r.lr_cov + r.lr_ind;
  r.p_cc = chi2_sf(r.lr_cc, 2);
  return r;
}

double crps(const Vec& x, double y) {
  const int n = int(x.size());
  if (n < 100) throw Error(Errc::TooFewDraws, "CRPS needs at least 100 draws");
  // E|X - y| - E|X - X'| / 2 over the empirical distribution; the pair sum
  // comes from the order statistics, sum_i (2i - n - 1) x_(i) over n^2.
  std::vector<double> s(x.data(), x.data() + n);
  std::sort(s.begin(), s.end());
  double a = 0, b = 0;
  for (int i = 0; i < n; ++i) {
    a += std::abs(s[i] - y);
    b += (2.0 * i + 1 - n) * s[i];
  }
  return std::max(0.0, a / n - b / (double(n) * n));
}

TestResult crps_test(const Vec& a, const Vec& b, int h) {
  if (a.size() != b.size()) throw Error(Errc::DimensionMismatch, "CRPS series differ in length");
  if (a.size() < 2) throw Error(Errc::InvalidArgument, "need at least two origins");
  return mean_test(a - b, h, false);
}

std::string stars(double p) {
  if (!(p == p)) return "";
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.10) return "*";
  return "";
}

}  // namespace ftvp::eval
