#include "ftvp/forecast/predict.hpp"

#include <cmath>

#include "ftvp/numerics/error.hpp"

namespace ftvp::forecast {

namespace {

struct Simulator {
  int n, p;
  Mat hist;  // rolling window of the last p observations, last row most recent
  Rng eps_rng;
  const PredictOptions& opt;
  PathDraw out;

  Simulator(int n_, int p_, const Mat& tail, int H, Rng& rng, const PredictOptions& o)
      : n(n_), p(p_), hist(tail), eps_rng(rng.split(2)), opt(o) {
    if (tail.rows() < p || tail.cols() != n) throw Error(Errc::DimensionMismatch, "tail must hold p rows of n values");
    if (H < 1) throw Error(Errc::InvalidArgument, "horizon must be >= 1");
    hist = tail.bottomRows(p);
    out.y.resize(H, n);
  }

  void step(int h, const tvp::VarCoefficients& v, const Mat& A, const Vec& logvar) {
    Vec y = v.c;
    for (int l = 0; l < p; ++l) y += v.B[l] * hist.row(p - 1 - l).transpose();
    Vec eps = eps_rng.normal_vector(n);
    if (!opt.deterministic) {
      Vec e = (0.5 * logvar.array()).exp().matrix().cwiseProduct(eps);
      y += A.triangularView<Eigen::UnitLower>().solve(e);
    }
    if (!y.allFinite() || y.cwiseAbs().maxCoeff() > opt.guard) out.explosive = true;
    out.y.row(h) = y.transpose();
    if (p > 1) hist.topRows(p - 1) = hist.bottomRows(p - 1).eval();
    hist.row(p - 1) = y.transpose();
  }
};

void split_theta(const Vec& th, int n, int p, tvp::VarCoefficients& v, Mat& A, Vec& h) {
  tvp::TvpVarSpec spec{n, p, 1};
  if (th.size() != spec.m()) throw Error(Errc::DimensionMismatch, "theta has the wrong length");
  v = tvp::unpack_b(th.head(spec.nb()), n, p);
  A = tvp::unpack_a(th.segment(spec.nb(), spec.na()), n);
  h = th.tail(n);
}

}  // namespace

PathDraw predict_factor(const factor::FactorTvpModel& fm, int n, int p, const Vec& f_T, const Mat& tail, int H,
                        Rng& rng, const PredictOptions& opt) {
  const int q = fm.q_total();
  if (f_T.size() != q) throw Error(Errc::DimensionMismatch, "factor state has the wrong length");
  Simulator sim(n, p, tail, H, rng, opt);
  Rng par = rng.split(1);
  Mat lh = q ? psd_factor(fm.H) : Mat();
  Vec om_sd = fm.omega.cwiseMax(0.0).cwiseSqrt();
  Vec f = f_T;
  tvp::VarCoefficients v;
  Mat A;
  Vec h;
  for (int s = 0; s < H; ++s) {
    Vec eta = par.normal_vector(q), w = par.normal_vector(fm.m);
    f = fm.rho * f;
    if (!opt.deterministic) f += lh * eta;
    Vec th = fm.theta0 + fm.lambda * f;
    if (!opt.deterministic) th += om_sd.cwiseProduct(w);
    split_theta(th, n, p, v, A, h);
    sim.step(s, v, A, h);
  }
  return sim.out;
}

PathDraw predict_rw(const Vec& theta_T, const tvp::OmegaBlocks& om, int n, int p, const Mat& tail, int H, Rng& rng,
                    const PredictOptions& opt) {
  tvp::TvpVarSpec spec{n, p, 1};
  Simulator sim(n, p, tail, H, rng, opt);
  Rng par = rng.split(1);
  Mat lb = psd_factor(om.b), lh = psd_factor(om.h);
  std::vector<Mat> la;
  for (const auto& m : om.a) la.push_back(psd_factor(m));
  Vec th = theta_T;
  tvp::VarCoefficients v;
  Mat A;
  Vec h;
  for (int s = 0; s < H; ++s) {
    Vec wb = par.normal_vector(spec.nb()), wh = par.normal_vector(n);
    std::vector<Vec> wa;
    for (int i = 1; i < n; ++i) wa.push_back(par.normal_vector(i));
    if (!opt.deterministic) {
      th.head(spec.nb()) += lb * wb;
      for (int i = 1; i < n; ++i) th.segment(spec.nb() + i * (i - 1) / 2, i) += la[i - 1] * wa[i - 1];
      th.tail(n) += lh * wh;
    }
    split_theta(th, n, p, v, A, h);
    sim.step(s, v, A, h);
  }
  return sim.out;
}

PathDraw predict_cp(const tvp::VarCoefficients& v, const Mat& A, const Vec& h, const Mat& tail, int H, Rng& rng,
                    const PredictOptions& opt) {
  Simulator sim(int(v.c.size()), int(v.B.size()), tail, H, rng, opt);
  for (int s = 0; s < H; ++s) sim.step(s, v, A, h);
  return sim.out;
}

Mat PredictiveDraws::mean() const {
  Mat m(H, n);
  Eigen::RowVectorXd avg = draws.colwise().mean();
  for (int h = 0; h < H; ++h)
    for (int i = 0; i < n; ++i) m(h, i) = avg(h * n + i);
  return m;
}

}  // namespace ftvp::forecast
