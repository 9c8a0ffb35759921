#include "ftvp/tvp/simulate.hpp"

#include <cmath>

#include "ftvp/numerics/error.hpp"
#include "ftvp/numerics/random.hpp"

namespace ftvp::tvp {

namespace {

Vec var_step(const Mat& y, int row, const VarCoefficients& v, const Mat& A, const Vec& h, Rng& rng) {
  const int n = int(v.c.size());
  Vec mean = v.c;
  for (size_t l = 0; l < v.B.size(); ++l) mean += v.B[l] * y.row(row - 1 - int(l)).transpose();
  Vec e = (0.5 * h.array()).exp().matrix().cwiseProduct(rng.normal_vector(n));
  return mean + A.triangularView<Eigen::UnitLower>().solve(e);
}

// Presample rows drawn at fixed parameters; returns p rows that seed the sample.
Mat presample(const VarCoefficients& v, const Mat& A, const Vec& h, int burn, Rng& rng) {
  const int n = int(v.c.size()), p = int(v.B.size());
  Mat y = Mat::Zero(burn + p, n);
  for (int t = p; t < burn + p; ++t) y.row(t) = var_step(y, t, v, A, h, rng).transpose();
  return y.bottomRows(p);
}

}  // namespace

Mat simulate_cp_var(const VarCoefficients& v, const Mat& a_lower, const Vec& h, int T, int burn, uint64_t seed) {
  const int n = int(v.c.size()), p = int(v.B.size());
  if (T < 1 || burn < 0 || p < 1) throw Error(Errc::InvalidArgument, "need T >= 1, burn >= 0, p >= 1");
  Rng rng(seed, 0);
  Mat y(T + p, n);
  y.topRows(p) = presample(v, a_lower, h, burn, rng);
  for (int t = p; t < T + p; ++t) y.row(t) = var_step(y, t, v, a_lower, h, rng).transpose();
  return y;
}

SimulatedTvp simulate_rw_tvp(const RwTvpDgp& d, int T, uint64_t seed) {
  const int n = int(d.start.c.size()), p = int(d.start.B.size());
  Rng rng(seed, 0);
  Vec b = pack_b(d.start), a = d.a0, h = d.h0;
  const int nb = int(b.size());
  if (d.omega.b.rows() != nb || d.omega.h.rows() != n || int(d.omega.a.size()) != n - 1)
    throw Error(Errc::DimensionMismatch, "Omega blocks do not match the VAR");
  Mat lb = psd_factor(d.omega.b), lh = psd_factor(d.omega.h);
  std::vector<Mat> la;
  for (const auto& m : d.omega.a) la.push_back(psd_factor(m));

  SimulatedTvp out;
  out.data.resize(T + p, n);
  out.data.topRows(p) = presample(d.start, unpack_a(a, n), h, d.burn, rng);
  out.truth.b.resize(T, nb);
  out.truth.a.resize(T, a.size());
  out.truth.h.resize(T, n);
  for (int t = 0; t < T; ++t) {
    for (int tries = 0; tries < 100; ++tries) {
      Vec cand = b + lb * rng.normal_vector(nb);
      if (companion_radius(unpack_b(cand, n, p)) <= d.max_radius) {
        b = cand;
        break;
      }
    }
    for (int i = 1; i < n; ++i) {
      const int off = i * (i - 1) / 2;
      a.segment(off, i) += la[i - 1] * rng.normal_vector(i);
    }
    h += lh * rng.normal_vector(n);
    out.truth.b.row(t) = b.transpose();
    out.truth.a.row(t) = a.transpose();
    out.truth.h.row(t) = h.transpose();
    out.data.row(t + p) = var_step(out.data, t + p, unpack_b(b, n, p), unpack_a(a, n), h, rng).transpose();
  }
  return out;
}

SimulatedTvp simulate_factor_tvp(const FactorTvpDgp& d, int T, uint64_t seed) {
  const int n = d.n, p = d.p;
  TvpVarSpec spec{n, p, T};
  const int m = spec.m(), q = int(d.lambda.cols());
  if (d.theta0.size() != m || d.lambda.rows() != m || d.rho.rows() != q || d.H.rows() != q)
    throw Error(Errc::DimensionMismatch, "factor DGP dimensions");
  Rng rng(seed, 0);
  Mat lh = psd_factor(d.H);
  auto split = [&](const Vec& th, VarCoefficients& v, Mat& A, Vec& h) {
    v = unpack_b(th.head(spec.nb()), n, p);
    A = unpack_a(th.segment(spec.nb(), spec.na()), n);
    h = th.tail(n);
  };
  VarCoefficients v;
  Mat A;
  Vec h;
  split(d.theta0, v, A, h);
  if (companion_radius(v) > d.max_radius) throw Error(Errc::InvalidArgument, "theta0 is not stable");

  SimulatedTvp out;
  Mat theta(T, m);
  out.data.resize(T + p, n);
  out.data.topRows(p) = presample(v, A, h, d.burn, rng);
  Vec f = Vec::Zero(q);
  for (int t = 0; t < T; ++t) {
    for (int tries = 0; tries < 100; ++tries) {
      Vec cand = d.rho * f + lh * rng.normal_vector(q);
      VarCoefficients vc = unpack_b((d.theta0 + d.lambda * cand).head(spec.nb()), n, p);
      if (companion_radius(vc) <= d.max_radius) {
        f = cand;
        break;
      }
    }
    Vec th = d.theta0 + d.lambda * f;
    theta.row(t) = th.transpose();
    split(th, v, A, h);
    out.data.row(t + p) = var_step(out.data, t + p, v, A, h, rng).transpose();
  }
  out.truth = TvpPath::from_theta(theta, spec);
  return out;
}

}  // namespace ftvp::tvp
