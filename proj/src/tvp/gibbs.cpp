#include "ftvp/tvp/gibbs.hpp"

#include <algorithm>
#include <cmath>

#include "ftvp/numerics/error.hpp"
#include "ftvp/numerics/state_space.hpp"
#include "ftvp/tvp/mixture.hpp"

namespace ftvp::tvp {

int McmcConfig::retained() const {
  if (iterations <= burn_in || thin < 1) return 0;
  return (iterations - burn_in) / thin;
}

void McmcConfig::validate() const {
  if (iterations <= burn_in || burn_in < 0) throw Error(Errc::InvalidConfig, "need iterations > burn_in >= 0");
  if (thin < 1) throw Error(Errc::InvalidConfig, "thin must be >= 1");
  if (path_stride < 0) throw Error(Errc::InvalidConfig, "path_stride must be >= 0");
  if (kappa_step <= 0) throw Error(Errc::InvalidConfig, "kappa_step must be positive");
}

double inefficiency_factor(const Vec& chain) {
  const int n = int(chain.size());
  if (n < 4) return 1.0;
  Vec x = chain.array() - chain.mean();
  const double g0 = x.squaredNorm() / n;
  if (!(g0 > 0)) return 1.0;
  const int bw = std::max(2, int(std::lround(std::min(0.04 * n, 20.0 * std::pow(n, 0.2)))));
  double s = 0;
  for (int k = 1; k <= std::min(bw, n - 1); ++k) {
    const double z = double(k) / bw;
    const double w = z <= 0.5 ? 1 - 6 * z * z + 6 * z * z * z : 2 * std::pow(1 - z, 3);
    const double rho = x.head(n - k).dot(x.tail(n - k)) / n / g0;
    s += w * rho;
  }
  return 1.0 + 2.0 * s;
}

namespace {

struct State {
  Mat b, a, h;  // T x nb, T x na, T x n
  OmegaBlocks om;
  Mat s;        // T x n mixture indicators (stored as doubles)
  double kb, ka, kh;
};

// u_t = y_t - (I ⊗ x_t') b_t
Mat residuals(const Mat& Y, const Mat& X, const Mat& b, int n) {
  const int T = int(Y.rows()), k = int(X.cols());
  Mat u(T, n);
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < n; ++i) u(t, i) = Y(t, i) - X.row(t).dot(b.row(t).segment(i * k, k));
  return u;
}

Mat draw_b(const Mat& Y, const Mat& X, const State& st, const PriorSpec& pr, int n, Rng& rng) {
  const int T = int(Y.rows()), k = int(X.cols()), nb = n * k;
  StateSpaceModel m;
  m.T = T;
  m.trans = {Mat::Identity(nb, nb)};
  m.trans_c = {Vec::Zero(nb)};
  m.trans_cov = {st.om.b};
  m.meas_d = {Vec::Zero(n)};
  m.meas.resize(T);
  m.meas_cov.resize(T);
  for (int t = 0; t < T; ++t) {
    Mat z = Mat::Zero(n, nb);
    for (int i = 0; i < n; ++i) z.block(i, i * k, 1, k) = X.row(t);
    m.meas[t] = std::move(z);
    Mat ainv = unpack_a(st.a.row(t).transpose(), n).triangularView<Eigen::UnitLower>().solve(Mat::Identity(n, n));
    Mat hcov = ainv * st.h.row(t).array().exp().matrix().asDiagonal() * ainv.transpose();
    symmetrize(hcov);
    m.meas_cov[t] = std::move(hcov);
  }
  m.x0_mean = pr.b_mean;
  m.x0_cov = pr.b_cov;
  return simulation_smoother(m, Y, rng);
}

void draw_a(const Mat& U, State& st, const PriorSpec& pr, int n, Rng& rng) {
  const int T = int(U.rows());
  for (int i = 1; i < n; ++i) {
    const int off = i * (i - 1) / 2;
    StateSpaceModel m;
    m.T = T;
    m.trans = {Mat::Identity(i, i)};
    m.trans_c = {Vec::Zero(i)};
    m.trans_cov = {st.om.a[i - 1]};
    m.meas_d = {Vec::Zero(1)};
    m.meas.resize(T);
    m.meas_cov.resize(T);
    for (int t = 0; t < T; ++t) {
      m.meas[t] = -U.row(t).head(i);
      m.meas_cov[t] = Mat::Constant(1, 1, std::exp(st.h(t, i)));
    }
    m.x0_mean = pr.a_mean.segment(off, i);
    m.x0_cov = pr.a_cov.block(off, off, i, i);
    st.a.middleCols(off, i) = simulation_smoother(m, U.col(i), rng);
  }
}

Mat pr_row(const Vec& v, int T) { return v.transpose().replicate(T, 1); }

Mat increments_ssr(const Mat& path) {
  const int T = int(path.rows());
  if (T < 2) return Mat::Zero(path.cols(), path.cols());
  Mat d = path.bottomRows(T - 1) - path.topRows(T - 1);
  return d.transpose() * d;
}

double log_kappa_target(double kappa, double kappa0, const std::vector<const Mat*>& omegas,
                        const std::vector<const Mat*>& bases, const std::vector<double>& dfs) {
  double lt = 0;
  for (size_t j = 0; j < omegas.size(); ++j)
    lt += inv_wishart_logkernel(*omegas[j], kappa * kappa * dfs[j] * *bases[j], dfs[j]);
  const double z = std::log(kappa) - std::log(kappa0);
  return lt - 0.5 * z * z;
}

}  // namespace

PosteriorDraws gibbs_estimate(const Mat& data, int p, const PriorSpec& prior_in, const McmcConfig& cfg,
                              uint64_t seed) {
  cfg.validate();
  const int n = int(data.cols());
  if (prior_in.n != n || prior_in.p != p) throw Error(Errc::DimensionMismatch, "prior does not match data");
  if (!data.allFinite()) throw Error(Errc::InvalidArgument, "data must be finite");
  TvpVarSpec spec{n, p, int(data.rows()) - p};
  spec.validate();
  prior_in.validate();
  if (prior_in.degenerate && !cfg.fixed_omega)
    throw Error(Errc::InvalidConfig, "degenerate prior: training sample fits exactly");

  PriorSpec prior = prior_in;
  const int T = spec.T, k = spec.k(), nb = spec.nb(), m = spec.m();
  const Mat Y = data.bottomRows(T);
  Mat X(T, k);
  for (int t = 0; t < T; ++t) X.row(t) = regressors(data, t + p, p).transpose();

  Rng rng(seed, 0);
  State st;
  st.b = pr_row(prior.b_mean, T);
  st.a = pr_row(prior.a_mean, T);
  st.h = pr_row(prior.h_mean, T);
  st.s = Mat::Zero(T, n);
  st.kb = prior.kappa_b;
  st.ka = prior.kappa_a;
  st.kh = prior.kappa_h;
  if (cfg.fixed_omega) {
    st.om = *cfg.fixed_omega;
    if (st.om.b.rows() != nb || st.om.h.rows() != n || int(st.om.a.size()) != n - 1)
      throw Error(Errc::DimensionMismatch, "fixed Omega blocks have the wrong size");
  } else {
    st.om.b = prior.omega_b_scale / (prior.omega_b_df + nb + 1);
    st.om.h = prior.omega_h_scale / (prior.omega_h_df + n + 1);
    for (int i = 1; i < n; ++i)
      st.om.a.push_back(prior.omega_a_scale[i - 1] / (prior.omega_a_df[i - 1] + i + 1));
  }

  PosteriorDraws out;
  out.spec = spec;
  out.config = cfg;
  out.seed = seed;
  out.n_draws = cfg.retained();
  out.theta_last.resize(out.n_draws, m);
  out.kappas.resize(out.n_draws, 3);
  out.theta_mean = Mat::Zero(T, m);
  Mat theta_sq = Mat::Zero(T, m);
  const int tmid = T / 2;
  Mat mid_chain(out.n_draws, m);
  int kappa_accepts = 0, kappa_tries = 0;

  for (int it = 0; it < cfg.iterations; ++it) {
    // (b, a, Ω) given h
    Mat bnew = draw_b(Y, X, st, prior, n, rng);
    if (cfg.reject_explosive) {
      auto explosive = [&](const Mat& b) {
        for (int t = 0; t < T; ++t)
          if (companion_radius(unpack_b(b.row(t).transpose(), n, p)) > cfg.explosive_radius) return true;
        return false;
      };
      int tries = 0;
      while (explosive(bnew) && ++tries < 100) bnew = draw_b(Y, X, st, prior, n, rng);
      if (tries > 0 && explosive(bnew)) {
        bnew = st.b;
        if (it >= cfg.burn_in) ++out.rejected_draws;
      }
    }
    st.b = std::move(bnew);
    Mat U = residuals(Y, X, st.b, n);
    draw_a(U, st, prior, n, rng);

    if (!cfg.fixed_omega) {
      if (cfg.sample_kappas) {
        ++kappa_tries;
        auto step = [&](double& kappa, double kappa0, std::vector<const Mat*> oms, std::vector<const Mat*> bases,
                        std::vector<double> dfs) {
          const double prop = kappa * std::exp(cfg.kappa_step * rng.normal());
          const double lr = log_kappa_target(prop, kappa0, oms, bases, dfs) -
                            log_kappa_target(kappa, kappa0, oms, bases, dfs);
          if (std::log(rng.uniform()) < lr) {
            kappa = prop;
            return 1;
          }
          return 0;
        };
        const Mat ih = Mat::Identity(n, n);
        std::vector<const Mat*> oa, ba;
        for (int i = 0; i < n - 1; ++i) {
          oa.push_back(&st.om.a[i]);
          ba.push_back(&prior.a_ols_cov[i]);
        }
        int acc = step(st.kb, prior_in.kappa_b, {&st.om.b}, {&prior.b_ols_cov}, {prior.omega_b_df});
        if (n > 1) acc += step(st.ka, prior_in.kappa_a, oa, ba, prior.omega_a_df);
        acc += step(st.kh, prior_in.kappa_h, {&st.om.h}, {&ih}, {prior.omega_h_df});
        if (acc > 0) kappa_accepts += 1;
        prior.set_kappas(st.kb, st.ka, st.kh);
      }
      st.om.b = inv_wishart_draw(prior.omega_b_scale + increments_ssr(st.b), prior.omega_b_df + T - 1, rng);
      for (int i = 1; i < n; ++i) {
        const int off = i * (i - 1) / 2;
        st.om.a[i - 1] = inv_wishart_draw(prior.omega_a_scale[i - 1] + increments_ssr(st.a.middleCols(off, i)),
                                          prior.omega_a_df[i - 1] + T - 1, rng);
      }
      st.om.h = inv_wishart_draw(prior.omega_h_scale + increments_ssr(st.h), prior.omega_h_df + T - 1, rng);
    }

    // mixture indicators given (b, a, h)
    Mat ystar(T, n);
    for (int t = 0; t < T; ++t) {
      Vec e = unpack_a(st.a.row(t).transpose(), n) * U.row(t).transpose();
      for (int i = 0; i < n; ++i) {
        ystar(t, i) = std::log(e[i] * e[i] + kLogOffset);
        st.s(t, i) = LogChi2Mixture::draw_component(ystar(t, i) - st.h(t, i), rng);
      }
    }

    // h given indicators
    {
      StateSpaceModel sm;
      sm.T = T;
      sm.trans = {Mat::Identity(n, n)};
      sm.trans_c = {Vec::Zero(n)};
      sm.trans_cov = {st.om.h};
      sm.meas = {Mat::Identity(n, n)};
      sm.meas_d.resize(T);
      sm.meas_cov.resize(T);
      for (int t = 0; t < T; ++t) {
        Vec d(n), v(n);
        for (int i = 0; i < n; ++i) {
          const int c = int(st.s(t, i));
          d[i] = LogChi2Mixture::mean[c];
          v[i] = LogChi2Mixture::var[c];
        }
        sm.meas_d[t] = d;
        sm.meas_cov[t] = v.asDiagonal();
      }
      sm.x0_mean = prior.h_mean;
      sm.x0_cov = prior.h_cov;
      st.h = simulation_smoother(sm, ystar, rng);
      for (int t = 0; t < T; ++t)
        for (int i = 0; i < n; ++i)
          if (!std::isfinite(st.h(t, i)) || std::abs(st.h(t, i)) > cfg.h_guard)
            throw Error(Errc::NumericalOverflow,
                        "log-volatility state exploded at draw " + std::to_string(it), t);
    }

    if (it >= cfg.burn_in && (it - cfg.burn_in) % cfg.thin == cfg.thin - 1) {
      const int r = (it - cfg.burn_in) / cfg.thin;
      if (r >= out.n_draws) continue;
      TvpPath path{st.b, st.a, st.h};
      Mat th = path.theta_matrix();
      out.theta_last.row(r) = th.row(T - 1);
      mid_chain.row(r) = th.row(tmid);
      out.theta_mean += th;
      theta_sq += th.cwiseProduct(th);
      out.omega.push_back(st.om);
      out.kappas.row(r) << st.kb, st.ka, st.kh;
      if (cfg.path_stride > 0 && r % cfg.path_stride == 0) {
        out.paths.push_back(std::move(path));
        out.path_index.push_back(r);
      }
    }
  }

  const double nd = std::max(1, out.n_draws);
  out.theta_mean /= nd;
  out.theta_sd = (theta_sq / nd - out.theta_mean.cwiseProduct(out.theta_mean)).cwiseMax(0.0).cwiseSqrt();
  out.kappa_acceptance = kappa_tries ? double(kappa_accepts) / kappa_tries : 0.0;

  if (out.n_draws >= 4) {
    auto push = [&](const std::string& name, const Vec& c) { out.inefficiency.push_back({name, inefficiency_factor(c)}); };
    Vec c(out.n_draws);
    for (int j = 0; j < nb; ++j) {
      for (int r = 0; r < out.n_draws; ++r) c[r] = out.omega[r].b(j, j);
      push("omega_b[" + std::to_string(j) + "]", c);
    }
    for (int i = 0; i < n - 1; ++i)
      for (int j = 0; j <= i; ++j) {
        for (int r = 0; r < out.n_draws; ++r) c[r] = out.omega[r].a[i](j, j);
        push("omega_a" + std::to_string(i + 1) + "[" + std::to_string(j) + "]", c);
      }
    for (int j = 0; j < n; ++j) {
      for (int r = 0; r < out.n_draws; ++r) c[r] = out.omega[r].h(j, j);
      push("omega_h[" + std::to_string(j) + "]", c);
    }
    for (int j = 0; j < m; ++j) push("theta_mid[" + std::to_string(j) + "]", mid_chain.col(j));
  }
  return out;
}

}  // namespace ftvp::tvp
