#include "ftvp/dsge/policy_grid.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "ftvp/numerics/error.hpp"
#include "ftvp/numerics/random.hpp"

namespace ftvp::dsge {

UniformSpline::UniformSpline(double x0, double h, const Vec& y) : x0_(x0), h_(h), y_(y) {
  const int n = int(y.size());
  m_ = Vec::Zero(n);
  if (n < 3) return;
  // Thomas algorithm for the interior second derivatives (natural ends)
  const int k = n - 2;
  Vec cp(k), dp(k);
  for (int i = 0; i < k; ++i) {
    double rhs = 6.0 * (y[i + 2] - 2.0 * y[i + 1] + y[i]) / (h * h);
    double b = 4.0;
    if (i == 0) {
      cp[i] = 1.0 / b;
      dp[i] = rhs / b;
    } else {
      double den = b - cp[i - 1];
      cp[i] = 1.0 / den;
      dp[i] = (rhs - dp[i - 1]) / den;
    }
  }
  m_[k] = dp[k - 1];
  for (int i = k - 2; i >= 0; --i) m_[i + 1] = dp[i] - cp[i] * m_[i + 2];
}

double UniformSpline::operator()(double x) const {
  const int n = int(y_.size());
  if (n == 1) return y_[0];
  const double xn = x0_ + h_ * (n - 1);
  if (x < x0_) return y_[0] + derivative(x0_) * (x - x0_);
  if (x > xn) return y_[n - 1] + derivative(xn) * (x - xn);
  int i = std::min(int((x - x0_) / h_), n - 2);
  double a = x0_ + h_ * (i + 1) - x, b = x - (x0_ + h_ * i);
  return m_[i] * a * a * a / (6 * h_) + m_[i + 1] * b * b * b / (6 * h_) +
         (y_[i] / h_ - m_[i] * h_ / 6) * a + (y_[i + 1] / h_ - m_[i + 1] * h_ / 6) * b;
}

double UniformSpline::derivative(double x) const {
  const int n = int(y_.size());
  if (n == 1) return 0.0;
  double xc = std::clamp(x, x0_, x0_ + h_ * (n - 1));
  int i = std::min(int((xc - x0_) / h_), n - 2);
  double a = x0_ + h_ * (i + 1) - xc, b = xc - (x0_ + h_ * i);
  return -m_[i] * a * a / (2 * h_) + m_[i + 1] * b * b / (2 * h_) - (y_[i] / h_ - m_[i] * h_ / 6) +
         (y_[i + 1] / h_ - m_[i + 1] * h_ / 6);
}

void gauss_hermite(int n, Vec& nodes, Vec& weights) {
  // Golub-Welsch on the Jacobi matrix of the physicists' Hermite polynomials
  Mat j = Mat::Zero(n, n);
  for (int i = 1; i < n; ++i) j(i, i - 1) = j(i - 1, i) = std::sqrt(i / 2.0);
  Eigen::SelfAdjointEigenSolver<Mat> es(j);
  nodes = es.eigenvalues();
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double v = es.eigenvectors()(0, i);
    weights[i] = std::sqrt(M_PI) * v * v;
  }
}

void PolicyFunction::rebuild() {
  const int nk = int(logk_.size()), nz = int(z_.size());
  kspl_.resize(nz);
  for (int j = 0; j < nz; ++j) kspl_[j] = UniformSpline(logk_[0], hk_, logc_.col(j));
  (void)nk;
}

double PolicyFunction::logc(double logk, double z) const {
  const int nz = int(z_.size());
  Vec v(nz);
  for (int j = 0; j < nz; ++j) v[j] = kspl_[j](logk);
  return UniformSpline(z_[0], hz_, v)(z);
}

double PolicyFunction::c(double k, double z) const { return std::exp(logc(std::log(k), z)); }

double PolicyFunction::kprime(double k, double z) const {
  const auto& p = params_;
  return std::exp(z) * std::pow(k, p.alpha) + (1.0 - p.delta) * k - c(k, z);
}

double PolicyFunction::rhs(double kp, double z) const {
  const auto& p = params_;
  const int nz = int(z_.size());
  const double lkp = std::log(kp);
  Vec v(nz);
  for (int j = 0; j < nz; ++j) v[j] = kspl_[j](lkp);
  UniformSpline zs(z_[0], hz_, v);
  const double kpa = std::pow(kp, p.alpha - 1.0);
  double s = 0.0;
  for (int q = 0; q < gh_x_.size(); ++q) {
    double zn = p.rho_z * z + std::sqrt(2.0) * p.sigma_z * gh_x_[q];
    double lc = zs(zn);
    s += gh_w_[q] * std::exp(-p.tau * lc) * (1.0 - p.delta + p.alpha * std::exp(zn) * kpa);
  }
  return p.beta * s / std::sqrt(M_PI);
}

double PolicyFunction::euler_residual(double k, double z) const {
  const double cc = c(k, z);
  const double kp = kprime(k, z);
  const double implied = std::pow(rhs(kp, z), -1.0 / params_.tau);
  return std::abs(1.0 - implied / cc);
}

PolicyFunction solve_policy_grid(const NcgParams& p, const PolicyGridSpec& spec) {
  PolicyFunction pf;
  pf.params_ = p;
  pf.ss_ = ncg_steady_state(p);
  const auto& ss = pf.ss_;
  const int nk = spec.nk, nz = spec.nz;
  if (nk < 4 || nz < 4) throw Error(Errc::InvalidArgument, "grid too small");
  const double klo = std::log(ss.k * (1.0 - spec.k_halfwidth));
  const double khi = std::log(ss.k * (1.0 + spec.k_halfwidth));
  pf.hk_ = (khi - klo) / (nk - 1);
  pf.logk_ = Vec::LinSpaced(nk, klo, khi);
  double sd = p.sigma_z / std::sqrt(1.0 - p.rho_z * p.rho_z);
  double zw = spec.z_sds * std::max(sd, 1e-3);
  pf.hz_ = 2.0 * zw / (nz - 1);
  pf.z_ = Vec::LinSpaced(nz, -zw, zw);
  gauss_hermite(spec.quad_nodes, pf.gh_x_, pf.gh_w_);

  // initial guess: consume the steady-state share of output
  pf.logc_.resize(nk, nz);
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nz; ++j) {
      double k = std::exp(pf.logk_[i]);
      double y = std::exp(pf.z_[j]) * std::pow(k, p.alpha);
      pf.logc_(i, j) = std::log(ss.c_star * y);
    }
  pf.rebuild();

  auto solve_node = [&](double k, double z, double u0) {
    const double res = std::exp(z) * std::pow(k, p.alpha) + (1.0 - p.delta) * k;
    auto g = [&](double u) { return -p.tau * u - std::log(pf.rhs(res - std::exp(u), z)); };
    double umax = std::log(res) + std::log1p(-1e-9);
    double u = std::min(u0, umax - 1e-6);
    double gu = g(u);
    for (int it = 0; it < 60; ++it) {
      const double h = 1e-7;
      double d = (g(u - h) - gu) / (-h);
      double step = -gu / d;
      if (!std::isfinite(step)) step = gu > 0 ? 0.01 : -0.01;
      double un = u + step;
      while (un >= umax) un = 0.5 * (u + umax);
      double gn = g(un);
      int back = 0;
      while ((!std::isfinite(gn) || std::abs(gn) > std::abs(gu)) && back < 40) {
        step *= 0.5;
        un = u + step;
        gn = g(un);
        ++back;
      }
      u = un;
      gu = gn;
      if (std::abs(step) < 1e-14) break;
    }
    return u;
  };

  Mat next(nk, nz);
  int sweep = 0;
  for (; sweep < spec.max_sweeps; ++sweep) {
    for (int j = 0; j < nz; ++j)
      for (int i = 0; i < nk; ++i)
        next(i, j) = solve_node(std::exp(pf.logk_[i]), pf.z_[j], pf.logc_(i, j));
    double diff = (next - pf.logc_).cwiseAbs().maxCoeff();
    pf.logc_ = next;
    pf.rebuild();
    if (!std::isfinite(diff)) throw Error(Errc::NoConvergence, "time iteration diverged");
    if (diff < spec.tol) break;
  }
  if (sweep >= spec.max_sweeps)
    throw Error(Errc::NoConvergence, "time iteration did not converge", sweep);
  pf.sweeps_ = sweep + 1;

  double mr = 0.0;
  for (int i = 1; i < nk - 1; ++i)
    for (int j = 1; j < nz - 1; ++j)
      mr = std::max(mr, pf.euler_residual(std::exp(pf.logk_[i]), pf.z_[j]));
  pf.max_resid_ = mr;
  return pf;
}

NonlinearPath simulate_policy(const PolicyFunction& pf, int T, uint64_t seed, int burn_in) {
  const auto& p = pf.params();
  const auto& ss = pf.steady_state();
  Rng rng(seed);
  NonlinearPath out;
  out.levels.resize(T, 4);
  out.hats.resize(T);
  double k = ss.k, z = 0.0;
  for (int t = -burn_in; t < T; ++t) {
    z = p.rho_z * z + p.sigma_z * rng.normal();
    double c = pf.c(k, z);
    double kp = std::exp(z) * std::pow(k, p.alpha) + (1.0 - p.delta) * k - c;
    if (t >= 0) {
      out.levels.row(t) << c, k, kp, z;
      out.hats[t] = {c / ss.c - 1.0, k / ss.k - 1.0, kp / ss.k - 1.0, z};
    }
    k = kp;
  }
  return out;
}

}  // namespace ftvp::dsge
