#include "ftvp/re/gensys.hpp"

#include <Eigen/LU>
#include <complex>

#include "ftvp/numerics/error.hpp"
#include "ftvp/numerics/qz.hpp"

namespace ftvp::re {

using cd = std::complex<double>;

int ReSystem::periods() const {
  size_t t = 1;
  for (size_t s : {gamma0.size(), gamma1.size(), gamma.size(), psi.size()}) {
    if (s == 1) continue;
    if (t != 1 && s != t) throw Error(Errc::DimensionMismatch, "per-period lengths differ");
    t = s;
  }
  return int(t);
}

void ReSystem::validate() const {
  if (gamma0.empty() || gamma1.empty() || gamma.empty() || psi.empty())
    throw Error(Errc::DimensionMismatch, "ReSystem has empty members");
  const int n = nx(), ne = n_eps(), T = periods();
  if (pi.rows() != n || n_eta() > n) throw Error(Errc::DimensionMismatch, "Pi dimension");
  for (int t = 0; t < T; ++t) {
    if (G0(t).rows() != n || G0(t).cols() != n || G1(t).rows() != n || G1(t).cols() != n)
      throw Error(Errc::DimensionMismatch, "Gamma dimension", t);
    if (g(t).size() != n) throw Error(Errc::DimensionMismatch, "gamma dimension", t);
    if (Psi(t).rows() != n || Psi(t).cols() != ne) throw Error(Errc::DimensionMismatch, "Psi dimension", t);
  }
}

ReSystem ReSystem::period(int t) const {
  ReSystem s;
  s.gamma0 = {G0(t)};
  s.gamma1 = {G1(t)};
  s.gamma = {g(t)};
  s.psi = {Psi(t)};
  s.pi = pi;
  return s;
}

namespace {

CMat cpinv(const CMat& a, double rtol = 1e-12) {
  if (a.size() == 0) return CMat::Zero(a.cols(), a.rows());
  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cut = rtol * std::max(1.0, s.size() ? s[0] : 0.0);
  Eigen::VectorXcd inv(s.size());
  for (int i = 0; i < s.size(); ++i) inv[i] = s[i] > cut ? 1.0 / s[i] : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

int crank(const CMat& a, double rtol = 1e-10) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<CMat> svd(a);
  const auto& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] > rtol * std::max(1.0, s[0])) ++r;
  return r;
}

}  // namespace

ReSolution solve_cp(const ReSystem& sys, const SolveOptions& opt) {
  sys.validate();
  if (!sys.is_constant()) throw Error(Errc::InvalidArgument, "solve_cp needs a constant system");
  const int n = sys.nx(), ne = sys.n_eps(), neta = sys.n_eta();
  const Mat& g0 = sys.G0(0);
  const Mat& g1 = sys.G1(0);

  QzFactorization f = qz_decompose(g0, g1, opt.stability_tol);
  const int m = f.n_explosive, ns = n - m;

  const CMat Q1 = f.Q.topRows(ns), Q2 = f.Q.bottomRows(m);
  const CMat pic = sys.pi.cast<cd>();
  const CMat psic = sys.Psi(0).cast<cd>();
  const Eigen::VectorXcd gc = sys.g(0).cast<cd>();

  const CMat q2pi = Q2 * pic;
  const int rk = crank(q2pi);
  ReSolution out;
  out.existence = (m <= neta) && rk == m;
  out.uniqueness = out.existence && m == neta;
  if (!out.existence) {
    out.warnings.push_back(m > neta ? "more explosive roots than expectational errors"
                                    : "Q2 Pi is rank deficient");
  } else if (!out.uniqueness) {
    out.warnings.push_back("indeterminate: fewer explosive roots than expectational errors");
  }
  out.n_explosive = {m};

  // η = -(Q2Π)^+ Q2Ψ ε offsets the unstable block; Φ maps it into the stable block.
  const CMat phi = Q1 * pic * cpinv(q2pi);

  const CMat L11 = f.Lambda.topLeftCorner(ns, ns), L12 = f.Lambda.topRightCorner(ns, m);
  const CMat L22 = f.Lambda.bottomRightCorner(m, m);
  const CMat O11 = f.Omega.topLeftCorner(ns, ns), O12 = f.Omega.topRightCorner(ns, m);
  const CMat O22 = f.Omega.bottomRightCorner(m, m);

  CMat G0 = CMat::Zero(n, n);
  G0.topLeftCorner(ns, ns) = L11;
  G0.topRightCorner(ns, m) = L12 - phi * L22;
  G0.bottomRightCorner(m, m).setIdentity();
  CMat G1 = CMat::Zero(n, n);
  G1.topLeftCorner(ns, ns) = O11;
  G1.topRightCorner(ns, m) = O12 - phi * O22;

  const CMat tq = Q1 - phi * Q2;
  Eigen::VectorXcd C(n);
  C.head(ns) = tq * gc;
  if (m > 0) C.tail(m) = (L22 - O22).partialPivLu().solve(Q2 * gc);
  CMat imp = CMat::Zero(n, ne);
  imp.topRows(ns) = tq * psic;

  Eigen::PartialPivLU<CMat> lu(G0);
  if (ns > 0 && std::abs(L11.diagonal().prod()) == 0.0)
    throw Error(Errc::SingularPencil, "stable block of Lambda is singular");
  const CMat z = f.Z;
  VarSolution v;
  v.phi1 = (z * lu.solve(G1) * z.adjoint()).real();
  v.phi0 = (z * lu.solve(C)).real();
  v.phi_eps = (z * lu.solve(imp)).real();
  out.periods = {std::move(v)};
  return out;
}

ReSolution solve_tvp(const ReSystem& sys, const SolveOptions& opt) {
  sys.validate();
  const int T = sys.periods();
  ReSolution out;
  out.existence = out.uniqueness = true;
  out.periods.reserve(T);
  for (int t = 0; t < T; ++t) {
    ReSolution s;
    try {
      s = solve_cp(sys.period(t), opt);
    } catch (const Error& e) {
      throw Error(Errc::PeriodFailure, std::string("period solve failed: ") + e.what(), t);
    }
    if (!s.uniqueness)
      throw Error(Errc::PeriodFailure,
                  "no unique stable solution (explosive roots " + std::to_string(s.n_explosive[0]) +
                      ", expectational errors " + std::to_string(sys.n_eta()) + ")",
                  t);
    out.periods.push_back(std::move(s.periods[0]));
    out.n_explosive.push_back(s.n_explosive[0]);
  }
  return out;
}

StatePolicy policy_in_states(const VarSolution& sol, const std::vector<int>& state_idx) {
  const int n = int(sol.phi1.rows());
  const int k = int(state_idx.size());
  for (int i : state_idx)
    if (i < 0 || i >= n) throw Error(Errc::InvalidArgument, "state index out of range");
  Mat ia = Mat::Identity(n, n) - sol.phi1;
  StatePolicy p;
  p.mean = ia.fullPivLu().solve(sol.phi0);
  p.impact = sol.phi_eps;

  // controllable subspace span{Φε, Φ1 Φε, ...}
  Mat kry(n, 0);
  Mat blk = sol.phi_eps;
  for (int j = 0; j < n; ++j) {
    Mat next(n, kry.cols() + blk.cols());
    next << kry, blk;
    kry = next;
    blk = sol.phi1 * blk;
  }
  Mat B = orth_basis(kry);
  Mat S(k, B.cols());
  for (int i = 0; i < k; ++i) S.row(i) = B.row(state_idx[i]);
  p.coef = sol.phi1 * B * pinv(S);
  return p;
}

Mat simulate_solution(const ReSolution& sol, const Mat& eps, const Vec& x_init) {
  const int T = int(eps.rows());
  const auto& s0 = sol.at(0);
  const int n = int(s0.phi1.rows());
  Vec x = x_init.size() ? x_init
                        : Vec((Mat::Identity(n, n) - s0.phi1).fullPivLu().solve(s0.phi0));
  Mat out(T, n);
  for (int t = 0; t < T; ++t) {
    const auto& s = sol.at(sol.periods.size() == 1 ? 0 : t);
    x = s.phi0 + s.phi1 * x + s.phi_eps * eps.row(t).transpose();
    out.row(t) = x.transpose();
  }
  return out;
}

double re_residual(const ReSystem& sys, const Mat& x, const Mat& eps) {
  const int T = int(x.rows());
  const Mat pp = pinv(sys.pi);
  double worst = 0.0;
  for (int t = 1; t < T; ++t) {
    const int p = sys.is_constant() ? 0 : t;
    Vec r = sys.G0(p) * x.row(t).transpose() - sys.g(p) - sys.G1(p) * x.row(t - 1).transpose() -
            sys.Psi(p) * eps.row(t).transpose();
    Vec res = r - sys.pi * (pp * r);
    worst = std::max(worst, res.cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace ftvp::re
