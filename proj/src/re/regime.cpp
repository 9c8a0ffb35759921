#include "ftvp/re/regime.hpp"

#include <cmath>

#include "ftvp/numerics/error.hpp"

namespace ftvp::re {

void RsModel::validate() const {
  const int ns = n_regimes();
  if (ns < 1 || T.cols() != ns) throw Error(Errc::DimensionMismatch, "transition matrix must be square");
  for (int s = 0; s < ns; ++s) {
    if ((T.row(s).array() < 0).any() || std::abs(T.row(s).sum() - 1.0) > 1e-12)
      throw Error(Errc::InvalidArgument, "transition rows must be probabilities summing to one", s);
  }
  const int n = ny(), d = ne();
  if (G.cols() != d || Sigma.rows() != d || Sigma.cols() != d)
    throw Error(Errc::DimensionMismatch, "G / Sigma dimension");
  auto check = [&](const std::vector<std::vector<Mat>>& f, int cols, bool optional, const char* nm) {
    if (optional && f.empty()) return;
    if (int(f.size()) != ns) throw Error(Errc::DimensionMismatch, std::string(nm) + " regime count");
    for (const auto& row : f) {
      if (int(row.size()) != ns) throw Error(Errc::DimensionMismatch, std::string(nm) + " regime count");
      for (const auto& m : row)
        if (m.rows() != n || m.cols() != cols)
          throw Error(Errc::DimensionMismatch, std::string(nm) + " dimension");
    }
  };
  check(F1, n, false, "F1");
  check(F2, n, false, "F2");
  check(F3, n, true, "F3");
  check(F4, d, false, "F4");
  check(F5, d, false, "F5");
  if (int(F0.size()) != ns) throw Error(Errc::DimensionMismatch, "F0 regime count");
  for (const auto& row : F0) {
    if (int(row.size()) != ns) throw Error(Errc::DimensionMismatch, "F0 regime count");
    for (const auto& v : row)
      if (v.size() != n) throw Error(Errc::DimensionMismatch, "F0 dimension");
  }
}

ReSolution solve_rs(const RsModel& md, const SolveOptions& opt) {
  md.validate();
  const int ns = md.n_regimes(), n = md.ny(), d = md.ne();
  for (const auto& row : md.F3)
    for (const auto& m : row)
      if (max_abs(m) != 0.0)
        throw Error(Errc::InvalidArgument,
                    "lagged endogenous variables are not supported under regime switching");

  // x = (Y^(1..ns), e, E_t Y^(1..ns)_{t+1})
  const int ny_all = ns * n, ie = ny_all, iE = ny_all + d, nx = 2 * ny_all + d;
  ReSystem sys;
  Mat g0 = Mat::Zero(nx, nx), g1 = Mat::Zero(nx, nx);
  Vec gam = Vec::Zero(nx);
  // unit shocks on e: the decision rule does not depend on Σ (certainty
  // equivalence), and unit impacts make the loadings on e_t readable.
  Mat psi = Mat::Zero(nx, d);
  Mat pi = Mat::Zero(nx, ny_all);

  for (int s = 0; s < ns; ++s) {
    Mat f1 = Mat::Zero(n, n), f4 = Mat::Zero(n, d), f5g = Mat::Zero(n, d);
    Vec f0 = Vec::Zero(n);
    for (int sp = 0; sp < ns; ++sp) {
      const double w = md.T(s, sp);
      f0 += w * md.F0[s][sp];
      f1 += w * md.F1[s][sp];
      f4 += w * md.F4[s][sp];
      f5g += w * md.F5[s][sp] * md.G;
      g0.block(s * n, iE + sp * n, n, n) = w * md.F2[s][sp];
    }
    g0.block(s * n, s * n, n, n) = f1;
    g0.block(s * n, ie, n, d) = f4 + f5g;
    gam.segment(s * n, n) = -f0;
  }
  g0.block(ie, ie, d, d).setIdentity();
  g1.block(ie, ie, d, d) = md.G;
  psi.block(ie, 0, d, d).setIdentity();
  for (int i = 0; i < ny_all; ++i) {
    g0(iE + i, i) = 1.0;
    g1(iE + i, iE + i) = 1.0;
    pi(iE + i, i) = 1.0;
  }
  sys.gamma0 = {g0};
  sys.gamma1 = {g1};
  sys.gamma = {gam};
  sys.psi = {psi};
  sys.pi = pi;

  ReSolution st = solve_cp(sys, opt);
  const VarSolution& v = st.periods[0];
  const Vec xbar = (Mat::Identity(nx, nx) - v.phi1).fullPivLu().solve(v.phi0);
  const Mat chol = psd_factor(md.Sigma);

  ReSolution out;
  out.existence = st.existence;
  out.uniqueness = st.uniqueness;
  out.warnings = st.warnings;
  for (int s = 0; s < ns; ++s) {
    const Mat L = v.phi_eps.block(s * n, 0, n, d);  // ∂Y^(s)_t / ∂e_t
    VarSolution r;
    r.phi0 = Vec::Zero(n + d);
    r.phi0.head(n) = xbar.segment(s * n, n) - L * xbar.segment(ie, d);
    r.phi1 = Mat::Zero(n + d, n + d);
    r.phi1.topRightCorner(n, d) = L * md.G;
    r.phi1.bottomRightCorner(d, d) = md.G;
    r.phi_eps.resize(n + d, d);
    r.phi_eps << L * chol, chol;
    out.periods.push_back(std::move(r));
    out.n_explosive.push_back(st.n_explosive[0]);
  }
  return out;
}

}  // namespace ftvp::re
