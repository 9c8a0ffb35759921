#pragma once

#include <cstdint>
#include <vector>

#include "ftvp/dsge/ncg.hpp"
#include "ftvp/dsge/poly.hpp"

namespace ftvp::dsge {

// Natural cubic spline on a uniform grid.
class UniformSpline {
 public:
  UniformSpline() = default;
  UniformSpline(double x0, double h, const Vec& y);
  double operator()(double x) const;
  double derivative(double x) const;

 private:
  double x0_ = 0, h_ = 1;
  Vec y_, m_;  // values and second derivatives
};

struct PolicyGridSpec {
  int nk = 200;
  int nz = 15;
  double k_halfwidth = 0.4;  // fraction of steady-state capital
  double z_sds = 4.0;        // unconditional standard deviations of z
  int quad_nodes = 9;
  double tol = 1e-12;        // sup-norm change in log c between sweeps
  int max_sweeps = 20000;
};

// Global solution of the NCG Euler equation by time iteration. Consumption is
// interpolated in (log k, z) with tensor cubic splines of log c.
class PolicyFunction {
 public:
  double c(double k, double z) const;
  double kprime(double k, double z) const;

  const NcgParams& params() const { return params_; }
  const SteadyState& steady_state() const { return ss_; }
  const Vec& logk_grid() const { return logk_; }
  const Vec& z_grid() const { return z_; }
  int sweeps() const { return sweeps_; }
  // max over interior nodes of |1 - c_implied / c|
  double max_euler_residual() const { return max_resid_; }
  // |1 - c_implied / c| at an arbitrary point
  double euler_residual(double k, double z) const;

 private:
  friend PolicyFunction solve_policy_grid(const NcgParams&, const PolicyGridSpec&);
  double logc(double logk, double z) const;
  void rebuild();
  double rhs(double kp, double z) const;  // β E[c'^{-τ} R'] given k', z

  NcgParams params_;
  SteadyState ss_;
  Vec logk_, z_;
  double hk_ = 1, hz_ = 1;
  Mat logc_;  // nk x nz
  std::vector<UniformSpline> kspl_;
  Vec gh_x_, gh_w_;
  int sweeps_ = 0;
  double max_resid_ = 0;
};

PolicyFunction solve_policy_grid(const NcgParams& p, const PolicyGridSpec& spec = {});

// Gauss-Hermite nodes/weights for ∫ exp(-x²) f(x) dx.
void gauss_hermite(int n, Vec& nodes, Vec& weights);

// Nonlinear simulation from the grid policy, started at the steady state.
// Rows hold (ĉ_t, k̂_t, k̂_{t+1}, z_t) in proportional deviations.
struct NonlinearPath {
  Mat levels;  // T x 4: c, k, k', z
  std::vector<PathPoint> hats;
};

NonlinearPath simulate_policy(const PolicyFunction& pf, int T, uint64_t seed, int burn_in = 100);

}  // namespace ftvp::dsge
