#pragma once

#include <cstdint>

#include "ftvp/tvp/gibbs.hpp"
#include "ftvp/tvp/layout.hpp"

namespace ftvp::tvp {

struct SimulatedTvp {
  Mat data;      // (T + p) x n, first p rows are presample
  TvpPath truth;  // T rows aligned with data rows p..
};

// y_t = c + Σ B_l y_{t-l} + A^{-1} Σ^{1/2} ε_t with fixed parameters.
// The first `burn` simulated rows are discarded; returns (T + p) x n.
Mat simulate_cp_var(const VarCoefficients& v, const Mat& a_lower, const Vec& h, int T, int burn, uint64_t seed);

// Random-walk TVP-VAR: b, a, h follow independent random walks with
// covariances Ω. A b step that pushes the companion radius above max_radius
// is redrawn (up to 100 times, then held).
struct RwTvpDgp {
  VarCoefficients start;
  Vec a0;
  Vec h0;
  OmegaBlocks omega;
  double max_radius = 0.98;
  int burn = 100;  // presample rows simulated at the starting parameters
};
SimulatedTvp simulate_rw_tvp(const RwTvpDgp& dgp, int T, uint64_t seed);

// θ_t = θ0 + Λ f_t, f_t = ρ f_{t-1} + η_t, η ~ N(0, H). Factor steps that
// make the VAR explosive beyond max_radius are redrawn.
struct FactorTvpDgp {
  int n = 0, p = 1;
  Vec theta0;  // m
  Mat lambda;  // m x q
  Mat rho;     // q x q
  Mat H;       // q x q
  double max_radius = 0.98;
  int burn = 100;
};
SimulatedTvp simulate_factor_tvp(const FactorTvpDgp& dgp, int T, uint64_t seed);

}  // namespace ftvp::tvp
