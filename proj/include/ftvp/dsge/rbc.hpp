#pragma once

#include "ftvp/dsge/ncg.hpp"

namespace ftvp::dsge {

struct RbcParams : NcgParams {
  double chi = 1.0;    // labor disutility scale
  double kappa = 1.0;  // inverse Frisch elasticity

  void validate() const;
};

struct RbcSteadyState {
  double r, w, l, c, k, y;
  double lambda;  // 1 - β(1-δ)
  double zeta1, zeta2, zeta3;
};

RbcSteadyState rbc_steady_state(const RbcParams& p);

// First-order RBC system on x = (ĉ, k̂', z, E ĉ') after substituting labor
// out through the intratemporal condition κ l̂ = ŵ - τ ĉ.
LinearizedSystem rbc_first_order_system(const RbcParams& p);

// l̂_t implied by (ĉ_t, k̂_t, z_t) at first order.
double rbc_labor_hat(const RbcParams& p, double c_hat, double k_hat, double z);

}  // namespace ftvp::dsge
