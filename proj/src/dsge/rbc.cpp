#include "ftvp/dsge/rbc.hpp"

#include <cmath>

#include "ftvp/numerics/error.hpp"

namespace ftvp::dsge {

void RbcParams::validate() const {
  NcgParams::validate();
  if (!(chi > 0)) throw Error(Errc::InfeasibleParams, "chi must be positive");
  if (!(kappa >= 0)) throw Error(Errc::InfeasibleParams, "kappa must be nonnegative");
}

RbcSteadyState rbc_steady_state(const RbcParams& p) {
  p.validate();
  RbcSteadyState s{};
  const double a = p.alpha;
  s.r = 1.0 / p.beta - (1.0 - p.delta);
  const double kl = std::pow(a / s.r, 1.0 / (1.0 - a));  // k / l
  s.w = (1.0 - a) * std::pow(kl, a);
  s.zeta2 = s.r / a - p.delta;
  s.zeta1 = kl * s.zeta2;  // c / l
  s.zeta3 = (1.0 - a) / p.chi;
  if (!(s.zeta2 > 0)) throw Error(Errc::InfeasibleParams, "steady-state consumption not positive");
  // χ l^κ = w (ζ1 l)^{-τ}
  s.l = std::pow(s.w * std::pow(s.zeta1, -p.tau) / p.chi, 1.0 / (p.kappa + p.tau));
  s.k = kl * s.l;
  s.c = s.zeta1 * s.l;
  s.y = std::pow(s.k, a) * std::pow(s.l, 1.0 - a);
  s.lambda = 1.0 - p.beta * (1.0 - p.delta);
  return s;
}

double rbc_labor_hat(const RbcParams& p, double c_hat, double k_hat, double z) {
  return (z + p.alpha * k_hat - p.tau * c_hat) / (p.alpha + p.kappa);
}

LinearizedSystem rbc_first_order_system(const RbcParams& p) {
  const RbcSteadyState s = rbc_steady_state(p);
  // start from the NCG layout and overwrite the two structural rows
  LinearizedSystem L = build_linearized_system(p, 1, ResourceForm::kNormalized);
  const double a = p.alpha, tau = p.tau, rho = p.rho_z, lam = s.lambda;
  const double phi = 1.0 / (a + p.kappa);
  const double cs = s.c / s.y, ks = s.k / s.y;

  L.gamma0[0][0] = cs + (1.0 - a) * phi * tau;
  L.gamma0[0][1] = ks;
  L.gamma0[0][2] = -1.0 - (1.0 - a) * phi;
  L.gamma1[0][1] = (1.0 - p.delta) * ks + a + (1.0 - a) * a * phi;

  L.gamma0[1][0] = -tau;
  L.gamma0[1][1] = -lam * ((a - 1.0) + (1.0 - a) * a * phi);
  L.gamma0[1][2] = -lam * rho * (1.0 + (1.0 - a) * phi);
  L.gamma0[1][3] = tau + lam * (1.0 - a) * phi * tau;
  return L;
}

}  // namespace ftvp::dsge
