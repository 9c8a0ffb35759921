#pragma once

#include <string>
#include <vector>

#include "ftvp/re/system.hpp"

namespace ftvp::re {

// y_t = c + Σ_l ar[l-1] y_{t-l} + u_t + Σ_j ma[j-1] u_{t-j},  Var(u_t) = sigma.
struct VarmaModel {
  Vec intercept;
  std::vector<Mat> ar;
  std::vector<Mat> ma;
  Mat sigma;

  int p() const { return int(ar.size()); }
  int q() const { return int(ma.size()); }
};

struct MarginalizeOptions {
  int min_window = 50;       // minimum innovations-algorithm iterations
  int max_window = 20000;
  double tol = 1e-12;        // convergence of MA coefficients and innovation variance
  double trim_tol = 1e-10;   // trailing coefficients below this (relative) are dropped
};

// VARMA representation of the subvector x[keep] of a stable VAR(1). The
// unobserved block is first reduced to its observable and controllable part,
// the AR side comes from det(I - Φ22 L) and the adjugate, and the MA side is
// the innovations (spectral) factorization of the implied moving average.
VarmaModel marginalize(const VarSolution& var, const std::vector<int>& keep,
                       const MarginalizeOptions& opt = {});

struct TvpVarma {
  std::vector<VarmaModel> periods;
  std::vector<std::string> warnings;
};

// Pointwise marginalization of a per-period VAR(1). Throws BlockSingular(t)
// when det(I - Φ22,t z) comes within 1e-8 of zero on the unit circle.
TvpVarma marginalize_tvp(const std::vector<VarSolution>& var, const std::vector<int>& keep,
                         const MarginalizeOptions& opt = {});

// Autocovariances Γ(0..max_lag) of a stationary VARMA, Γ(h) = E[y_{t+h} y_t'].
std::vector<Mat> varma_autocovariance(const VarmaModel& m, int max_lag);

}  // namespace ftvp::re
