#pragma once

#include <string>
#include <vector>

#include "ftvp/numerics/linalg.hpp"

namespace ftvp::re {

// Γ0_t x_t = γ_t + Γ1_t x_{t-1} + Ψ_t ε_t + Π η_t.
// Per-period members hold one entry (constant system) or T entries.
struct ReSystem {
  std::vector<Mat> gamma0;
  std::vector<Mat> gamma1;
  std::vector<Vec> gamma;
  std::vector<Mat> psi;
  Mat pi;

  int nx() const { return gamma0.empty() ? 0 : int(gamma0[0].rows()); }
  int n_eps() const { return psi.empty() ? 0 : int(psi[0].cols()); }
  int n_eta() const { return int(pi.cols()); }
  int periods() const;  // 1 for a constant system
  bool is_constant() const { return periods() == 1; }

  const Mat& G0(int t) const { return gamma0.size() == 1 ? gamma0[0] : gamma0[t]; }
  const Mat& G1(int t) const { return gamma1.size() == 1 ? gamma1[0] : gamma1[t]; }
  const Vec& g(int t) const { return gamma.size() == 1 ? gamma[0] : gamma[t]; }
  const Mat& Psi(int t) const { return psi.size() == 1 ? psi[0] : psi[t]; }

  void validate() const;  // DimensionMismatch
  ReSystem period(int t) const;  // constant system of period t
};

// x_t = Φ0 + Φ1 x_{t-1} + Φε ε_t
struct VarSolution {
  Vec phi0;
  Mat phi1;
  Mat phi_eps;
};

struct ReSolution {
  std::vector<VarSolution> periods;  // one (constant), T (per period) or ns (per regime)
  bool existence = false;
  bool uniqueness = false;
  std::vector<int> n_explosive;      // per period
  std::vector<std::string> warnings;

  const VarSolution& at(int t) const { return periods.size() == 1 ? periods[0] : periods[t]; }
};

}  // namespace ftvp::re
