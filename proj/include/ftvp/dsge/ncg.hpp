#pragma once

#include <string>
#include <vector>

#include "ftvp/dsge/poly.hpp"
#include "ftvp/numerics/linalg.hpp"

namespace ftvp::dsge {

struct NcgParams {
  double alpha = 0.3;
  double beta = 0.99;
  double tau = 2.0;
  double delta = 0.025;
  double rho_z = 0.9;
  double sigma_z = 0.01;

  void validate() const;  // throws InfeasibleParams
};

struct SteadyState {
  double r, k, c, y;
  double k_star, c_star;  // k/y, c/y
  double gamma;           // 1 - β(1-δ)
  double nu1, nu2, nu3;
  double omega1, omega2;
};

SteadyState ncg_steady_state(const NcgParams& p);

// How the resource constraint is scaled. kNormalized divides the whole
// constraint by steady-state output, so capital and TFP enter with
// coefficients α and 1. kPrinted keeps the α k* and y factors of the
// published display; it is only consistent when y = 1.
enum class ResourceForm { kNormalized, kPrinted };

// Linearized NCG system in gensys form
//   Γ0_t x_t = K + Γ1_t x_{t-1} + Ψ ε_t + Π η_t,
// with Γ0_t / Γ1_t entries stored as polynomials in (ĉ_t, k̂_t, k̂_{t+1}, z_t).
// x_t = (ĉ, k̂', z, E ĉ', [E ĉ'², E ĉ'z'], [E ĉ'³, E ĉ'z'², E ĉ'²z']).
struct LinearizedSystem {
  int order = 1;
  NcgParams params;
  SteadyState ss;
  ResourceForm form = ResourceForm::kNormalized;
  std::vector<std::string> labels;
  std::vector<std::vector<StatePoly>> gamma0;
  std::vector<std::vector<StatePoly>> gamma1;
  Vec K;
  Mat Psi;
  Mat Pi;

  int nx() const { return int(labels.size()); }
  int n_eta() const { return int(Pi.cols()); }
  Mat gamma0_at(const PathPoint& x) const;
  Mat gamma1_at(const PathPoint& x) const;
  // ψ_i coefficients of the two structural rows, i = 1..8 (ψ_1 multiplies
  // k̂_t; ψ_2..ψ_8 are the entries of the first two rows of Γ0).
  StatePoly psi(int i) const;
  int max_degree() const;
  // (row, col) entries of Γ0 and Γ1 that are not constant.
  std::vector<std::pair<int, int>> varying_gamma0() const;
  std::vector<std::pair<int, int>> varying_gamma1() const;
};

LinearizedSystem build_linearized_system(const NcgParams& p, int order,
                                         ResourceForm form = ResourceForm::kNormalized);

}  // namespace ftvp::dsge
