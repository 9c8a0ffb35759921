#pragma once

#include "ftvp/re/gensys.hpp"

namespace ftvp::re {

// Regime-switching linear model with regime s today and s' tomorrow:
//   0 = E_t[ F0(s,s') + F1(s,s') y_t + F2(s,s') y_{t+1} + F3(s,s') y_{t-1}
//            + F4(s,s') e_t + F5(s,s') e_{t+1} ]
//   e_t = G e_{t-1} + Σ^{1/2} ε_t,   P(s_{t+1} = s' | s_t = s) = T(s, s').
// Every F member is indexed [s][s']. F3 may be left empty (no lagged y).
struct RsModel {
  std::vector<std::vector<Vec>> F0;
  std::vector<std::vector<Mat>> F1, F2, F3, F4, F5;
  Mat G;
  Mat Sigma;
  Mat T;

  int n_regimes() const { return int(T.rows()); }
  int ny() const { return int(F1.at(0).at(0).rows()); }
  int ne() const { return int(G.rows()); }
  void validate() const;
};

// Solves the regime-contingent stacked system (one block of y per regime,
// expectations weighted by T) with a single QZ call. Returns one VarSolution
// per regime in x = (y, e) coordinates:
//   Φ0(s) = [c_s; 0],  Φ1(s) = [0, K_s; 0, G],  Φε(s) = [J_s; Σ^{1/2}].
ReSolution solve_rs(const RsModel& model, const SolveOptions& opt = {});

}  // namespace ftvp::re
