#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "ftvp/numerics/linalg.hpp"

namespace ftvp::dsge {

// e_t = G_t e_{t-1} + Σ_t^{1/2} ε_t. G and Sigma hold one entry (constant) or T.
struct ContinuousAR {
  std::vector<Mat> G;
  std::vector<Mat> Sigma;
  Vec e0;  // empty means zero
};

struct MarkovChain {
  std::vector<Vec> states;  // value attached to each regime
  Mat T;                    // T(s, s') = P(s_{t+1} = s' | s_t = s)
  int initial = 0;
};

using ExoProcess = std::variant<ContinuousAR, MarkovChain>;

struct ExoPath {
  Mat values;               // T x dim
  std::vector<int> regime;  // Markov chains only
};

void validate_exo(const ExoProcess& p);

ExoPath simulate_exo(const ExoProcess& p, int T, uint64_t seed);

ContinuousAR ar1_process(double rho, double sigma);

}  // namespace ftvp::dsge
