#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ftvp/factor/factor_model.hpp"
#include "ftvp/numerics/random.hpp"
#include "ftvp/tvp/gibbs.hpp"
#include "ftvp/tvp/layout.hpp"

namespace ftvp::forecast {

struct PathDraw {
  Mat y;  // H x n
  bool explosive = false;
};

// Shared conventions: `tail` holds the last p observations (last row most
// recent). Parameter noise and observation shocks come from separate child
// streams of `rng`, so models that share a seed also share their ε draws.
// `deterministic` switches every noise term off.
struct PredictOptions {
  double guard = 1e6;  // |y| above this flags the path as explosive
  bool deterministic = false;
};

// θ_{T+h} = θ0 + Λ f_{T+h} + ω, f_{T+h} = ρ f_{T+h-1} + η.
PathDraw predict_factor(const factor::FactorTvpModel& fm, int n, int p, const Vec& f_T, const Mat& tail, int H,
                        Rng& rng, const PredictOptions& opt = {});

// θ_{T+h} = θ_{T+h-1} + ω with ω ~ N(0, blockdiag(Ω_b, Ω_a, Ω_h)).
PathDraw predict_rw(const Vec& theta_T, const tvp::OmegaBlocks& omega, int n, int p, const Mat& tail, int H,
                    Rng& rng, const PredictOptions& opt = {});

// Constant parameters; shocks A^{-1} diag(exp(h))^{1/2} ε.
PathDraw predict_cp(const tvp::VarCoefficients& v, const Mat& A, const Vec& h, const Mat& tail, int H, Rng& rng,
                    const PredictOptions& opt = {});

struct PredictiveDraws {
  std::string model;
  int origin = -1;
  uint64_t seed = 0;
  int H = 0, n = 0;
  Mat draws;  // n_sim x (H n), column h n + i is variable i at horizon h + 1
  std::vector<char> explosive;

  int n_sim() const { return int(draws.rows()); }
  Vec cell(int h, int i) const { return draws.col(h * n + i); }  // h is 0-based
  Mat mean() const;  // H x n Monte Carlo average
};

}  // namespace ftvp::forecast
