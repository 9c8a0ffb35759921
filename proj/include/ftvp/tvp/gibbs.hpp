#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ftvp/numerics/linalg.hpp"
#include "ftvp/tvp/layout.hpp"
#include "ftvp/tvp/prior.hpp"

namespace ftvp::tvp {

// Process-noise covariances of the random walks.
struct OmegaBlocks {
  Mat b;
  std::vector<Mat> a;  // block i has size i + 1 (rows 2..n of A)
  Mat h;
};

struct McmcConfig {
  int iterations = 30000;
  int burn_in = 15000;
  int thin = 5;
  // Keep the full path of every k-th retained draw (0 keeps none).
  int path_stride = 1;
  bool sample_kappas = false;
  double kappa_step = 0.1;
  bool reject_explosive = false;
  double explosive_radius = 1.1;
  double h_guard = 50.0;  // |h| above this is an overflow
  // Hold Ω at these values instead of sampling it.
  std::optional<OmegaBlocks> fixed_omega;

  int retained() const;
  void validate() const;
};

struct Inefficiency {
  std::string name;
  double value;
};

struct PosteriorDraws {
  TvpVarSpec spec;
  McmcConfig config;
  uint64_t seed = 0;
  int n_draws = 0;

  Mat theta_last;            // n_draws x m, θ_T of each retained draw
  std::vector<TvpPath> paths;  // stored subset
  std::vector<int> path_index;  // retained-draw index of each stored path
  std::vector<OmegaBlocks> omega;
  Mat kappas;  // n_draws x 3 (b, a, h)
  Mat theta_mean;  // T x m posterior mean
  Mat theta_sd;    // T x m posterior sd

  int rejected_draws = 0;
  double kappa_acceptance = 0.0;
  std::vector<Inefficiency> inefficiency;

  TvpPath mean_path() const { return TvpPath::from_theta(theta_mean, spec); }
};

// Gibbs sampler for the RW-TVP-VAR with stochastic volatility. data holds
// T + p rows; the first p rows are presample lags, so path row t refers to
// data row t + p. Order within a sweep: (b, a, Ω), mixture indicators, h.
// Throws NumericalOverflow (index = period, message names the draw).
PosteriorDraws gibbs_estimate(const Mat& data, int p, const PriorSpec& prior, const McmcConfig& cfg,
                              uint64_t seed);

// Inefficiency factor 1 + 2 Σ w_k ρ_k, Parzen window with bandwidth
// min(4% of the chain, 20 n^{1/5}), at least 2. Returns 1 for a constant chain.
double inefficiency_factor(const Vec& chain);

}  // namespace ftvp::tvp
