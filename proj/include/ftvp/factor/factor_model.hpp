#pragma once

#include <string>
#include <vector>

#include "ftvp/numerics/linalg.hpp"
#include "ftvp/tvp/gibbs.hpp"
#include "ftvp/tvp/layout.hpp"

namespace ftvp::factor {

enum class Grouping { Common, Grouped };

// q < 0 selects the smallest q whose cumulative variance share reaches
// share_threshold, capped per group.
struct FactorSpec {
  Grouping grouping = Grouping::Grouped;
  int q_common = -1;
  int q_b = -1, q_a = -1, q_h = -1;
  double share_threshold = 0.9;
  int cap_common = 8;
  int cap_b = 4, cap_a = 2, cap_h = 2;
};

struct FactorDynamics {
  Mat rho;  // q x q
  Mat H;    // q x q innovation covariance
  Mat se;   // q x q standard errors of rho
  double radius = 0.0;
  bool degenerate = false;  // exact fit (e.g. a constant factor path)
};

// f_t = ρ f_{t-1} + η_t by least squares without intercept.
// Needs T >= 2q + 2; throws RankDeficientRegressors on collinear factors.
FactorDynamics fit_factor_dynamics(const Mat& f);

// One block of θ with its own principal components. Inside the block each
// series is standardized, z = (θ - mean) / scale, and the standardized
// loadings V are orthonormal (V'V = I). In original units Λ = diag(scale) V,
// and factors are f_t = V' z_t.
struct FactorGroup {
  std::string name;
  int offset = 0, size = 0, q = 0;
  Vec mean, scale;
  Mat V;        // size x q
  Mat lambda;   // size x q
  Mat factors;  // T x q
  FactorDynamics dyn;
  Vec eig;      // eigenvalues of the standardized covariance, descending
  Vec shares;   // cumulative shares
};

struct FactorTvpModel {
  Grouping grouping = Grouping::Common;
  int m = 0, T = 0;
  std::vector<FactorGroup> groups;
  Vec theta0;    // m
  Mat lambda;    // m x q_total, block diagonal for Grouped
  Mat factors;   // T x q_total
  Mat rho, H;    // block diagonal
  Vec omega;     // idiosyncratic variances, m
  Mat residual;  // T x m
  Vec r2;        // per parameter

  int q_total() const { return int(lambda.cols()); }
  // f = V' diag(scale)^{-1} (θ - θ0), group by group
  Vec project(const Vec& theta) const;
  // Least squares in original units, argmin |θ - θ0 - Λ f|. Used for single
  // posterior draws: the standardized projection above divides by the scale of
  // the posterior-mean path, which amplifies draw noise in nearly constant
  // series, while this one reconstructs an orthogonal projection of θ - θ0.
  Vec project_draw(const Vec& theta) const;
  Vec reconstruct(const Vec& f) const { return theta0 + lambda * f; }
};

// Blocks of θ used for the Grouped model: b, a, h (empty blocks dropped).
std::vector<std::pair<int, int>> group_ranges(const tvp::TvpVarSpec& spec);

// Principal-component extraction on a T x m path. Grouped needs the spec for
// its block boundaries; Common ignores it. Throws RankTooLow when a requested
// q exceeds the numerical rank of its (scaled, uncentered) block,
// InvalidArgument when T < q + 2 or q > m / 2. Automatic choices never exceed
// the rank of the centered block; in the Grouped model the largest automatic
// group is trimmed until the total fits within m / 2.
FactorTvpModel extract_factors(const Mat& theta, const FactorSpec& fs, const tvp::TvpVarSpec* spec = nullptr);
FactorTvpModel extract_factors(const tvp::PosteriorDraws& draws, const FactorSpec& fs);

// Number of standardized eigenvalues above the Marchenko-Pastur upper edge
// (1 + sqrt(m / T))² inflated by `margin`.
int noise_edge_count(const Vec& eig, int T, int m, double margin = 0.1);

// Smallest q with cumulative share >= threshold, capped.
int share_rule(const Vec& cum_shares, double threshold, int cap);

struct GroupScree {
  std::string name;
  Mat eig_q;      // 3 x K: 16/50/84% quantiles of standardized eigenvalues
  Mat share_q;    // 3 x K: quantiles of cumulative shares
  Vec trace_q;    // 3: quantiles of the unstandardized covariance trace
  double median_q = 0;  // median of the per-draw share-rule choice
  std::vector<int> rule_q;  // per draw
};

struct FactorabilityReport {
  std::vector<GroupScree> groups;
  Vec r2;  // per parameter, from the posterior-mean extraction
  int n_draws = 0;
};

// Needs at least 50 paths (TooFewDraws otherwise).
FactorabilityReport factorability(const std::vector<tvp::TvpPath>& paths, const tvp::TvpVarSpec& spec,
                                  const FactorSpec& fs);

}  // namespace ftvp::factor
