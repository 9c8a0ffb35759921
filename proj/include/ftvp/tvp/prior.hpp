#pragma once

#include <vector>

#include "ftvp/numerics/linalg.hpp"
#include "ftvp/tvp/layout.hpp"

namespace ftvp::tvp {

struct PriorKnobs {
  double kappa_b = 0.01;
  double kappa_a = 0.1;
  double kappa_h = 0.01;
  double variance_mult = 4.0;  // on V(b_OLS) and V(a_OLS)
  double nu_b = 40.0;          // raised to dim + 1 when smaller
  double nu_h = 4.0;           // raised to n + 1 when smaller
};

// Priors of the RW-TVP-VAR:
//   b_0 ~ N(b_ols, mult V_b), a_0 ~ N(a_ols, mult V_a), h_0 ~ N(h_ols, I)
//   Ω_b ~ IW(κ_b² ν_b V_b, ν_b), Ω_a,i ~ IW(κ_a² (i+1) V_a,i, i+1), Ω_h ~ IW(κ_h² ν_h I, ν_h)
// Blocks of Ω_a follow the rows of A: block i (i = 1..n-1) has size i.
struct PriorSpec {
  int n = 0, p = 1;
  Vec b_mean;
  Mat b_cov;
  Vec a_mean;
  Mat a_cov;  // block diagonal
  Vec h_mean;
  Mat h_cov;

  Mat b_ols_cov;               // V(b_OLS) before the multiplier
  std::vector<Mat> a_ols_cov;  // V(a_i,OLS) per block

  double kappa_b = 0, kappa_a = 0, kappa_h = 0;
  double variance_mult = 4.0;
  Mat omega_b_scale;
  double omega_b_df = 0;
  std::vector<Mat> omega_a_scale;
  std::vector<double> omega_a_df;
  Mat omega_h_scale;
  double omega_h_df = 0;

  int training_rows = 0;
  bool degenerate = false;  // exact fit in the training sample

  void validate() const;  // PSD covariances, df >= dim + 1
  // Recomputes the IW scales for new κ values (used by the hierarchical step).
  void set_kappas(double kb, double ka, double kh);
};

// Fixed-coefficient VAR(p) on the training rows. Needs at least 2 (n p + 1)
// rows; throws InsufficientTrainingData otherwise.
PriorSpec calibrate_prior(const Mat& training, int p, const PriorKnobs& knobs = {});

}  // namespace ftvp::tvp
