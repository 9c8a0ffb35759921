#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ftvp/factor/factor_model.hpp"
#include "ftvp/forecast/predict.hpp"
#include "ftvp/tvp/gibbs.hpp"
#include "ftvp/tvp/prior.hpp"

namespace ftvp::forecast {

enum class ModelKind { CP, RW, CF, GF };

// Where the factor models take f_T from. Mean uses the factor at T of the
// posterior-mean extraction for every draw; Draw projects each retained θ_T
// draw onto the loadings by least squares.
enum class FactorState { Mean, Draw };

std::string model_name(ModelKind k);  // "CP", "RW-TVP", "CF-TVP", "GF-TVP"
ModelKind parse_model(const std::string& s);

// Constant-parameter VAR by OLS with its residual covariance written as
// A^{-1} diag(exp(h)) A^{-1}'.
struct CpVar {
  tvp::VarCoefficients coef;
  Mat A;
  Vec h;
};
CpVar fit_cp(const Mat& data, int p);

struct RecursiveConfig {
  int p = 2;
  std::vector<ModelKind> models{ModelKind::CP, ModelKind::RW, ModelKind::CF, ModelKind::GF};
  int training_rows = 40;  // prior calibration sample, rows [0, training_rows)
  // Origins are data row indices: the forecast made at origin o uses rows
  // [0, o] and targets rows o + 1 .. o + H.
  int first_origin = -1, last_origin = -1;
  int H = 8;
  int n_sim = 1000;
  tvp::McmcConfig mcmc;
  tvp::PriorKnobs prior;
  factor::FactorSpec common{factor::Grouping::Common};
  factor::FactorSpec grouped{factor::Grouping::Grouped};
  FactorState factor_state = FactorState::Mean;
  uint64_t seed = 1;
  // 1 re-estimates at every origin. k > 1 re-estimates every k-th origin and
  // in between reuses the latest posterior with the newest data tail
  // (approximate: θ_T is not filtered forward).
  int reestimate_every = 1;
  PredictOptions predict;
  int threads = 1;

  void validate(int T) const;
};

struct OriginFailure {
  int origin;
  std::string model;
  std::string message;
};

struct RecursiveRun {
  int H = 0, n = 0;
  uint64_t seed = 0;
  std::vector<int> origins;
  std::vector<std::string> models;
  // cells[model][k] holds the draws at origins[k]; empty draws mark a failure.
  std::vector<std::vector<PredictiveDraws>> cells;
  std::vector<Mat> realized;  // per origin, H x n (NaN beyond the sample)
  std::vector<OriginFailure> failures;

  int model_index(const std::string& name) const;
};

// Progress callback receives each completed origin.
RecursiveRun run_recursive(const Mat& data, const RecursiveConfig& cfg,
                           const std::function<void(int)>& progress = {});

}  // namespace ftvp::forecast
