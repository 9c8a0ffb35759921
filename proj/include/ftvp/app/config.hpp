#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftvp/factor/factor_model.hpp"
#include "ftvp/forecast/recursive.hpp"
#include "ftvp/irf/irf.hpp"
#include "ftvp/tvp/gibbs.hpp"
#include "ftvp/tvp/prior.hpp"

namespace ftvp::app {

struct DataConfig {
  std::string source = "simulate";  // "simulate" or "csv"
  std::string csv;                  // path, relative to the working directory
  std::vector<int> codes;           // transformation codes, one per series
  std::string dgp = "rw";           // simulate: "cp", "rw" or "factor"
  int T = 200;                      // simulated rows after the p presample rows
  double h0 = -1.0;                 // starting log variance of the simulated shocks
};

struct ForecastConfig {
  std::vector<std::string> models{"CP", "RW-TVP", "CF-TVP", "GF-TVP"};
  int first_origin = -1, last_origin = -1;  // data rows; -1 picks the last 20 feasible
  int H = 8;
  int n_sim = 1000;
  int reestimate_every = 1;
  std::string factor_state = "mean";  // "mean" or "draw"
};

struct EvalSection {
  std::string benchmark = "CP";
  std::vector<int> horizons{1, 2, 4, 8};
  double level = 0.68;
};

struct IrfConfig {
  int shock = 0;
  int horizon = 20;
  std::string norm = "OneSd";
};

struct RunConfig {
  std::string model = "RW-TVP";  // CP | RW-TVP | CF-TVP | GF-TVP
  int n = 2, p = 1;
  DataConfig data;
  tvp::PriorKnobs prior;
  int training_rows = 40;
  tvp::McmcConfig mcmc;
  factor::FactorSpec factors;
  ForecastConfig forecast;
  EvalSection evaluate;
  IrfConfig irf;
  uint64_t seed = 1;
  int threads = 1;
  std::string output_dir = "out";

  void validate() const;  // InvalidConfig
};

// Every object is checked against its schema: unknown keys, wrong types and
// out-of-range values throw InvalidConfig. Missing keys keep their defaults.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);

// Hash of the settings that determine results: threads and output_dir are
// left out, so runs that differ only in those share a hash.
std::string config_hash(const RunConfig& c);

// Model objects derived from the config.
forecast::RecursiveConfig recursive_config(const RunConfig& c, int T);
factor::FactorSpec factor_spec(const RunConfig& c, factor::Grouping g);

}  // namespace ftvp::app
