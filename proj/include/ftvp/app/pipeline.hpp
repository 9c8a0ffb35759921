#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftvp/app/config.hpp"
#include "ftvp/app/panel.hpp"
#include "ftvp/forecast/recursive.hpp"
#include "ftvp/tvp/simulate.hpp"

namespace ftvp::app {

// Stages and what they leave in the output directory:
//   simulate      data.csv (+ truth.bin for simulated data); with a csv
//                 source the transformed panel is written instead
//   estimate      posterior_mean.bin, posterior_sd.bin, theta_last.bin,
//                 paths.bin, posterior.json (TVP models) or cp.json (CP)
//   factors       factors.bin, loadings.bin, factors.json
//   forecast      forecast.json, realized.bin, draws_<model>.bin
//   evaluate      eval.csv, eval_table.txt
//   irf           irf.csv
//   theory-check  theory_order<k>.json
// Each stage reads what earlier stages wrote, so it can be rerun on its own.
// manifest.json records the config hash, the seeds and the SHA-256 of every
// output; it holds no timestamps, paths or thread counts.
inline const std::vector<std::string> kStages{"simulate", "estimate", "factors", "forecast", "evaluate", "irf"};

struct PipelineOptions {
  int theory_order = 1;
  std::string theory_model = "ncg";
};

// Seed of a stage, derived from the run seed.
uint64_t stage_seed(uint64_t seed, const std::string& stage);

// Built-in data generators for `simulate` (n variables, p lags). The rw
// process noise sits at the scale the default prior expects; the factor
// process drives intercepts and own lags with one factor and every log
// variance with another.
tvp::SimulatedTvp simulate_data(const RunConfig& c, uint64_t seed);

// Runs one stage and updates the manifest. Returns 0 on success; on failure
// the error is recorded in the manifest and a nonzero code is returned.
int run_stage(const std::string& stage, const RunConfig& c, std::ostream& log, const PipelineOptions& opt = {});

// Every stage of kStages in order, stopping at the first failure.
int run_pipeline(const RunConfig& c, std::ostream& log);

// SHA-256 of manifest.json in `dir`.
std::string manifest_hash(const std::string& dir);

// Round trip of a recursive run through the forecast files.
void save_run(const forecast::RecursiveRun& run, const std::string& dir, const std::vector<std::string>& names);
forecast::RecursiveRun load_run(const std::string& dir);

}  // namespace ftvp::app
