// ftvp: command-line front end for the pipeline stages.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "ftvp/app/config.hpp"
#include "ftvp/app/pipeline.hpp"
#include "ftvp/numerics/error.hpp"

using namespace ftvp;

namespace {

struct Overrides {
  std::string config, out;
  uint64_t seed = 0;
  int threads = 0;
  double kappa_b = 0, kappa_a = 0, kappa_h = 0;
  int q = -2;
  std::vector<int> horizons;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "run seed (overrides the config)");
  sub->add_option("--out", o.out, "output directory (overrides the config)");
  sub->add_option("--threads", o.threads, "worker threads (default: FTVP_THREADS or the config)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--kappa-b", o.kappa_b, "prior scale on the coefficient random walk")->check(CLI::PositiveNumber);
  sub->add_option("--kappa-a", o.kappa_a, "prior scale on the contemporaneous terms")->check(CLI::PositiveNumber);
  sub->add_option("--kappa-h", o.kappa_h, "prior scale on the log variances")->check(CLI::PositiveNumber);
  sub->add_option("--q", o.q, "number of common factors (-1 = automatic)");
  sub->add_option("--horizons", o.horizons, "evaluation horizons");
}

app::RunConfig resolve(const Overrides& o, CLI::App* sub) {
  app::RunConfig c = o.config.empty() ? app::RunConfig{} : app::load_config(o.config);
  if (const char* env = std::getenv("FTVP_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1 && sub->count("--threads") == 0) c.threads = t;
  }
  if (sub->count("--seed")) c.seed = o.seed;
  if (sub->count("--out")) c.output_dir = o.out;
  if (sub->count("--threads")) c.threads = o.threads;
  if (sub->count("--kappa-b")) c.prior.kappa_b = o.kappa_b;
  if (sub->count("--kappa-a")) c.prior.kappa_a = o.kappa_a;
  if (sub->count("--kappa-h")) c.prior.kappa_h = o.kappa_h;
  if (sub->count("--q")) c.factors.q_common = o.q;
  if (sub->count("--horizons")) c.evaluate.horizons = o.horizons;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Time-varying parameter VAR toolkit: simulation, estimation, factor reduction, forecasting"};
  cli.require_subcommand(1);
  Overrides o;
  int order = 1;
  std::string model = "ncg";

  std::vector<CLI::App*> subs;
  subs.push_back(cli.add_subcommand("run", "run every stage in order"));
  for (const auto& st : app::kStages) subs.push_back(cli.add_subcommand(st, "run the " + st + " stage"));
  auto* theory = cli.add_subcommand("theory-check", "structural checks of the growth model");
  theory->add_option("--model", model, "model")->check(CLI::IsMember({"ncg"}));
  theory->add_option("--order", order, "approximation order")->check(CLI::IsMember({1, 2}));
  subs.push_back(theory);
  for (auto* s : subs) add_common(s, o);

  CLI11_PARSE(cli, argc, argv);
  try {
    CLI::App* sub = cli.get_subcommands().front();
    const app::RunConfig c = resolve(o, sub);
    int code = 0;
    if (sub->get_name() == "run") {
      code = app::run_pipeline(c, std::cerr);
    } else {
      app::PipelineOptions opt;
      opt.theory_order = order;
      opt.theory_model = model;
      code = app::run_stage(sub->get_name(), c, std::cerr, opt);
    }
    std::cout << "manifest " << app::manifest_hash(c.output_dir) << "\n";
    return code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
