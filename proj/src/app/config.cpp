#include "ftvp/app/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "ftvp/app/hash.hpp"
#include "ftvp/numerics/error.hpp"

namespace ftvp::app {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& m) { throw Error(Errc::InvalidConfig, m); }

// Reads known keys of one JSON object and rejects the rest.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) bad(where() + " must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    const std::string k = where(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) bad(k + " must be a boolean");
      out = v.get<bool>();
    } else if constexpr (std::is_same_v<T, uint64_t>) {
      if (!v.is_number_unsigned()) bad(k + " must be a non-negative integer");
      out = v.get<uint64_t>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) bad(k + " must be an integer");
      out = v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) bad(k + " must be a number");
      out = v.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) bad(k + " must be a string");
      out = v.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::vector<int>>) {
      if (!v.is_array()) bad(k + " must be an array");
      out.clear();
      for (const auto& x : v) {
        if (!x.is_number_integer()) bad(k + " must hold integers");
        out.push_back(x.get<int>());
      }
    } else {
      static_assert(std::is_same_v<T, std::vector<std::string>>);
      if (!v.is_array()) bad(k + " must be an array");
      out.clear();
      for (const auto& x : v) {
        if (!x.is_string()) bad(k + " must hold strings");
        out.push_back(x.get<std::string>());
      }
    }
  }

  Obj sub(const char* key) {
    seen_.insert(key);
    static const json empty = json::object();
    return Obj(j_.contains(key) ? j_.at(key) : empty, where(key));
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) bad("unknown key " + where(k));
  }

 private:
  std::string where(const std::string& key = "") const {
    if (key.empty()) return path_.empty() ? "config" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

RunConfig config_from_json(const json& j) {
  RunConfig c;
  Obj root(j, "");
  root.get("model", c.model);
  root.get("n", c.n);
  root.get("p", c.p);
  root.get("seed", c.seed);
  root.get("threads", c.threads);
  root.get("output_dir", c.output_dir);
  root.get("training_rows", c.training_rows);
  {
    Obj d = root.sub("data");
    d.get("source", c.data.source);
    d.get("csv", c.data.csv);
    d.get("codes", c.data.codes);
    d.get("dgp", c.data.dgp);
    d.get("T", c.data.T);
    d.get("h0", c.data.h0);
    d.finish();
  }
  {
    Obj d = root.sub("prior");
    d.get("kappa_b", c.prior.kappa_b);
    d.get("kappa_a", c.prior.kappa_a);
    d.get("kappa_h", c.prior.kappa_h);
    d.get("variance_mult", c.prior.variance_mult);
    d.get("nu_b", c.prior.nu_b);
    d.get("nu_h", c.prior.nu_h);
    d.finish();
  }
  {
    Obj d = root.sub("mcmc");
    d.get("iterations", c.mcmc.iterations);
    d.get("burn_in", c.mcmc.burn_in);
    d.get("thin", c.mcmc.thin);
    d.get("path_stride", c.mcmc.path_stride);
    d.get("sample_kappas", c.mcmc.sample_kappas);
    d.get("kappa_step", c.mcmc.kappa_step);
    d.get("reject_explosive", c.mcmc.reject_explosive);
    d.get("explosive_radius", c.mcmc.explosive_radius);
    d.get("h_guard", c.mcmc.h_guard);
    d.finish();
  }
  {
    Obj d = root.sub("factors");
    d.get("q_common", c.factors.q_common);
    d.get("q_b", c.factors.q_b);
    d.get("q_a", c.factors.q_a);
    d.get("q_h", c.factors.q_h);
    d.get("share_threshold", c.factors.share_threshold);
    d.get("cap_common", c.factors.cap_common);
    d.get("cap_b", c.factors.cap_b);
    d.get("cap_a", c.factors.cap_a);
    d.get("cap_h", c.factors.cap_h);
    d.finish();
  }
  {
    Obj d = root.sub("forecast");
    d.get("models", c.forecast.models);
    d.get("first_origin", c.forecast.first_origin);
    d.get("last_origin", c.forecast.last_origin);
    d.get("H", c.forecast.H);
    d.get("n_sim", c.forecast.n_sim);
    d.get("reestimate_every", c.forecast.reestimate_every);
    d.get("factor_state", c.forecast.factor_state);
    d.finish();
  }
  {
    Obj d = root.sub("evaluate");
    d.get("benchmark", c.evaluate.benchmark);
    d.get("horizons", c.evaluate.horizons);
    d.get("level", c.evaluate.level);
    d.finish();
  }
  {
    Obj d = root.sub("irf");
    d.get("shock", c.irf.shock);
    d.get("horizon", c.irf.horizon);
    d.get("norm", c.irf.norm);
    d.finish();
  }
  root.finish();
  c.validate();
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["model"] = c.model;
  j["n"] = c.n;
  j["p"] = c.p;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["output_dir"] = c.output_dir;
  j["training_rows"] = c.training_rows;
  j["data"] = {{"source", c.data.source}, {"csv", c.data.csv}, {"codes", c.data.codes},
               {"dgp", c.data.dgp},       {"T", c.data.T},     {"h0", c.data.h0}};
  j["prior"] = {{"kappa_b", c.prior.kappa_b}, {"kappa_a", c.prior.kappa_a},
                {"kappa_h", c.prior.kappa_h}, {"variance_mult", c.prior.variance_mult},
                {"nu_b", c.prior.nu_b},       {"nu_h", c.prior.nu_h}};
  j["mcmc"] = {{"iterations", c.mcmc.iterations},
               {"burn_in", c.mcmc.burn_in},
               {"thin", c.mcmc.thin},
               {"path_stride", c.mcmc.path_stride},
               {"sample_kappas", c.mcmc.sample_kappas},
               {"kappa_step", c.mcmc.kappa_step},
               {"reject_explosive", c.mcmc.reject_explosive},
               {"explosive_radius", c.mcmc.explosive_radius},
               {"h_guard", c.mcmc.h_guard}};
  j["factors"] = {{"q_common", c.factors.q_common},
                  {"q_b", c.factors.q_b},
                  {"q_a", c.factors.q_a},
                  {"q_h", c.factors.q_h},
                  {"share_threshold", c.factors.share_threshold},
                  {"cap_common", c.factors.cap_common},
                  {"cap_b", c.factors.cap_b},
                  {"cap_a", c.factors.cap_a},
                  {"cap_h", c.factors.cap_h}};
  j["forecast"] = {{"models", c.forecast.models},
                   {"first_origin", c.forecast.first_origin},
                   {"last_origin", c.forecast.last_origin},
                   {"H", c.forecast.H},
                   {"n_sim", c.forecast.n_sim},
                   {"reestimate_every", c.forecast.reestimate_every},
                   {"factor_state", c.forecast.factor_state}};
  j["evaluate"] = {{"benchmark", c.evaluate.benchmark},
                   {"horizons", c.evaluate.horizons},
                   {"level", c.evaluate.level}};
  j["irf"] = {{"shock", c.irf.shock}, {"horizon", c.irf.horizon}, {"norm", c.irf.norm}};
  return j;
}

void RunConfig::validate() const {
  forecast::parse_model(model);
  if (n < 1) bad("n must be >= 1");
  if (p < 1) bad("p must be >= 1");
  if (threads < 1) bad("threads must be >= 1");
  if (training_rows < 2 * (n * p + 1)) bad("training_rows must be at least 2 (n p + 1)");
  if (data.source != "simulate" && data.source != "csv") bad("data.source must be 'simulate' or 'csv'");
  if (data.source == "csv" && data.csv.empty()) bad("data.csv is required when data.source is 'csv'");
  if (data.dgp != "cp" && data.dgp != "rw" && data.dgp != "factor") bad("data.dgp must be 'cp', 'rw' or 'factor'");
  if (data.T <= training_rows) bad("data.T must exceed training_rows");
  for (int code : data.codes)
    if (code != 0 && code != 1 && code != 4 && code != 5) bad("data.codes must be 0, 1, 4 or 5");
  if (prior.kappa_b <= 0 || prior.kappa_a <= 0 || prior.kappa_h <= 0) bad("kappas must be positive");
  if (prior.variance_mult <= 0) bad("prior.variance_mult must be positive");
  mcmc.validate();
  if (factors.share_threshold <= 0 || factors.share_threshold > 1) bad("factors.share_threshold must be in (0, 1]");
  if (forecast.models.empty()) bad("forecast.models is empty");
  for (const auto& m : forecast.models) forecast::parse_model(m);
  if (forecast.H < 1) bad("forecast.H must be >= 1");
  if (forecast.n_sim < 1) bad("forecast.n_sim must be >= 1");
  if (forecast.reestimate_every < 1) bad("forecast.reestimate_every must be >= 1");
  if (forecast.factor_state != "mean" && forecast.factor_state != "draw") bad("forecast.factor_state must be 'mean' or 'draw'");
  if (evaluate.horizons.empty()) bad("evaluate.horizons is empty");
  for (int h : evaluate.horizons)
    if (h < 1 || h > forecast.H) bad("evaluate.horizons must lie in 1..forecast.H");
  if (!(evaluate.level > 0 && evaluate.level < 1)) bad("evaluate.level must be in (0, 1)");
  if (irf.shock < 0 || irf.shock >= n) bad("irf.shock must index a variable");
  if (irf.horizon < 0) bad("irf.horizon must be >= 0");
  irf::parse_norm(irf.norm);
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::Io, "cannot open " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    bad(path + ": " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const RunConfig& c) {
  json j = config_to_json(c);
  j.erase("threads");
  j.erase("output_dir");
  return sha256_hex(j.dump());
}

forecast::RecursiveConfig recursive_config(const RunConfig& c, int T) {
  forecast::RecursiveConfig r;
  r.p = c.p;
  r.models.clear();
  for (const auto& m : c.forecast.models) r.models.push_back(forecast::parse_model(m));
  r.training_rows = c.training_rows;
  r.H = c.forecast.H;
  r.last_origin = c.forecast.last_origin >= 0 ? c.forecast.last_origin : T - 1 - r.H;
  r.first_origin = c.forecast.first_origin >= 0 ? c.forecast.first_origin
                                                : std::max(r.training_rows + 1, r.last_origin - 19);
  r.n_sim = c.forecast.n_sim;
  r.mcmc = c.mcmc;
  r.prior = c.prior;
  r.common = factor_spec(c, factor::Grouping::Common);
  r.grouped = factor_spec(c, factor::Grouping::Grouped);
  r.factor_state = c.forecast.factor_state == "draw" ? forecast::FactorState::Draw : forecast::FactorState::Mean;
  r.reestimate_every = c.forecast.reestimate_every;
  r.threads = c.threads;
  r.seed = c.seed;
  r.validate(T);
  return r;
}

factor::FactorSpec factor_spec(const RunConfig& c, factor::Grouping g) {
  factor::FactorSpec f = c.factors;
  f.grouping = g;
  return f;
}

}  // namespace ftvp::app
