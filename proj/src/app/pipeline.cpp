#include "ftvp/app/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>

#include "ftvp/app/hash.hpp"
#include "ftvp/app/store.hpp"
#include "ftvp/app/theory.hpp"
#include "ftvp/eval/report.hpp"
#include "ftvp/factor/factor_model.hpp"
#include "ftvp/irf/irf.hpp"
#include "ftvp/numerics/error.hpp"
#include "ftvp/numerics/random.hpp"
#include "ftvp/tvp/gibbs.hpp"
#include "ftvp/tvp/prior.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ftvp::app {

namespace {

json mat_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

std::vector<std::string> theta_names(const tvp::TvpVarSpec& s) {
  std::vector<std::string> out;
  for (int i = 0; i < s.n; ++i) {
    out.push_back("c" + std::to_string(i + 1));
    for (int l = 1; l <= s.p; ++l)
      for (int j = 0; j < s.n; ++j)
        out.push_back("B" + std::to_string(l) + "_" + std::to_string(i + 1) + std::to_string(j + 1));
  }
  for (int r = 1; r < s.n; ++r)
    for (int c = 0; c < r; ++c) out.push_back("a" + std::to_string(r + 1) + std::to_string(c + 1));
  for (int i = 0; i < s.n; ++i) out.push_back("h" + std::to_string(i + 1));
  return out;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  if (!(f << s)) throw Error(Errc::Io, "cannot write " + p.string());
}

json read_json(const fs::path& p) {
  std::ifstream f(p);
  if (!f) throw Error(Errc::Io, "missing " + p.string() + " (run the earlier stage first)");
  return json::parse(f);
}

Table read_stage_table(const fs::path& p) {
  if (!fs::exists(p)) throw Error(Errc::Io, "missing " + p.string() + " (run the earlier stage first)");
  return read_table(p.string());
}

TimeSeriesPanel load_data(const RunConfig& c, const fs::path& dir) {
  const fs::path p = dir / "data.csv";
  if (!fs::exists(p)) throw Error(Errc::Io, "missing " + p.string() + " (run simulate first)");
  TimeSeriesPanel panel = ingest_file(p.string());
  if (panel.n() != c.n)
    throw Error(Errc::InvalidConfig, "data has " + std::to_string(panel.n()) + " series, config says n = " + std::to_string(c.n));
  return panel;
}

tvp::VarCoefficients start_coefficients(int n, int p) {
  tvp::VarCoefficients v;
  v.c = Vec::Constant(n, 0.1);
  v.B.assign(p, Mat::Zero(n, n));
  v.B[0].diagonal().setConstant(0.5);
  for (int i = 0; i + 1 < n; ++i) v.B[0](i, i + 1) = 0.1;
  return v;
}

using Outputs = std::map<std::string, std::string>;  // file -> sha256

struct StageContext {
  const RunConfig& c;
  fs::path dir;
  uint64_t seed;
  std::ostream& log;
  const PipelineOptions& opt;
  Outputs out;
  json extra = json::object();

  void written(const std::string& name) {
    out[name] = sha256_file((dir / name).string());
    if (fs::exists(dir / (name + ".json"))) out[name + ".json"] = sha256_file((dir / (name + ".json")).string());
  }
};

void stage_simulate(StageContext& s) {
  const RunConfig& c = s.c;
  TimeSeriesPanel panel;
  if (c.data.source == "csv") {
    panel = ingest_file(c.data.csv, c.data.codes);
    if (panel.n() != c.n) throw Error(Errc::InvalidConfig, "csv has " + std::to_string(panel.n()) + " series, config says n = " + std::to_string(c.n));
  } else {
    const auto sim = simulate_data(c, s.seed);
    panel.values = sim.data;
    Period per{1960, 1};
    for (int t = 0; t < sim.data.rows(); ++t, per = per.next()) panel.periods.push_back(per);
    for (int i = 0; i < c.n; ++i) panel.names.push_back("y" + std::to_string(i + 1));
    panel.codes.assign(c.n, 1);
    tvp::TvpVarSpec spec{c.n, c.p, sim.truth.T()};
    write_table((s.dir / "truth.bin").string(), sim.truth.theta_matrix(), theta_names(spec),
                {{"dgp", c.data.dgp}, {"first_row", c.p}});
    s.written("truth.bin");
  }
  std::ofstream f(s.dir / "data.csv", std::ios::binary);
  write_panel(panel, f);
  f.close();
  s.written("data.csv");
  s.extra["rows"] = panel.T();
}

void stage_estimate(StageContext& s) {
  const RunConfig& c = s.c;
  const TimeSeriesPanel panel = load_data(c, s.dir);
  const Mat& D = panel.values;
  const int N = int(D.rows());
  if (forecast::parse_model(c.model) == forecast::ModelKind::CP) {
    const auto cp = forecast::fit_cp(D, c.p);
    json j = {{"model", "CP"}, {"c", vec_json(cp.coef.c)}, {"A", mat_json(cp.A)}, {"h", vec_json(cp.h)}};
    json B = json::array();
    for (const auto& b : cp.coef.B) B.push_back(mat_json(b));
    j["B"] = B;
    write_text(s.dir / "cp.json", j.dump(2) + "\n");
    s.written("cp.json");
    return;
  }
  if (N <= c.training_rows + c.p) throw Error(Errc::InsufficientTrainingData, "no rows left after the training sample");
  const auto prior = tvp::calibrate_prior(D.topRows(c.training_rows), c.p, c.prior);
  const Mat sample = D.middleRows(c.training_rows - c.p, N - c.training_rows + c.p);
  s.log << "estimate: " << N - c.training_rows << " periods, " << c.mcmc.iterations << " iterations\n";
  const auto draws = tvp::gibbs_estimate(sample, c.p, prior, c.mcmc, s.seed);
  const auto names = theta_names(draws.spec);

  write_table((s.dir / "posterior_mean.bin").string(), draws.theta_mean, names);
  write_table((s.dir / "posterior_sd.bin").string(), draws.theta_sd, names);
  write_table((s.dir / "theta_last.bin").string(), draws.theta_last, names);
  const int T = draws.spec.T, m = draws.spec.m();
  Mat paths(int(draws.paths.size()) * T, m + 2);
  std::vector<std::string> pn{"draw", "t"};
  pn.insert(pn.end(), names.begin(), names.end());
  for (size_t d = 0; d < draws.paths.size(); ++d) {
    const Mat th = draws.paths[d].theta_matrix();
    for (int t = 0; t < T; ++t) {
      paths(int(d) * T + t, 0) = draws.path_index[d];
      paths(int(d) * T + t, 1) = t;
      paths.row(int(d) * T + t).tail(m) = th.row(t);
    }
  }
  write_table((s.dir / "paths.bin").string(), paths, pn, {{"T", T}, {"paths", draws.paths.size()}});
  for (const char* f : {"posterior_mean.bin", "posterior_sd.bin", "theta_last.bin", "paths.bin"}) s.written(f);

  json ineff = json::object();
  for (const auto& e : draws.inefficiency) ineff[e.name] = e.value;
  json j = {{"model", c.model},
            {"n", c.n},
            {"p", c.p},
            {"T", T},
            {"first_period", panel.periods[c.training_rows].str()},
            {"n_draws", draws.n_draws},
            {"stored_paths", draws.paths.size()},
            {"rejected_draws", draws.rejected_draws},
            {"kappa_acceptance", draws.kappa_acceptance},
            {"inefficiency", ineff}};
  write_text(s.dir / "posterior.json", j.dump(2) + "\n");
  s.written("posterior.json");
}

void stage_factors(StageContext& s) {
  const RunConfig& c = s.c;
  const Table mean = read_stage_table(s.dir / "posterior_mean.bin");
  tvp::TvpVarSpec spec{c.n, c.p, int(mean.data.rows())};
  if (mean.data.cols() != spec.m()) throw Error(Errc::DimensionMismatch, "posterior does not match n and p");
  const auto g = forecast::parse_model(c.model) == forecast::ModelKind::GF ? factor::Grouping::Grouped
                                                                           : factor::Grouping::Common;
  const auto fm = factor::extract_factors(mean.data, factor_spec(c, g), &spec);
  const int q = fm.q_total();
  std::vector<std::string> fnames;
  for (int i = 0; i < q; ++i) fnames.push_back("f" + std::to_string(i + 1));
  write_table((s.dir / "factors.bin").string(), fm.factors, fnames);
  Mat load(spec.m(), q + 3);
  load << fm.theta0, fm.omega, fm.r2, fm.lambda;
  std::vector<std::string> ln{"theta0", "omega", "r2"};
  ln.insert(ln.end(), fnames.begin(), fnames.end());
  write_table((s.dir / "loadings.bin").string(), load, ln, {{"parameters", theta_names(spec)}});
  json groups = json::array();
  for (const auto& gr : fm.groups)
    groups.push_back({{"name", gr.name}, {"offset", gr.offset}, {"size", gr.size}, {"q", gr.q},
                      {"cumulative_shares", vec_json(gr.shares)}, {"radius", gr.dyn.radius}});
  json j = {{"grouping", g == factor::Grouping::Common ? "common" : "grouped"},
            {"q_total", q},
            {"groups", groups},
            {"rho", mat_json(fm.rho)},
            {"H", mat_json(fm.H)}};
  write_text(s.dir / "factors.json", j.dump(2) + "\n");
  for (const char* f : {"factors.bin", "loadings.bin", "factors.json"}) s.written(f);
}

void stage_forecast(StageContext& s) {
  const RunConfig& c = s.c;
  const TimeSeriesPanel panel = load_data(c, s.dir);
  auto rc = recursive_config(c, panel.T());
  rc.seed = s.seed;
  rc.mcmc.path_stride = 0;
  std::mutex mu;
  s.log << "forecast: origins " << rc.first_origin << ".." << rc.last_origin << "\n";
  const auto run = forecast::run_recursive(panel.values, rc, [&](int o) {
    std::lock_guard<std::mutex> lock(mu);
    s.log << "  origin " << o << " done\n";
  });
  save_run(run, s.dir.string(), panel.names);
  s.written("forecast.json");
  s.written("realized.bin");
  for (const auto& m : run.models) s.written("draws_" + m + ".bin");
  s.extra["origin_failures"] = run.failures.size();
}

void stage_evaluate(StageContext& s) {
  const RunConfig& c = s.c;
  const auto run = load_run(s.dir.string());
  const json meta = read_json(s.dir / "forecast.json");
  eval::EvalConfig ec;
  ec.benchmark = c.evaluate.benchmark;
  ec.horizons = c.evaluate.horizons;
  ec.level = c.evaluate.level;
  ec.variables = meta.at("names").get<std::vector<std::string>>();
  if (run.model_index(ec.benchmark) < 0) throw Error(Errc::InvalidConfig, "benchmark " + ec.benchmark + " was not forecast");
  const auto rep = eval::evaluate(run, ec);
  std::ofstream f(s.dir / "eval.csv", std::ios::binary);
  eval::write_csv(rep, f);
  f.close();
  write_text(s.dir / "eval_table.txt", eval::format_table(rep));
  s.written("eval.csv");
  s.written("eval_table.txt");
}

void stage_irf(StageContext& s) {
  const RunConfig& c = s.c;
  const Table mean = read_stage_table(s.dir / "posterior_mean.bin");
  const Table paths = read_stage_table(s.dir / "paths.bin");
  tvp::TvpVarSpec spec{c.n, c.p, int(mean.data.rows())};
  const int T = spec.T, m = spec.m();
  if (mean.data.cols() != m || paths.data.cols() != m + 2) throw Error(Errc::DimensionMismatch, "posterior does not match n and p");
  const auto norm = irf::parse_norm(c.irf.norm);
  irf::IrfSurface surf;
  const int np = int(paths.data.rows()) / T;
  if (np > 0) {
    std::vector<tvp::TvpPath> draws;
    for (int d = 0; d < np; ++d)
      draws.push_back(tvp::TvpPath::from_theta(paths.data.block(d * T, 2, T, m), spec));
    surf = irf::irf_quantiles(draws, c.n, c.p, c.irf.shock, c.irf.horizon, norm);
  }
  surf.point = irf::irf_surface(tvp::TvpPath::from_theta(mean.data, spec), c.n, c.p, c.irf.shock, c.irf.horizon, norm).point;
  surf.norm = norm;
  surf.shock = c.irf.shock;
  surf.n = c.n;
  surf.horizon = c.irf.horizon;
  std::vector<std::string> names;
  if (fs::exists(s.dir / "data.csv")) names = load_data(c, s.dir).names;
  std::ofstream f(s.dir / "irf.csv", std::ios::binary);
  irf::write_csv(surf, f, names);
  f.close();
  s.written("irf.csv");
  s.extra["quantile_paths"] = np;
}

bool stage_theory(StageContext& s) {
  if (s.opt.theory_model != "ncg") throw Error(Errc::InvalidArgument, "theory-check supports --model ncg only");
  const auto r = theory_check_ncg(s.opt.theory_order, dsge::NcgParams{}, 500, s.seed);
  const std::string name = "theory_order" + std::to_string(r.order) + ".json";
  json j = {{"model", "ncg"}, {"order", r.order}, {"pass", r.pass}, {"details", r.details}};
  write_text(s.dir / name, j.dump(2) + "\n");
  s.written(name);
  s.log << "theory-check order " << r.order << ": " << (r.pass ? "pass" : "FAIL") << " " << r.details.dump() << "\n";
  return r.pass;
}

}  // namespace

uint64_t stage_seed(uint64_t seed, const std::string& stage) {
  static const std::vector<std::string> order{"simulate", "estimate", "factors", "forecast",
                                              "evaluate", "irf",      "theory-check"};
  for (size_t i = 0; i < order.size(); ++i)
    if (order[i] == stage) return Rng(seed).split(i + 1).next_u64();
  throw Error(Errc::InvalidArgument, "unknown stage '" + stage + "'");
}

tvp::SimulatedTvp simulate_data(const RunConfig& c, uint64_t seed) {
  const int n = c.n, p = c.p, T = c.data.T;
  const tvp::VarCoefficients v = start_coefficients(n, p);
  tvp::TvpVarSpec spec{n, p, T};
  const Vec a0 = Vec::Constant(spec.na(), 0.3), h0 = Vec::Constant(n, c.data.h0);
  if (c.data.dgp == "cp") {
    tvp::SimulatedTvp s;
    s.data = tvp::simulate_cp_var(v, tvp::unpack_a(a0, n), h0, T, 100, seed);
    s.truth.b = pack_b(v).transpose().replicate(T, 1);
    s.truth.a = a0.transpose().replicate(T, 1);
    s.truth.h = h0.transpose().replicate(T, 1);
    return s;
  }
  if (c.data.dgp == "rw") {
    tvp::RwTvpDgp g;
    g.start = v;
    g.a0 = a0;
    g.h0 = h0;
    g.omega.b = Mat::Identity(spec.nb(), spec.nb()) * 2e-6;
    for (int i = 1; i < n; ++i) g.omega.a.push_back(Mat::Identity(i, i) * 1e-4);
    g.omega.h = Mat::Identity(n, n) * 5e-4;
    return tvp::simulate_rw_tvp(g, T, seed);
  }
  tvp::FactorTvpDgp g;
  g.n = n;
  g.p = p;
  g.theta0.resize(spec.m());
  g.theta0 << pack_b(v), a0, h0;
  g.lambda = Mat::Zero(spec.m(), 2);
  for (int i = 0; i < n; ++i) {
    const int off = i * spec.k();
    g.lambda(off, 0) = i % 2 == 0 ? 0.3 : -0.3;
    for (int j = 0; j < n; ++j) g.lambda(off + 1 + j, 0) = j == i ? 0.15 : (j > i ? 0.075 : -0.075);
    g.lambda(spec.nb() + spec.na() + i, 1) = 0.5;
  }
  g.rho = Mat::Zero(2, 2);
  g.rho.diagonal() << 0.9, 0.95;
  g.H = Mat::Zero(2, 2);
  g.H.diagonal() << 1 - 0.9 * 0.9, 1 - 0.95 * 0.95;
  return tvp::simulate_factor_tvp(g, T, seed);
}

void save_run(const forecast::RecursiveRun& run, const std::string& dir_s, const std::vector<std::string>& names) {
  const fs::path dir(dir_s);
  const int K = int(run.origins.size()), H = run.H, n = run.n;
  auto var = [&](int i) { return i < int(names.size()) ? names[i] : "y" + std::to_string(i + 1); };
  json failures = json::array();
  for (const auto& f : run.failures) failures.push_back({{"origin", f.origin}, {"model", f.model}, {"message", f.message}});
  json seeds = json::object();
  for (size_t m = 0; m < run.models.size(); ++m) {
    json sm = json::array();
    int rows = 0;
    for (const auto& cell : run.cells[m]) {
      sm.push_back(cell.seed);
      rows = std::max(rows, cell.n_sim());
    }
    seeds[run.models[m]] = sm;
    Mat D = Mat::Constant(rows, K * (H * n + 1), NAN);
    std::vector<std::string> cols;
    for (int k = 0; k < K; ++k) {
      const std::string o = "o" + std::to_string(run.origins[k]) + ":";
      for (int h = 0; h < H; ++h)
        for (int i = 0; i < n; ++i) cols.push_back(o + "h" + std::to_string(h + 1) + ":" + var(i));
      cols.push_back(o + "explosive");
      const auto& cell = run.cells[m][k];
      if (cell.n_sim() == 0) continue;
      D.block(0, k * (H * n + 1), cell.n_sim(), H * n) = cell.draws;
      for (int r = 0; r < cell.n_sim(); ++r)
        D(r, k * (H * n + 1) + H * n) = r < int(cell.explosive.size()) ? double(cell.explosive[r]) : 0.0;
    }
    write_table((dir / ("draws_" + run.models[m] + ".bin")).string(), D, cols, {{"model", run.models[m]}});
  }
  Mat R(K, H * n);
  std::vector<std::string> rc;
  for (int h = 0; h < H; ++h)
    for (int i = 0; i < n; ++i) rc.push_back("h" + std::to_string(h + 1) + ":" + var(i));
  for (int k = 0; k < K; ++k)
    for (int h = 0; h < H; ++h)
      for (int i = 0; i < n; ++i) R(k, h * n + i) = run.realized[k](h, i);
  write_table((dir / "realized.bin").string(), R, rc, {{"origins", run.origins}});
  json j = {{"H", H},
            {"n", n},
            {"seed", run.seed},
            {"origins", run.origins},
            {"models", run.models},
            {"names", names},
            {"failures", failures},
            {"cell_seeds", seeds}};
  write_text(dir / "forecast.json", j.dump(2) + "\n");
}

forecast::RecursiveRun load_run(const std::string& dir_s) {
  const fs::path dir(dir_s);
  const json j = read_json(dir / "forecast.json");
  forecast::RecursiveRun run;
  run.H = j.at("H").get<int>();
  run.n = j.at("n").get<int>();
  run.seed = j.at("seed").get<uint64_t>();
  run.origins = j.at("origins").get<std::vector<int>>();
  run.models = j.at("models").get<std::vector<std::string>>();
  for (const auto& f : j.at("failures"))
    run.failures.push_back({f.at("origin").get<int>(), f.at("model").get<std::string>(), f.at("message").get<std::string>()});
  const int K = int(run.origins.size()), H = run.H, n = run.n;
  const Table R = read_stage_table(dir / "realized.bin");
  if (R.data.rows() != K || R.data.cols() != H * n) throw Error(Errc::DimensionMismatch, "realized.bin does not match forecast.json");
  for (int k = 0; k < K; ++k) {
    Mat r(H, n);
    for (int h = 0; h < H; ++h)
      for (int i = 0; i < n; ++i) r(h, i) = R.data(k, h * n + i);
    run.realized.push_back(r);
  }
  for (const auto& m : run.models) {
    const Table D = read_stage_table(dir / ("draws_" + m + ".bin"));
    if (D.data.cols() != K * (H * n + 1)) throw Error(Errc::DimensionMismatch, "draws_" + m + ".bin has the wrong shape");
    const auto seeds = j.at("cell_seeds").at(m).get<std::vector<uint64_t>>();
    std::vector<forecast::PredictiveDraws> cells(K);
    for (int k = 0; k < K; ++k) {
      auto& c = cells[k];
      c.model = m;
      c.origin = run.origins[k];
      c.seed = seeds.at(k);
      c.H = H;
      c.n = n;
      bool failed = false;
      for (const auto& f : run.failures) failed |= f.origin == c.origin && f.model == m;
      if (failed || D.data.rows() == 0) continue;
      c.draws = D.data.block(0, k * (H * n + 1), D.data.rows(), H * n);
      for (int r = 0; r < D.data.rows(); ++r) c.explosive.push_back(D.data(r, k * (H * n + 1) + H * n) != 0.0);
    }
    run.cells.push_back(std::move(cells));
  }
  return run;
}

int run_stage(const std::string& stage, const RunConfig& c, std::ostream& log, const PipelineOptions& opt) {
  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  const std::string chash = config_hash(c);
  json manifest;
  if (fs::exists(dir / "manifest.json")) {
    manifest = read_json(dir / "manifest.json");
    if (manifest.value("config_hash", "") != chash) manifest = json();
  }
  if (manifest.is_null()) manifest = {{"config_hash", chash}, {"seed", c.seed}, {"stages", json::object()}};
  json canon = config_to_json(c);
  canon.erase("threads");
  canon.erase("output_dir");
  write_text(dir / "config.json", canon.dump(2) + "\n");

  StageContext s{c, dir, stage_seed(c.seed, stage), log, opt, {}};
  json entry = {{"seed", s.seed}};
  int code = 0;
  try {
    bool ok = true;
    if (stage == "simulate") stage_simulate(s);
    else if (stage == "estimate") stage_estimate(s);
    else if (stage == "factors") stage_factors(s);
    else if (stage == "forecast") stage_forecast(s);
    else if (stage == "evaluate") stage_evaluate(s);
    else if (stage == "irf") stage_irf(s);
    else if (stage == "theory-check") ok = stage_theory(s);
    else throw Error(Errc::InvalidArgument, "unknown stage '" + stage + "'");
    entry["status"] = ok ? "ok" : "failed";
    if (!ok) code = 1;
  } catch (const std::exception& e) {
    entry["status"] = "failed";
    entry["error"] = e.what();
    log << stage << " failed: " << e.what() << "\n";
    code = 2;
  }
  entry["outputs"] = s.out;
  for (const auto& [k, v] : s.extra.items()) entry[k] = v;
  std::string key = stage;
  if (stage == "theory-check") key += "-order" + std::to_string(opt.theory_order);
  manifest["stages"][key] = entry;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  return code;
}

int run_pipeline(const RunConfig& c, std::ostream& log) {
  for (const auto& st : kStages) {
    if (forecast::parse_model(c.model) == forecast::ModelKind::CP && (st == "factors" || st == "irf")) continue;
    log << "== " << st << "\n";
    if (int code = run_stage(st, c, log)) return code;
  }
  return 0;
}

std::string manifest_hash(const std::string& dir) { return sha256_file((fs::path(dir) / "manifest.json").string()); }

}  // namespace ftvp::app
