#include "ftvp/forecast/recursive.hpp"

#include <atomic>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include "ftvp/numerics/error.hpp"
#include "ftvp/tvp/ols.hpp"

namespace ftvp::forecast {

std::string model_name(ModelKind k) {
  switch (k) {
    case ModelKind::CP: return "CP";
    case ModelKind::RW: return "RW-TVP";
    case ModelKind::CF: return "CF-TVP";
    case ModelKind::GF: return "GF-TVP";
  }
  return "?";
}

ModelKind parse_model(const std::string& s) {
  for (ModelKind k : {ModelKind::CP, ModelKind::RW, ModelKind::CF, ModelKind::GF})
    if (s == model_name(k)) return k;
  throw Error(Errc::InvalidConfig, "unknown model variant '" + s + "'");
}

CpVar fit_cp(const Mat& data, int p) {
  tvp::OlsResult ols = tvp::ols_var(data, p);
  const int n = int(data.cols());
  CpVar cp;
  cp.coef = tvp::unpack_b(Eigen::Map<const Vec>(ols.coef.data(), ols.coef.size()), n, p);
  Mat s = ols.sigma;
  symmetrize(s);
  Eigen::LLT<Mat> llt(s);
  if (llt.info() != Eigen::Success) throw Error(Errc::NonPsdCovariance, "CP residual covariance is singular");
  Mat L = llt.matrixL();
  Vec d = L.diagonal();
  Mat unit = L * d.cwiseInverse().asDiagonal();
  cp.A = unit.triangularView<Eigen::UnitLower>().solve(Mat::Identity(n, n));
  cp.h = (2.0 * d.array().log()).matrix();
  return cp;
}

void RecursiveConfig::validate(int T) const {
  auto bad = [](const std::string& m) { throw Error(Errc::InvalidConfig, m); };
  if (p < 1) bad("p must be >= 1");
  if (H < 1) bad("H must be >= 1");
  if (n_sim < 1) bad("n_sim must be >= 1");
  if (models.empty()) bad("no models requested");
  if (reestimate_every < 1) bad("reestimate_every must be >= 1");
  if (threads < 1) bad("threads must be >= 1");
  if (training_rows < p + 1) bad("training sample too short");
  if (first_origin < training_rows + 1 || first_origin > last_origin)
    bad("validation window must start after the training sample and be non-empty");
  if (last_origin + H > T - 1) bad("validation window must end at least H rows before the end of the data");
}

int RecursiveRun::model_index(const std::string& name) const {
  for (size_t i = 0; i < models.size(); ++i)
    if (models[i] == name) return int(i);
  return -1;
}

namespace {

bool is_tvp(ModelKind k) { return k != ModelKind::CP; }

struct Estimate {
  std::optional<tvp::PosteriorDraws> draws;
  std::string error;
  std::optional<factor::FactorTvpModel> cf, gf;
  std::string cf_error, gf_error;
};

struct ChunkResult {
  std::vector<OriginFailure> failures;
};

}  // namespace

RecursiveRun run_recursive(const Mat& data, const RecursiveConfig& cfg, const std::function<void(int)>& progress) {
  const int T = int(data.rows()), n = int(data.cols()), p = cfg.p;
  cfg.validate(T);
  if (!data.allFinite()) throw Error(Errc::MissingValue, "data contain non-finite values");

  RecursiveRun run;
  run.H = cfg.H;
  run.n = n;
  run.seed = cfg.seed;
  for (int o = cfg.first_origin; o <= cfg.last_origin; ++o) run.origins.push_back(o);
  for (ModelKind k : cfg.models) run.models.push_back(model_name(k));
  const int K = int(run.origins.size()), M = int(cfg.models.size());
  run.cells.assign(M, std::vector<PredictiveDraws>(K));
  run.realized.resize(K);
  for (int k = 0; k < K; ++k) {
    Mat r = Mat::Constant(cfg.H, n, std::numeric_limits<double>::quiet_NaN());
    for (int h = 0; h < cfg.H; ++h)
      if (run.origins[k] + h + 1 < T) r.row(h) = data.row(run.origins[k] + h + 1);
    run.realized[k] = r;
  }

  bool any_tvp = false;
  for (ModelKind k : cfg.models) any_tvp = any_tvp || is_tvp(k);
  std::optional<tvp::PriorSpec> prior;
  if (any_tvp) prior = tvp::calibrate_prior(data.topRows(cfg.training_rows), p, cfg.prior);
  tvp::McmcConfig mcmc = cfg.mcmc;
  mcmc.path_stride = 0;  // forecasting needs θ_T and the pointwise mean only

  const Rng root(cfg.seed);
  std::vector<std::pair<int, int>> chunks;  // [k0, k1) sharing one estimation
  for (int k = 0; k < K; k += cfg.reestimate_every) chunks.push_back({k, std::min(K, k + cfg.reestimate_every)});
  std::vector<ChunkResult> chunk_out(chunks.size());

  auto want = [&](ModelKind kind) {
    for (ModelKind k : cfg.models)
      if (k == kind) return true;
    return false;
  };

  auto do_chunk = [&](size_t c) {
    auto [k0, k1] = chunks[c];
    const int o_est = run.origins[k0];
    Estimate est;
    if (any_tvp) {
      try {
        Mat sample = data.middleRows(cfg.training_rows - p, o_est - cfg.training_rows + 1 + p);
        Rng gs = root.split(uint64_t(o_est)).split(1000);
        est.draws = tvp::gibbs_estimate(sample, p, *prior, mcmc, gs.next_u64());
      } catch (const std::exception& e) {
        est.error = e.what();
      }
      if (est.draws) {
        if (want(ModelKind::CF)) {
          try {
            est.cf = factor::extract_factors(*est.draws, cfg.common);
          } catch (const std::exception& e) {
            est.cf_error = e.what();
          }
        }
        if (want(ModelKind::GF)) {
          try {
            est.gf = factor::extract_factors(*est.draws, cfg.grouped);
          } catch (const std::exception& e) {
            est.gf_error = e.what();
          }
        }
      }
    }

    for (int k = k0; k < k1; ++k) {
      const int o = run.origins[k];
      Mat tail = data.middleRows(o - p + 1, p);
      const Rng orng = root.split(uint64_t(o));
      for (int mi = 0; mi < M; ++mi) {
        const ModelKind kind = cfg.models[mi];
        PredictiveDraws pd;
        pd.model = run.models[mi];
        pd.origin = o;
        pd.H = cfg.H;
        pd.n = n;
        const Rng mrng = orng.split(10 + uint64_t(kind));
        pd.seed = mix64(mrng.seed() ^ mix64(mrng.stream()));
        auto fail = [&](const std::string& msg) { chunk_out[c].failures.push_back({o, pd.model, msg}); };
        try {
          std::optional<CpVar> cp;
          const factor::FactorTvpModel* fm = nullptr;
          if (kind == ModelKind::CP) {
            cp = fit_cp(data.topRows(o + 1), p);
          } else {
            if (!est.draws) throw std::runtime_error(est.error);
            if (kind == ModelKind::CF) {
              if (!est.cf) throw std::runtime_error(est.cf_error);
              fm = &*est.cf;
            } else if (kind == ModelKind::GF) {
              if (!est.gf) throw std::runtime_error(est.gf_error);
              fm = &*est.gf;
            }
          }
          pd.draws.resize(cfg.n_sim, cfg.H * n);
          pd.explosive.assign(cfg.n_sim, 0);
          for (int i = 0; i < cfg.n_sim; ++i) {
            Rng drng = mrng.split(uint64_t(i));
            PathDraw path;
            if (cp) {
              path = predict_cp(cp->coef, cp->A, cp->h, tail, cfg.H, drng, cfg.predict);
            } else {
              const int j = i % est.draws->n_draws;
              Vec th = est.draws->theta_last.row(j).transpose();
              if (fm)
                path = predict_factor(*fm, n, p,
                                      cfg.factor_state == FactorState::Mean ? Vec(fm->factors.bottomRows(1).transpose())
                                                                           : fm->project_draw(th),
                                      tail, cfg.H, drng, cfg.predict);
              else
                path = predict_rw(th, est.draws->omega[j], n, p, tail, cfg.H, drng, cfg.predict);
            }
            for (int h = 0; h < cfg.H; ++h) pd.draws.row(i).segment(h * n, n) = path.y.row(h);
            pd.explosive[i] = path.explosive;
          }
          if (!pd.draws.allFinite()) throw Error(Errc::NumericalOverflow, "non-finite predictive draw", o);
          run.cells[mi][k] = std::move(pd);
        } catch (const std::exception& e) {
          fail(e.what());
          run.cells[mi][k] = PredictiveDraws{pd.model, o, pd.seed, cfg.H, n, Mat(), {}};
        }
      }
    }
  };

  std::mutex mu;
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t c; (c = next++) < chunks.size();) {
      do_chunk(c);
      if (progress) {
        std::lock_guard<std::mutex> lk(mu);
        for (int k = chunks[c].first; k < chunks[c].second; ++k) progress(run.origins[k]);
      }
    }
  };
  const int nt = std::min<int>(cfg.threads, int(chunks.size()));
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& c : chunk_out) run.failures.insert(run.failures.end(), c.failures.begin(), c.failures.end());
  return run;
}

}  // namespace ftvp::forecast
