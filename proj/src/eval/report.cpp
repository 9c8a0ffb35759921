#include "ftvp/eval/report.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "ftvp/numerics/error.hpp"

namespace ftvp::eval {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Series {
  std::vector<int> k;  // origin slots
  std::vector<double> err, crps;
  std::vector<Vec> draws;
  std::vector<double> y;
};

Series collect(const forecast::RecursiveRun& run, int mi, int i, int h) {
  Series s;
  for (size_t k = 0; k < run.origins.size(); ++k) {
    const double y = run.realized[k](h - 1, i);
    const auto& pd = run.cells[mi][k];
    if (!std::isfinite(y) || pd.n_sim() == 0) continue;
    Vec d = pd.cell(h - 1, i);
    s.k.push_back(int(k));
    s.err.push_back(d.mean() - y);
    s.crps.push_back(d.size() >= 100 ? crps(d, y) : kNaN);
    s.draws.push_back(std::move(d));
    s.y.push_back(y);
  }
  return s;
}

// Values of a and b on the slots both series contain.
void common(const Series& a, const std::vector<double>& va, const Series& b, const std::vector<double>& vb, Vec& oa,
            Vec& ob) {
  std::vector<double> xa, xb;
  size_t j = 0;
  for (size_t i = 0; i < a.k.size(); ++i) {
    while (j < b.k.size() && b.k[j] < a.k[i]) ++j;
    if (j < b.k.size() && b.k[j] == a.k[i]) {
      xa.push_back(va[i]);
      xb.push_back(vb[j]);
    }
  }
  oa = Eigen::Map<Vec>(xa.data(), Eigen::Index(xa.size()));
  ob = Eigen::Map<Vec>(xb.data(), Eigen::Index(xb.size()));
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return !v.empty();
}

}  // namespace

const EvalCell* EvalReport::find(const std::string& model, const std::string& variable, int horizon) const {
  for (const auto& c : cells)
    if (c.model == model && c.variable == variable && c.horizon == horizon) return &c;
  return nullptr;
}

EvalReport evaluate(const forecast::RecursiveRun& run, const EvalConfig& cfg) {
  const int n = run.n;
  std::vector<std::string> vars = cfg.variables;
  if (vars.empty())
    for (int i = 0; i < n; ++i) vars.push_back("y" + std::to_string(i + 1));
  if (int(vars.size()) != n) throw Error(Errc::InvalidConfig, "variable names do not match the data width");
  for (int h : cfg.horizons)
    if (h < 1 || h > run.H) throw Error(Errc::InvalidConfig, "evaluation horizon outside the forecast horizon");

  EvalReport rep;
  rep.benchmark = cfg.benchmark;
  rep.level = cfg.level;
  const int bi = run.model_index(cfg.benchmark);
  for (size_t mi = 0; mi < run.models.size(); ++mi)
    for (int i = 0; i < n; ++i)
      for (int h : cfg.horizons) {
        EvalCell c;
        c.model = run.models[mi];
        c.variable = vars[i];
        c.horizon = h;
        Series s = collect(run, int(mi), i, h);
        c.n_eval = int(s.k.size());
        const Vec e = Eigen::Map<Vec>(s.err.data(), Eigen::Index(s.err.size()));
        c.rmse = c.n_eval ? rmse(e) : kNaN;
        c.rmse_ratio = c.dm_stat = c.dm_p = c.crps_ratio = c.crps_p = kNaN;
        c.crps = all_finite(s.crps) ? Eigen::Map<Vec>(s.crps.data(), Eigen::Index(s.crps.size())).mean() : kNaN;

        bool enough_draws = c.n_eval >= 2;
        for (const auto& d : s.draws) enough_draws = enough_draws && d.size() >= 100;
        c.coverage = c.coverage_p = c.mean_length = kNaN;
        c.lr_cov = c.lr_ind = c.lr_cc = c.p_cov = c.p_ind = c.p_cc = kNaN;
        if (enough_draws) {
          IntervalResult ir = interval_eval(s.draws, Eigen::Map<Vec>(s.y.data(), Eigen::Index(s.y.size())), cfg.level, h);
          c.hits = ir.hits;
          c.coverage = ir.coverage;
          c.coverage_p = ir.t.p;
          c.mean_length = ir.mean_length;
          if (ir.n >= 20) {
            TestResult cov = lr_coverage(ir.hit_seq, cfg.level);
            c.lr_cov = cov.stat;
            c.p_cov = cov.p;
            try {
              ChristoffersenResult cr = christoffersen(ir.hit_seq, cfg.level);
              c.lr_ind = cr.lr_ind;
              c.lr_cc = cr.lr_cc;
              c.p_ind = cr.p_ind;
              c.p_cc = cr.p_cc;
            } catch (const Error& err) {
              if (err.code() != Errc::DegenerateHits) throw;
            }
          }
        }

        if (bi >= 0 && int(mi) == bi) {
          c.rmse_ratio = 1.0;
          c.crps_ratio = 1.0;
        } else if (bi >= 0) {
          Series b = collect(run, bi, i, h);
          Vec em, eb;
          common(s, s.err, b, b.err, em, eb);
          if (em.size() > 0) {
            const double rb = rmse(eb);
            c.rmse_ratio = rb > 0 ? rmse(em) / rb : kNaN;
          }
          if (em.size() >= 10) {
            try {
              TestResult dm = dm_test(eb.array().square().matrix(), em.array().square().matrix(), h);
              c.dm_stat = dm.stat;
              c.dm_p = dm.p;
            } catch (const Error& err) {
              if (err.code() != Errc::DegenerateLosses) throw;
            }
          }
          Vec cm, cb;
          common(s, s.crps, b, b.crps, cm, cb);
          if (cm.size() >= 2 && cm.allFinite() && cb.allFinite()) {
            c.crps_ratio = cb.mean() > 0 ? cm.mean() / cb.mean() : kNaN;
            try {
              TestResult t = crps_test(cm, cb, h);
              c.crps_p = t.p;
            } catch (const Error& err) {
              if (err.code() != Errc::DegenerateLosses) throw;
            }
          }
        }
        rep.cells.push_back(c);
      }
  return rep;
}

void write_csv(const EvalReport& r, std::ostream& os) {
  os << "model,variable,horizon,n_eval,rmse,rmse_ratio,dm_stat,dm_p,hits,coverage,coverage_p,mean_length,"
        "lr_cov,p_cov,lr_ind,p_ind,lr_cc,p_cc,crps,crps_ratio,crps_p\n";
  os << std::setprecision(12);
  for (const auto& c : r.cells) {
    os << c.model << ',' << c.variable << ',' << c.horizon << ',' << c.n_eval;
    for (double v : {c.rmse, c.rmse_ratio, c.dm_stat, c.dm_p}) os << ',' << v;
    os << ',' << c.hits;
    for (double v : {c.coverage, c.coverage_p, c.mean_length, c.lr_cov, c.p_cov, c.lr_ind, c.p_ind, c.lr_cc, c.p_cc,
                     c.crps, c.crps_ratio, c.crps_p})
      os << ',' << v;
    os << '\n';
  }
}

std::string format_table(const EvalReport& r) {
  std::vector<std::string> models, vars;
  std::vector<int> hs;
  auto add = [](auto& v, const auto& x) {
    for (const auto& y : v)
      if (y == x) return;
    v.push_back(x);
  };
  for (const auto& c : r.cells) {
    add(models, c.model);
    add(vars, c.variable);
    add(hs, c.horizon);
  }
  std::ostringstream os;
  os << std::fixed;
  auto cell = [&](double v, const std::string& st) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << v << st;
    os << std::setw(12) << s.str();
  };
  auto header = [&](const std::string& title) {
    os << title << '\n' << std::setw(10) << "";
    for (const auto& v : vars)
      for (int h : hs) os << std::setw(12) << (v + " h=" + std::to_string(h));
    os << '\n';
  };
  auto block = [&](const std::string& title, auto level, auto ratio, auto pval, bool bench_level) {
    header(title);
    for (const auto& m : models) {
      os << std::setw(10) << m;
      for (const auto& v : vars)
        for (int h : hs) {
          const EvalCell* c = r.find(m, v, h);
          if (bench_level && m == r.benchmark)
            cell(level(*c), "");
          else if (bench_level)
            cell(ratio(*c), stars(pval(*c)));
          else
            cell(level(*c), stars(pval(*c)));
        }
      os << '\n';
    }
    os << '\n';
  };
  block("RMSE (benchmark " + r.benchmark + " in levels, others as ratios)", [](const EvalCell& c) { return c.rmse; },
        [](const EvalCell& c) { return c.rmse_ratio; }, [](const EvalCell& c) { return c.dm_p; }, true);
  std::ostringstream lvl;
  lvl << std::setprecision(2) << r.level;
  block("Coverage of " + lvl.str() + " intervals", [](const EvalCell& c) { return c.coverage; },
        [](const EvalCell& c) { return c.coverage; }, [](const EvalCell& c) { return c.coverage_p; }, false);
  block("Interval length", [](const EvalCell& c) { return c.mean_length; }, [](const EvalCell& c) { return c.mean_length; },
        [](const EvalCell&) { return std::numeric_limits<double>::quiet_NaN(); }, false);
  block("CRPS (benchmark in levels, others as ratios)", [](const EvalCell& c) { return c.crps; },
        [](const EvalCell& c) { return c.crps_ratio; }, [](const EvalCell& c) { return c.crps_p; }, true);
  os << "Stars: *, **, *** at 10, 5 and 1 percent.\n";
  return os.str();
}

}  // namespace ftvp::eval
