#include "ftvp/factor/factor_model.hpp"

#include <algorithm>
#include <cmath>

#include "ftvp/numerics/error.hpp"
#include "ftvp/tvp/ols.hpp"

namespace ftvp::factor {

namespace {

struct Standardized {
  Vec mean, scale;
  Mat z;
};

Standardized standardize(const Mat& x) {
  Standardized s;
  const int T = int(x.rows());
  s.mean = x.colwise().mean().transpose();
  s.z = x.rowwise() - s.mean.transpose();
  s.scale = (s.z.colwise().squaredNorm() / T).transpose().cwiseSqrt();
  for (int j = 0; j < s.scale.size(); ++j) {
    // constant series cannot load on a factor
    if (s.scale[j] <= 1e-14 * std::max(1.0, std::abs(s.mean[j]))) {
      s.scale[j] = 1.0;
      s.z.col(j).setZero();
    } else {
      s.z.col(j) /= s.scale[j];
    }
  }
  return s;
}

Vec eigenvalues(const Mat& z, Mat* v = nullptr) {
  Eigen::BDCSVD<Mat> svd(z, v ? Eigen::ComputeThinV : 0);
  if (v) *v = svd.matrixV();
  return svd.singularValues().array().square() / double(z.rows());
}

Vec cumulative(const Vec& eig) {
  Vec c(eig.size());
  const double tot = eig.sum();
  double s = 0;
  for (int i = 0; i < eig.size(); ++i) {
    s += eig[i];
    c[i] = tot > 0 ? s / tot : 1.0;
  }
  if (c.size()) c[c.size() - 1] = 1.0;
  return c;
}

int rank_of(const Vec& eig) {
  if (eig.size() == 0 || eig[0] <= 0) return 0;
  int r = 0;
  // eigenvalues are squared singular values, so compare at the squared tolerance
  for (int i = 0; i < eig.size(); ++i)
    if (eig[i] > 1e-20 * eig[0]) ++r;
  return r;
}

// Sign convention: the largest-magnitude loading of each factor is positive.
void fix_signs(Mat& V) {
  for (int j = 0; j < V.cols(); ++j) {
    Eigen::Index i;
    V.col(j).cwiseAbs().maxCoeff(&i);
    if (V(i, j) < 0) V.col(j) *= -1.0;
  }
}

FactorGroup extract_group(const Mat& block, const std::string& name, int offset, int q_req, double thr, int cap) {
  const int T = int(block.rows()), size = int(block.cols());
  FactorGroup g;
  g.name = name;
  g.offset = offset;
  g.size = size;
  Standardized s = standardize(block);
  Mat Vall;
  g.eig = eigenvalues(s.z, &Vall);
  g.shares = cumulative(g.eig);
  const int rank = rank_of(g.eig);
  int q;
  if (q_req >= 0) {
    q = q_req;
    // the path's rank counts its level as well; factors past the centered rank carry rounding noise only
    Mat raw = block * s.scale.cwiseInverse().asDiagonal();
    const int path_rank = numerical_rank(raw, 1e-10);
    if (q > path_rank) throw Error(Errc::RankTooLow, name + ": numerical rank " + std::to_string(path_rank) +
                                                    " below requested q " + std::to_string(q));
  } else {
    q = std::min(share_rule(g.shares, thr, cap), rank);
  }
  if (T < q + 2) throw Error(Errc::InvalidArgument, name + ": path shorter than q + 2");
  g.q = q;
  g.mean = s.mean;
  g.scale = s.scale;
  g.V = Vall.leftCols(q);
  fix_signs(g.V);
  g.lambda = g.scale.asDiagonal() * g.V;
  g.factors = s.z * g.V;
  // dynamics only for factors inside the centered rank; the rest are rounding noise
  const int qd = std::min(q, rank);
  g.dyn.rho = Mat::Zero(q, q);
  g.dyn.H = Mat::Zero(q, q);
  g.dyn.se = Mat::Zero(q, q);
  g.dyn.degenerate = true;
  if (qd > 0 && T >= 2 * qd + 2) {
    FactorDynamics d = fit_factor_dynamics(g.factors.leftCols(qd));
    g.dyn.rho.topLeftCorner(qd, qd) = d.rho;
    g.dyn.H.topLeftCorner(qd, qd) = d.H;
    g.dyn.se.topLeftCorner(qd, qd) = d.se;
    g.dyn.radius = d.radius;
    g.dyn.degenerate = d.degenerate || qd < q;
  }
  return g;
}

void assemble(FactorTvpModel& mdl, const Mat& theta) {
  const int m = int(theta.cols()), T = int(theta.rows());
  int qt = 0;
  for (const auto& g : mdl.groups) qt += g.q;
  mdl.m = m;
  mdl.T = T;
  mdl.theta0 = Vec::Zero(m);
  mdl.lambda = Mat::Zero(m, qt);
  mdl.factors = Mat::Zero(T, qt);
  mdl.rho = Mat::Zero(qt, qt);
  mdl.H = Mat::Zero(qt, qt);
  int c = 0;
  for (const auto& g : mdl.groups) {
    mdl.theta0.segment(g.offset, g.size) = g.mean;
    mdl.lambda.block(g.offset, c, g.size, g.q) = g.lambda;
    mdl.factors.middleCols(c, g.q) = g.factors;
    mdl.rho.block(c, c, g.q, g.q) = g.dyn.rho;
    mdl.H.block(c, c, g.q, g.q) = g.dyn.H;
    c += g.q;
  }
  Mat fit = (mdl.factors * mdl.lambda.transpose()).rowwise() + mdl.theta0.transpose();
  mdl.residual = theta - fit;
  mdl.omega = (mdl.residual.colwise().squaredNorm() / T).transpose();
  mdl.r2.resize(m);
  for (int j = 0; j < m; ++j) {
    const double tot = (theta.col(j).array() - theta.col(j).mean()).square().sum() / T;
    mdl.r2[j] = tot > 0 ? 1.0 - mdl.omega[j] / tot : 1.0;
  }
}

}  // namespace

FactorDynamics fit_factor_dynamics(const Mat& f) {
  const int T = int(f.rows()), q = int(f.cols());
  if (q < 1) throw Error(Errc::InvalidArgument, "no factors");
  if (T < 2 * q + 2) throw Error(Errc::InvalidArgument, "need T >= 2q + 2");
  tvp::OlsResult r = tvp::ols_regression(f.bottomRows(T - 1), f.topRows(T - 1));
  FactorDynamics d;
  d.rho = r.coef.transpose();
  d.H = r.sigma;
  d.se = Mat(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) d.se(i, j) = r.se[i * q + j];
  d.radius = spectral_radius(d.rho);
  d.degenerate = r.degenerate;
  return d;
}

int share_rule(const Vec& cum, double thr, int cap) {
  int q = int(cum.size());
  for (int i = 0; i < cum.size(); ++i)
    if (cum[i] >= thr - 1e-12) {
      q = i + 1;
      break;
    }
  return std::min(q, cap);
}

int noise_edge_count(const Vec& eig, int T, int m, double margin) {
  const double edge = std::pow(1.0 + std::sqrt(double(m) / T), 2) * (1.0 + margin);
  int c = 0;
  for (int i = 0; i < eig.size(); ++i)
    if (eig[i] > edge) ++c;
  return c;
}

std::vector<std::pair<int, int>> group_ranges(const tvp::TvpVarSpec& spec) {
  std::vector<std::pair<int, int>> r;
  r.push_back({0, spec.nb()});
  if (spec.na() > 0) r.push_back({spec.nb(), spec.na()});
  r.push_back({spec.nb() + spec.na(), spec.nh()});
  return r;
}

Vec FactorTvpModel::project(const Vec& theta) const {
  Vec f(q_total());
  int c = 0;
  for (const auto& g : groups) {
    Vec z = (theta.segment(g.offset, g.size) - g.mean).cwiseQuotient(g.scale);
    f.segment(c, g.q) = g.V.transpose() * z;
    c += g.q;
  }
  return f;
}

Vec FactorTvpModel::project_draw(const Vec& theta) const {
  if (theta.size() != m) throw Error(Errc::DimensionMismatch, "theta has the wrong length");
  return lambda.completeOrthogonalDecomposition().solve(theta - theta0);
}

FactorTvpModel extract_factors(const Mat& theta, const FactorSpec& fs, const tvp::TvpVarSpec* spec) {
  if (!theta.allFinite()) throw Error(Errc::InvalidArgument, "path must be finite");
  const int m = int(theta.cols());
  FactorTvpModel mdl;
  mdl.grouping = fs.grouping;
  if (fs.grouping == Grouping::Common) {
    if (fs.q_common > m / 2) throw Error(Errc::InvalidArgument, "q must not exceed m / 2");
    mdl.groups.push_back(extract_group(theta, "common", 0, fs.q_common, fs.share_threshold,
                                       std::min(fs.cap_common, std::max(1, m / 2))));
  } else {
    if (!spec) throw Error(Errc::InvalidArgument, "grouped extraction needs the TVP layout");
    if (spec->m() != m) throw Error(Errc::DimensionMismatch, "path width does not match the layout");
    const char* names[] = {"b", "a", "h"};
    int qs[] = {fs.q_b, fs.q_a, fs.q_h};
    const int caps[] = {fs.cap_b, fs.cap_a, fs.cap_h};
    auto ranges = group_ranges(*spec);
    for (;;) {
      mdl.groups.clear();
      int total = 0, gi = 0;
      for (auto [off, size] : ranges) {
        // group_ranges drops an empty a block
        if (gi == 1 && spec->na() == 0) gi = 2;
        FactorGroup g = extract_group(theta.middleCols(off, size), names[gi], off, qs[gi], fs.share_threshold,
                                      std::min(caps[gi], std::max(1, size / 2)));
        total += g.q;
        mdl.groups.push_back(std::move(g));
        ++gi;
      }
      if (total <= m / 2) break;
      // trim the largest automatically chosen group and retry
      int worst = -1, wq = 1;
      for (const auto& g : mdl.groups) {
        const int k = g.name == "b" ? 0 : g.name == "a" ? 1 : 2;
        if ((k == 0 ? fs.q_b : k == 1 ? fs.q_a : fs.q_h) < 0 && g.q > wq) worst = k, wq = g.q;
      }
      if (worst < 0) throw Error(Errc::InvalidArgument, "q must not exceed m / 2");
      qs[worst] = wq - 1;
    }
  }
  assemble(mdl, theta);
  return mdl;
}

FactorTvpModel extract_factors(const tvp::PosteriorDraws& draws, const FactorSpec& fs) {
  return extract_factors(draws.theta_mean, fs, &draws.spec);
}

FactorabilityReport factorability(const std::vector<tvp::TvpPath>& paths, const tvp::TvpVarSpec& spec,
                                  const FactorSpec& fs) {
  const int nd = int(paths.size());
  if (nd < 50) throw Error(Errc::TooFewDraws, "factorability needs at least 50 draws");
  std::vector<std::pair<int, int>> ranges;
  std::vector<std::string> names;
  std::vector<int> caps;
  if (fs.grouping == Grouping::Common) {
    ranges.push_back({0, spec.m()});
    names.push_back("common");
    caps.push_back(std::min(fs.cap_common, std::max(1, spec.m() / 2)));
  } else {
    ranges = group_ranges(spec);
    names = {"b"};
    caps = {std::min(fs.cap_b, std::max(1, spec.nb() / 2))};
    if (spec.na() > 0) {
      names.push_back("a");
      caps.push_back(std::min(fs.cap_a, std::max(1, spec.na() / 2)));
    }
    names.push_back("h");
    caps.push_back(std::min(fs.cap_h, std::max(1, spec.nh() / 2)));
  }

  auto quantiles = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    Vec q(3);
    const double ps[3] = {0.16, 0.5, 0.84};
    for (int i = 0; i < 3; ++i) {
      // linear interpolation between order statistics
      const double h = ps[i] * (v.size() - 1);
      const size_t lo = size_t(std::floor(h));
      const size_t hi = std::min(lo + 1, v.size() - 1);
      q[i] = v[lo] + (h - lo) * (v[hi] - v[lo]);
    }
    return q;
  };

  FactorabilityReport rep;
  rep.n_draws = nd;
  Mat mean_theta = Mat::Zero(paths[0].T(), spec.m());
  for (const auto& p : paths) mean_theta += p.theta_matrix();
  mean_theta /= nd;

  for (size_t g = 0; g < ranges.size(); ++g) {
    auto [off, size] = ranges[g];
    const int T = paths[0].T();
    const int K = std::min(size, T);
    std::vector<std::vector<double>> eigs(K), shares(K);
    std::vector<double> traces;
    GroupScree gs;
    gs.name = names[g];
    for (const auto& p : paths) {
      Mat block = p.theta_matrix().middleCols(off, size);
      Standardized s = standardize(block);
      Vec e = eigenvalues(s.z);
      Vec c = cumulative(e);
      for (int k = 0; k < K; ++k) {
        eigs[k].push_back(k < e.size() ? e[k] : 0.0);
        shares[k].push_back(k < c.size() ? c[k] : 1.0);
      }
      Mat centered = block.rowwise() - block.colwise().mean();
      traces.push_back(centered.squaredNorm() / T);
      gs.rule_q.push_back(share_rule(c, fs.share_threshold, caps[g]));
    }
    gs.eig_q.resize(3, K);
    gs.share_q.resize(3, K);
    for (int k = 0; k < K; ++k) {
      gs.eig_q.col(k) = quantiles(eigs[k]);
      gs.share_q.col(k) = quantiles(shares[k]);
    }
    gs.trace_q = quantiles(traces);
    std::vector<double> rq(gs.rule_q.begin(), gs.rule_q.end());
    gs.median_q = quantiles(rq)[1];
    rep.groups.push_back(std::move(gs));
  }
  FactorSpec auto_fs = fs;
  auto_fs.q_common = auto_fs.q_b = auto_fs.q_a = auto_fs.q_h = -1;
  rep.r2 = extract_factors(mean_theta, auto_fs, &spec).r2;
  return rep;
}

}  // namespace ftvp::factor
