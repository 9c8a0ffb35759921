#include "ftvp/re/assemble.hpp"

#include <cmath>

#include "ftvp/numerics/error.hpp"
#include "ftvp/numerics/random.hpp"
#include "ftvp/re/gensys.hpp"

namespace ftvp::re {

ReSystem assemble_re_system(const dsge::LinearizedSystem& lin,
                            const std::vector<dsge::PathPoint>& path,
                            const dsge::ContinuousAR* exo) {
  ReSystem sys;
  sys.pi = lin.Pi;
  sys.gamma = {lin.K};
  const bool varying = lin.order >= 2;
  if (varying && path.empty())
    throw Error(Errc::PathLengthMismatch, "orders 2 and 3 need a state path");
  const int T = varying ? int(path.size()) : 1;
  int texo = 1;
  if (exo) {
    if (exo->G.empty() || exo->Sigma.empty() || exo->G[0].rows() != 1)
      throw Error(Errc::DimensionMismatch, "exogenous process must be a scalar AR");
    texo = int(std::max(exo->G.size(), exo->Sigma.size()));
    if ((exo->G.size() != 1 && int(exo->G.size()) != texo) ||
        (exo->Sigma.size() != 1 && int(exo->Sigma.size()) != texo))
      throw Error(Errc::PathLengthMismatch, "exogenous G and Sigma lengths differ");
    if (texo != 1 && varying && texo != T)
      throw Error(Errc::PathLengthMismatch, "exogenous process length does not match the path");
  }
  // with an exogenous process every member is stored per period
  const int periods = exo ? std::max(T, texo) : T;
  const dsge::PathPoint zero{0, 0, 0, 0};
  for (int t = 0; t < periods; ++t) {
    const auto& pt = varying ? path[t] : zero;
    if (t < T) {
      sys.gamma0.push_back(lin.gamma0_at(pt));
      sys.gamma1.push_back(lin.gamma1_at(pt));
    } else {
      sys.gamma0.push_back(sys.gamma0[0]);
      sys.gamma1.push_back(sys.gamma1[0]);
    }
    if (!exo) continue;
    const Mat& g = exo->G.size() == 1 ? exo->G[0] : exo->G[t];
    const Mat& s = exo->Sigma.size() == 1 ? exo->Sigma[0] : exo->Sigma[t];
    sys.psi.push_back(lin.Psi);
    sys.gamma1[t](2, 2) = g(0, 0);
    sys.psi[t](2, 0) = std::sqrt(std::max(0.0, s(0, 0)));
  }
  if (!exo) sys.psi = {lin.Psi};
  sys.validate();
  return sys;
}

VaryingEntries varying_entries(const ReSystem& sys, double tol) {
  const int T = sys.periods(), n = sys.nx();
  VaryingEntries out;
  std::vector<std::vector<double>> cols;
  for (int which = 0; which < 2; ++which)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        auto get = [&](int t) { return which == 0 ? sys.G0(t)(i, j) : sys.G1(t)(i, j); };
        const double v0 = get(0);
        bool moves = false;
        for (int t = 1; t < T && !moves; ++t) moves = std::abs(get(t) - v0) > tol;
        if (!moves) continue;
        out.where.push_back({which, i, j});
        std::vector<double> c(T);
        for (int t = 0; t < T; ++t) c[t] = get(t);
        cols.push_back(std::move(c));
      }
  out.values.resize(T, cols.size());
  for (size_t c = 0; c < cols.size(); ++c)
    for (int t = 0; t < T; ++t) out.values(t, c) = cols[c][t];
  return out;
}

std::vector<dsge::PathPoint> linear_path(const dsge::NcgParams& p, int T, uint64_t seed) {
  auto sol = solve_cp(assemble_re_system(dsge::build_linearized_system(p, 1)));
  Rng rng(seed);
  Mat e(T + 1, 1);
  for (int t = 0; t <= T; ++t) e(t, 0) = rng.normal();
  Mat x = simulate_solution(sol, e, Vec::Zero(sol.periods[0].phi1.rows()));
  std::vector<dsge::PathPoint> path;
  for (int t = 1; t <= T; ++t) path.push_back({x(t, 0), x(t - 1, 1), x(t, 1), x(t, 2)});
  return path;
}

}  // namespace ftvp::re
