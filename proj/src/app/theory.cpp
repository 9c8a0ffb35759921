#include "ftvp/app/theory.hpp"

#include <algorithm>

#include "ftvp/numerics/error.hpp"
#include "ftvp/re/assemble.hpp"
#include "ftvp/re/gensys.hpp"

namespace ftvp::app {

TheoryReport theory_check_ncg(int order, const dsge::NcgParams& p, int T, uint64_t seed) {
  if (order != 1 && order != 2) throw Error(Errc::InvalidArgument, "theory-check supports orders 1 and 2");
  TheoryReport r;
  r.order = order;
  const auto path = re::linear_path(p, T, seed);
  const auto lin = dsge::build_linearized_system(p, order);

  if (order == 1) {
    // evaluate the coefficient builders at every point even though none varies
    re::ReSystem sys;
    for (const auto& x : path) {
      sys.gamma0.push_back(lin.gamma0_at(x));
      sys.gamma1.push_back(lin.gamma1_at(x));
    }
    sys.gamma = {lin.K};
    sys.psi = {lin.Psi};
    sys.pi = lin.Pi;
    const auto sol = re::solve_tvp(sys);
    double dev = 0;
    for (const auto& s : sol.periods) {
      dev = std::max(dev, max_abs(s.phi0 - sol.periods[0].phi0));
      dev = std::max(dev, max_abs(s.phi1 - sol.periods[0].phi1));
      dev = std::max(dev, max_abs(s.phi_eps - sol.periods[0].phi_eps));
    }
    r.pass = dev < 1e-10;
    r.details = {{"periods", int(sol.periods.size())}, {"max_coefficient_variation", dev}, {"tolerance", 1e-10}};
    return r;
  }

  const auto sys = re::assemble_re_system(lin, path);
  const auto ve = re::varying_entries(sys);
  const int k = int(ve.values.cols());
  int rank = 0;
  double min_r2 = 1.0;
  if (k > 0) {
    Eigen::JacobiSVD<Mat> svd(ve.values);
    const Vec& s = svd.singularValues();
    for (int i = 0; i < s.size(); ++i) rank += s[i] > 1e-8 * s[0];
    Mat X(T, 5);
    for (int t = 0; t < T; ++t) X.row(t) << path[t][0], path[t][1], path[t][2], path[t][3], 1.0;
    const auto qr = X.colPivHouseholderQr();
    for (int c = 0; c < k; ++c) {
      const Vec y = ve.values.col(c);
      const double sst = (y.array() - y.mean()).square().sum();
      if (sst == 0) continue;
      const double ssr = (y - X * qr.solve(y)).squaredNorm();
      min_r2 = std::min(min_r2, 1.0 - ssr / sst);
    }
  }
  r.pass = rank <= 5 && min_r2 > 1.0 - 1e-10;
  r.details = {{"periods", T}, {"varying_entries", k}, {"rank", rank}, {"rank_bound", 5}, {"min_r2", min_r2}};
  return r;
}

}  // namespace ftvp::app
