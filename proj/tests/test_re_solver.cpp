#include <doctest.h>

#include <cmath>

#include "ftvp/dsge/ncg.hpp"
#include "ftvp/numerics/error.hpp"
#include "ftvp/re/assemble.hpp"
#include "ftvp/re/gensys.hpp"
#include "ftvp/re/regime.hpp"
#include "ftvp/re/varma.hpp"
#include "oracles.hpp"

using namespace ftvp;
using namespace ftvp::re;

namespace {

// y_t = a E_t y_{t+1} + e_t, e_t = ρ e_{t-1} + ε_t on x = (y, e, E y')
ReSystem scalar_forward(double a, double rho) {
  ReSystem s;
  Mat g0(3, 3), g1 = Mat::Zero(3, 3);
  g0 << 1, -1, -a, 0, 1, 0, 1, 0, 0;
  g1(1, 1) = rho;
  g1(2, 2) = 1.0;
  Mat psi = Mat::Zero(3, 1);
  psi(1, 0) = 1.0;
  s.gamma0 = {g0};
  s.gamma1 = {g1};
  s.gamma = {Vec::Zero(3)};
  s.psi = {psi};
  s.pi = Mat::Zero(3, 1);
  s.pi(2, 0) = 1.0;
  return s;
}

double forward_iteration_loading(double a, double rho) {
  double sum = 0.0, term = 1.0;
  for (int j = 0; j < 200; ++j) {
    sum += term;
    term *= a * rho;
  }
  return sum;
}

Mat draws(int T, int ne, uint64_t seed) {
  Rng rng(seed);
  Mat e(T, ne);
  for (int t = 0; t < T; ++t) e.row(t) = rng.normal_vector(ne).transpose();
  return e;
}

}  // namespace

TEST_CASE("scalar forward-looking model") {
  for (auto [a, rho] : {std::pair{0.5, 0.8}, {0.0, 0.8}, {0.9, 0.5}}) {
    auto sol = solve_cp(scalar_forward(a, rho));
    REQUIRE(sol.existence);
    REQUIRE(sol.uniqueness);
    CHECK(std::abs(sol.periods[0].phi_eps(0, 0) - forward_iteration_loading(a, rho)) < 1e-10);
  }
  auto s0 = solve_cp(scalar_forward(0.0, 0.8));
  CHECK(std::abs(s0.periods[0].phi_eps(0, 0) - 1.0) < 1e-12);
}

TEST_CASE("ncg under full depreciation and log utility") {
  dsge::NcgParams p;
  p.delta = 1.0;
  p.tau = 1.0;
  auto sol = solve_cp(assemble_re_system(dsge::build_linearized_system(p, 1)));
  REQUIRE(sol.uniqueness);
  auto pol = policy_in_states(sol.periods[0], {1, 2});
  CHECK(std::abs(pol.coef(1, 0) - p.alpha) < 1e-8);
  CHECK(std::abs(pol.coef(1, 1) - p.rho_z) < 1e-8);  // 1 · ρ through z_t
  CHECK(std::abs(pol.impact(1, 0) / p.sigma_z - 1.0) < 1e-8);
  // consumption share 1 - αβ makes ĉ = k̂' as well
  CHECK(std::abs(pol.coef(0, 0) - p.alpha) < 1e-8);
}

TEST_CASE("solution invariants on the baseline ncg") {
  dsge::NcgParams p;
  auto sys = assemble_re_system(dsge::build_linearized_system(p, 1));
  auto sol = solve_cp(sys);
  REQUIRE(sol.uniqueness);
  CHECK(sol.n_explosive[0] == 1);
  CHECK(spectral_radius(sol.periods[0].phi1) <= 1.0 + 1e-6);
  Mat e = draws(1000, 1, 4);
  Mat x = simulate_solution(sol, e);
  CHECK(re_residual(sys, x, e) < 1e-8);
}

TEST_CASE("existence and uniqueness flags") {
  // purely backward explosive system: no expectational error can offset it
  ReSystem s;
  s.gamma0 = {Mat::Identity(2, 2)};
  Mat g1 = Mat::Zero(2, 2);
  g1(0, 0) = 1.5;
  g1(1, 1) = 0.5;
  s.gamma1 = {g1};
  s.gamma = {Vec::Zero(2)};
  s.psi = {Mat::Identity(2, 2)};
  s.pi = Mat::Zero(2, 1);
  s.pi(1, 0) = 1.0;
  auto none = solve_cp(s);
  CHECK_FALSE(none.existence);
  CHECK_FALSE(none.uniqueness);

  // forward-looking variable with a stable root: indeterminate
  ReSystem ind = scalar_forward(2.0, 0.5);
  auto sol = solve_cp(ind);
  CHECK(sol.existence);
  CHECK_FALSE(sol.uniqueness);
}

TEST_CASE("solve_tvp with replicated constant matrices equals solve_cp") {
  dsge::NcgParams p;
  auto one = assemble_re_system(dsge::build_linearized_system(p, 1));
  ReSystem rep = one;
  rep.gamma0.assign(10, one.gamma0[0]);
  rep.gamma1.assign(10, one.gamma1[0]);
  auto cp = solve_cp(one);
  auto tv = solve_tvp(rep);
  REQUIRE(tv.periods.size() == 10);
  for (int t = 0; t < 10; ++t) {
    CHECK(max_abs(tv.periods[t].phi1 - cp.periods[0].phi1) < 1e-10);
    CHECK(max_abs(tv.periods[t].phi_eps - cp.periods[0].phi_eps) < 1e-10);
    CHECK((tv.periods[t].phi0 - cp.periods[0].phi0).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("alternating systems give alternating solutions") {
  auto a = scalar_forward(0.3, 0.8), b = scalar_forward(0.6, 0.8);
  ReSystem alt = a;
  alt.gamma0.clear();
  for (int t = 0; t < 8; ++t) alt.gamma0.push_back(t % 2 ? b.gamma0[0] : a.gamma0[0]);
  auto tv = solve_tvp(alt);
  auto sa = solve_cp(a), sb = solve_cp(b);
  for (int t = 0; t < 8; ++t) {
    const auto& ref = (t % 2 ? sb : sa).periods[0];
    CHECK(max_abs(tv.periods[t].phi_eps - ref.phi_eps) < 1e-10);
    CHECK(max_abs(tv.periods[t].phi1 - ref.phi1) < 1e-10);
  }
}

TEST_CASE("solve_tvp reports the first failing period") {
  auto good = scalar_forward(0.5, 0.8), bad = scalar_forward(2.0, 0.5);
  ReSystem s = good;
  s.gamma0 = {good.gamma0[0], good.gamma0[0], good.gamma0[0], bad.gamma0[0], bad.gamma0[0]};
  try {
    solve_tvp(s);
    FAIL("expected PeriodFailure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::PeriodFailure);
    CHECK(e.index() == 3);
  }
}

TEST_CASE("time-varying solution is self-consistent along a path") {
  dsge::NcgParams p;
  auto path = linear_path(p, 300, 8);
  auto sys = assemble_re_system(dsge::build_linearized_system(p, 2), path);
  auto sol = solve_tvp(sys);
  Mat e = draws(300, 1, 9);
  Mat x = simulate_solution(sol, e);
  CHECK(re_residual(sys, x, e) < 1e-8);
  for (const auto& s : sol.periods) CHECK(spectral_radius(s.phi1) <= 1.0 + 1e-6);
}

TEST_CASE("order-2 solutions converge to the constant solution as shocks vanish") {
  dsge::NcgParams p;
  double prev = 0;
  for (double sig : {1e-2, 1e-3, 1e-4}) {
    p.sigma_z = sig;
    auto path = linear_path(p, 50, 3);
    auto tv = solve_tvp(assemble_re_system(dsge::build_linearized_system(p, 2), path));
    auto cp = solve_cp(assemble_re_system(dsge::build_linearized_system(p, 1)));
    double worst = 0;
    for (const auto& s : tv.periods)
      worst = std::max(worst, max_abs(s.phi_eps.topRows(4) - cp.periods[0].phi_eps) / sig);
    if (prev > 0) CHECK(worst < 0.2 * prev);
    prev = worst;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("regime switching with one regime matches solve_cp") {
  RsModel m;
  m.T = Mat::Ones(1, 1);
  m.F0 = {{Vec::Zero(1)}};
  m.F1 = {{Mat::Ones(1, 1)}};
  m.F2 = {{Mat::Constant(1, 1, -0.5)}};
  m.F4 = {{Mat::Constant(1, 1, -1.0)}};
  m.F5 = {{Mat::Zero(1, 1)}};
  m.G = Mat::Constant(1, 1, 0.8);
  m.Sigma = Mat::Constant(1, 1, 0.04);
  auto rs = solve_rs(m);
  auto cp = solve_cp(scalar_forward(0.5, 0.8));
  REQUIRE(rs.uniqueness);
  // y_t = L e_t: impact of ε is L σ, loading on e_{t-1} is L ρ
  const double L = cp.periods[0].phi_eps(0, 0);
  CHECK(std::abs(rs.periods[0].phi_eps(0, 0) - 0.2 * L) < 1e-10);
  CHECK(std::abs(rs.periods[0].phi1(0, 1) - 0.8 * L) < 1e-10);
  CHECK(std::abs(rs.periods[0].phi1(1, 1) - 0.8) < 1e-14);
}

TEST_CASE("identity transition solves each regime on its own") {
  RsModel m;
  m.T = Mat::Identity(2, 2);
  const double a[2] = {0.3, 0.6};
  m.F0.assign(2, std::vector<Vec>(2, Vec::Zero(1)));
  m.F1.assign(2, std::vector<Mat>(2, Mat::Ones(1, 1)));
  m.F2.resize(2);
  for (int s = 0; s < 2; ++s) m.F2[s].assign(2, Mat::Constant(1, 1, -a[s]));
  m.F4.assign(2, std::vector<Mat>(2, Mat::Constant(1, 1, -1.0)));
  m.F5.assign(2, std::vector<Mat>(2, Mat::Zero(1, 1)));
  m.G = Mat::Constant(1, 1, 0.8);
  m.Sigma = Mat::Ones(1, 1);
  auto rs = solve_rs(m);
  for (int s = 0; s < 2; ++s) {
    auto cp = solve_cp(scalar_forward(a[s], 0.8));
    CHECK(std::abs(rs.periods[s].phi_eps(0, 0) - cp.periods[0].phi_eps(0, 0)) < 1e-10);
  }
}

TEST_CASE("iid regimes: loadings solve the regime fixed point") {
  RsModel m;
  m.T.resize(2, 2);
  m.T << 0.4, 0.6, 0.4, 0.6;
  const double a[2] = {0.3, 0.6}, rho = 0.8;
  m.F0.assign(2, std::vector<Vec>(2, Vec::Zero(1)));
  m.F1.assign(2, std::vector<Mat>(2, Mat::Ones(1, 1)));
  m.F2.resize(2);
  for (int s = 0; s < 2; ++s) m.F2[s].assign(2, Mat::Constant(1, 1, -a[s]));
  m.F4.assign(2, std::vector<Mat>(2, Mat::Constant(1, 1, -1.0)));
  m.F5.assign(2, std::vector<Mat>(2, Mat::Zero(1, 1)));
  m.G = Mat::Constant(1, 1, rho);
  m.Sigma = Mat::Ones(1, 1);
  auto rs = solve_rs(m);
  REQUIRE(rs.uniqueness);
  // truncated forward iteration: L_s = 1 + a_s ρ Σ_s' T(s,s') L_s'
  double L[2] = {0, 0};
  for (int it = 0; it < 200; ++it) {
    double nl[2];
    for (int s = 0; s < 2; ++s) nl[s] = 1.0 + a[s] * rho * (m.T(s, 0) * L[0] + m.T(s, 1) * L[1]);
    L[0] = nl[0];
    L[1] = nl[1];
  }
  for (int s = 0; s < 2; ++s) CHECK(std::abs(rs.periods[s].phi_eps(0, 0) - L[s]) < 1e-10);
}

TEST_CASE("regime switching rejects lagged endogenous terms") {
  RsModel m;
  m.T = Mat::Ones(1, 1);
  m.F0 = {{Vec::Zero(1)}};
  m.F1 = {{Mat::Ones(1, 1)}};
  m.F2 = {{Mat::Constant(1, 1, -0.5)}};
  m.F3 = {{Mat::Constant(1, 1, -0.2)}};
  m.F4 = {{Mat::Constant(1, 1, -1.0)}};
  m.F5 = {{Mat::Zero(1, 1)}};
  m.G = Mat::Constant(1, 1, 0.8);
  m.Sigma = Mat::Ones(1, 1);
  CHECK_THROWS_AS(solve_rs(m), Error);
}

TEST_CASE("marginalizing a block-diagonal VAR keeps the block AR") {
  VarSolution v;
  v.phi0 = Vec::Zero(3);
  v.phi1 = Mat::Zero(3, 3);
  v.phi1(0, 0) = 0.6;
  v.phi1.block(1, 1, 2, 2) << 0.3, 0.1, 0.2, 0.5;
  v.phi_eps = Mat::Identity(3, 3);
  auto m = marginalize(v, {0});
  CHECK(m.p() == 1);
  CHECK(m.q() == 0);
  CHECK(std::abs(m.ar[0](0, 0) - 0.6) < 1e-12);
  CHECK(std::abs(m.sigma(0, 0) - 1.0) < 1e-12);
}

TEST_CASE("bivariate VAR(1) marginal is ARMA(2,1) with matching autocovariances") {
  VarSolution v;
  v.phi0 = Vec::Zero(2);
  v.phi1.resize(2, 2);
  v.phi1 << 0.5, 0.2, 0.1, 0.4;
  v.phi_eps = Mat::Identity(2, 2);
  auto m = marginalize(v, {0});
  CHECK(m.p() == 2);
  CHECK(m.q() == 1);
  auto ref = oracle::var1_autocov(v.phi1, Mat::Identity(2, 2), 6);
  auto got = varma_autocovariance(m, 6);
  for (int h = 0; h <= 6; ++h) CHECK(std::abs(got[h](0, 0) - ref[h](0, 0)) < 1e-8);
  // invertible MA part
  CHECK(std::abs(m.ma[0](0, 0)) < 1.0);
}

TEST_CASE("keeping every variable returns the VAR(1)") {
  VarSolution v;
  v.phi0 = Vec::Constant(2, 0.3);
  v.phi1.resize(2, 2);
  v.phi1 << 0.5, 0.2, 0.1, 0.4;
  v.phi_eps.resize(2, 2);
  v.phi_eps << 1.0, 0.0, 0.4, 0.8;
  auto m = marginalize(v, {0, 1});
  REQUIRE(m.p() == 1);
  CHECK(m.q() == 0);
  CHECK(max_abs(m.ar[0] - v.phi1) < 1e-12);
  CHECK(max_abs(m.sigma - v.phi_eps * v.phi_eps.transpose()) < 1e-12);
  CHECK((m.intercept - v.phi0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("random VAR marginals respect the lag bounds and the autocovariances") {
  Rng rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 4;
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
    a *= 0.8 / spectral_radius(a);
    Mat l = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) l(i, j) = (i == j ? 1.0 : 0.3 * rng.normal());
    VarSolution v{rng.normal_vector(n), a, l};
    auto m = marginalize(v, {0, 2});
    CHECK(m.p() <= n - 2 + 1);
    CHECK(m.q() <= n - 2);
    auto ref = oracle::var1_autocov(a, l * l.transpose(), 6);
    auto got = varma_autocovariance(m, 6);
    for (int h = 0; h <= 6; ++h) {
      Mat r(2, 2);
      r << ref[h](0, 0), ref[h](0, 2), ref[h](2, 0), ref[h](2, 2);
      CHECK(max_abs(got[h] - r) < 1e-8 * std::max(1.0, max_abs(r)));
    }
    // mean of the kept block
    Vec mu = (Mat::Identity(n, n) - a).lu().solve(v.phi0);
    Mat arsum = Mat::Identity(2, 2);
    for (const auto& c : m.ar) arsum -= c;
    Vec mu2(2);
    mu2 << mu[0], mu[2];
    CHECK((arsum * mu2 - m.intercept).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("marginalize rejects unstable input") {
  VarSolution v{Vec::Zero(2), Mat::Identity(2, 2), Mat::Identity(2, 2)};
  try {
    marginalize(v, {0});
    FAIL("expected UnstableInput");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnstableInput);
  }
}

TEST_CASE("pointwise TVP marginalization") {
  VarSolution base;
  base.phi0 = Vec::Zero(2);
  base.phi1.resize(2, 2);
  base.phi1 << 0.5, 0.2, 0.1, 0.4;
  base.phi_eps = Mat::Identity(2, 2);
  std::vector<VarSolution> path(6, base);
  auto tv = marginalize_tvp(path, {0});
  auto cp = marginalize(base, {0});
  for (const auto& m : tv.periods) {
    REQUIRE(m.p() == cp.p());
    REQUIRE(m.q() == cp.q());
    for (int l = 0; l < m.p(); ++l) CHECK(max_abs(m.ar[l] - cp.ar[l]) < 1e-12);
    for (int l = 0; l < m.q(); ++l) CHECK(max_abs(m.ma[l] - cp.ma[l]) < 1e-12);
  }

  // one-period perturbation only moves that period
  path[3].phi1(0, 1) = 0.3;
  auto pert = marginalize_tvp(path, {0});
  for (int t = 0; t < 6; ++t) {
    const double d = max_abs(pert.periods[t].ar[1] - cp.ar[1]);
    if (t == 3) CHECK(d > 1e-3);
    else CHECK(d < 1e-12);
  }

  // no feedback from the hidden block: pure TVP-VAR
  std::vector<VarSolution> nofb;
  for (int t = 0; t < 5; ++t) {
    VarSolution v = base;
    v.phi1(0, 1) = 0.0;
    v.phi1(0, 0) = 0.3 + 0.1 * t;
    v.phi_eps(0, 1) = 0.0;
    nofb.push_back(v);
  }
  for (const auto& m : marginalize_tvp(nofb, {0}).periods) CHECK(m.q() == 0);

  // unit root in the hidden block
  path[4].phi1(1, 1) = 1.0;
  try {
    marginalize_tvp(path, {0});
    FAIL("expected BlockSingular");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BlockSingular);
    CHECK(e.index() == 4);
  }
}

TEST_CASE("assembled order-1 system reproduces the builder matrices") {
  dsge::NcgParams p;
  auto lin = dsge::build_linearized_system(p, 1);
  auto sys = assemble_re_system(lin);
  CHECK(sys.is_constant());
  CHECK(max_abs(sys.G0(0) - lin.gamma0_at({0, 0, 0, 0})) == 0.0);
  CHECK(sys.nx() == 4);
  CHECK(sys.n_eta() == 1);
  CHECK(sys.Psi(0)(2, 0) == p.sigma_z);
}

TEST_CASE("order-2 assembly along the zero path is constant") {
  dsge::NcgParams p;
  auto lin = dsge::build_linearized_system(p, 2);
  std::vector<dsge::PathPoint> zero(20, dsge::PathPoint{0, 0, 0, 0});
  auto sys = assemble_re_system(lin, zero);
  for (int t = 0; t < 20; ++t) CHECK(max_abs(sys.G0(t) - lin.gamma0_at(zero[0])) == 0.0);
  CHECK(std::abs(sys.g(0)[1] - 0.5 * lin.ss.gamma * p.sigma_z * p.sigma_z) < 1e-15);
  CHECK(varying_entries(sys).values.cols() == 0);
}

TEST_CASE("order-2 time-varying entries are affine in the path") {
  dsge::NcgParams p;
  auto path = linear_path(p, 400, 12);
  auto sys = assemble_re_system(dsge::build_linearized_system(p, 2), path);
  auto ve = varying_entries(sys);
  REQUIRE(ve.values.cols() > 0);
  const int T = int(path.size());
  Mat X(T, 5);
  for (int t = 0; t < T; ++t) X.row(t) << path[t][0], path[t][1], path[t][2], path[t][3], 1.0;
  for (int c = 0; c < ve.values.cols(); ++c) {
    Vec y = ve.values.col(c);
    Vec b = X.colPivHouseholderQr().solve(y);
    double ssr = (y - X * b).squaredNorm(), sst = (y.array() - y.mean()).square().sum();
    CHECK(1.0 - ssr / sst > 1.0 - 1e-10);
  }
  Mat centered = ve.values;
  Eigen::JacobiSVD<Mat> svd(centered);
  const auto& s = svd.singularValues();
  for (int i = 5; i < s.size(); ++i) CHECK(s[i] < 1e-8 * s[0]);
}

TEST_CASE("assembly errors") {
  dsge::NcgParams p;
  auto lin2 = dsge::build_linearized_system(p, 2);
  try {
    assemble_re_system(lin2);
    FAIL("expected PathLengthMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::PathLengthMismatch);
  }
  dsge::ContinuousAR ar;
  ar.G.assign(7, Mat::Constant(1, 1, 0.9));
  ar.Sigma = {Mat::Constant(1, 1, 1e-4)};
  std::vector<dsge::PathPoint> path(5, dsge::PathPoint{0, 0, 0, 0});
  CHECK_THROWS_AS(assemble_re_system(lin2, path, &ar), Error);

  // per-period persistence on an order-1 model
  auto lin1 = dsge::build_linearized_system(p, 1);
  auto sys = assemble_re_system(lin1, {}, &ar);
  CHECK(sys.periods() == 7);
  CHECK(sys.G1(6)(2, 2) == 0.9);
  CHECK(std::abs(sys.Psi(3)(2, 0) - 0.01) < 1e-15);
}
