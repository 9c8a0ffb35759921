#include "ftvp/dsge/ncg.hpp"

#include <cmath>

#include "ftvp/numerics/error.hpp"

namespace ftvp::dsge {

void NcgParams::validate() const {
  auto bad = [](const std::string& w) { throw Error(Errc::InfeasibleParams, w); };
  if (!(alpha > 0 && alpha < 1)) bad("alpha must lie in (0,1)");
  if (!(beta > 0 && beta < 1)) bad("beta must lie in (0,1)");
  if (!(tau > 0)) bad("tau must be positive");
  if (!(delta > 0 && delta <= 1)) bad("delta must lie in (0,1]");
  if (!(std::abs(rho_z) < 1)) bad("|rho_z| must be below 1");
  if (!(sigma_z >= 0)) bad("sigma_z must be nonnegative");
  if (!(beta * (1 - delta) < 1)) bad("beta(1-delta) must be below 1");
}

SteadyState ncg_steady_state(const NcgParams& p) {
  p.validate();
  SteadyState s{};
  s.r = 1.0 / p.beta - (1.0 - p.delta);
  s.k = std::pow(p.alpha / s.r, 1.0 / (1.0 - p.alpha));
  s.y = std::pow(s.k, p.alpha);
  s.c = s.y - p.delta * s.k;
  if (!(s.c > 0)) throw Error(Errc::InfeasibleParams, "steady-state consumption not positive");
  s.k_star = s.k / s.y;
  s.c_star = s.c / s.y;
  s.gamma = 1.0 - p.beta * (1.0 - p.delta);
  s.nu1 = p.alpha - 1.0;
  s.nu2 = s.nu1 * (p.alpha - 2.0);
  s.nu3 = s.nu2 * (p.alpha - 3.0);
  s.omega1 = p.tau * (p.tau + 1.0);
  s.omega2 = s.omega1 * (p.tau + 2.0);
  return s;
}

Mat LinearizedSystem::gamma0_at(const PathPoint& x) const {
  Mat g(nx(), nx());
  for (int i = 0; i < nx(); ++i)
    for (int j = 0; j < nx(); ++j) g(i, j) = gamma0[i][j].eval(x);
  return g;
}

Mat LinearizedSystem::gamma1_at(const PathPoint& x) const {
  Mat g(nx(), nx());
  for (int i = 0; i < nx(); ++i)
    for (int j = 0; j < nx(); ++j) g(i, j) = gamma1[i][j].eval(x);
  return g;
}

StatePoly LinearizedSystem::psi(int i) const {
  if (i == 1) return -gamma1[0][1];
  if (i == 2) return gamma0[0][2];
  if (i >= 3 && i <= 8 && i - 3 < nx()) return gamma0[1][i - 3];
  throw Error(Errc::InvalidArgument, "psi index out of range");
}

int LinearizedSystem::max_degree() const {
  int d = 0;
  for (const auto& row : gamma0)
    for (const auto& e : row) d = std::max(d, e.degree());
  for (const auto& row : gamma1)
    for (const auto& e : row) d = std::max(d, e.degree());
  return d;
}

namespace {

std::vector<std::pair<int, int>> varying(const std::vector<std::vector<StatePoly>>& g) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < int(g.size()); ++i)
    for (int j = 0; j < int(g[i].size()); ++j)
      if (!g[i][j].is_constant()) out.emplace_back(i, j);
  return out;
}

}  // namespace

std::vector<std::pair<int, int>> LinearizedSystem::varying_gamma0() const { return varying(gamma0); }
std::vector<std::pair<int, int>> LinearizedSystem::varying_gamma1() const { return varying(gamma1); }

LinearizedSystem build_linearized_system(const NcgParams& p, int order, ResourceForm form) {
  if (order < 1 || order > 3) throw Error(Errc::InvalidArgument, "order must be 1, 2 or 3");
  const SteadyState s = ncg_steady_state(p);
  LinearizedSystem L;
  L.order = order;
  L.params = p;
  L.ss = s;
  L.form = form;
  L.labels = {"c_hat", "k_hat_next", "z", "E[c']"};
  if (order >= 2) {
    L.labels.push_back("E[c'^2]");
    L.labels.push_back("E[c'z']");
  }
  if (order >= 3) {
    L.labels.push_back("E[c'^3]");
    L.labels.push_back("E[c'z'^2]");
    L.labels.push_back("E[c'^2z']");
  }
  const int n = L.nx();
  L.gamma0.assign(n, std::vector<StatePoly>(n));
  L.gamma1.assign(n, std::vector<StatePoly>(n));
  L.K = Vec::Zero(n);
  L.Psi = Mat::Zero(n, 1);
  L.Pi = Mat::Zero(n, n - 3);

  const double a = p.alpha, g = s.gamma, tau = p.tau, rho = p.rho_z, s2 = p.sigma_z * p.sigma_z;
  const double nu1 = s.nu1, nu2 = s.nu2, nu3 = s.nu3, w1 = s.omega1, w2 = s.omega2;
  // scaling of the capital and TFP terms on the output side of the constraint
  const double ak = form == ResourceForm::kNormalized ? a : a * s.k_star;
  const double yz = form == ResourceForm::kNormalized ? 1.0 : s.y;

  const StatePoly ch = StatePoly::var(kC), kh = StatePoly::var(kK), kn = StatePoly::var(kKnext),
                  z = StatePoly::var(kZ);

  // resource constraint: c* ĉ + k* k̂' + ψ2 z + ψ1 k̂ = 0
  StatePoly psi1 = StatePoly(-((1.0 - p.delta) * s.k_star + ak));
  StatePoly psi2 = StatePoly(-yz);
  // Euler equation written as LHS - E[RHS] = 0
  StatePoly psi3 = StatePoly(-tau);
  StatePoly psi4 = StatePoly(-g * nu1);
  StatePoly psi5 = StatePoly(-g * rho);
  StatePoly psi6 = StatePoly(tau);
  StatePoly psi7, psi8;
  if (order >= 2) {
    psi1 -= 0.5 * a * nu1 * kh + a * yz * z;
    psi2 -= 0.5 * yz * z;
    psi3 += 0.5 * w1 * ch;
    psi4 -= g * nu1 * rho * z + 0.5 * g * nu2 * kn;
    psi5 -= 0.5 * g * rho * rho * z;
    psi6 += g * tau * nu1 * kn;
    psi7 = StatePoly(-0.5 * w1);
    psi8 = StatePoly(g * tau);
    L.K[1] = 0.5 * g * s2;
  }
  if (order >= 3) {
    psi1 -= (1.0 / 6.0) * a * nu2 * (kh * kh) + 0.5 * a * yz * (z * z) +
            0.5 * a * nu1 * yz * (kh * z);
    psi2 -= (1.0 / 6.0) * yz * (z * z);
    psi3 -= (1.0 / 6.0) * w2 * (ch * ch);
    psi4 -= (1.0 / 6.0) * g * nu3 * (kn * kn) + 0.5 * g * nu1 * rho * rho * (z * z) +
            StatePoly(0.5 * g * nu1 * s2) + 0.5 * g * nu2 * rho * (kn * z);
    psi5 -= (1.0 / 6.0) * g * rho * rho * rho * (z * z) + StatePoly(0.5 * g * rho * s2);
    psi6 += 0.5 * g * tau * nu2 * (kn * kn);
    psi7 -= 0.5 * g * w1 * nu1 * kn;
    psi8 += g * tau * nu1 * kn;
  }

  L.gamma0[0][0] = s.c_star;
  L.gamma0[0][1] = s.k_star;
  L.gamma0[0][2] = psi2;
  L.gamma1[0][1] = -psi1;

  L.gamma0[1][0] = psi3;
  L.gamma0[1][1] = psi4;
  L.gamma0[1][2] = psi5;
  L.gamma0[1][3] = psi6;
  if (order >= 2) {
    L.gamma0[1][4] = psi7;
    L.gamma0[1][5] = psi8;
  }
  if (order >= 3) {
    L.gamma0[1][6] = w2 / 6.0;
    L.gamma0[1][7] = 0.5 * g * tau;
    L.gamma0[1][8] = -0.5 * g * w1;
  }

  // z_t = ρ z_{t-1} + σ ε_t
  L.gamma0[2][2] = 1.0;
  L.gamma1[2][2] = rho;
  L.Psi(2, 0) = p.sigma_z;

  // realized powers of ĉ_t (times z_t) equal last period's expectation plus η
  std::vector<StatePoly> lead = {StatePoly(1.0)};
  if (order >= 2) {
    lead.push_back(ch);
    lead.push_back(z);
  }
  if (order >= 3) {
    lead.push_back(ch * ch);
    lead.push_back(z * z);
    lead.push_back(ch * z);
  }
  for (int r = 3; r < n; ++r) {
    L.gamma0[r][0] = lead[r - 3];
    L.gamma1[r][r] = 1.0;
    L.Pi(r, r - 3) = 1.0;
  }
  return L;
}

}  // namespace ftvp::dsge
