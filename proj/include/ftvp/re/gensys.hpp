#pragma once

#include "ftvp/numerics/random.hpp"
#include "ftvp/re/system.hpp"

namespace ftvp::re {

struct SolveOptions {
  double stability_tol = 1e-6;  // explosive means modulus > 1 + tol
};

// Constant-parameter solution by generalized Schur decomposition.
// existence: the unstable block can be offset by η (rank(Q2 Π) = m <= n_η);
// uniqueness: additionally m = n_η. Failures are flags, not exceptions; when
// existence fails the returned coefficients are the least-squares choice of η.
ReSolution solve_cp(const ReSystem& sys, const SolveOptions& opt = {});

// Pointwise-in-t solution of a per-period system. Throws PeriodFailure with
// the first period that has no unique stable solution.
ReSolution solve_tvp(const ReSystem& sys, const SolveOptions& opt = {});

// x_t = mean + coef (s_{t-1} - s̄) + impact ε_t, where s = x[state_idx].
// Φ1 is not unique off the solution manifold (expectation and static
// coordinates are functions of the states on it); this representation is.
// mean is the fixed point of the VAR and requires I - Φ1 invertible.
struct StatePolicy {
  Vec mean;
  Mat coef;    // nx x |state_idx|
  Mat impact;  // nx x nε
};
StatePolicy policy_in_states(const VarSolution& sol, const std::vector<int>& state_idx);

// Path x_0..x_{T-1} from x_{-1} = x_init (fixed point when empty), using
// per-period solutions when sol has more than one entry.
Mat simulate_solution(const ReSolution& sol, const Mat& eps, const Vec& x_init = Vec());

// Max residual of Γ0 x_t - γ - Γ1 x_{t-1} - Ψ ε_t after removing the best
// least-squares Π η_t, over t = 1..T-1.
double re_residual(const ReSystem& sys, const Mat& x, const Mat& eps);

}  // namespace ftvp::re
