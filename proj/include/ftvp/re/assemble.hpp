#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ftvp/dsge/exo.hpp"
#include "ftvp/dsge/ncg.hpp"
#include "ftvp/re/system.hpp"

namespace ftvp::re {

// ReSystem of a linearized model. Order 1 gives a constant system and needs no
// path; orders 2 and 3 evaluate the coefficient builders at each point of
// `path` (one period per point). An optional scalar AR process replaces the
// TFP persistence and shock scale period by period (rows of the z equation
// only); its length must be 1 or match the path.
ReSystem assemble_re_system(const dsge::LinearizedSystem& lin,
                            const std::vector<dsge::PathPoint>& path = {},
                            const dsge::ContinuousAR* exo = nullptr);

// T x (#varying entries) matrix of the time-varying Γ0/Γ1 entries along the
// system's periods, plus their (matrix, row, col) labels (matrix 0 = Γ0).
struct VaryingEntries {
  Mat values;
  std::vector<std::array<int, 3>> where;
};
VaryingEntries varying_entries(const ReSystem& sys, double tol = 1e-14);

// Simulates the order-1 solution from the steady state with standard normal
// shocks and returns T points (ĉ_t, k̂_t, k̂_{t+1}, z_t) to evaluate the
// higher-order coefficients along.
std::vector<dsge::PathPoint> linear_path(const dsge::NcgParams& p, int T, uint64_t seed);

}  // namespace ftvp::re
