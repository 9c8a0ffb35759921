#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "ftvp/dsge/ncg.hpp"

namespace ftvp::app {

// Structural sanity checks of the growth model solved period by period along
// a simulated path.
//   order 1: per-period coefficients evaluated along the path and solved
//            pointwise must be constant (max deviation below 1e-10);
//   order 2: the time-varying Γ0/Γ1 entries must span at most five
//            dimensions (trailing singular values below 1e-8 relative) and be
//            affine in (ĉ_t, k̂_t, k̂_{t+1}, z_t) (R² = 1 within 1e-10).
struct TheoryReport {
  int order = 1;
  bool pass = false;
  nlohmann::json details;
};

TheoryReport theory_check_ncg(int order, const dsge::NcgParams& p = {}, int T = 500, uint64_t seed = 1);

}  // namespace ftvp::app
