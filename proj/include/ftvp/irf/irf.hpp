#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ftvp/numerics/linalg.hpp"
#include "ftvp/tvp/layout.hpp"

namespace ftvp::irf {

enum class ShockNorm { OneSd, OnePercent };

std::string norm_name(ShockNorm s);
ShockNorm parse_norm(const std::string& s);

// Responses (n x (H_irf + 1)) to a recursive shock in variable `shock`, with
// the coefficients frozen at θ_t. Impact is column `shock` of A^{-1} Σ^{1/2};
// OnePercent rescales it so the shocked variable moves by 0.01 on impact.
Mat irf_at(const Vec& theta_t, int n, int p, int shock, int horizon, ShockNorm norm);

struct IrfSurface {
  ShockNorm norm = ShockNorm::OneSd;
  int shock = 0, n = 0, horizon = 0;
  // One n x (horizon + 1) matrix per period. `point` comes from a single
  // path; q16/q50/q84 from pointwise quantiles across draws when available.
  std::vector<Mat> point, q16, q50, q84;

  int periods() const { return int(point.empty() ? q50.size() : point.size()); }
};

IrfSurface irf_surface(const tvp::TvpPath& path, int n, int p, int shock, int horizon, ShockNorm norm);
IrfSurface irf_quantiles(const std::vector<tvp::TvpPath>& draws, int n, int p, int shock, int horizon, ShockNorm norm);

// Long format: t,horizon,variable,quantile,value.
void write_csv(const IrfSurface& s, std::ostream& os, const std::vector<std::string>& names = {});

}  // namespace ftvp::irf
