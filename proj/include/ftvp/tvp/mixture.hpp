#pragma once

#include <array>

#include "ftvp/numerics/random.hpp"

namespace ftvp::tvp {

// Seven-component normal mixture approximating log χ²(1).
struct LogChi2Mixture {
  static constexpr int K = 7;
  static const std::array<double, K> prob;
  static const std::array<double, K> mean;  // component means, offset -1.2704 included
  static const std::array<double, K> var;

  static double mixture_mean();
  static double mixture_var();
  // Draws the component index for residual r = y* - h.
  static int draw_component(double r, Rng& rng);
};

inline constexpr double kLogOffset = 1e-6;  // c in log(u² + c)

}  // namespace ftvp::tvp
