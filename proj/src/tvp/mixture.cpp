#include "ftvp/tvp/mixture.hpp"

#include <cmath>

namespace ftvp::tvp {

const std::array<double, 7> LogChi2Mixture::prob = {0.00730, 0.10556, 0.00002, 0.04395,
                                                    0.34001, 0.24566, 0.25750};
const std::array<double, 7> LogChi2Mixture::mean = {
    -10.12999 - 1.2704, -3.97281 - 1.2704, -8.56686 - 1.2704, 2.77786 - 1.2704,
    0.61942 - 1.2704,   1.79518 - 1.2704,  -1.08819 - 1.2704};
const std::array<double, 7> LogChi2Mixture::var = {5.79596, 2.61369, 5.17950, 0.16735,
                                                   0.64009, 0.34023, 1.26261};

double LogChi2Mixture::mixture_mean() {
  double s = 0;
  for (int j = 0; j < K; ++j) s += prob[j] * mean[j];
  return s;
}

double LogChi2Mixture::mixture_var() {
  const double mu = mixture_mean();
  double s = 0;
  for (int j = 0; j < K; ++j) s += prob[j] * (var[j] + (mean[j] - mu) * (mean[j] - mu));
  return s;
}

int LogChi2Mixture::draw_component(double r, Rng& rng) {
  std::array<double, K> w;
  double lmax = -INFINITY;
  std::array<double, K> lw;
  for (int j = 0; j < K; ++j) {
    const double d = r - mean[j];
    lw[j] = std::log(prob[j]) - 0.5 * std::log(var[j]) - 0.5 * d * d / var[j];
    lmax = std::max(lmax, lw[j]);
  }
  for (int j = 0; j < K; ++j) w[j] = std::exp(lw[j] - lmax);
  return rng.categorical(w.data(), K);
}

}  // namespace ftvp::tvp
