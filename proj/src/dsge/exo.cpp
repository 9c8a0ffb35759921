#include "ftvp/dsge/exo.hpp"

#include <cmath>

#include "ftvp/numerics/error.hpp"
#include "ftvp/numerics/random.hpp"

namespace ftvp::dsge {

ContinuousAR ar1_process(double rho, double sigma) {
  ContinuousAR p;
  p.G = {Mat::Constant(1, 1, rho)};
  p.Sigma = {Mat::Constant(1, 1, sigma * sigma)};
  return p;
}

void validate_exo(const ExoProcess& proc) {
  if (const auto* ar = std::get_if<ContinuousAR>(&proc)) {
    if (ar->G.empty() || ar->Sigma.empty())
      throw Error(Errc::InvalidArgument, "AR process needs G and Sigma");
    const int d = int(ar->G[0].rows());
    for (const auto& g : ar->G)
      if (g.rows() != d || g.cols() != d) throw Error(Errc::DimensionMismatch, "G dimension");
    for (const auto& s : ar->Sigma) {
      if (s.rows() != d || s.cols() != d) throw Error(Errc::DimensionMismatch, "Sigma dimension");
      psd_factor(s);
    }
    if (ar->e0.size() != 0 && ar->e0.size() != d)
      throw Error(Errc::DimensionMismatch, "e0 dimension");
  } else {
    const auto& mc = std::get<MarkovChain>(proc);
    const int ns = int(mc.states.size());
    if (ns < 1 || mc.T.rows() != ns || mc.T.cols() != ns)
      throw Error(Errc::DimensionMismatch, "transition matrix must be ns x ns");
    for (int i = 0; i < ns; ++i) {
      if ((mc.T.row(i).array() < 0).any())
        throw Error(Errc::InvalidArgument, "negative transition probability");
      if (std::abs(mc.T.row(i).sum() - 1.0) > 1e-12)
        throw Error(Errc::InvalidArgument, "transition rows must sum to one");
    }
    if (mc.initial < 0 || mc.initial >= ns) throw Error(Errc::InvalidArgument, "initial state");
  }
}

ExoPath simulate_exo(const ExoProcess& proc, int T, uint64_t seed) {
  if (T < 1) throw Error(Errc::InvalidArgument, "T must be >= 1");
  validate_exo(proc);
  Rng rng(seed);
  ExoPath out;
  if (const auto* ar = std::get_if<ContinuousAR>(&proc)) {
    const int d = int(ar->G[0].rows());
    out.values.resize(T, d);
    Vec e = ar->e0.size() ? ar->e0 : Vec::Zero(d);
    std::vector<Mat> chol;
    for (const auto& s : ar->Sigma) chol.push_back(psd_factor(s));
    for (int t = 0; t < T; ++t) {
      const Mat& g = ar->G.size() == 1 ? ar->G[0] : ar->G[t];
      const Mat& l = chol.size() == 1 ? chol[0] : chol[t];
      e = g * e + l * rng.normal_vector(d);
      out.values.row(t) = e.transpose();
    }
  } else {
    const auto& mc = std::get<MarkovChain>(proc);
    const int d = int(mc.states[0].size());
    out.values.resize(T, d);
    out.regime.resize(T);
    int s = mc.initial;
    for (int t = 0; t < T; ++t) {
      if (t > 0) {
        Vec row = mc.T.row(s).transpose();  // rows are strided in column-major storage
        s = rng.categorical(row.data(), int(row.size()));
      }
      out.regime[t] = s;
      out.values.row(t) = mc.states[s].transpose();
    }
  }
  return out;
}

}  // namespace ftvp::dsge
