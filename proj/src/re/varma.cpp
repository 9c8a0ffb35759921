#include "ftvp/re/varma.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "ftvp/numerics/error.hpp"

namespace ftvp::re {

namespace {

Mat krylov_basis(const Mat& a, const Mat& b) {
  const int n = int(a.rows());
  if (n == 0 || b.cols() == 0) return Mat(n, 0);
  Mat k(n, 0), blk = b;
  for (int j = 0; j < n; ++j) {
    Mat next(n, k.cols() + blk.cols());
    next << k, blk;
    k = next;
    blk = a * blk;
  }
  return orth_basis(k);
}

// Multivariate innovations algorithm on an MA(q) autocovariance sequence.
void innovations(const std::vector<Mat>& gam, const MarginalizeOptions& opt, std::vector<Mat>& theta,
                 Mat& sigma) {
  const int q = int(gam.size()) - 1, k = int(gam[0].rows());
  theta.clear();
  if (q == 0) {
    sigma = gam[0];
    return;
  }
  const int ring = q + 1;
  std::vector<std::vector<Mat>> th(ring, std::vector<Mat>(q + 1, Mat::Zero(k, k)));  // th[n%ring][i] = Θ_{n,i}
  std::vector<Mat> V(ring), Vi(ring);
  V[0] = gam[0];
  Vi[0] = pinv(V[0]);
  std::vector<Mat> prev_th(q + 1, Mat::Zero(k, k));
  Mat prev_v = V[0];
  const double scale = std::max(1.0, max_abs(gam[0]));
  for (int n = 1; n <= opt.max_window; ++n) {
    auto& row = th[n % ring];
    for (auto& m : row) m.setZero();
    for (int kk = std::max(0, n - q); kk <= n - 1; ++kk) {
      Mat acc = gam[n - kk];
      for (int j = std::max(0, n - q); j <= kk - 1; ++j)
        acc -= row[n - j] * V[j % ring] * th[kk % ring][kk - j].transpose();
      row[n - kk] = acc * Vi[kk % ring];
    }
    Mat v = gam[0];
    for (int j = std::max(0, n - q); j <= n - 1; ++j)
      v -= row[n - j] * V[j % ring] * row[n - j].transpose();
    symmetrize(v);
    V[n % ring] = v;
    Vi[n % ring] = pinv(v);
    double diff = (v - prev_v).cwiseAbs().maxCoeff();
    for (int i = 1; i <= q; ++i) diff = std::max(diff, (row[i] - prev_th[i]).cwiseAbs().maxCoeff());
    prev_v = v;
    for (int i = 1; i <= q; ++i) prev_th[i] = row[i];
    if (n >= opt.min_window && diff < opt.tol * scale) break;
  }
  theta.assign(prev_th.begin() + 1, prev_th.end());
  sigma = prev_v;
}

void trim(std::vector<Mat>& c, double tol) {
  double scale = 1.0;
  for (const auto& m : c) scale = std::max(scale, max_abs(m));
  while (!c.empty() && max_abs(c.back()) < tol * scale) c.pop_back();
}

VarmaModel marginalize_impl(const VarSolution& var, const std::vector<int>& keep,
                            const MarginalizeOptions& opt) {
  const int n = int(var.phi1.rows()), k = int(keep.size());
  if (var.phi1.cols() != n || var.phi0.size() != n || var.phi_eps.rows() != n)
    throw Error(Errc::DimensionMismatch, "VAR(1) dimensions");
  std::vector<char> used(n, 0);
  for (int i : keep) {
    if (i < 0 || i >= n || used[i]) throw Error(Errc::InvalidArgument, "bad keep index");
    used[i] = 1;
  }
  if (k == 0) throw Error(Errc::InvalidArgument, "keep is empty");
  std::vector<int> rest;
  for (int i = 0; i < n; ++i)
    if (!used[i]) rest.push_back(i);
  const int m = int(rest.size());

  auto sub = [](const Mat& a, const std::vector<int>& r, const std::vector<int>& c) {
    Mat o(r.size(), c.size());
    for (size_t i = 0; i < r.size(); ++i)
      for (size_t j = 0; j < c.size(); ++j) o(i, j) = a(r[i], c[j]);
    return o;
  };
  auto subv = [](const Vec& a, const std::vector<int>& r) {
    Vec o(r.size());
    for (size_t i = 0; i < r.size(); ++i) o[i] = a[r[i]];
    return o;
  };
  const Mat su = var.phi_eps * var.phi_eps.transpose();
  const Mat p11 = sub(var.phi1, keep, keep), p12 = sub(var.phi1, keep, rest);
  const Mat p21 = sub(var.phi1, rest, keep), p22 = sub(var.phi1, rest, rest);
  const Vec c1 = subv(var.phi0, keep), c2 = subv(var.phi0, rest);

  // reduce the hidden block to the part that is both seen by x1 and excited
  Mat R(0, m);
  if (m > 0) {
    Mat V = krylov_basis(p22.transpose(), p12.transpose());
    if (V.cols() > 0) {
      Mat a1 = V.transpose() * p22 * V;
      Mat s22 = sub(su, rest, rest);
      Mat in1 = V.transpose() * p21, in2 = V.transpose() * psd_factor(s22), in3 = V.transpose() * c2;
      Mat inputs(V.cols(), in1.cols() + in2.cols() + 1);
      inputs << in1, in2, in3;
      Mat W = krylov_basis(a1, inputs);
      R = (V * W).transpose();
    }
  }
  const int r = int(R.rows());
  const Mat A = R * p22 * R.transpose();
  const Mat f12 = p12 * R.transpose(), f21 = R * p21;
  const Vec f02 = R * c2;

  // Faddeev-LeVerrier: det(I - A L) = Σ d_j L^j,  adj(I - A L) = Σ adj_j L^j
  std::vector<double> d(r + 2, 0.0);
  std::vector<Mat> adj;
  d[0] = 1.0;
  if (r > 0) {
    Mat M = Mat::Identity(r, r);
    for (int j = 1; j <= r; ++j) {
      if (j > 1) M = A * adj.back() + d[j - 1] * Mat::Identity(r, r);
      adj.push_back(M);
      d[j] = -(A * M).trace() / j;
    }
  }
  auto adj_at = [&](int j) { return (j >= 0 && j < r) ? adj[j] : Mat(Mat::Zero(r, r)); };

  VarmaModel out;
  const Mat ik = Mat::Identity(k, k);
  for (int j = 1; j <= r + 1; ++j) {
    Mat aj = d[j] * ik - d[j - 1] * p11;
    if (j >= 2 && r > 0) aj -= f12 * adj_at(j - 2) * f21;
    out.ar.push_back(-aj);
  }
  double d1 = std::accumulate(d.begin(), d.end(), 0.0);
  Mat adj1 = Mat::Zero(r, r);
  for (const auto& a : adj) adj1 += a;
  out.intercept = d1 * c1 + (r > 0 ? Vec(f12 * adj1 * f02) : Vec::Zero(k));

  // v_t = Σ_j N_j u_{t-j},  u = (ν1, R ν2)
  Mat tr = Mat::Zero(k + r, n);
  for (int i = 0; i < k; ++i) tr(i, keep[i]) = 1.0;
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < r; ++a) tr(k + a, rest[i]) = R(a, i);
  const Mat sur = tr * su * tr.transpose();
  std::vector<Mat> N(r + 1, Mat::Zero(k, k + r));
  for (int j = 0; j <= r; ++j) {
    N[j].leftCols(k) = d[j] * ik;
    if (j >= 1 && r > 0) N[j].rightCols(r) = f12 * adj_at(j - 1);
  }
  std::vector<Mat> gam(r + 1, Mat::Zero(k, k));
  for (int h = 0; h <= r; ++h)
    for (int j = 0; j + h <= r; ++j) gam[h] += N[j + h] * sur * N[j].transpose();

  innovations(gam, opt, out.ma, out.sigma);
  trim(out.ar, opt.trim_tol);
  trim(out.ma, opt.trim_tol);
  return out;
}

}  // namespace

VarmaModel marginalize(const VarSolution& var, const std::vector<int>& keep,
                       const MarginalizeOptions& opt) {
  if (spectral_radius(var.phi1) >= 1.0)
    throw Error(Errc::UnstableInput, "VAR(1) transition has spectral radius >= 1");
  return marginalize_impl(var, keep, opt);
}

TvpVarma marginalize_tvp(const std::vector<VarSolution>& var, const std::vector<int>& keep,
                         const MarginalizeOptions& opt) {
  TvpVarma out;
  for (size_t t = 0; t < var.size(); ++t) {
    const Mat& p1 = var[t].phi1;
    const int n = int(p1.rows());
    std::vector<int> rest;
    for (int i = 0; i < n; ++i)
      if (std::find(keep.begin(), keep.end(), i) == keep.end()) rest.push_back(i);
    const int m = int(rest.size());
    if (m > 0) {
      Mat p22(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) p22(i, j) = p1(rest[i], rest[j]);
      if (spectral_radius(p22) >= 1.0)
        throw Error(Errc::BlockSingular, "hidden block has a root on or outside the unit circle", long(t));
      // det(I - Φ22 z) on the unit circle
      double dmin = std::numeric_limits<double>::infinity();
      const int ngrid = 256;
      for (int g = 0; g < ngrid; ++g) {
        std::complex<double> z = std::polar(1.0, 2.0 * M_PI * g / ngrid);
        CMat a = CMat::Identity(m, m) - z * p22.cast<std::complex<double>>();
        dmin = std::min(dmin, std::abs(a.determinant()));
      }
      if (dmin < 1e-8)
        throw Error(Errc::BlockSingular, "det(I - Phi22 z) vanishes on the unit circle", long(t));
      if (dmin < 1e-6)
        out.warnings.push_back("period " + std::to_string(t) + ": det(I - Phi22 z) near zero (" +
                               std::to_string(dmin) + ")");
    }
    out.periods.push_back(marginalize_impl(var[t], keep, opt));
  }
  return out;
}

std::vector<Mat> varma_autocovariance(const VarmaModel& md, int max_lag) {
  const int k = int(md.sigma.rows());
  const int p = std::max(1, md.p()), q = md.q();
  const int ns = k * (p + q);
  Mat F = Mat::Zero(ns, ns), G = Mat::Zero(ns, k);
  for (int l = 0; l < md.p(); ++l) F.block(0, l * k, k, k) = md.ar[l];
  for (int j = 0; j < q; ++j) F.block(0, (p + j) * k, k, k) = md.ma[j];
  for (int l = 1; l < p; ++l) F.block(l * k, (l - 1) * k, k, k).setIdentity();
  G.topRows(k).setIdentity();
  if (q > 0) {
    G.block(p * k, 0, k, k).setIdentity();
    for (int j = 1; j < q; ++j) F.block((p + j) * k, (p + j - 1) * k, k, k).setIdentity();
  }
  Mat P = discrete_lyapunov(F, G * md.sigma * G.transpose());
  std::vector<Mat> out;
  Mat FhP = P;
  for (int h = 0; h <= max_lag; ++h) {
    out.push_back(FhP.topLeftCorner(k, k));
    FhP = F * FhP;
  }
  return out;
}

}  // namespace ftvp::re
