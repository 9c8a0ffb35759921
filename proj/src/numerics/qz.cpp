#include "ftvp/numerics/qz.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <limits>
#include <vector>

#include "ftvp/numerics/error.hpp"

namespace ftvp {

namespace {

bool is_explosive(std::complex<double> a, std::complex<double> b, double tol) {
  return std::abs(b) > (1.0 + tol) * std::abs(a);
}

}  // namespace

QzFactorization qz_decompose(const Mat& gamma0, const Mat& gamma1, double stability_tol) {
  const int n = int(gamma0.rows());
  if (n < 1 || gamma0.cols() != n || gamma1.rows() != n || gamma1.cols() != n)
    throw Error(Errc::DimensionMismatch, "qz_decompose: pencil must be square and same size");

  CMat a = gamma0.cast<std::complex<double>>();
  CMat b = gamma1.cast<std::complex<double>>();
  CMat vsl(n, n), vsr(n, n);
  Eigen::VectorXcd alpha(n), beta(n);
  lapack_int sdim = 0;
  lapack_int info = LAPACKE_zgges(LAPACK_COL_MAJOR, 'V', 'V', 'N', nullptr, n, a.data(), n,
                                  b.data(), n, &sdim, alpha.data(), beta.data(), vsl.data(), n,
                                  vsr.data(), n);
  if (info != 0) throw Error(Errc::SingularPencil, "zgges failed, info=" + std::to_string(info));

  // coincident zeros on both diagonals mean det(Γ0 - λΓ1) ≡ 0
  const double small0 = 1e-10 * std::max(1.0, max_abs(gamma0));
  const double small1 = 1e-10 * std::max(1.0, max_abs(gamma1));
  for (int i = 0; i < n; ++i)
    if (std::abs(alpha[i]) < small0 && std::abs(beta[i]) < small1)
      throw Error(Errc::SingularPencil, "pencil is numerically irregular (coincident zeros)");

  std::vector<lapack_logical> select(n);
  for (int i = 0; i < n; ++i) select[i] = is_explosive(alpha[i], beta[i], stability_tol) ? 0 : 1;
  lapack_int m = 0;
  double pl = 0, pr = 0, dif[2] = {0, 0};
  // explicit workspace: the LAPACKE workspace query is unreliable for ijob = 0
  std::vector<std::complex<double>> work(std::max(1, 2 * n * n));
  std::vector<lapack_int> iwork(n + 6);
  info = LAPACKE_ztgsen_work(LAPACK_COL_MAJOR, 0, 1, 1, select.data(), n, a.data(), n, b.data(),
                             n, alpha.data(), beta.data(), vsl.data(), n, vsr.data(), n, &m, &pl,
                             &pr, dif, work.data(), lapack_int(work.size()), iwork.data(),
                             lapack_int(iwork.size()));
  if (info != 0) throw Error(Errc::SingularPencil, "ztgsen reordering failed");

  QzFactorization f;
  f.Q = vsl.adjoint();
  f.Z = vsr;
  f.Lambda = a.triangularView<Eigen::Upper>();
  f.Omega = b.triangularView<Eigen::Upper>();
  f.moduli.resize(n);
  f.n_explosive = 0;
  for (int i = 0; i < n; ++i) {
    double la = std::abs(f.Lambda(i, i)), om = std::abs(f.Omega(i, i));
    f.moduli[i] = la > 0 ? om / la : std::numeric_limits<double>::infinity();
    if (is_explosive(f.Lambda(i, i), f.Omega(i, i), stability_tol)) ++f.n_explosive;
  }
  return f;
}

double qz_reconstruction_error(const QzFactorization& f, const Mat& gamma0, const Mat& gamma1) {
  CMat r0 = f.Q.adjoint() * f.Lambda * f.Z.adjoint() - gamma0.cast<std::complex<double>>();
  CMat r1 = f.Q.adjoint() * f.Omega * f.Z.adjoint() - gamma1.cast<std::complex<double>>();
  return std::max(r0.cwiseAbs().maxCoeff(), r1.cwiseAbs().maxCoeff());
}

double qz_unitarity_error(const QzFactorization& f) {
  const int n = int(f.Q.rows());
  CMat i = CMat::Identity(n, n);
  return std::max((f.Q * f.Q.adjoint() - i).cwiseAbs().maxCoeff(),
                  (f.Z * f.Z.adjoint() - i).cwiseAbs().maxCoeff());
}

}  // namespace ftvp
