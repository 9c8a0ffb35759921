#pragma once

#include "ftvp/numerics/linalg.hpp"

namespace ftvp {

// Reordered complex generalized Schur form of the pencil (Γ0, Γ1):
//   Q Γ0 Z = Lambda,  Q Γ1 Z = Omega,  Q and Z unitary,
// so Γ0 = Q^H Lambda Z^H. Stable roots lead, explosive roots trail.
struct QzFactorization {
  CMat Q;
  CMat Z;
  CMat Lambda;
  CMat Omega;
  Vec moduli;        // |Omega_ii| / |Lambda_ii| (inf when Lambda_ii = 0)
  int n_explosive = 0;
};

// A root is explosive when |Omega_ii| > (1 + stability_tol) |Lambda_ii|.
QzFactorization qz_decompose(const Mat& gamma0, const Mat& gamma1,
                             double stability_tol = 1e-6);

// Reconstruction and unitarity residuals (max-abs), for checks.
double qz_reconstruction_error(const QzFactorization& f, const Mat& gamma0,
                               const Mat& gamma1);
double qz_unitarity_error(const QzFactorization& f);

}  // namespace ftvp
