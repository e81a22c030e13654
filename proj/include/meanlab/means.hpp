#pragma once

#include "meanlab/symmat.hpp"

namespace meanlab {

// Weight lambda of a two-operator mean, restricted to the open interval (0,1).
struct Weight {
  explicit Weight(double l) : lambda(l) {
    if (!(l > 0.0 && l < 1.0))
      throw PreconditionError("Weight: lambda must lie in (0,1), got " +
                              std::to_string(l));
  }
  double lambda;
};

// Weighted arithmetic mean (1-lambda) A + lambda B.
template <typename Scalar>
SymMatrix<Scalar> nabla(const SymMatrix<Scalar>& a, const SymMatrix<Scalar>& b,
                        const Weight& w) {
  SymMatrix<Scalar>::check_same_dim(a, b);
  const Scalar l = Scalar(w.lambda);
  return SymMatrix<Scalar>(typename SymMatrix<Scalar>::Dense(
      (Scalar(1) - l) * a.mat() + l * b.mat()));
}

// Weighted geometric mean A^{1/2} (A^{-1/2} B A^{-1/2})^lambda A^{1/2}.
template <typename Scalar>
SymMatrix<Scalar> sharp(const SymMatrix<Scalar>& a, const SymMatrix<Scalar>& b,
                        const Weight& w, const Tolerance& tol = {}) {
  SymMatrix<Scalar>::check_same_dim(a, b);
  require_strictly_pd(a, tol, "sharp");
  require_strictly_pd(b, tol, "sharp");
  const SymMatrix<Scalar> ah = pd_sqrt(a, tol);
  const SymMatrix<Scalar> aih = pd_inv_sqrt(a, tol);
  const SymMatrix<Scalar> inner(
      typename SymMatrix<Scalar>::Dense(aih.mat() * b.mat() * aih.mat()));
  const SymMatrix<Scalar> powered = pd_power(inner, Scalar(w.lambda), tol);
  return SymMatrix<Scalar>(
      typename SymMatrix<Scalar>::Dense(ah.mat() * powered.mat() * ah.mat()));
}

// Weighted harmonic mean ((1-lambda) A^{-1} + lambda B^{-1})^{-1}.
template <typename Scalar>
SymMatrix<Scalar> harmonic(const SymMatrix<Scalar>& a, const SymMatrix<Scalar>& b,
                           const Weight& w, const Tolerance& tol = {}) {
  SymMatrix<Scalar>::check_same_dim(a, b);
  const SymMatrix<Scalar> ai = pd_inverse(a, tol);
  const SymMatrix<Scalar> bi = pd_inverse(b, tol);
  return pd_inverse(nabla(ai, bi, w), tol);
}

// A' = I - A.
template <typename Scalar>
SymMatrix<Scalar> complement(const SymMatrix<Scalar>& a) {
  return SymMatrix<Scalar>::identity(a.dim()) - a;
}

template <typename Scalar>
struct PsdCertificate {
  bool psd;
  Scalar witness;  // min eigenvalue of the 2n x 2n block matrix
};

// PSD verdict for [[A, X], [X, B]], the certificate characterizing X <= A # B.
template <typename Scalar>
PsdCertificate<Scalar> block_psd_certificate(const SymMatrix<Scalar>& a,
                                             const SymMatrix<Scalar>& b,
                                             const SymMatrix<Scalar>& x,
                                             const Tolerance& tol = {}) {
  SymMatrix<Scalar>::check_same_dim(a, b);
  SymMatrix<Scalar>::check_same_dim(a, x);
  const Eigen::Index n = a.dim();
  typename SymMatrix<Scalar>::Dense block(2 * n, 2 * n);
  block.topLeftCorner(n, n) = a.mat();
  block.topRightCorner(n, n) = x.mat();
  block.bottomLeftCorner(n, n) = x.mat();
  block.bottomRightCorner(n, n) = b.mat();
  const Scalar w = min_eigenvalue(SymMatrix<Scalar>(block), tol);
  return {w >= Scalar(-tol.psd_slack), w};
}

}  // namespace meanlab
