#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "meanlab/core.hpp"

namespace meanlab {

// Dense real symmetric matrix; the library's model of a selfadjoint operator.
// Construction symmetrizes as (M + M^T)/2 and rejects non-finite entries, so
// the symmetry invariant holds unconditionally.
template <typename Scalar = double>
class SymMatrix {
 public:
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit SymMatrix(const Dense& m) {
    if (m.rows() != m.cols() || m.rows() < 1)
      throw DimensionMismatch("SymMatrix: input must be square with dim >= 1");
    if (!m.allFinite())
      throw DomainError("SymMatrix: non-finite entry");
    mat_ = ((m + m.transpose()) / Scalar(2)).eval();
  }

  static SymMatrix identity(Eigen::Index dim) {
    return SymMatrix(Dense::Identity(dim, dim));
  }
  static SymMatrix zero(Eigen::Index dim) {
    return SymMatrix(Dense::Zero(dim, dim));
  }
  static SymMatrix diagonal(const Vector& d) {
    return SymMatrix(Dense(d.asDiagonal()));
  }
  static SymMatrix diagonal(std::initializer_list<Scalar> d) {
    Vector v(static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (Scalar x : d) v[i++] = x;
    return diagonal(v);
  }
  static SymMatrix scalar(Scalar x) {
    Dense m(1, 1);
    m(0, 0) = x;
    return SymMatrix(m);
  }

  Eigen::Index dim() const { return mat_.rows(); }
  const Dense& mat() const { return mat_; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return mat_(i, j); }
  Scalar frobenius_norm() const { return mat_.norm(); }

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    check_same_dim(a, b);
    return SymMatrix(Dense(a.mat_ + b.mat_));
  }
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    check_same_dim(a, b);
    return SymMatrix(Dense(a.mat_ - b.mat_));
  }
  friend SymMatrix operator*(Scalar c, const SymMatrix& a) {
    return SymMatrix(Dense(c * a.mat_));
  }

  static void check_same_dim(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim())
      throw DimensionMismatch("dimension mismatch: " + std::to_string(a.dim()) +
                              " vs " + std::to_string(b.dim()));
  }

 private:
  Dense mat_;
};

using SymMatrixd = SymMatrix<double>;

// Orthonormal eigenbasis Q (columns) and ascending eigenvalues of a SymMatrix,
// with A = Q diag(eigenvalues) Q^T up to the solver residual.
template <typename Scalar = double>
struct SpectralDecomposition {
  typename SymMatrix<Scalar>::Dense basis;
  typename SymMatrix<Scalar>::Vector eigenvalues;

  typename SymMatrix<Scalar>::Dense reconstruct() const {
    return basis * eigenvalues.asDiagonal() * basis.transpose();
  }
};

using SpectralDecompositiond = SpectralDecomposition<double>;

// Cyclic Jacobi sweeps. Each sweep annihilates every off-diagonal entry once;
// rotations are accumulated into the basis. Stops when the off-diagonal
// Frobenius mass is below tol.residual * (1 + ||A||_F).
template <typename Scalar>
SpectralDecomposition<Scalar> spectral_decompose(const SymMatrix<Scalar>& a,
                                                 const Tolerance& tol = {}) {
  using Dense = typename SymMatrix<Scalar>::Dense;
  const Eigen::Index n = a.dim();
  Dense m = a.mat();
  Dense q = Dense::Identity(n, n);
  const Scalar target = Scalar(tol.residual) * (Scalar(1) + a.frobenius_norm());

  auto off_norm = [&]() {
    Scalar s = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) s += m(i, j) * m(i, j);
    return std::sqrt(Scalar(2) * s);
  };

  bool done = (n == 1) || off_norm() <= target;
  for (int sweep = 0; !done && sweep < tol.max_sweeps; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index r = p + 1; r < n; ++r) {
        const Scalar apr = m(p, r);
        if (apr == Scalar(0)) continue;
        // Classical Jacobi rotation zeroing m(p, r).
        const Scalar theta = (m(r, r) - m(p, p)) / (Scalar(2) * apr);
        const Scalar t = (theta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        Eigen::JacobiRotation<Scalar> rot(c, s);
        m.applyOnTheLeft(p, r, rot.adjoint());
        m.applyOnTheRight(p, r, rot);
        q.applyOnTheRight(p, r, rot);
        m(p, r) = m(r, p) = Scalar(0);
      }
    }
    done = off_norm() <= target;
  }
  if (!done)
    throw NoConvergence("spectral_decompose: residual target not met within " +
                        std::to_string(tol.max_sweeps) + " sweeps");

  SpectralDecomposition<Scalar> dec;
  dec.eigenvalues.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) dec.eigenvalues[i] = m(i, i);
  std::vector<Eigen::Index> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index(0));
  std::stable_sort(perm.begin(), perm.end(), [&](Eigen::Index i, Eigen::Index j) {
    return dec.eigenvalues[i] < dec.eigenvalues[j];
  });
  typename SymMatrix<Scalar>::Vector sorted(n);
  dec.basis.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sorted[i] = dec.eigenvalues[perm[static_cast<size_t>(i)]];
    dec.basis.col(i) = q.col(perm[static_cast<size_t>(i)]);
  }
  dec.eigenvalues = sorted;
  return dec;
}

template <typename Scalar>
Scalar min_eigenvalue(const SymMatrix<Scalar>& a, const Tolerance& tol = {}) {
  return spectral_decompose(a, tol).eigenvalues[0];
}

// f(A) = Q f(Lambda) Q^T. Throws DomainError if f produces a non-finite value
// on any eigenvalue.
template <typename Scalar, typename Func>
SymMatrix<Scalar> matrix_function(const SymMatrix<Scalar>& a, Func&& f,
                                  const Tolerance& tol = {}) {
  auto dec = spectral_decompose(a, tol);
  typename SymMatrix<Scalar>::Vector fe(a.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    fe[i] = Scalar(f(dec.eigenvalues[i]));
    if (!std::isfinite(static_cast<double>(fe[i])))
      throw DomainError("matrix_function: eigenvalue " +
                        std::to_string(static_cast<double>(dec.eigenvalues[i])) +
                        " outside the domain of f");
  }
  return SymMatrix<Scalar>(typename SymMatrix<Scalar>::Dense(
      dec.basis * fe.asDiagonal() * dec.basis.transpose()));
}

template <typename Scalar>
void require_strictly_pd(const SymMatrix<Scalar>& a, const Tolerance& tol,
                         const char* who) {
  const Scalar mine = min_eigenvalue(a, tol);
  if (!(mine > Scalar(tol.psd_slack)))
    throw DomainError(std::string(who) + ": matrix is not strictly positive definite"
                      " (min eigenvalue " + std::to_string(static_cast<double>(mine)) + ")");
}

template <typename Scalar>
SymMatrix<Scalar> pd_power(const SymMatrix<Scalar>& a, Scalar p,
                           const Tolerance& tol = {}) {
  require_strictly_pd(a, tol, "pd_power");
  return matrix_function(a, [p](Scalar x) { return std::pow(x, p); }, tol);
}

template <typename Scalar>
SymMatrix<Scalar> pd_sqrt(const SymMatrix<Scalar>& a, const Tolerance& tol = {}) {
  return pd_power(a, Scalar(0.5), tol);
}

template <typename Scalar>
SymMatrix<Scalar> pd_inv_sqrt(const SymMatrix<Scalar>& a, const Tolerance& tol = {}) {
  return pd_power(a, Scalar(-0.5), tol);
}

template <typename Scalar>
SymMatrix<Scalar> pd_inverse(const SymMatrix<Scalar>& a, const Tolerance& tol = {}) {
  return pd_power(a, Scalar(-1), tol);
}

template <typename Scalar>
struct LoewnerVerdict {
  bool leq;
  Scalar witness;  // min eigenvalue of b - a
};

// a <= b in the Loewner order, up to psd_slack on the minimum eigenvalue.
template <typename Scalar>
LoewnerVerdict<Scalar> loewner_leq(const SymMatrix<Scalar>& a,
                                   const SymMatrix<Scalar>& b,
                                   const Tolerance& tol = {}) {
  SymMatrix<Scalar>::check_same_dim(a, b);
  const Scalar w = min_eigenvalue(b - a, tol);
  return {w >= Scalar(-tol.psd_slack), w};
}

// All eigenvalues in (lower - psd_slack, upper + psd_slack].
template <typename Scalar>
bool is_strictly_positive(const SymMatrix<Scalar>& a, Scalar lower, Scalar upper,
                          const Tolerance& tol = {}) {
  if (!(lower < upper))
    throw PreconditionError("is_strictly_positive: lower must be < upper");
  auto dec = spectral_decompose(a, tol);
  const Scalar slack = Scalar(tol.psd_slack);
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    const Scalar ev = dec.eigenvalues[i];
    if (!(ev > lower - slack && ev <= upper + slack)) return false;
  }
  return true;
}

// ||AB - BA||_F; zero (to roundoff) iff the pair commutes.
template <typename Scalar>
Scalar commutator_norm(const SymMatrix<Scalar>& a, const SymMatrix<Scalar>& b) {
  SymMatrix<Scalar>::check_same_dim(a, b);
  return (a.mat() * b.mat() - b.mat() * a.mat()).norm();
}

template <typename Scalar>
bool commutes(const SymMatrix<Scalar>& a, const SymMatrix<Scalar>& b,
              Scalar rel_tol = Scalar(1e-10)) {
  return commutator_norm(a, b) <=
         rel_tol * (Scalar(1) + a.frobenius_norm() * b.frobenius_norm());
}

}  // namespace meanlab
