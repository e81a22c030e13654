#pragma once

#include <vector>

#include "meanlab/means.hpp"
#include "meanlab/symmat.hpp"

namespace meanlab {

struct SeriesParams {
  Weight lambda;
  int max_terms = 64;
  double target_residual = 1e-10;

  explicit SeriesParams(Weight w) : lambda(w) {}
  SeriesParams(Weight w, int terms, double target)
      : lambda(w), max_terms(terms), target_residual(target) {
    if (max_terms < 2)
      throw PreconditionError("SeriesParams: max_terms must be >= 2");
    if (!(target_residual > 0))
      throw PreconditionError("SeriesParams: target_residual must be > 0");
  }
};

template <typename Scalar = double>
struct SeriesResult {
  SymMatrix<Scalar> partial_sum;
  int terms_used = 0;          // number of terms added, starting at k = 2
  Scalar last_term_norm = 0;
  bool converged = false;
  // Per added term k = 2, 3, ...
  std::vector<Scalar> per_term_min_eigs;
  std::vector<Scalar> coefficients;        // (-1)^{k-1} C(1-lambda, k)
  std::vector<Scalar> term_norms;
  std::vector<Scalar> partial_sum_norms;
};

// Generalized binomial coefficient C(alpha, k) = alpha (alpha-1) ... (alpha-k+1) / k!,
// evaluated as a running product with division at every step.
inline double gen_binom(double alpha, int k) {
  if (k < 0) throw PreconditionError("gen_binom: k must be >= 0");
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= (alpha - i) / (i + 1);
  return r;
}

// (-1)^{k-1} C(alpha, k); strictly positive for alpha in (0,1) and k >= 2.
inline double sign_structure(double alpha, int k) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw PreconditionError("sign_structure: alpha must lie in (0,1)");
  if (k < 2) throw PreconditionError("sign_structure: k must be >= 2");
  const double s = (k % 2 == 0) ? -1.0 : 1.0;
  return s * gen_binom(alpha, k);
}

template <typename Scalar = double>
struct SeriesPrecheck {
  Scalar radius;        // spectral radius of B^{-1/2} A B^{-1/2} - I
  bool operative;       // radius < 1: the series converges
  bool strict_norm_condition;  // ||B^{-1/2} A B^{-1/2}|| < 1, stricter sufficient condition
};

template <typename Scalar>
SeriesPrecheck<Scalar> series_precheck(const SymMatrix<Scalar>& a,
                                       const SymMatrix<Scalar>& b,
                                       const Tolerance& tol = {}) {
  SymMatrix<Scalar>::check_same_dim(a, b);
  require_strictly_pd(a, tol, "series_precheck");
  require_strictly_pd(b, tol, "series_precheck");
  const SymMatrix<Scalar> bih = pd_inv_sqrt(b, tol);
  const SymMatrix<Scalar> m(
      typename SymMatrix<Scalar>::Dense(bih.mat() * a.mat() * bih.mat()));
  auto dec = spectral_decompose(m, tol);
  Scalar radius = 0;
  Scalar op_norm = 0;
  for (Eigen::Index i = 0; i < m.dim(); ++i) {
    radius = std::max(radius, std::abs(dec.eigenvalues[i] - Scalar(1)));
    op_norm = std::max(op_norm, std::abs(dec.eigenvalues[i]));
  }
  return {radius, radius < Scalar(1), op_norm < Scalar(1)};
}

// Partial sums of the arithmetic-geometric gap series
//   sum_{k>=2} (-1)^{k-1} C(1-lambda, k) B^{1/2} [B^{-1/2}(B-A)B^{-1/2}]^k B^{1/2},
// which equals A nabla_lambda B - A sharp_lambda B whenever the spectral
// radius of B^{-1/2} A B^{-1/2} - I is below 1. For commuting inputs the
// summand reduces to C(1-lambda,k) B^{(1-k)/2} (B-A)^k B^{(1-k)/2}.
template <typename Scalar>
SeriesResult<Scalar> gap_series(const SymMatrix<Scalar>& a,
                                const SymMatrix<Scalar>& b,
                                const SeriesParams& p,
                                const Tolerance& tol = {}) {
  const auto pre = series_precheck(a, b, tol);
  if (!pre.operative)
    throw DomainError("gap_series: convergence precheck failed, spectral radius " +
                      std::to_string(static_cast<double>(pre.radius)));

  using Dense = typename SymMatrix<Scalar>::Dense;
  const SymMatrix<Scalar> bh = pd_sqrt(b, tol);
  const SymMatrix<Scalar> bih = pd_inv_sqrt(b, tol);
  const Dense s = bih.mat() * (b - a).mat() * bih.mat();
  const Scalar alpha = Scalar(1) - Scalar(p.lambda.lambda);

  SeriesResult<Scalar> res{SymMatrix<Scalar>::zero(a.dim())};
  Dense power = s * s;  // s^k, starting at k = 2
  Dense acc = Dense::Zero(a.dim(), a.dim());
  for (int k = 2; k <= p.max_terms + 1; ++k) {
    const Scalar coef = Scalar(sign_structure(static_cast<double>(alpha), k));
    const SymMatrix<Scalar> term(Dense(coef * (bh.mat() * power * bh.mat())));
    acc += term.mat();
    res.partial_sum = SymMatrix<Scalar>(acc);
    res.terms_used = k - 1;
    res.last_term_norm = term.frobenius_norm();
    res.coefficients.push_back(coef);
    res.term_norms.push_back(res.last_term_norm);
    res.per_term_min_eigs.push_back(min_eigenvalue(term, tol));
    res.partial_sum_norms.push_back(res.partial_sum.frobenius_norm());
    if (res.last_term_norm <= Scalar(p.target_residual)) {
      res.converged = true;
      break;
    }
    if (res.terms_used >= p.max_terms) break;
    power = power * s;
  }
  return res;
}

// || series sum - (A nabla_lambda B - A sharp_lambda B) ||_F on a converged run.
template <typename Scalar>
Scalar verify_gap_identity(const SymMatrix<Scalar>& a, const SymMatrix<Scalar>& b,
                           const Weight& w, const SeriesParams& p,
                           const Tolerance& tol = {}) {
  const auto res = gap_series(a, b, p, tol);
  if (!res.converged)
    throw NotConverged("verify_gap_identity: series did not converge within " +
                       std::to_string(p.max_terms) + " terms (last term norm " +
                       std::to_string(static_cast<double>(res.last_term_norm)) + ")");
  const SymMatrix<Scalar> gap = nabla(a, b, w) - sharp(a, b, w, tol);
  return (res.partial_sum - gap).frobenius_norm();
}

}  // namespace meanlab
