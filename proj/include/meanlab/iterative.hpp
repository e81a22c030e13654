#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "meanlab/means.hpp"
#include "meanlab/symmat.hpp"

namespace meanlab {

struct IterationParams {
  int m = 2;
  double tol_stop = 1e-11;
  int max_iter = 200;

  void validate() const {
    if (m < 2) throw PreconditionError("IterationParams: m must be >= 2");
    if (!(tol_stop > 0)) throw PreconditionError("IterationParams: tol_stop must be > 0");
    if (max_iter < 1) throw PreconditionError("IterationParams: max_iter must be >= 1");
  }
};

// Record of one T_n / Phi_n run. All per-step vectors are indexed by n and
// share the length of `iterates`.
template <typename Scalar = double>
struct IterationTrace {
  std::vector<SymMatrix<Scalar>> iterates;   // T_0, T_1, ...
  std::vector<Scalar> residuals;             // ||T_n - limit||_F
  std::vector<Scalar> bound_values;          // (1 - 1/m)^n ||T_0 - T_0^{(-1)}||_F
  std::vector<Scalar> gap_min_eigs;          // min eig of T_n - limit
  std::vector<Scalar> asymmetry_norms;       // ||raw - raw^T||_F of the update
  bool converged = false;
  bool asymmetry_flagged = false;  // some update drifted beyond 1e-8 * scale
};

// Power geometric mean Phi_{1/m}(A, B) = B^{1/2} (B^{-1/2} A B^{-1/2})^{1/m} B^{1/2}.
template <typename Scalar>
SymMatrix<Scalar> power_mean(const SymMatrix<Scalar>& a, const SymMatrix<Scalar>& b,
                             int m, const Tolerance& tol = {}) {
  SymMatrix<Scalar>::check_same_dim(a, b);
  if (m < 2) throw PreconditionError("power_mean: m must be >= 2");
  require_strictly_pd(a, tol, "power_mean");
  require_strictly_pd(b, tol, "power_mean");
  const SymMatrix<Scalar> bh = pd_sqrt(b, tol);
  const SymMatrix<Scalar> bih = pd_inv_sqrt(b, tol);
  const SymMatrix<Scalar> inner(
      typename SymMatrix<Scalar>::Dense(bih.mat() * a.mat() * bih.mat()));
  const SymMatrix<Scalar> powered = pd_power(inner, Scalar(1) / Scalar(m), tol);
  return SymMatrix<Scalar>(
      typename SymMatrix<Scalar>::Dense(bh.mat() * powered.mat() * bh.mat()));
}

namespace detail {

// T_0^{(-1)} = (T_0(A^{-1}, B^{-1}))^{-1} for T_0 = (1/m) A + ((m-1)/m) B.
template <typename Scalar>
SymMatrix<Scalar> t0_harmonic(const SymMatrix<Scalar>& a, const SymMatrix<Scalar>& b,
                              int m, const Tolerance& tol) {
  const Scalar w = Scalar(1) / Scalar(m);
  const SymMatrix<Scalar> mixed(typename SymMatrix<Scalar>::Dense(
      w * pd_inverse(a, tol).mat() + (Scalar(1) - w) * pd_inverse(b, tol).mat()));
  return pd_inverse(mixed, tol);
}

template <typename Scalar>
void record_step(IterationTrace<Scalar>& trace, const SymMatrix<Scalar>& t,
                 const SymMatrix<Scalar>& limit, Scalar bound0_norm, int m,
                 Scalar asymmetry, const Tolerance& tol) {
  const int n = static_cast<int>(trace.iterates.size());
  trace.iterates.push_back(t);
  trace.residuals.push_back((t - limit).frobenius_norm());
  trace.bound_values.push_back(
      std::pow(Scalar(1) - Scalar(1) / Scalar(m), Scalar(n)) * bound0_norm);
  trace.gap_min_eigs.push_back(min_eigenvalue(t - limit, tol));
  trace.asymmetry_norms.push_back(asymmetry);
  if (asymmetry > Scalar(1e-8) * (Scalar(1) + t.frobenius_norm()))
    trace.asymmetry_flagged = true;
}

}  // namespace detail

// One step of Eq-style update T -> ((m-1)/m) T + (1/m) A (T^{-1} B)^{m-1}.
// The raw product is generally non-symmetric; it is symmetrized and the drift
// reported so it stays observable.
template <typename Scalar>
SymMatrix<Scalar> tn_step(const SymMatrix<Scalar>& a, const SymMatrix<Scalar>& b,
                          const SymMatrix<Scalar>& t, int m, Scalar& asymmetry,
                          const Tolerance& tol) {
  using Dense = typename SymMatrix<Scalar>::Dense;
  require_strictly_pd(t, tol, "tn_step");
  const Dense x = t.mat().llt().solve(b.mat());  // T^{-1} B
  Dense prod = Dense::Identity(t.dim(), t.dim());
  for (int i = 0; i < m - 1; ++i) prod = prod * x;
  const Scalar w = Scalar(1) / Scalar(m);
  const Dense raw = (Scalar(1) - w) * t.mat() + w * (a.mat() * prod);
  asymmetry = (raw - raw.transpose()).norm();
  return SymMatrix<Scalar>(raw);
}

// T_n recursion of the m-th power geometric mean: T_0 = (1/m) A + ((m-1)/m) B,
// stopping on distance to the closed-form limit Phi_{1/m}(A, B).
template <typename Scalar>
IterationTrace<Scalar> tn_iteration(const SymMatrix<Scalar>& a,
                                    const SymMatrix<Scalar>& b,
                                    const IterationParams& p,
                                    const Tolerance& tol = {}) {
  p.validate();
  require_strictly_pd(a, tol, "tn_iteration");
  require_strictly_pd(b, tol, "tn_iteration");
  const int m = p.m;
  const SymMatrix<Scalar> limit = power_mean(a, b, m, tol);
  const Scalar w = Scalar(1) / Scalar(m);
  SymMatrix<Scalar> t(typename SymMatrix<Scalar>::Dense(
      w * a.mat() + (Scalar(1) - w) * b.mat()));
  const Scalar bound0_norm =
      (t - detail::t0_harmonic(a, b, m, tol)).frobenius_norm();

  IterationTrace<Scalar> trace;
  detail::record_step(trace, t, limit, bound0_norm, m, Scalar(0), tol);
  for (int it = 0; it < p.max_iter; ++it) {
    if (trace.residuals.back() <= Scalar(p.tol_stop)) {
      trace.converged = true;
      break;
    }
    Scalar asym = 0;
    t = tn_step(a, b, t, m, asym, tol);
    if (!(min_eigenvalue(t, tol) > Scalar(tol.psd_slack)))
      throw DomainError("tn_iteration: iterate lost strict positivity");
    detail::record_step(trace, t, limit, bound0_norm, m, asym, tol);
  }
  if (!trace.converged && trace.residuals.back() <= Scalar(p.tol_stop))
    trace.converged = true;
  return trace;
}

// Arithmetic-harmonic sequence Phi_0 = (A+B)/2,
// Phi_{n+1} = Phi_n/2 + A Phi_n^{-1} B / 2, converging to A # B.
// Stops on the successive difference; residuals are still reported against
// the closed-form limit.
template <typename Scalar>
IterationTrace<Scalar> ah_iteration(const SymMatrix<Scalar>& a,
                                    const SymMatrix<Scalar>& b,
                                    const IterationParams& p,
                                    const Tolerance& tol = {}) {
  IterationParams q = p;
  q.m = 2;  // fixed two-operator mean
  q.validate();
  require_strictly_pd(a, tol, "ah_iteration");
  require_strictly_pd(b, tol, "ah_iteration");
  const SymMatrix<Scalar> limit = sharp(a, b, Weight(0.5), tol);
  SymMatrix<Scalar> t(typename SymMatrix<Scalar>::Dense(
      (a.mat() + b.mat()) / Scalar(2)));
  const Scalar bound0_norm =
      (t - detail::t0_harmonic(a, b, 2, tol)).frobenius_norm();

  IterationTrace<Scalar> trace;
  detail::record_step(trace, t, limit, bound0_norm, 2, Scalar(0), tol);
  for (int it = 0; it < q.max_iter; ++it) {
    Scalar asym = 0;
    const SymMatrix<Scalar> next = tn_step(a, b, t, 2, asym, tol);
    if (!(min_eigenvalue(next, tol) > Scalar(tol.psd_slack)))
      throw DomainError("ah_iteration: iterate lost strict positivity");
    const Scalar step = (next - t).frobenius_norm();
    t = next;
    detail::record_step(trace, t, limit, bound0_norm, 2, asym, tol);
    if (step <= Scalar(q.tol_stop)) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

template <typename Scalar = double>
struct StepBoundCheck {
  bool lower_ok;     // 0 <= T_n - Phi (up to psd_slack)
  bool upper_ok;     // T_n - Phi <= (1-1/m)^n (T_0 - T_0^{(-1)})
  bool monotone_ok;  // T_n <= T_{n-1}; vacuously true at n = 0
};

// Per-step verification of the sandwich 0 <= T_n - Phi <= (1-1/m)^n (T_0 - T_0^{(-1)})
// and of the monotone decrease of the iterates.
template <typename Scalar>
std::vector<StepBoundCheck<Scalar>> check_estimation_bound(
    const IterationTrace<Scalar>& trace, const SymMatrix<Scalar>& a,
    const SymMatrix<Scalar>& b, int m, const Tolerance& tol = {}) {
  const SymMatrix<Scalar> limit = power_mean(a, b, m, tol);
  const Scalar w = Scalar(1) / Scalar(m);
  const SymMatrix<Scalar> t0(typename SymMatrix<Scalar>::Dense(
      w * a.mat() + (Scalar(1) - w) * b.mat()));
  const SymMatrix<Scalar> bound0 = t0 - detail::t0_harmonic(a, b, m, tol);
  const Scalar slack = Scalar(tol.psd_slack);

  std::vector<StepBoundCheck<Scalar>> out;
  out.reserve(trace.iterates.size());
  for (size_t n = 0; n < trace.iterates.size(); ++n) {
    const SymMatrix<Scalar> gap = trace.iterates[n] - limit;
    const Scalar factor =
        std::pow(Scalar(1) - Scalar(1) / Scalar(m), Scalar(n));
    StepBoundCheck<Scalar> chk;
    chk.lower_ok = min_eigenvalue(gap, tol) >= -slack;
    chk.upper_ok = min_eigenvalue(factor * bound0 - gap, tol) >= -slack;
    chk.monotone_ok =
        n == 0 ||
        min_eigenvalue(trace.iterates[n - 1] - trace.iterates[n], tol) >= -slack;
    out.push_back(chk);
  }
  return out;
}

// A_m(a_1, ..., a_m) = (1/m) a_1 + ((m-1)/m) A_{m-1}(a_2, ..., a_m).
template <typename Scalar>
SymMatrix<Scalar> recursive_arithmetic(std::span<const SymMatrix<Scalar>> inputs) {
  if (inputs.empty()) throw EmptyInput("recursive_arithmetic: no inputs");
  if (inputs.size() == 1) return inputs[0];
  const Scalar m = Scalar(inputs.size());
  const SymMatrix<Scalar> rest = recursive_arithmetic(inputs.subspan(1));
  SymMatrix<Scalar>::check_same_dim(inputs[0], rest);
  return SymMatrix<Scalar>(typename SymMatrix<Scalar>::Dense(
      inputs[0].mat() / m + (m - Scalar(1)) / m * rest.mat()));
}

// H_m(a_1, ..., a_m) = ((1/m) a_1^{-1} + ((m-1)/m) H_{m-1}^{-1})^{-1}.
template <typename Scalar>
SymMatrix<Scalar> recursive_harmonic(std::span<const SymMatrix<Scalar>> inputs,
                                     const Tolerance& tol = {}) {
  if (inputs.empty()) throw EmptyInput("recursive_harmonic: no inputs");
  if (inputs.size() == 1) {
    require_strictly_pd(inputs[0], tol, "recursive_harmonic");
    return inputs[0];
  }
  const Scalar m = Scalar(inputs.size());
  const SymMatrix<Scalar> rest = recursive_harmonic(inputs.subspan(1), tol);
  SymMatrix<Scalar>::check_same_dim(inputs[0], rest);
  const SymMatrix<Scalar> mixed(typename SymMatrix<Scalar>::Dense(
      pd_inverse(inputs[0], tol).mat() / m +
      (m - Scalar(1)) / m * pd_inverse(rest, tol).mat()));
  return pd_inverse(mixed, tol);
}

// G_m(A_1, ..., A_m) = Phi_{1/m}(A_1, G_{m-1}(A_2, ..., A_m)); G_1(A) = A.
// Order-dependent for m >= 3.
template <typename Scalar>
SymMatrix<Scalar> recursive_geometric(std::span<const SymMatrix<Scalar>> inputs,
                                      const Tolerance& tol = {}) {
  if (inputs.empty()) throw EmptyInput("recursive_geometric: no inputs");
  if (inputs.size() == 1) {
    require_strictly_pd(inputs[0], tol, "recursive_geometric");
    return inputs[0];
  }
  const SymMatrix<Scalar> rest = recursive_geometric(inputs.subspan(1), tol);
  return power_mean(inputs[0], rest, static_cast<int>(inputs.size()), tol);
}

// Convenience overloads for vector arguments.
template <typename Scalar>
SymMatrix<Scalar> recursive_arithmetic(const std::vector<SymMatrix<Scalar>>& v) {
  return recursive_arithmetic(std::span<const SymMatrix<Scalar>>(v));
}
template <typename Scalar>
SymMatrix<Scalar> recursive_harmonic(const std::vector<SymMatrix<Scalar>>& v,
                                     const Tolerance& tol = {}) {
  return recursive_harmonic(std::span<const SymMatrix<Scalar>>(v), tol);
}
template <typename Scalar>
SymMatrix<Scalar> recursive_geometric(const std::vector<SymMatrix<Scalar>>& v,
                                      const Tolerance& tol = {}) {
  return recursive_geometric(std::span<const SymMatrix<Scalar>>(v), tol);
}

}  // namespace meanlab
