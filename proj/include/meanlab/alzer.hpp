#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "meanlab/iterative.hpp"
#include "meanlab/means.hpp"
#include "meanlab/symmat.hpp"

namespace meanlab {

// Scalars x_j in (0, 1/2] with positive weights summing to one.
struct ScalarTuple {
  std::vector<double> values;
  std::vector<double> weights;

  ScalarTuple(std::vector<double> v, std::vector<double> w)
      : values(std::move(v)), weights(std::move(w)) {
    if (values.size() != weights.size() || values.empty())
      throw PreconditionError("ScalarTuple: values/weights length mismatch");
    double sum = 0;
    for (double x : values)
      if (!(x > 0.0 && x <= 0.5))
        throw PreconditionError("ScalarTuple: values must lie in (0, 1/2]");
    for (double w : weights) {
      if (!(w > 0.0)) throw PreconditionError("ScalarTuple: weights must be > 0");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw PreconditionError("ScalarTuple: weights must sum to 1");
  }
};

struct ScalarAlzerGap {
  double lhs;  // A'_n - G'_n
  double rhs;  // A_n - G_n
};

// Scalar oracle: weighted arithmetic-geometric gaps of x_j and of 1 - x_j.
inline ScalarAlzerGap scalar_alzer_gap(const ScalarTuple& t) {
  double an = 0, aprime = 0, log_g = 0, log_gprime = 0;
  for (size_t j = 0; j < t.values.size(); ++j) {
    const double x = t.values[j], w = t.weights[j];
    an += w * x;
    aprime += w * (1.0 - x);
    log_g += w * std::log(x);
    log_gprime += w * std::log(1.0 - x);
  }
  return {aprime - std::exp(log_gprime), an - std::exp(log_g)};
}

// One experiment trial. `violated` tracks gap_min_eig < -psd_slack;
// hypothesis flags are recorded, never assumed, so out-of-hypothesis probes
// stay distinguishable in reports.
struct TrialRecord {
  std::int64_t trial_id = 0;
  std::uint64_t seed = 0;
  int n_ops = 2;
  int dim = 1;
  std::optional<double> lambda;
  bool commuting = false;
  bool ordered = false;
  bool in_range = false;        // all spectra in (0, 1/2]
  bool lambda_in_range = true;  // lambda <= 1/2 (or absent)
  double gap_min_eig = 0;       // min eigenvalue of RHS - LHS
  bool violated = false;
  bool marginal = false;  // |gap_min_eig| near the violation threshold
  std::optional<double> symmetry_residual;      // corollary check only
  std::optional<double> perm_gap_min_eig;       // open-problem permutation probe
  std::vector<SymMatrixd> inputs;               // stored per report policy
};

namespace detail {

inline void classify_gap(TrialRecord& rec, const Tolerance& tol) {
  rec.violated = rec.gap_min_eig < -tol.psd_slack;
  rec.marginal = rec.gap_min_eig >= -10.0 * tol.psd_slack &&
                 rec.gap_min_eig < -0.1 * tol.psd_slack;
}

}  // namespace detail

// Operator Alzer gap: min eigenvalue of
//   (A nabla_l B - A sharp_l B) - (B' nabla_l A' - B' sharp_l A').
// Only strict positivity of the inputs is required; the inequality's other
// hypotheses (commutation, 0 < A <= B <= I/2, lambda <= 1/2) are recorded as
// flags so their necessity can be probed.
inline TrialRecord operator_alzer_check(const SymMatrixd& a, const SymMatrixd& b,
                                        const Weight& w, const Tolerance& tol = {}) {
  SymMatrixd::check_same_dim(a, b);
  require_strictly_pd(a, tol, "operator_alzer_check");
  require_strictly_pd(b, tol, "operator_alzer_check");

  TrialRecord rec;
  rec.dim = static_cast<int>(a.dim());
  rec.n_ops = 2;
  rec.lambda = w.lambda;
  rec.commuting = commutes(a, b);
  rec.ordered = loewner_leq(a, b, tol).leq;
  rec.in_range = is_strictly_positive(a, 0.0, 0.5, tol) &&
                 is_strictly_positive(b, 0.0, 0.5, tol);
  rec.lambda_in_range = w.lambda <= 0.5;

  const SymMatrixd ap = complement(a);
  const SymMatrixd bp = complement(b);
  const SymMatrixd rhs = nabla(a, b, w) - sharp(a, b, w, tol);
  const SymMatrixd lhs = nabla(bp, ap, w) - sharp(bp, ap, w, tol);
  rec.gap_min_eig = min_eigenvalue(rhs - lhs, tol);
  detail::classify_gap(rec, tol);
  return rec;
}

// The lambda = 1/2 corollary A' - G' <= A - G. Both sides are symmetric in
// (a, b) at this weight; the observed swap residual is recorded.
inline TrialRecord classic_corollary_check(const SymMatrixd& a, const SymMatrixd& b,
                                           const Tolerance& tol = {}) {
  const Weight half(0.5);
  TrialRecord rec = operator_alzer_check(a, b, half, tol);
  const SymMatrixd fwd = nabla(a, b, half) - sharp(a, b, half, tol);
  const SymMatrixd rev = nabla(b, a, half) - sharp(b, a, half, tol);
  const SymMatrixd ap = complement(a), bp = complement(b);
  const SymMatrixd fwdp = nabla(bp, ap, half) - sharp(bp, ap, half, tol);
  const SymMatrixd revp = nabla(ap, bp, half) - sharp(ap, bp, half, tol);
  rec.symmetry_residual = std::max((fwd - rev).frobenius_norm(),
                                   (fwdp - revp).frobenius_norm());
  return rec;
}

// One open-problem probe: gap_min_eig of (A_n - G_n) - (A'_n - G'_n) with the
// recursive means over the inputs in the given order. The verdict is recorded,
// never asserted; the inequality is a conjecture.
inline TrialRecord open_problem_trial(const std::vector<SymMatrixd>& inputs,
                                      const Tolerance& tol = {}) {
  if (inputs.size() < 2)
    throw PreconditionError("open_problem_trial: need at least 2 operators");
  for (const auto& m : inputs) require_strictly_pd(m, tol, "open_problem_trial");

  TrialRecord rec;
  rec.n_ops = static_cast<int>(inputs.size());
  rec.dim = static_cast<int>(inputs[0].dim());
  rec.in_range = true;
  rec.commuting = true;
  for (size_t i = 0; i < inputs.size(); ++i) {
    rec.in_range = rec.in_range && is_strictly_positive(inputs[i], 0.0, 0.5, tol);
    for (size_t j = i + 1; j < inputs.size(); ++j)
      rec.commuting = rec.commuting && commutes(inputs[i], inputs[j]);
  }

  std::vector<SymMatrixd> comps;
  comps.reserve(inputs.size());
  for (const auto& m : inputs) comps.push_back(complement(m));

  const SymMatrixd gap = recursive_arithmetic(inputs) - recursive_geometric(inputs, tol);
  const SymMatrixd gapp = recursive_arithmetic(comps) - recursive_geometric(comps, tol);
  rec.gap_min_eig = min_eigenvalue(gap - gapp, tol);
  detail::classify_gap(rec, tol);
  return rec;
}

}  // namespace meanlab
