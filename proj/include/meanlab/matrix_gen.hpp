#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <vector>

#include "meanlab/rng.hpp"
#include "meanlab/symmat.hpp"

namespace meanlab {

// Seeded ensemble of strictly PD matrices with eigenvalues in
// [spectrum_lo, spectrum_hi]. Commuting families share one eigenbasis;
// ordered pairs additionally sort eigenvalues slot-wise so A <= B holds
// exactly in that basis.
struct EnsembleSpec {
  int dim = 2;
  double spectrum_lo = 0.01;
  double spectrum_hi = 0.5;
  int count = 1;
  bool commuting = false;
  bool ordered = false;
  std::uint64_t seed = 0;

  void validate() const {
    if (dim < 1) throw SpecError("EnsembleSpec: dim must be >= 1");
    if (!(spectrum_lo > 0)) throw SpecError("EnsembleSpec: spectrum_lo must be > 0");
    if (!(spectrum_lo < spectrum_hi))
      throw SpecError("EnsembleSpec: spectrum_lo must be < spectrum_hi");
    if (count < 1) throw SpecError("EnsembleSpec: count must be >= 1");
    if (ordered && count != 2)
      throw SpecError("EnsembleSpec: ordered requires count == 2");
  }
};

// Householder QR of a Gaussian matrix, with column signs fixed by the sign of
// the R diagonal so the output is a deterministic function of the stream.
inline Eigen::MatrixXd random_orthogonal(int dim, SplitMix64& rng) {
  Eigen::MatrixXd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.gaussian();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

inline Eigen::MatrixXd random_orthogonal(int dim, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return random_orthogonal(dim, rng);
}

inline std::vector<SymMatrixd> random_spd(const EnsembleSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  const bool shared_basis = spec.commuting || spec.ordered;
  Eigen::MatrixXd q;
  if (shared_basis) q = random_orthogonal(spec.dim, rng);

  std::vector<SymMatrixd> out;
  out.reserve(static_cast<size_t>(spec.count));
  if (spec.ordered) {
    // Two draws per slot, min to A and max to B.
    Eigen::VectorXd ea(spec.dim), eb(spec.dim);
    for (int i = 0; i < spec.dim; ++i) {
      const double u = rng.uniform(spec.spectrum_lo, spec.spectrum_hi);
      const double v = rng.uniform(spec.spectrum_lo, spec.spectrum_hi);
      ea[i] = std::min(u, v);
      eb[i] = std::max(u, v);
    }
    out.emplace_back(Eigen::MatrixXd(q * ea.asDiagonal() * q.transpose()));
    out.emplace_back(Eigen::MatrixXd(q * eb.asDiagonal() * q.transpose()));
    return out;
  }
  for (int k = 0; k < spec.count; ++k) {
    if (!shared_basis) q = random_orthogonal(spec.dim, rng);
    Eigen::VectorXd ev(spec.dim);
    for (int i = 0; i < spec.dim; ++i)
      ev[i] = rng.uniform(spec.spectrum_lo, spec.spectrum_hi);
    out.emplace_back(Eigen::MatrixXd(q * ev.asDiagonal() * q.transpose()));
  }
  return out;
}

}  // namespace meanlab
