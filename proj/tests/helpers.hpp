#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "meanlab/matrix_gen.hpp"
#include "meanlab/rng.hpp"
#include "meanlab/symmat.hpp"

namespace meanlab::testing {

inline SymMatrixd make(std::initializer_list<std::initializer_list<double>> rows) {
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return SymMatrixd(m);
}

inline SymMatrixd scalar(double x) { return SymMatrixd::scalar(x); }

// Random symmetric (not necessarily definite) matrix with gaussian entries.
inline SymMatrixd random_symmetric(int dim, SplitMix64& rng) {
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = rng.gaussian();
  return SymMatrixd(m);
}

// Commuting family sharing an eigenbasis: the joint-diagonalization oracle's
// construction side. Returns the basis and per-matrix eigenvalue vectors too,
// so operator identities can be cross-checked channel by channel.
struct JointFamily {
  Eigen::MatrixXd basis;
  std::vector<Eigen::VectorXd> eigenvalues;
  std::vector<SymMatrixd> matrices;
};

inline JointFamily joint_family(int dim, const std::vector<Eigen::VectorXd>& evs,
                                std::uint64_t seed) {
  SplitMix64 rng(seed);
  JointFamily fam;
  fam.basis = random_orthogonal(dim, rng);
  fam.eigenvalues = evs;
  for (const auto& ev : evs)
    fam.matrices.emplace_back(
        Eigen::MatrixXd(fam.basis * ev.asDiagonal() * fam.basis.transpose()));
  return fam;
}

// Ordered commuting pair with slot ratios a_i / b_i >= ratio_lo, eigenvalues
// inside (lo, hi]. Bounded ratios keep the gap series inside its 64-term
// convergence envelope.
inline JointFamily ratio_bounded_pair(int dim, double lo, double hi,
                                      double ratio_lo, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::VectorXd ea(dim), eb(dim);
  const double b_floor = lo / ratio_lo;  // keeps a_i = r * b_i above lo
  for (int i = 0; i < dim; ++i) {
    eb[i] = rng.uniform(std::max(lo, b_floor), hi);
    ea[i] = rng.uniform(ratio_lo, 1.0) * eb[i];
  }
  JointFamily fam;
  fam.basis = random_orthogonal(dim, rng);
  fam.eigenvalues = {ea, eb};
  fam.matrices.emplace_back(
      Eigen::MatrixXd(fam.basis * ea.asDiagonal() * fam.basis.transpose()));
  fam.matrices.emplace_back(
      Eigen::MatrixXd(fam.basis * eb.asDiagonal() * fam.basis.transpose()));
  return fam;
}

// Scalar oracles.
inline double scalar_sharp(double a, double b, double lambda) {
  return std::pow(a, 1.0 - lambda) * std::pow(b, lambda);
}
inline double scalar_nabla(double a, double b, double lambda) {
  return (1.0 - lambda) * a + lambda * b;
}
inline double scalar_gap(double a, double b, double lambda) {
  return scalar_nabla(a, b, lambda) - scalar_sharp(a, b, lambda);
}

}  // namespace meanlab::testing
