// instances.hpp — Canonical and seeded random super-operator instances for
// tests, the self-test suite, and quick experiments.

#pragma once

#include <random>

#include "dnorm/matrix.hpp"
#include "dnorm/superop.hpp"

namespace dnorm {

// The identity channel X ↦ X (B = C = I, trivial ancilla).
inline StinespringPair identity_pair(Eigen::Index dim_v) {
  CMatrix id = CMatrix::Identity(dim_v, dim_v);
  return StinespringPair(dim_v, 1, id, id);
}

// The zero map (C = 0).
inline StinespringPair zero_pair(Eigen::Index dim_v) {
  return StinespringPair(dim_v, 1, CMatrix::Identity(dim_v, dim_v), CMatrix::Zero(dim_v, dim_v));
}

inline CMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  return m;
}

// Haar-distributed unitary via QR of a complex Gaussian with phase fixing.
inline CMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  const CMatrix g = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0, 0.0);
  }
  return q;
}

// Isometry C^{cols} → C^{rows} (rows ≥ cols), W†W = I.
inline CMatrix random_isometry(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  const CMatrix g = random_gaussian(rows, cols, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = CMatrix(qr.householderQ()).leftCols(cols);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < cols; ++i) {
    const Complex d = r(i, i);
    q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0, 0.0);
  }
  return q;
}

inline HermitianMatrix random_density(Eigen::Index n, std::mt19937_64& rng) {
  const CMatrix g = random_gaussian(n, n, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return HermitianMatrix::symmetrized(rho);
}

inline HermitianMatrix random_psd(Eigen::Index n, std::mt19937_64& rng) {
  const CMatrix g = random_gaussian(n, n, rng);
  return HermitianMatrix::symmetrized(g * g.adjoint() / double(n));
}

// Generic Stinespring pair with Gaussian B, C normalized to unit spectral norm.
inline StinespringPair random_stinespring(Eigen::Index dim_v, Eigen::Index dim_a,
                                          std::mt19937_64& rng) {
  CMatrix b = random_gaussian(dim_v * dim_a, dim_v, rng);
  CMatrix c = random_gaussian(dim_v * dim_a, dim_v, rng);
  b /= spectral_norm(b);
  c /= spectral_norm(c);
  return StinespringPair(dim_v, dim_a, std::move(b), std::move(c));
}

// Stinespring pair of the difference of the two channels generated by the
// isometries W1, W2 : V → V⊗C^k, i.e. X ↦ Tr_A(W1 X W1†) − Tr_A(W2 X W2†).
// One extra ancilla qubit separates the two branches, as in the unitary
// difference construction.
inline StinespringPair channel_difference_pair(const CMatrix& w1, const CMatrix& w2) {
  if (w1.rows() != w2.rows() || w1.cols() != w2.cols() || w1.rows() % w1.cols() != 0) {
    throw std::invalid_argument("channel_difference_pair: W1, W2 must be equal-shape isometry-like maps");
  }
  const Eigen::Index n = w1.cols();
  const Eigen::Index k = w1.rows() / n;
  const Eigen::Index a = 2 * k;
  CMatrix b = CMatrix::Zero(n * a, n);
  CMatrix c = CMatrix::Zero(n * a, n);
  for (Eigen::Index v = 0; v < n; ++v)
    for (Eigen::Index j = 0; j < k; ++j) {
      b.row(v * a + j) = w1.row(v * k + j);
      b.row(v * a + k + j) = w2.row(v * k + j);
      c.row(v * a + j) = w1.row(v * k + j);
      c.row(v * a + k + j) = -w2.row(v * k + j);
    }
  return StinespringPair(n, a, std::move(b), std::move(c));
}

// Difference of two random channels with k Kraus branches each.
inline StinespringPair random_channel_difference(Eigen::Index dim_v, Eigen::Index k,
                                                 std::mt19937_64& rng) {
  const CMatrix w1 = random_isometry(dim_v * k, dim_v, rng);
  const CMatrix w2 = random_isometry(dim_v * k, dim_v, rng);
  return channel_difference_pair(w1, w2);
}

}  // namespace dnorm
