// matrix.hpp — Dense complex-matrix kernel: Hermitian eigendecomposition,
// PSD square root, trace/spectral norms, partial trace, Kronecker product.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace dnorm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

// Absolute tolerance for declaring an input Hermitian.
inline constexpr double kHermitianTol = 1e-12;

// A square matrix certified Hermitian: inputs are symmetrized (M+M†)/2 on
// construction to absorb roundoff, and rejected if the asymmetry exceeds
// the tolerance.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const CMatrix& m, double tol = kHermitianTol) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
      throw std::invalid_argument("HermitianMatrix: matrix must be square and non-empty");
    }
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tol) {
      throw std::invalid_argument("HermitianMatrix: input is not Hermitian (asymmetry " +
                                  std::to_string(asym) + " exceeds tolerance)");
    }
    mat_ = 0.5 * (m + m.adjoint());
  }

  // Symmetrize without checking. For internal results of arithmetic that are
  // Hermitian by construction but may carry scale-dependent roundoff.
  static HermitianMatrix symmetrized(const CMatrix& m) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
      throw std::invalid_argument("HermitianMatrix: matrix must be square and non-empty");
    }
    HermitianMatrix h;
    h.mat_ = 0.5 * (m + m.adjoint());
    return h;
  }

  Eigen::Index dim() const { return mat_.rows(); }
  const CMatrix& matrix() const { return mat_; }

 private:
  HermitianMatrix() = default;
  CMatrix mat_;
};

// Eigenvalues sorted descending; column i of eigenvectors pairs with eigenvalues[i].
struct EigenDecomposition {
  RealVector eigenvalues;
  CMatrix eigenvectors;
};

inline EigenDecomposition eig_hermitian(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
  }
  EigenDecomposition d;
  d.eigenvalues = solver.eigenvalues().reverse();
  d.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return d;
}

// V·diag(√max(λ,0))·V†. Without clipping, eigenvalues below -1e-10 are a
// domain error; tiny negatives from roundoff are treated as zero either way.
inline HermitianMatrix psd_sqrt(const HermitianMatrix& m, bool clip_negative = false) {
  const EigenDecomposition d = eig_hermitian(m);
  const double floor = -1e-10;
  RealVector roots(d.eigenvalues.size());
  for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
    const double lam = d.eigenvalues(i);
    if (!clip_negative && lam < floor) {
      throw std::domain_error("psd_sqrt: eigenvalue " + std::to_string(lam) +
                              " is negative beyond tolerance and clipping is off");
    }
    roots(i) = lam > 0.0 ? std::sqrt(lam) : 0.0;
  }
  CMatrix result = d.eigenvectors * roots.asDiagonal() * d.eigenvectors.adjoint();
  return HermitianMatrix::symmetrized(result);
}

inline Eigen::VectorXd singular_values(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues();
}

// Sum of singular values.
inline double trace_norm(const CMatrix& m) { return singular_values(m).sum(); }

// Largest singular value.
inline double spectral_norm(const CMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return singular_values(m)(0);
}

// √Tr(A†A), the Frobenius / ℓ₂ norm.
inline double l2_norm(const CMatrix& m) { return m.norm(); }

enum class TensorFactor { first, second };

// Partial trace of a square matrix on C^{d1}⊗C^{d2}, first factor major
// (composite index = i1*d2 + i2). `traced` names the factor traced out;
// the result acts on the kept factor.
inline CMatrix partial_trace(const CMatrix& m, Eigen::Index dim_first, Eigen::Index dim_second,
                             TensorFactor traced) {
  if (dim_first < 1 || dim_second < 1) {
    throw std::invalid_argument("partial_trace: factor dimensions must be positive");
  }
  const Eigen::Index total = dim_first * dim_second;
  if (m.rows() != total || m.cols() != total) {
    throw std::invalid_argument("partial_trace: matrix shape does not match factor dimensions");
  }
  if (traced == TensorFactor::second) {
    CMatrix out = CMatrix::Zero(dim_first, dim_first);
    for (Eigen::Index i = 0; i < dim_first; ++i)
      for (Eigen::Index j = 0; j < dim_first; ++j)
        for (Eigen::Index a = 0; a < dim_second; ++a)
          out(i, j) += m(i * dim_second + a, j * dim_second + a);
    return out;
  }
  CMatrix out = CMatrix::Zero(dim_second, dim_second);
  for (Eigen::Index a = 0; a < dim_second; ++a)
    for (Eigen::Index b = 0; b < dim_second; ++b)
      for (Eigen::Index i = 0; i < dim_first; ++i)
        out(a, b) += m(i * dim_second + a, i * dim_second + b);
  return out;
}

// Tensor product under the first-factor-major convention.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

}  // namespace dnorm
