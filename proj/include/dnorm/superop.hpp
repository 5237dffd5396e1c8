// superop.hpp — Super-operator representations and conversions.
//
// A map T : L(V) → L(V) is held in Stinespring form T(X) = Tr_A(B X C†)
// with rectangular B, C : V → V⊗A. The module derives the completely
// positive maps T₁(X) = Tr_V(BXB†) and T₂(X) = Tr_V(CXC†), converts to and
// from the natural N²×N² matrix (row-major vectorization) and the Choi
// matrix, and builds Stinespring pairs for differences of unitary channels
// and for tensor products.

#pragma once

#include <stdexcept>
#include <vector>

#include "dnorm/matrix.hpp"
#include "dnorm/pauli.hpp"

namespace dnorm {

struct StinespringPair {
  Eigen::Index dim_v = 0;
  Eigen::Index dim_a = 0;
  CMatrix b;
  CMatrix c;

  StinespringPair(Eigen::Index dim_v_, Eigen::Index dim_a_, CMatrix b_, CMatrix c_)
      : dim_v(dim_v_), dim_a(dim_a_), b(std::move(b_)), c(std::move(c_)) {
    if (!is_power_of_two(dim_v)) {
      throw std::invalid_argument("StinespringPair: dim_v must be a power of 2");
    }
    if (dim_a < 1 || dim_a > dim_v * dim_v) {
      throw std::invalid_argument("StinespringPair: dim_a must lie in [1, dim_v^2]");
    }
    if (b.rows() != dim_v * dim_a || b.cols() != dim_v || c.rows() != b.rows() ||
        c.cols() != b.cols()) {
      throw std::invalid_argument("StinespringPair: B and C must both be (dim_v*dim_a) x dim_v");
    }
  }
};

struct NaturalRep {
  Eigen::Index dim_v = 0;
  CMatrix matrix;  // N² x N², acts on row-major vectorized operators
};

struct ChoiMatrix {
  Eigen::Index dim_v = 0;
  CMatrix matrix;  // J(T) = Σ_ij T(|i⟩⟨j|) ⊗ |i⟩⟨j|
};

// The derived CP maps T₁, T₂ : L(V) → L(A), stored by their generators.
struct DerivedPair {
  Eigen::Index dim_v = 0;
  Eigen::Index dim_a = 0;
  CMatrix b;
  CMatrix c;
};

enum class DerivedMap { t1, t2 };

inline DerivedPair derived_pair(const StinespringPair& p) {
  return DerivedPair{p.dim_v, p.dim_a, p.b, p.c};
}

// Tr_A(B x C†).
inline CMatrix apply_stinespring(const StinespringPair& p, const CMatrix& x) {
  if (x.rows() != p.dim_v || x.cols() != p.dim_v) {
    throw std::invalid_argument("apply_stinespring: input must be dim_v x dim_v");
  }
  const CMatrix big = p.b * x * p.c.adjoint();
  return partial_trace(big, p.dim_v, p.dim_a, TensorFactor::second);
}

// Tr_V(B ρ B†) or Tr_V(C ρ C†); output acts on the ancilla space.
inline CMatrix apply_derived(const DerivedPair& d, DerivedMap which, const HermitianMatrix& rho) {
  if (rho.dim() != d.dim_v) {
    throw std::invalid_argument("apply_derived: input must be dim_v x dim_v");
  }
  const CMatrix& g = which == DerivedMap::t1 ? d.b : d.c;
  const CMatrix big = g * rho.matrix() * g.adjoint();
  return partial_trace(big, d.dim_v, d.dim_a, TensorFactor::first);
}

// Natural matrix of the derived map, shape dim_a² x dim_v².
inline CMatrix derived_natural_matrix(const DerivedPair& d, DerivedMap which) {
  const Eigen::Index n = d.dim_v;
  const Eigen::Index a = d.dim_a;
  const CMatrix& g = which == DerivedMap::t1 ? d.b : d.c;
  CMatrix nat = CMatrix::Zero(a * a, n * n);
  for (Eigen::Index p = 0; p < a; ++p)
    for (Eigen::Index q = 0; q < a; ++q)
      for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index k = 0; k < n; ++k) {
          Complex sum = 0.0;
          for (Eigen::Index v = 0; v < n; ++v) {
            sum += g(v * a + p, m) * std::conj(g(v * a + q, k));
          }
          nat(p * a + q, m * n + k) = sum;
        }
  return nat;
}

// Spectral norm of the derived map T₁ or T₂ viewed as a linear operator
// from L(V) to L(A), i.e. the largest singular value of its natural matrix.
inline double superop_spectral_norm(const DerivedPair& d, DerivedMap which) {
  return spectral_norm(derived_natural_matrix(d, which));
}

inline NaturalRep natural_from_stinespring(const StinespringPair& p) {
  const Eigen::Index n = p.dim_v;
  const Eigen::Index a = p.dim_a;
  NaturalRep rep;
  rep.dim_v = n;
  rep.matrix = CMatrix::Zero(n * n, n * n);
  for (Eigen::Index v = 0; v < n; ++v)
    for (Eigen::Index w = 0; w < n; ++w)
      for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index k = 0; k < n; ++k) {
          Complex sum = 0.0;
          for (Eigen::Index t = 0; t < a; ++t) {
            sum += p.b(v * a + t, m) * std::conj(p.c(w * a + t, k));
          }
          rep.matrix(v * n + w, m * n + k) = sum;
        }
  return rep;
}

// Choi matrix via the index reshuffle J_{(v,i),(w,j)} = L_{(v,w),(i,j)}.
inline ChoiMatrix choi_from_natural(const NaturalRep& rep) {
  const Eigen::Index n = rep.dim_v;
  ChoiMatrix choi;
  choi.dim_v = n;
  choi.matrix = CMatrix::Zero(n * n, n * n);
  for (Eigen::Index v = 0; v < n; ++v)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index w = 0; w < n; ++w)
        for (Eigen::Index j = 0; j < n; ++j)
          choi.matrix(v * n + i, w * n + j) = rep.matrix(v * n + w, i * n + j);
  return choi;
}

inline NaturalRep natural_from_choi(const ChoiMatrix& choi) {
  const Eigen::Index n = choi.dim_v;
  NaturalRep rep;
  rep.dim_v = n;
  rep.matrix = CMatrix::Zero(n * n, n * n);
  for (Eigen::Index v = 0; v < n; ++v)
    for (Eigen::Index w = 0; w < n; ++w)
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          rep.matrix(v * n + w, i * n + j) = choi.matrix(v * n + i, w * n + j);
  return rep;
}

inline ChoiMatrix choi_from_stinespring(const StinespringPair& p) {
  return choi_from_natural(natural_from_stinespring(p));
}

// Recover a Stinespring pair from the natural matrix via the Choi SVD
// J(T) = Σ_k s_k u_k w_k†: the k-th branches of B and C are √s_k times the
// unvectorized u_k and w_k. Singular values below 1e-12·s_max are dropped,
// which minimizes dim_a.
inline StinespringPair stinespring_from_natural(const NaturalRep& rep) {
  const Eigen::Index n = rep.dim_v;
  if (rep.matrix.rows() != n * n || rep.matrix.cols() != n * n) {
    throw std::invalid_argument("stinespring_from_natural: matrix must be N^2 x N^2");
  }
  const ChoiMatrix choi = choi_from_natural(rep);
  Eigen::JacobiSVD<CMatrix> svd(choi.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  const double cutoff = s.size() > 0 ? 1e-12 * s(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff && s(rank) > 0.0) ++rank;
  const Eigen::Index a = std::max<Eigen::Index>(rank, 1);

  CMatrix b = CMatrix::Zero(n * a, n);
  CMatrix c = CMatrix::Zero(n * a, n);
  for (Eigen::Index k = 0; k < rank; ++k) {
    const double root = std::sqrt(s(k));
    const CVector u = svd.matrixU().col(k);
    const CVector w = svd.matrixV().col(k);
    for (Eigen::Index v = 0; v < n; ++v)
      for (Eigen::Index m = 0; m < n; ++m) {
        b(v * a + k, m) = root * u(v * n + m);
        c(v * a + k, m) = root * w(v * n + m);
      }
  }
  return StinespringPair(n, a, std::move(b), std::move(c));
}

inline bool is_unitary(const CMatrix& u, double tol = 1e-10) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

// Stinespring pair of the difference of two unitary channels,
// X ↦ UXU† − VXV†, using two orthogonal ancilla branches:
// B|ψ⟩ = U|ψ⟩⊗|0⟩ + V|ψ⟩⊗|1⟩ and C|ψ⟩ = U|ψ⟩⊗|0⟩ − V|ψ⟩⊗|1⟩.
inline StinespringPair stinespring_of_difference(const CMatrix& u, const CMatrix& v) {
  if (!is_unitary(u) || !is_unitary(v) || u.rows() != v.rows()) {
    throw std::invalid_argument("stinespring_of_difference: inputs must be unitaries of equal dimension");
  }
  const Eigen::Index n = u.rows();
  const Eigen::Index a = 2;
  CMatrix b = CMatrix::Zero(n * a, n);
  CMatrix c = CMatrix::Zero(n * a, n);
  for (Eigen::Index row = 0; row < n; ++row) {
    b.row(row * a + 0) = u.row(row);
    b.row(row * a + 1) = v.row(row);
    c.row(row * a + 0) = u.row(row);
    c.row(row * a + 1) = -v.row(row);
  }
  return StinespringPair(n, a, std::move(b), std::move(c));
}

// Conjugates a matrix on ⊗_i C^{dims[i]} by the permutation that sends leg i
// of the output to position perm[i] of the input ordering. Used to restore
// the first-factor-major convention after tensoring.
inline CMatrix permute_tensor_legs(const CMatrix& m, const std::vector<Eigen::Index>& dims,
                                   const std::vector<size_t>& perm) {
  Eigen::Index total = 1;
  for (Eigen::Index d : dims) total *= d;
  if (m.rows() != total) throw std::invalid_argument("permute_tensor_legs: shape mismatch");
  const size_t legs = dims.size();
  std::vector<Eigen::Index> out_dims(legs);
  for (size_t i = 0; i < legs; ++i) out_dims[i] = dims[perm[i]];

  std::vector<Eigen::Index> row_map(static_cast<size_t>(total));
  std::vector<Eigen::Index> digits(legs);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index rest = idx;
    for (size_t i = legs; i-- > 0;) {
      digits[i] = rest % dims[i];
      rest /= dims[i];
    }
    Eigen::Index out = 0;
    for (size_t i = 0; i < legs; ++i) out = out * out_dims[i] + digits[perm[i]];
    row_map[size_t(idx)] = out;
  }

  CMatrix result(total, m.cols());
  for (Eigen::Index r = 0; r < total; ++r) result.row(row_map[size_t(r)]) = m.row(r);
  return result;
}

// Stinespring pair of T_p ⊗ T_q under the first-factor-major convention on
// both the composite system V_p⊗V_q and the composite ancilla A_p⊗A_q.
inline StinespringPair tensor_superop(const StinespringPair& p, const StinespringPair& q) {
  const std::vector<Eigen::Index> dims = {p.dim_v, p.dim_a, q.dim_v, q.dim_a};
  const std::vector<size_t> perm = {0, 2, 1, 3};  // (v_p, a_p, v_q, a_q) -> (v_p, v_q, a_p, a_q)
  CMatrix b = permute_tensor_legs(kron(p.b, q.b), dims, perm);
  CMatrix c = permute_tensor_legs(kron(p.c, q.c), dims, perm);
  return StinespringPair(p.dim_v * q.dim_v, p.dim_a * q.dim_a, std::move(b), std::move(c));
}

}  // namespace dnorm
