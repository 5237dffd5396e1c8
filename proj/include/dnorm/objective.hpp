// objective.hpp — Root fidelity and the convex target function
// g(x,y) = −√F(T₁(Φ(x)), T₂(Φ(y))).
//
// √F(ρ,σ) = ‖√ρ√σ‖₁ is jointly concave, so g is convex over the product
// body K⁽¹⁾×K⁽¹⁾. The evaluation oracle follows the accuracy schedule
// ζ = ε/(2N(‖B‖+‖C‖+1)) for the matrix square roots; the kernel delivers
// far better than ζ, and the schedule is asserted as a guard. The analytic
// subgradient uses a δ-regularizer so the derivative of √F exists at
// rank-deficient arguments:
//   ∂√F/∂σ = (1/2) R (R σ R)^{−1/2} R   with R = √ρ,
// pulled back through the linear maps x ↦ T₁(Φ(x)) and y ↦ T₂(Φ(y)).

#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dnorm/matrix.hpp"
#include "dnorm/pauli.hpp"
#include "dnorm/superop.hpp"

namespace dnorm {

// Requested accuracy is finer than double precision can certify.
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ‖√ρ√σ‖₁ for PSD inputs. Trace 1 is not required. Eigenvalues in
// [−1e-6, 0) are clipped to zero; anything lower is a genuine domain error.
inline double sqrt_fidelity(const HermitianMatrix& rho, const HermitianMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("sqrt_fidelity: dimension mismatch");
  }
  const auto clipped_root = [](const HermitianMatrix& m) {
    const EigenDecomposition d = eig_hermitian(m);
    if (d.eigenvalues(d.eigenvalues.size() - 1) < -1e-6) {
      throw std::domain_error("sqrt_fidelity: input is not positive semi-definite");
    }
    RealVector roots = d.eigenvalues.cwiseMax(0.0).cwiseSqrt();
    return CMatrix(d.eigenvectors * roots.asDiagonal() * d.eigenvectors.adjoint());
  };
  return trace_norm(clipped_root(rho) * clipped_root(sigma));
}

// The target function for one super-operator, with everything the solver
// needs precomputed: derived maps, their spectral norms, ‖B‖, ‖C‖, and the
// images of the non-identity Pauli operators under T₁ and T₂ (the constant
// Jacobians of x ↦ T₁(Φ(x)) and y ↦ T₂(Φ(y))).
class Objective {
 public:
  explicit Objective(const StinespringPair& p)
      : derived_(derived_pair(p)),
        dim_v_(p.dim_v),
        norm_b_(spectral_norm(p.b)),
        norm_c_(spectral_norm(p.c)),
        norm_t1_(superop_spectral_norm(derived_, DerivedMap::t1)),
        norm_t2_(superop_spectral_norm(derived_, DerivedMap::t2)) {
    const PauliBasis& basis = PauliBasis::for_dim(dim_v_);
    t1_pauli_.reserve(size_t(basis.size() - 1));
    t2_pauli_.reserve(size_t(basis.size() - 1));
    for (Eigen::Index i = 1; i < basis.size(); ++i) {
      const HermitianMatrix pauli = HermitianMatrix::symmetrized(basis.op(i));
      t1_pauli_.push_back(apply_derived(derived_, DerivedMap::t1, pauli));
      t2_pauli_.push_back(apply_derived(derived_, DerivedMap::t2, pauli));
    }
  }

  const DerivedPair& derived() const { return derived_; }
  Eigen::Index dim_v() const { return dim_v_; }
  Eigen::Index dim_a() const { return derived_.dim_a; }
  double norm_b() const { return norm_b_; }
  double norm_c() const { return norm_c_; }
  double norm_t1() const { return norm_t1_; }
  double norm_t2() const { return norm_t2_; }

  // N·√(‖T₁‖·‖T₂‖); −M lower-bounds g on K.
  double m_scale() const { return double(dim_v_) * std::sqrt(norm_t1_ * norm_t2_); }

  // Tighter range bound on |g| over K: √F ≤ √(Tr T₁(ρ)·Tr T₂(ξ)) ≤ ‖B‖‖C‖.
  double range_bound() const { return std::min(m_scale(), norm_b_ * norm_c_); }

  HermitianMatrix t1_at(const RealVector& x) const {
    return HermitianMatrix::symmetrized(
        apply_derived(derived_, DerivedMap::t1, decode(dim_v_, x)));
  }
  HermitianMatrix t2_at(const RealVector& y) const {
    return HermitianMatrix::symmetrized(
        apply_derived(derived_, DerivedMap::t2, decode(dim_v_, y)));
  }

  const CMatrix& t1_pauli(Eigen::Index i) const { return t1_pauli_.at(size_t(i)); }
  const CMatrix& t2_pauli(Eigen::Index i) const { return t2_pauli_.at(size_t(i)); }

 private:
  DerivedPair derived_;
  Eigen::Index dim_v_;
  double norm_b_;
  double norm_c_;
  double norm_t1_;
  double norm_t2_;
  std::vector<CMatrix> t1_pauli_;
  std::vector<CMatrix> t2_pauli_;
};

// g at kernel precision.
inline double g_exact(const Objective& obj, const RealVector& x, const RealVector& y) {
  return -sqrt_fidelity(obj.t1_at(x), obj.t2_at(y));
}

// Evaluation oracle: |g_oracle − g| ≤ eps. The square-root accuracy schedule
// ζ is computed and checked against the kernel's numeric floor.
inline double g_oracle(const Objective& obj, const RealVector& x, const RealVector& y,
                       double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("g_oracle: eps must be positive");
  const double zeta =
      eps / (2.0 * double(obj.dim_v()) * (obj.norm_b() + obj.norm_c() + 1.0));
  const double kernel_floor =
      1e-13 * (1.0 + obj.norm_b() * obj.norm_b() + obj.norm_c() * obj.norm_c());
  if (zeta / 2.0 < kernel_floor) {
    throw PrecisionError("g_oracle: accuracy schedule is below the numeric floor");
  }
  return g_exact(obj, x, y);
}

namespace detail {

// (1/2)·R·(R M R)^{−1/2}·R with eigenvalues of RMR clamped below at `floor`
// (mathematically RMR ⪰ δ² I once both arguments carry the δ shift).
inline CMatrix half_sandwich_invsqrt(const CMatrix& r, const CMatrix& m, double floor) {
  const HermitianMatrix k = HermitianMatrix::symmetrized(r * m * r);
  const EigenDecomposition d = eig_hermitian(k);
  RealVector inv_roots(d.eigenvalues.size());
  for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
    inv_roots(i) = 1.0 / std::sqrt(std::max(d.eigenvalues(i), floor));
  }
  const CMatrix inv = d.eigenvectors * inv_roots.asDiagonal() * d.eigenvectors.adjoint();
  return 0.5 * r * inv * r;
}

}  // namespace detail

namespace detail {

// ∇_ρ√F and ∇_σ√F at the δ-shifted images of (x, y).
inline std::pair<CMatrix, CMatrix> fidelity_gradients(const Objective& obj,
                                                      const RealVector& x,
                                                      const RealVector& y, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("g_subgradient: delta must be positive");
  const Eigen::Index a = obj.dim_a();
  const CMatrix shift = delta * CMatrix::Identity(a, a);
  const HermitianMatrix rho = HermitianMatrix::symmetrized(obj.t1_at(x).matrix() + shift);
  const HermitianMatrix sigma = HermitianMatrix::symmetrized(obj.t2_at(y).matrix() + shift);
  const CMatrix root_rho = psd_sqrt(rho, true).matrix();
  const CMatrix root_sigma = psd_sqrt(sigma, true).matrix();
  const double floor = delta * delta * 0.25;
  return {half_sandwich_invsqrt(root_sigma, rho.matrix(), floor),
          half_sandwich_invsqrt(root_rho, sigma.matrix(), floor)};
}

}  // namespace detail

// Gradient of the δ-regularized g at an interior point, as the pair
// (∇_x, ∇_y). delta > 0 keeps both fidelity arguments strictly positive.
inline std::pair<RealVector, RealVector> g_subgradient(const Objective& obj,
                                                       const RealVector& x,
                                                       const RealVector& y, double delta) {
  const auto [grad_rho, grad_sigma] = detail::fidelity_gradients(obj, x, y, delta);
  const Eigen::Index coords = obj.dim_v() * obj.dim_v() - 1;
  RealVector gx(coords);
  RealVector gy(coords);
  const double inv_n = 1.0 / double(obj.dim_v());
  for (Eigen::Index i = 0; i < coords; ++i) {
    gx(i) = -inv_n * (grad_rho * obj.t1_pauli(i)).trace().real();
    gy(i) = -inv_n * (grad_sigma * obj.t2_pauli(i)).trace().real();
  }
  return {gx, gy};
}

// Gradients of (x, y) ↦ √F(T₁(Φ(x)), T₂(Φ(y))) pulled back to the state
// space of each argument: D_x = T₁†(∇_ρ√F), D_y = T₂†(∇_σ√F), so that
// d√F = Tr(D_x·dΦ(x)) + Tr(D_y·dΦ(y)).
inline std::pair<HermitianMatrix, HermitianMatrix> sqrtf_state_gradients(
    const Objective& obj, const RealVector& x, const RealVector& y, double delta) {
  const auto [grad_rho, grad_sigma] = detail::fidelity_gradients(obj, x, y, delta);
  const Eigen::Index n = obj.dim_v();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix dx = obj.derived().b.adjoint() * kron(id, grad_rho) * obj.derived().b;
  const CMatrix dy = obj.derived().c.adjoint() * kron(id, grad_sigma) * obj.derived().c;
  return {HermitianMatrix::symmetrized(dx), HermitianMatrix::symmetrized(dy)};
}

// Default regularizer scale.
inline double default_subgradient_delta(const Objective& obj) {
  return 1e-10 * (1.0 + obj.norm_t1() + obj.norm_t2());
}

// |g_δ − g| ≤ dim_a·√δ·(‖B‖+‖C‖+1) for δ ≤ 1; the bias of the regularized
// gradient's supporting hyperplanes is budgeted with the same bound.
inline double subgradient_slack(const Objective& obj, double delta) {
  return double(obj.dim_a()) * std::sqrt(delta) * (obj.norm_b() + obj.norm_c() + 1.0);
}

}  // namespace dnorm
