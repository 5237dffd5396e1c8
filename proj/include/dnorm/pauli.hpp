// pauli.hpp — Pauli-coordinate chart for density matrices and the convex
// bodies it induces.
//
// A Hermitian unit-trace matrix on C^N (N = 2^n) is represented by the real
// vector x of its N²−1 non-identity Pauli coefficients, x_i = Tr(P_{i+1} ρ).
// The inverse chart is Φ(x) = (1/N)(I + Σ x_i P_{i+1}). The image of the
// density matrices is the convex body K⁽¹⁾; its α-shrinkage S⁽¹⁾ = (1−α)K⁽¹⁾
// equals {x : λ_min(Φ(x)) ≥ α/N}. Membership is decided from the smallest
// eigenvalue, and infeasible queries yield a separating linear cut through
// the minimal eigenvector.

#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dnorm/matrix.hpp"

namespace dnorm {

inline bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

inline int log2_exact(long long n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("dimension must be a power of 2");
  int k = 0;
  while ((1LL << k) < n) ++k;
  return k;
}

// The ordered tensor-product Pauli basis for n qubits: identity first, then
// lexicographic in (i_1,...,i_n) over σ0..σ3. Built once per dimension and
// shared read-only.
class PauliBasis {
 public:
  static const PauliBasis& get(int n_qubits) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<PauliBasis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n_qubits);
    if (it == cache.end()) {
      it = cache.emplace(n_qubits, std::unique_ptr<PauliBasis>(new PauliBasis(n_qubits))).first;
    }
    return *it->second;
  }

  static const PauliBasis& for_dim(Eigen::Index dim) { return get(log2_exact(dim)); }

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return Eigen::Index(1) << n_qubits_; }
  Eigen::Index size() const { return Eigen::Index(operators_.size()); }
  // op(0) is the identity.
  const CMatrix& op(Eigen::Index i) const { return operators_.at(size_t(i)); }

  static CMatrix sigma(int i) {
    CMatrix m(2, 2);
    switch (i) {
      case 0: m << 1, 0, 0, 1; break;
      case 1: m << 0, 1, 1, 0; break;
      case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
      case 3: m << 1, 0, 0, -1; break;
      default: throw std::invalid_argument("sigma: index must be 0..3");
    }
    return m;
  }

 private:
  explicit PauliBasis(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 8) {
      throw std::invalid_argument("PauliBasis: n_qubits out of supported range [1, 8]");
    }
    const Eigen::Index count = Eigen::Index(1) << (2 * n_qubits);
    operators_.reserve(size_t(count));
    for (Eigen::Index idx = 0; idx < count; ++idx) {
      CMatrix p = CMatrix::Identity(1, 1);
      // Most significant base-4 digit = first qubit.
      for (int q = n_qubits - 1; q >= 0; --q) {
        const int digit = int((idx >> (2 * q)) & 3);
        p = kron(p, sigma(digit));
      }
      operators_.push_back(std::move(p));
    }
  }

  int n_qubits_;
  std::vector<CMatrix> operators_;
};

// Real coordinate vector of length N²−1 for a unit-trace Hermitian matrix.
struct PauliCoordinates {
  Eigen::Index dim_v = 0;
  RealVector x;
};

// x_i = Tr(P_{i+1} ρ). Requires trace 1; PSD is not required.
inline PauliCoordinates encode(const HermitianMatrix& rho) {
  const Eigen::Index n = rho.dim();
  const double tr = rho.matrix().trace().real();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw std::invalid_argument("encode: input must have unit trace");
  }
  const PauliBasis& basis = PauliBasis::for_dim(n);
  PauliCoordinates coords;
  coords.dim_v = n;
  coords.x.resize(n * n - 1);
  for (Eigen::Index i = 1; i < basis.size(); ++i) {
    const Complex t = (basis.op(i) * rho.matrix()).trace();
    if (std::abs(t.imag()) > 1e-10) {
      throw std::invalid_argument("encode: Pauli coefficient has non-real trace");
    }
    coords.x(i - 1) = t.real();
  }
  return coords;
}

// Φ(x) = (1/N)(I + Σ x_i P_{i+1}). Defined for every real vector of the
// right length; the result is Hermitian with trace exactly 1.
inline HermitianMatrix decode(const PauliCoordinates& coords) {
  const Eigen::Index n = coords.dim_v;
  if (!is_power_of_two(n)) throw std::invalid_argument("decode: dim_v must be a power of 2");
  if (coords.x.size() != n * n - 1) {
    throw std::invalid_argument("decode: coordinate vector has wrong length");
  }
  const PauliBasis& basis = PauliBasis::for_dim(n);
  CMatrix m = CMatrix::Identity(n, n);
  for (Eigen::Index i = 1; i < basis.size(); ++i) {
    m += coords.x(i - 1) * basis.op(i);
  }
  m /= double(n);
  return HermitianMatrix::symmetrized(m);
}

inline HermitianMatrix decode(Eigen::Index dim_v, const RealVector& x) {
  return decode(PauliCoordinates{dim_v, x});
}

// Membership verdict; on rejection, a separating cut c·y ≥ b satisfied by
// every member and violated at the query point.
struct OracleAnswer {
  bool verdict = false;
  struct Cut {
    RealVector normal;
    double offset = 0.0;
  };
  std::optional<Cut> cut;
};

// The convex body K⁽¹⁾ (alpha = 0) or its shrinkage S⁽¹⁾ = (1−α)K⁽¹⁾, with
// the ball data the cutting-plane solver needs.
struct FeasibleSetSpec {
  Eigen::Index dim_v = 0;
  double alpha = 0.0;

  static FeasibleSetSpec state_body(Eigen::Index dim_v) {
    if (!is_power_of_two(dim_v)) {
      throw std::invalid_argument("FeasibleSetSpec: dim_v must be a power of 2");
    }
    return FeasibleSetSpec{dim_v, 0.0};
  }

  // Members keep λ_min(Φ(x)) ≥ alpha/N.
  double threshold() const { return alpha / double(dim_v); }
  double inner_radius() const { return (1.0 - alpha) / (2.0 * std::sqrt(double(dim_v))); }
  double outer_radius() const { return 2.0 * double(dim_v); }
  Eigen::Index coord_dim() const { return dim_v * dim_v - 1; }
};

inline FeasibleSetSpec shrink(const FeasibleSetSpec& set, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("shrink: alpha must lie in [0, 1)");
  }
  return FeasibleSetSpec{set.dim_v, alpha};
}

// Eigenvalue-based membership oracle. Guarantees a true verdict on set_{−eps}
// and a false verdict outside set_{+eps}; points in the eps-shell may get
// either. The eigenvalue accuracy ζ = eps/(10 N^{3/2}) is asserted against
// the kernel's numeric floor.
inline OracleAnswer membership(const FeasibleSetSpec& set, const RealVector& x, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("membership: eps must be positive");
  const Eigen::Index n = set.dim_v;
  const double zeta = eps / (10.0 * std::pow(double(n), 1.5));
  const double kernel_floor = 1e-13 * (1.0 + x.norm());
  if (zeta < kernel_floor) {
    throw std::runtime_error("membership: requested accuracy is below the numeric floor");
  }
  const HermitianMatrix phi = decode(n, x);
  const EigenDecomposition d = eig_hermitian(phi);
  const double lambda_min = d.eigenvalues(n - 1);

  OracleAnswer answer;
  answer.verdict = lambda_min > set.threshold();
  if (!answer.verdict) {
    const CVector u = d.eigenvectors.col(n - 1);
    const PauliBasis& basis = PauliBasis::for_dim(n);
    OracleAnswer::Cut cut;
    cut.normal.resize(n * n - 1);
    for (Eigen::Index i = 1; i < basis.size(); ++i) {
      cut.normal(i - 1) = (u.adjoint() * basis.op(i) * u).value().real();
    }
    cut.offset = double(n) * set.threshold() - 1.0;
    answer.cut = cut;
  }
  return answer;
}

// Membership for the product body S⁽¹⁾ × S⁽¹⁾. The cut of the violated factor
// is lifted into product coordinates, zero-padded on the satisfied factor.
inline OracleAnswer product_membership(const FeasibleSetSpec& set, const RealVector& x,
                                       const RealVector& y, double eps) {
  const Eigen::Index m = set.coord_dim();
  OracleAnswer first = membership(set, x, eps);
  OracleAnswer second = first.verdict ? membership(set, y, eps) : OracleAnswer{};
  if (first.verdict && second.verdict) {
    OracleAnswer ok;
    ok.verdict = true;
    return ok;
  }
  OracleAnswer answer;
  answer.verdict = false;
  OracleAnswer::Cut lifted;
  lifted.normal = RealVector::Zero(2 * m);
  if (!first.verdict) {
    lifted.normal.head(m) = first.cut->normal;
    lifted.offset = first.cut->offset;
  } else {
    lifted.normal.tail(m) = second.cut->normal;
    lifted.offset = second.cut->offset;
  }
  answer.cut = lifted;
  return answer;
}

}  // namespace dnorm
