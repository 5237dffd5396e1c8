#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dnorm/instances.hpp"
#include "dnorm/matrix.hpp"
#include "dnorm/pauli.hpp"

using namespace dnorm;

namespace {

CMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const CMatrix g = random_gaussian(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

}  // namespace

TEST_CASE("HermitianMatrix validates and symmetrizes") {
  CMatrix m(2, 2);
  m << 1.0, Complex(0.0, 1.0), Complex(0.0, -1.0), 2.0;
  REQUIRE_NOTHROW(HermitianMatrix(m));

  CMatrix bad(2, 2);
  bad << 1.0, 1.0, 0.0, 1.0;
  REQUIRE_THROWS_AS(HermitianMatrix(bad), std::invalid_argument);

  CMatrix rect(2, 3);
  rect.setZero();
  REQUIRE_THROWS_AS(HermitianMatrix(rect), std::invalid_argument);

  // Roundoff-level asymmetry is absorbed.
  CMatrix nearly = m;
  nearly(0, 1) += Complex(1e-13, 0.0);
  const HermitianMatrix h(nearly);
  REQUIRE((h.matrix() - h.matrix().adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("eig_hermitian on diagonal and Pauli inputs") {
  CMatrix d(2, 2);
  d << 3.0, 0.0, 0.0, 1.0;
  const EigenDecomposition e = eig_hermitian(HermitianMatrix(d));
  REQUIRE(e.eigenvalues(0) == Catch::Approx(3.0));
  REQUIRE(e.eigenvalues(1) == Catch::Approx(1.0));
  REQUIRE((e.eigenvectors.cwiseAbs() - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  const EigenDecomposition x = eig_hermitian(HermitianMatrix(PauliBasis::sigma(1)));
  REQUIRE(x.eigenvalues(0) == Catch::Approx(1.0));
  REQUIRE(x.eigenvalues(1) == Catch::Approx(-1.0));
}

TEST_CASE("eig_hermitian reconstructs and is unitary") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianMatrix h = HermitianMatrix::symmetrized(random_hermitian(4, rng));
    const EigenDecomposition e = eig_hermitian(h);
    const CMatrix recon =
        e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.adjoint();
    REQUIRE(spectral_norm(recon - h.matrix()) < 1e-10);
    REQUIRE(spectral_norm(e.eigenvectors.adjoint() * e.eigenvectors -
                          CMatrix::Identity(4, 4)) < 1e-10);
    for (Eigen::Index i = 1; i < e.eigenvalues.size(); ++i) {
      REQUIRE(e.eigenvalues(i - 1) >= e.eigenvalues(i));
    }
  }
}

TEST_CASE("psd_sqrt on diagonal inputs") {
  CMatrix d(2, 2);
  d << 4.0, 0.0, 0.0, 9.0;
  const HermitianMatrix root = psd_sqrt(HermitianMatrix(d));
  REQUIRE(root.matrix()(0, 0).real() == Catch::Approx(2.0));
  REQUIRE(root.matrix()(1, 1).real() == Catch::Approx(3.0));

  const HermitianMatrix id = psd_sqrt(HermitianMatrix(CMatrix::Identity(3, 3)));
  REQUIRE(spectral_norm(id.matrix() - CMatrix::Identity(3, 3)) < 1e-12);
}

TEST_CASE("psd_sqrt clips tiny negatives and rejects real ones") {
  CMatrix d(2, 2);
  d << 1.0, 0.0, 0.0, -1e-15;
  const HermitianMatrix clipped = psd_sqrt(HermitianMatrix(d), true);
  REQUIRE(clipped.matrix()(1, 1).real() == 0.0);
  REQUIRE(clipped.matrix()(0, 0).real() == Catch::Approx(1.0));

  CMatrix neg(2, 2);
  neg << 1.0, 0.0, 0.0, -0.5;
  REQUIRE_THROWS_AS(psd_sqrt(HermitianMatrix(neg), false), std::domain_error);
  REQUIRE_NOTHROW(psd_sqrt(HermitianMatrix(neg), true));
}

TEST_CASE("psd_sqrt squares back to the clipped matrix") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianMatrix h = HermitianMatrix::symmetrized(random_hermitian(4, rng));
    const EigenDecomposition e = eig_hermitian(h);
    const CMatrix clipped = e.eigenvectors * e.eigenvalues.cwiseMax(0.0).asDiagonal() *
                            e.eigenvectors.adjoint();
    const HermitianMatrix root = psd_sqrt(h, true);
    REQUIRE(spectral_norm(root.matrix() * root.matrix() - clipped) < 1e-9);
    const EigenDecomposition re = eig_hermitian(root);
    REQUIRE(re.eigenvalues(re.eigenvalues.size() - 1) >= -1e-10);
  }
}

TEST_CASE("trace_norm on closed-form inputs") {
  CMatrix d(2, 2);
  d << 1.0, 0.0, 0.0, -2.0;
  REQUIRE(trace_norm(d) == Catch::Approx(3.0));

  std::mt19937_64 rng(13);
  for (Eigen::Index n : {2, 3, 4}) {
    const CMatrix u = random_unitary(n, rng);
    REQUIRE(trace_norm(u) == Catch::Approx(double(n)).margin(1e-10));
  }
}

TEST_CASE("trace_norm matches an independent eigenvalue route") {
  // Independent oracle: Σ √λ_i(A†A) through the Hermitian eigensolver.
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = random_gaussian(3, 3, rng);
    const EigenDecomposition e = eig_hermitian(HermitianMatrix::symmetrized(a.adjoint() * a));
    const double expected = e.eigenvalues.cwiseMax(0.0).cwiseSqrt().sum();
    REQUIRE(trace_norm(a) == Catch::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("spectral_norm basics") {
  REQUIRE(spectral_norm(PauliBasis::sigma(3)) == Catch::Approx(1.0));
  for (int i = 0; i < 4; ++i) {
    REQUIRE(spectral_norm(PauliBasis::sigma(i)) == Catch::Approx(1.0));
  }

  CMatrix d(2, 2);
  d << 1.0, 0.0, 0.0, -2.0;
  REQUIRE(spectral_norm(d) == Catch::Approx(2.0));

  std::mt19937_64 rng(15);
  const CMatrix a = random_gaussian(4, 4, rng);
  REQUIRE(spectral_norm(2.0 * a) == Catch::Approx(2.0 * spectral_norm(a)).epsilon(1e-12));
}

TEST_CASE("norm inequalities") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    const CMatrix a = random_gaussian(n, n, rng);
    REQUIRE(trace_norm(a) >= spectral_norm(a) - 1e-12);
    REQUIRE(trace_norm(a) <= double(n) * spectral_norm(a) + 1e-12);

    // Equality at rank one.
    const CMatrix rank1 = random_gaussian(n, 1, rng) * random_gaussian(1, n, rng);
    REQUIRE(trace_norm(rank1) == Catch::Approx(spectral_norm(rank1)).epsilon(1e-10));
  }
}

TEST_CASE("partial_trace closed forms") {
  std::mt19937_64 rng(17);
  const HermitianMatrix rho = random_density(2, rng);
  const HermitianMatrix sigma = random_density(3, rng);

  const CMatrix left = partial_trace(kron(rho.matrix(), sigma.matrix()), 2, 3,
                                     TensorFactor::second);
  REQUIRE(spectral_norm(left - rho.matrix()) < 1e-12);

  // Tr over the first factor of the maximally entangled projector is I/2.
  CVector psi = CVector::Zero(4);
  psi(0) = 1.0 / std::sqrt(2.0);
  psi(3) = 1.0 / std::sqrt(2.0);
  const CMatrix proj = psi * psi.adjoint();
  const CMatrix reduced = partial_trace(proj, 2, 2, TensorFactor::first);
  REQUIRE(spectral_norm(reduced - 0.5 * CMatrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("partial_trace preserves trace and is linear") {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix m = random_gaussian(4, 4, rng);
    const CMatrix n = random_gaussian(4, 4, rng);
    const CMatrix pm = partial_trace(m, 2, 2, TensorFactor::second);
    REQUIRE(std::abs(pm.trace() - m.trace()) < 1e-12);

    const Complex a(0.7, -0.1), b(-0.3, 0.4);
    const CMatrix combo = partial_trace(a * m + b * n, 2, 2, TensorFactor::first);
    const CMatrix expected = a * partial_trace(m, 2, 2, TensorFactor::first) +
                             b * partial_trace(n, 2, 2, TensorFactor::first);
    REQUIRE(spectral_norm(combo - expected) < 1e-12);
  }
}

TEST_CASE("partial_trace rejects shape mismatch") {
  REQUIRE_THROWS_AS(partial_trace(CMatrix::Identity(5, 5), 2, 2, TensorFactor::first),
                    std::invalid_argument);
}

TEST_CASE("kron closed forms and consistency with partial_trace") {
  const CMatrix id2 = CMatrix::Identity(2, 2);
  REQUIRE(spectral_norm(kron(id2, id2) - CMatrix::Identity(4, 4)) == 0.0);

  const CMatrix zz = kron(PauliBasis::sigma(3), PauliBasis::sigma(3));
  CMatrix expected = CMatrix::Zero(4, 4);
  expected(0, 0) = 1.0;
  expected(1, 1) = -1.0;
  expected(2, 2) = -1.0;
  expected(3, 3) = 1.0;
  REQUIRE(spectral_norm(zz - expected) == 0.0);

  std::mt19937_64 rng(19);
  const HermitianMatrix rho = random_density(2, rng);
  const CMatrix sigma = random_gaussian(3, 3, rng);
  const CMatrix traced = partial_trace(kron(rho.matrix(), sigma), 2, 3, TensorFactor::second);
  REQUIRE(spectral_norm(traced - sigma.trace() * rho.matrix()) < 1e-12);
}
