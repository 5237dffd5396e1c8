#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dnorm/instances.hpp"
#include "dnorm/pauli.hpp"

using namespace dnorm;

TEST_CASE("Pauli basis is orthogonal with eigenvalues ±1") {
  for (int qubits : {1, 2}) {
    const PauliBasis& basis = PauliBasis::get(qubits);
    const double n = double(basis.dim());
    for (Eigen::Index i = 0; i < basis.size(); ++i) {
      for (Eigen::Index j = i; j < basis.size(); ++j) {
        const Complex inner = (basis.op(i).adjoint() * basis.op(j)).trace();
        REQUIRE(std::abs(inner - (i == j ? Complex(n) : Complex(0))) < 1e-12);
      }
      const EigenDecomposition e = eig_hermitian(HermitianMatrix(basis.op(i)));
      for (Eigen::Index k = 0; k < e.eigenvalues.size(); ++k) {
        REQUIRE(std::abs(std::abs(e.eigenvalues(k)) - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("encode on closed-form states") {
  const HermitianMatrix mixed(0.5 * CMatrix::Identity(2, 2));
  REQUIRE(encode(mixed).x.norm() < 1e-14);

  CMatrix zero_state(2, 2);
  zero_state << 1.0, 0.0, 0.0, 0.0;
  const PauliCoordinates c = encode(HermitianMatrix(zero_state));
  REQUIRE(c.x(0) == Catch::Approx(0.0).margin(1e-14));  // X
  REQUIRE(c.x(1) == Catch::Approx(0.0).margin(1e-14));  // Y
  REQUIRE(c.x(2) == Catch::Approx(1.0));                // Z
}

TEST_CASE("encode rejects non-unit trace") {
  REQUIRE_THROWS_AS(encode(HermitianMatrix(CMatrix::Identity(2, 2))), std::invalid_argument);
}

TEST_CASE("decode closed forms") {
  const HermitianMatrix center = decode(2, RealVector::Zero(3));
  REQUIRE(spectral_norm(center.matrix() - 0.5 * CMatrix::Identity(2, 2)) < 1e-14);

  RealVector z(3);
  z << 0.0, 0.0, 1.0;
  CMatrix zero_state(2, 2);
  zero_state << 1.0, 0.0, 0.0, 0.0;
  REQUIRE(spectral_norm(decode(2, z).matrix() - zero_state) < 1e-14);

  // Decoding is defined outside the body too.
  RealVector outside(3);
  outside << 2.0, 0.0, 0.0;
  const EigenDecomposition e = eig_hermitian(decode(2, outside));
  REQUIRE(e.eigenvalues(0) == Catch::Approx(1.5));
  REQUIRE(e.eigenvalues(1) == Catch::Approx(-0.5));
  REQUIRE(decode(2, outside).matrix().trace().real() == Catch::Approx(1.0));

  REQUIRE_THROWS_AS(decode(2, RealVector::Zero(4)), std::invalid_argument);
}

TEST_CASE("chart is a scaled isometry and a bijection") {
  std::mt19937_64 rng(21);
  for (Eigen::Index n : {2, 4}) {
    for (int trial = 0; trial < 25; ++trial) {
      const HermitianMatrix rho = random_density(n, rng);
      const PauliCoordinates c = encode(rho);
      REQUIRE(spectral_norm(decode(c).matrix() - rho.matrix()) < 1e-12);

      const PauliCoordinates again = encode(decode(c));
      REQUIRE((again.x - c.x).norm() < 1e-12);

      const HermitianMatrix tau = random_density(n, rng);
      const PauliCoordinates d = encode(tau);
      const double lhs = l2_norm(decode(c).matrix() - decode(d).matrix());
      REQUIRE(lhs * std::sqrt(double(n)) == Catch::Approx((c.x - d.x).norm()).margin(1e-10));
    }
  }
}

TEST_CASE("decode is linear over convex combinations") {
  std::mt19937_64 rng(22);
  RealVector x1(3), x2(3);
  for (int i = 0; i < 3; ++i) {
    x1(i) = std::normal_distribution<double>()(rng);
    x2(i) = std::normal_distribution<double>()(rng);
  }
  const double lam = 0.37;
  const CMatrix mixed = decode(2, RealVector(lam * x1 + (1 - lam) * x2)).matrix();
  const CMatrix parts = lam * decode(2, x1).matrix() + (1 - lam) * decode(2, x2).matrix();
  REQUIRE(spectral_norm(mixed - parts) < 1e-14);
}

TEST_CASE("ball containments") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss;
  for (Eigen::Index n : {2, 4}) {
    const Eigen::Index coords = n * n - 1;
    for (int trial = 0; trial < 200; ++trial) {
      RealVector dir(coords);
      for (Eigen::Index i = 0; i < coords; ++i) dir(i) = gauss(rng);
      dir *= std::uniform_real_distribution<double>(0.0, 1.0)(rng) /
             (dir.norm() * 2.0 * std::sqrt(double(n)));
      const EigenDecomposition e = eig_hermitian(decode(n, dir));
      REQUIRE(e.eigenvalues(n - 1) >= -1e-12);

      const PauliCoordinates c = encode(random_density(n, rng));
      REQUIRE(c.x.norm() <= double(n) + 1e-12);
    }
  }
}

TEST_CASE("membership on closed-form queries") {
  const FeasibleSetSpec k = FeasibleSetSpec::state_body(2);
  REQUIRE(membership(k, RealVector::Zero(3), 0.1).verdict);

  RealVector inside(3);
  inside << 0.2, 0.1, -0.15;
  REQUIRE(inside.norm() <= 1.0 / (2.0 * std::sqrt(2.0)));
  REQUIRE(membership(k, inside, 1e-3).verdict);

  RealVector outside(3);
  outside << 0.0, 0.0, 2.0;
  const OracleAnswer answer = membership(k, outside, 0.1);
  REQUIRE_FALSE(answer.verdict);
  REQUIRE(answer.cut.has_value());

  // The query sits at coordinate distance √2·‖Φ(x) − Π(Φ(x))‖₂ = 1 from the
  // body, so a false verdict is forced at eps = 0.1.
  CMatrix projection(2, 2);
  projection << 1.0, 0.0, 0.0, 0.0;
  const double frob = l2_norm(decode(2, outside).matrix() - projection);
  REQUIRE(frob == Catch::Approx(std::sqrt(0.5)));
  REQUIRE(std::sqrt(2.0) * frob == Catch::Approx(1.0));

  REQUIRE_THROWS_AS(membership(k, inside, 0.0), std::invalid_argument);
}

TEST_CASE("membership cuts separate the query from the body") {
  std::mt19937_64 rng(24);
  const FeasibleSetSpec k = FeasibleSetSpec::state_body(2);
  RealVector query(3);
  query << 0.3, -1.8, 0.9;
  const OracleAnswer answer = membership(k, query, 1e-2);
  REQUIRE_FALSE(answer.verdict);
  const auto& cut = *answer.cut;
  REQUIRE(cut.normal.dot(query) < cut.offset);
  for (int trial = 0; trial < 100; ++trial) {
    const RealVector member = encode(random_density(2, rng)).x;
    REQUIRE(cut.normal.dot(member) >= cut.offset - 1e-12);
  }
}

TEST_CASE("shrink thresholds") {
  const FeasibleSetSpec k = FeasibleSetSpec::state_body(2);
  const FeasibleSetSpec same = shrink(k, 0.0);
  REQUIRE(same.threshold() == 0.0);
  REQUIRE(same.inner_radius() == Catch::Approx(1.0 / (2.0 * std::sqrt(2.0))));

  const FeasibleSetSpec s = shrink(k, 0.5);
  REQUIRE(s.threshold() == Catch::Approx(0.25));
  REQUIRE(s.inner_radius() == Catch::Approx(0.5 / (2.0 * std::sqrt(2.0))));
  REQUIRE(s.outer_radius() == Catch::Approx(4.0));
  REQUIRE(membership(s, RealVector::Zero(3), 1e-3).verdict);

  // λ_min(Φ((0,0,0.6))) = 0.2 < 0.25: outside S though inside K.
  RealVector x(3);
  x << 0.0, 0.0, 0.6;
  REQUIRE(membership(k, x, 1e-3).verdict);
  REQUIRE_FALSE(membership(s, x, 1e-3).verdict);

  REQUIRE_THROWS_AS(shrink(k, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(shrink(k, -0.1), std::invalid_argument);
}

TEST_CASE("membership contract against exact classification") {
  // Certified eps-deep (λ ≥ thr + ε/√N) must pass; certified eps-outside
  // (λ < thr − ε/√N) must fail. The shell in between is unconstrained.
  std::mt19937_64 rng(25);
  std::normal_distribution<double> gauss;
  for (double alpha : {0.0, 0.3}) {
    const FeasibleSetSpec set{2, alpha};
    for (double eps : {1e-2, 1e-4}) {
      int classified = 0;
      int trials = 0;
      while (classified < 200 && trials < 20000) {
        ++trials;
        RealVector x(3);
        for (int i = 0; i < 3; ++i) x(i) = gauss(rng);
        x *= std::uniform_real_distribution<double>(0.0, 1.6)(rng) / x.norm();
        const EigenDecomposition e = eig_hermitian(decode(2, x));
        const double margin = e.eigenvalues(1) - set.threshold();
        const double width = eps / std::sqrt(2.0);
        if (margin >= width) {
          REQUIRE(membership(set, x, eps).verdict);
          ++classified;
        } else if (margin < -width) {
          REQUIRE_FALSE(membership(set, x, eps).verdict);
          ++classified;
        }
      }
      REQUIRE(classified == 200);
    }
  }
}

TEST_CASE("product membership lifts the violated factor's cut") {
  const FeasibleSetSpec k = FeasibleSetSpec::state_body(2);
  const RealVector center = RealVector::Zero(3);
  REQUIRE(product_membership(k, center, center, 0.1).verdict);

  RealVector bad(3);
  bad << 0.0, 0.0, 2.0;
  const OracleAnswer answer = product_membership(k, center, bad, 0.1);
  REQUIRE_FALSE(answer.verdict);
  REQUIRE(answer.cut->normal.head(3).norm() == 0.0);
  REQUIRE(answer.cut->normal.tail(3).norm() > 0.0);

  const OracleAnswer flipped = product_membership(k, bad, center, 0.1);
  REQUIRE(flipped.cut->normal.head(3).norm() > 0.0);
  REQUIRE(flipped.cut->normal.tail(3).norm() == 0.0);

  RealVector z(6);
  z.head(3) = center;
  z.tail(3) = bad;
  REQUIRE(answer.cut->normal.dot(z) < answer.cut->offset);
}
