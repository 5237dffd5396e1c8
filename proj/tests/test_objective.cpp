#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dnorm/instances.hpp"
#include "dnorm/objective.hpp"
#include "dnorm/pauli.hpp"

using namespace dnorm;

namespace {

RealVector interior_point(Eigen::Index n, std::mt19937_64& rng, double mix = 0.6) {
  const RealVector x = encode(random_density(n, rng)).x;
  return mix * x;  // mixes toward the maximally mixed center
}

RealVector plus_coords() {
  CVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return encode(HermitianMatrix::symmetrized(plus * plus.adjoint())).x;
}

}  // namespace

TEST_CASE("sqrt_fidelity closed forms") {
  std::mt19937_64 rng(51);
  const HermitianMatrix rho = random_density(3, rng);
  REQUIRE(sqrt_fidelity(rho, rho) == Catch::Approx(1.0));

  CMatrix zero_state(2, 2), one_state(2, 2);
  zero_state << 1.0, 0.0, 0.0, 0.0;
  one_state << 0.0, 0.0, 0.0, 1.0;
  REQUIRE(sqrt_fidelity(HermitianMatrix(zero_state), HermitianMatrix(one_state)) ==
          Catch::Approx(0.0).margin(1e-14));

  const HermitianMatrix mixed(0.5 * CMatrix::Identity(2, 2));
  REQUIRE(sqrt_fidelity(mixed, HermitianMatrix(zero_state)) ==
          Catch::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("sqrt_fidelity is symmetric and guards its domain") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 30; ++trial) {
    const HermitianMatrix a = random_psd(3, rng);
    const HermitianMatrix b = random_psd(3, rng);
    REQUIRE(sqrt_fidelity(a, b) == Catch::Approx(sqrt_fidelity(b, a)).margin(1e-10));
    REQUIRE(sqrt_fidelity(a, b) >= 0.0);
  }

  REQUIRE_THROWS_AS(sqrt_fidelity(HermitianMatrix(CMatrix::Identity(2, 2)),
                                  HermitianMatrix(CMatrix::Identity(3, 3))),
                    std::invalid_argument);

  CMatrix neg(2, 2);
  neg << 1.0, 0.0, 0.0, -0.5;
  REQUIRE_THROWS_AS(
      sqrt_fidelity(HermitianMatrix(neg), HermitianMatrix(CMatrix::Identity(2, 2))),
      std::domain_error);
}

TEST_CASE("g closed forms") {
  std::mt19937_64 rng(53);
  const Objective identity(identity_pair(2));
  for (int trial = 0; trial < 5; ++trial) {
    const RealVector x = interior_point(2, rng);
    const RealVector y = interior_point(2, rng);
    REQUIRE(g_exact(identity, x, y) == Catch::Approx(-1.0));
    REQUIRE(g_oracle(identity, x, y, 1e-6) == Catch::Approx(-1.0).margin(1e-6));
  }

  const Objective zero(zero_pair(2));
  const RealVector x = interior_point(2, rng);
  REQUIRE(g_exact(zero, x, x) == Catch::Approx(0.0).margin(1e-12));

  const Objective iz(stinespring_of_difference(CMatrix::Identity(2, 2), PauliBasis::sigma(3)));
  const RealVector plus = plus_coords();
  REQUIRE(g_exact(iz, plus, plus) == Catch::Approx(-2.0));
}

TEST_CASE("g_oracle tracks g_exact within the requested accuracy") {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 100; ++trial) {
    const StinespringPair p = random_stinespring(2, 1 + trial % 3, rng);
    const Objective obj(p);
    const RealVector x = interior_point(2, rng);
    const RealVector y = interior_point(2, rng);
    const double eps = trial % 2 == 0 ? 1e-4 : 1e-8;
    REQUIRE(std::abs(g_oracle(obj, x, y, eps) - g_exact(obj, x, y)) <= eps);
  }
  const Objective obj(identity_pair(2));
  REQUIRE_THROWS_AS(g_oracle(obj, RealVector::Zero(3), RealVector::Zero(3), 0.0),
                    std::invalid_argument);
}

TEST_CASE("g stays within its declared range") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    const StinespringPair p = random_stinespring(2, 2, rng);
    const Objective obj(p);
    const RealVector x = interior_point(2, rng);
    const RealVector y = interior_point(2, rng);
    const double g = g_exact(obj, x, y);
    REQUIRE(g <= 1e-12);
    REQUIRE(g >= -obj.m_scale() - 1e-9);
    REQUIRE(g >= -obj.range_bound() - 1e-9);
  }
}

TEST_CASE("g is midpoint convex") {
  std::mt19937_64 rng(56);
  for (int trial = 0; trial < 300; ++trial) {
    const StinespringPair p = random_stinespring(2, 1 + trial % 4, rng);
    const Objective obj(p);
    const RealVector x1 = interior_point(2, rng), x2 = interior_point(2, rng);
    const RealVector y1 = interior_point(2, rng), y2 = interior_point(2, rng);
    const double mid =
        g_exact(obj, RealVector(0.5 * (x1 + x2)), RealVector(0.5 * (y1 + y2)));
    const double avg = 0.5 * (g_exact(obj, x1, y1) + g_exact(obj, x2, y2));
    REQUIRE(mid <= avg + 1e-9);
  }
}

TEST_CASE("sqrt fidelity is jointly concave") {
  std::mt19937_64 rng(57);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index n = trial % 2 == 0 ? 2 : 3;
    const int k = 2 + trial % 3;
    std::vector<HermitianMatrix> rhos, xis;
    std::vector<double> lams;
    double total = 0.0;
    for (int j = 0; j < k; ++j) {
      rhos.push_back(random_density(n, rng));
      xis.push_back(random_density(n, rng));
      lams.push_back(unif(rng) + 1e-3);
      total += lams.back();
    }
    CMatrix rho_mix = CMatrix::Zero(n, n), xi_mix = CMatrix::Zero(n, n);
    double rhs = 0.0;
    for (int j = 0; j < k; ++j) {
      lams[size_t(j)] /= total;
      rho_mix += lams[size_t(j)] * rhos[size_t(j)].matrix();
      xi_mix += lams[size_t(j)] * xis[size_t(j)].matrix();
      rhs += lams[size_t(j)] * sqrt_fidelity(rhos[size_t(j)], xis[size_t(j)]);
    }
    const double lhs = sqrt_fidelity(HermitianMatrix::symmetrized(rho_mix),
                                     HermitianMatrix::symmetrized(xi_mix));
    REQUIRE(lhs >= rhs - 1e-9);
  }
}

TEST_CASE("trace-norm perturbation bound") {
  std::mt19937_64 rng(58);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    const double zeta = trial % 2 == 0 ? 1e-3 : 1e-6;
    CMatrix base1 = random_psd(n, rng).matrix() + zeta * CMatrix::Identity(n, n);
    CMatrix base2 = random_psd(n, rng).matrix() + zeta * CMatrix::Identity(n, n);
    const auto perturb = [&](const CMatrix& m) {
      CMatrix e = random_gaussian(n, n, rng);
      e = 0.5 * (e + e.adjoint());
      e *= zeta * unif(rng) / spectral_norm(e);
      return CMatrix(m + e);
    };
    const CMatrix sigma1 = perturb(base1), sigma2 = perturb(base2);
    const double lhs =
        std::abs(trace_norm(base1 * base2) - trace_norm(sigma1 * sigma2));
    const double zeta_used = std::max(spectral_norm(base1 - sigma1),
                                      spectral_norm(base2 - sigma2));
    const double rhs =
        double(n) * zeta_used * (spectral_norm(base1) + spectral_norm(sigma2));
    REQUIRE(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("analytic subgradient special cases") {
  std::mt19937_64 rng(59);
  const Objective identity(identity_pair(2));
  const RealVector x = interior_point(2, rng);
  const auto [gx, gy] = g_subgradient(identity, x, x, 1e-10);
  REQUIRE(gx.norm() < 1e-12);
  REQUIRE(gy.norm() < 1e-12);

  // Symmetric instance at a symmetric point: the two gradients agree.
  const CMatrix w = random_isometry(4, 2, rng);
  const Objective sym(StinespringPair(2, 2, w, w));
  const RealVector z = interior_point(2, rng);
  const auto [sx, sy] = g_subgradient(sym, z, z, 1e-10);
  REQUIRE((sx - sy).norm() < 1e-8);

  REQUIRE_THROWS_AS(g_subgradient(identity, x, x, 0.0), std::invalid_argument);
}

TEST_CASE("analytic subgradient matches central finite differences") {
  std::mt19937_64 rng(60);
  const double step = 1e-5;
  int checked = 0;
  while (checked < 100) {
    const StinespringPair p = random_stinespring(2, 1 + checked % 3, rng);
    const Objective obj(p);
    const RealVector x = interior_point(2, rng, 0.5);
    const RealVector y = interior_point(2, rng, 0.5);
    const auto [gx, gy] = g_subgradient(obj, x, y, default_subgradient_delta(obj));

    RealVector fx(3), fy(3);
    for (int i = 0; i < 3; ++i) {
      RealVector xp = x, xm = x, yp = y, ym = y;
      xp(i) += step;
      xm(i) -= step;
      yp(i) += step;
      ym(i) -= step;
      fx(i) = (g_exact(obj, xp, y) - g_exact(obj, xm, y)) / (2.0 * step);
      fy(i) = (g_exact(obj, x, yp) - g_exact(obj, x, ym)) / (2.0 * step);
    }
    const double denom = std::max(1e-8, std::sqrt(fx.squaredNorm() + fy.squaredNorm()));
    const double err =
        std::sqrt((gx - fx).squaredNorm() + (gy - fy).squaredNorm()) / denom;
    REQUIRE(err <= 1e-3);
    ++checked;
  }
}

TEST_CASE("regularization slack shrinks with delta") {
  std::mt19937_64 rng(61);
  const StinespringPair p = random_stinespring(2, 2, rng);
  const Objective obj(p);
  REQUIRE(subgradient_slack(obj, 1e-10) < subgradient_slack(obj, 1e-6));
  REQUIRE(subgradient_slack(obj, 1e-12) > 0.0);
}
