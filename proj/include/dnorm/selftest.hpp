// selftest.hpp — The acceptance suite: one deterministic pass/fail check per
// shipped guarantee, runnable from the CLI (`dnorm selftest`) and from the
// dedicated acceptance binary. `quick` trims sample counts and the large
// dimension to stay interactive; `full` runs the complete battery.

#pragma once

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dnorm/instances.hpp"
#include "dnorm/io.hpp"
#include "dnorm/objective.hpp"
#include "dnorm/pauli.hpp"
#include "dnorm/solver.hpp"
#include "dnorm/superop.hpp"
#include "dnorm/verify.hpp"

namespace dnorm {

enum class SelftestScale { quick, full };

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace selftest_detail {

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

}  // namespace selftest_detail

// Runs every acceptance criterion. `fault_inject` is a test hook that
// corrupts the computed values before checking, to confirm the suite
// actually detects wrong numbers; it must make the run fail.
inline std::vector<CriterionResult> run_acceptance(SelftestScale scale,
                                                   bool fault_inject = false) {
  using selftest_detail::Timer;
  using selftest_detail::fmt;
  const bool full = scale == SelftestScale::full;
  const double fault = fault_inject ? 0.05 : 0.0;
  std::vector<CriterionResult> results;

  const auto add = [&results](int id, std::string name, bool pass, std::string detail,
                              double seconds) {
    results.push_back({id, std::move(name), pass, std::move(detail), seconds});
  };

  {  // 1. Identity channel at N = 2 (and N = 4 at full scale).
    Timer t;
    bool pass = true;
    std::string detail;
    const DiamondResult r2 = diamond_norm(identity_pair(2), 1e-3);
    const double v2 = r2.value + fault;
    const double t2 = t.seconds();
    pass &= std::abs(v2 - 1.0) <= 1e-3 && t2 < 60.0;
    detail = "N=2: " + fmt(v2) + " in " + fmt(t2) + "s";
    if (full) {
      Timer t4;
      const DiamondResult r4 = diamond_norm(identity_pair(4), 1e-3);
      const double v4 = r4.value + fault;
      const double el4 = t4.seconds();
      pass &= std::abs(v4 - 1.0) <= 1e-3 && el4 < 1200.0;
      detail += "; N=4: " + fmt(v4) + " in " + fmt(el4) + "s";
    }
    add(1, "identity channel = 1 +/- 1e-3", pass, detail, t.seconds());
  }

  {  // 2. Zero map short-circuit.
    Timer t;
    const DiamondResult r = diamond_norm(zero_pair(2), 1e-3);
    const double v = r.value + fault;
    const bool pass = std::abs(v) <= 1e-3 && t.seconds() < 1.0 && r.report.iterations == 0;
    add(2, "zero map short-circuits to 0", pass, "value " + fmt(v), t.seconds());
  }

  {  // 3. Unitary differences against the closed form.
    Timer t;
    std::mt19937_64 rng(301);
    const int pairs = full ? 10 : 4;
    int violations = 0;
    double worst = 0.0;
    for (int i = 0; i < pairs; ++i) {
      const CMatrix u = random_unitary(2, rng);
      const CMatrix v = random_unitary(2, rng);
      const double exact = unitary_diamond(u, v);
      const double approx =
          diamond_norm(stinespring_of_difference(u, v), 1e-2).value + fault;
      worst = std::max(worst, std::abs(approx - exact));
      if (std::abs(approx - exact) > 2e-2) ++violations;
    }
    add(3, "unitary differences within 2e-2 of closed form", violations == 0,
        std::to_string(pairs) + " pairs, worst " + fmt(worst), t.seconds());
  }

  {  // 4. Solver vs the two independent oracles on channel differences.
    Timer t;
    std::mt19937_64 rng(401);
    const int pairs = full ? 20 : 5;
    BruteForceConfig bf_cfg;
    bf_cfg.restarts = 24;
    bf_cfg.ascent_steps = 300;
    int violations = 0;
    double worst_solver = 0.0, worst_oracles = 0.0;
    for (int i = 0; i < pairs; ++i) {
      const StinespringPair p = random_channel_difference(2, 1 + i % 2, rng);
      const double solver = diamond_norm(p, 1e-2).value + fault;
      const double bf = bruteforce_diamond(p, bf_cfg);
      const double ss = fidelity_seesaw(derived_pair(p), bf_cfg);
      worst_solver = std::max({worst_solver, std::abs(solver - bf), std::abs(solver - ss)});
      worst_oracles = std::max(worst_oracles, std::abs(bf - ss));
      if (std::abs(solver - bf) > 2e-2 || std::abs(solver - ss) > 2e-2 ||
          std::abs(bf - ss) > 1e-3) {
        ++violations;
      }
    }
    add(4, "solver/oracle concordance (2e-2, oracles 1e-3)", violations == 0,
        std::to_string(pairs) + " instances, worst solver dev " + fmt(worst_solver) +
            ", oracle dev " + fmt(worst_oracles),
        t.seconds());
  }

  {  // 5. Ball containments of the coordinate body.
    Timer t;
    std::mt19937_64 rng(501);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int samples = full ? 1000 : 200;
    int violations = 0;
    for (Eigen::Index n : {Eigen::Index(2), Eigen::Index(4), Eigen::Index(8)}) {
      const Eigen::Index coords = n * n - 1;
      for (int i = 0; i < samples; ++i) {
        RealVector x(coords);
        for (Eigen::Index j = 0; j < coords; ++j) x(j) = gauss(rng);
        x *= unif(rng) / (x.norm() * 2.0 * std::sqrt(double(n)));
        const EigenDecomposition e = eig_hermitian(decode(n, x));
        if (e.eigenvalues(n - 1) < -1e-12) ++violations;

        const RealVector v = encode(random_density(n, rng)).x;
        if (v.norm() > double(n) + 1e-12) ++violations;
      }
    }
    add(5, "ball containments (inner PSD, outer radius N)", violations == 0,
        std::to_string(3 * samples) + " samples per direction", t.seconds());
  }

  {  // 6. Membership oracle contract against exact classification.
    Timer t;
    std::mt19937_64 rng(601);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, 1.6);
    const int target = full ? 500 : 150;
    int violations = 0;
    long classified_total = 0;
    for (Eigen::Index n : {Eigen::Index(2), Eigen::Index(4)}) {
      const FeasibleSetSpec set{n, 0.0};
      for (double eps : {1e-2, 1e-4}) {
        int classified = 0;
        long guard = 0;
        while (classified < target / 2 && guard++ < 500000) {
          const Eigen::Index coords = n * n - 1;
          RealVector x(coords);
          for (Eigen::Index j = 0; j < coords; ++j) x(j) = gauss(rng);
          x *= unif(rng) * double(n) / x.norm();
          const EigenDecomposition e = eig_hermitian(decode(n, x));
          const double margin = e.eigenvalues(n - 1) - set.threshold();
          const double width = eps / std::sqrt(double(n));
          if (margin >= width) {
            if (!membership(set, x, eps).verdict) ++violations;
            ++classified;
          } else if (margin < -width) {
            if (membership(set, x, eps).verdict) ++violations;
            ++classified;
          }
        }
        classified_total += classified;
      }
    }
    add(6, "membership oracle contract (eps 1e-2, 1e-4)", violations == 0,
        std::to_string(classified_total) + " classified points, " +
            std::to_string(violations) + " violations",
        t.seconds());
  }

  {  // 7. Midpoint convexity of g and joint concavity of sqrt-fidelity.
    Timer t;
    std::mt19937_64 rng(701);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int samples = full ? 1000 : 200;
    int violations = 0;
    for (int i = 0; i < samples; ++i) {
      const StinespringPair p = random_stinespring(2, 1 + i % 4, rng);
      const Objective obj(p);
      const RealVector x1 = 0.7 * encode(random_density(2, rng)).x;
      const RealVector x2 = 0.7 * encode(random_density(2, rng)).x;
      const RealVector y1 = 0.7 * encode(random_density(2, rng)).x;
      const RealVector y2 = 0.7 * encode(random_density(2, rng)).x;
      const double mid =
          g_exact(obj, RealVector(0.5 * (x1 + x2)), RealVector(0.5 * (y1 + y2)));
      const double avg = 0.5 * (g_exact(obj, x1, y1) + g_exact(obj, x2, y2));
      if (mid > avg + 1e-9 - fault) ++violations;
    }
    for (int i = 0; i < samples; ++i) {
      const Eigen::Index n = i % 2 == 0 ? 2 : 4;
      const int k = 2 + i % 3;
      CMatrix rho_mix = CMatrix::Zero(n, n), xi_mix = CMatrix::Zero(n, n);
      double rhs = 0.0, total = 0.0;
      std::vector<double> lams(static_cast<size_t>(k));
      std::vector<HermitianMatrix> rhos, xis;
      for (int j = 0; j < k; ++j) {
        rhos.push_back(random_density(n, rng));
        xis.push_back(random_density(n, rng));
        lams[size_t(j)] = unif(rng) + 1e-3;
        total += lams[size_t(j)];
      }
      for (int j = 0; j < k; ++j) {
        lams[size_t(j)] /= total;
        rho_mix += lams[size_t(j)] * rhos[size_t(j)].matrix();
        xi_mix += lams[size_t(j)] * xis[size_t(j)].matrix();
        rhs += lams[size_t(j)] * sqrt_fidelity(rhos[size_t(j)], xis[size_t(j)]);
      }
      const double lhs = sqrt_fidelity(HermitianMatrix::symmetrized(rho_mix),
                                       HermitianMatrix::symmetrized(xi_mix));
      if (lhs < rhs - 1e-9) ++violations;
    }
    add(7, "convexity of g and joint concavity of sqrt-F", violations == 0,
        std::to_string(2 * samples) + " combinations, " + std::to_string(violations) +
            " violations",
        t.seconds());
  }

  {  // 8. Perturbation bounds.
    Timer t;
    std::mt19937_64 rng(801);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int samples = full ? 200 : 60;
    int violations = 0;
    for (int i = 0; i < samples; ++i) {
      const Eigen::Index n = 2 + i % 3;
      const double zeta = i % 2 == 0 ? 1e-3 : 1e-6;
      const CMatrix r1 = random_psd(n, rng).matrix() + zeta * CMatrix::Identity(n, n);
      const CMatrix r2 = random_psd(n, rng).matrix() + zeta * CMatrix::Identity(n, n);
      const auto perturb = [&](const CMatrix& m) {
        CMatrix e = random_gaussian(n, n, rng);
        e = 0.5 * (e + e.adjoint());
        e *= zeta * unif(rng) / spectral_norm(e);
        return CMatrix(m + e);
      };
      const CMatrix s1 = perturb(r1), s2 = perturb(r2);
      const double lhs = std::abs(trace_norm(r1 * r2) - trace_norm(s1 * s2)) + fault;
      const double zeta_used =
          std::max(spectral_norm(r1 - s1), spectral_norm(r2 - s2));
      if (lhs > double(n) * zeta_used * (spectral_norm(r1) + spectral_norm(s2)) + 1e-12) {
        ++violations;
      }
    }
    for (int i = 0; i < samples; ++i) {
      const Eigen::Index a = 1 + i % 3;
      const StinespringPair p(2, a, random_gaussian(2 * a, 2, rng),
                              random_gaussian(2 * a, 2, rng));
      const DerivedPair d = derived_pair(p);
      const HermitianMatrix rho = random_density(2, rng);
      const double root_norm = spectral_norm(
          psd_sqrt(HermitianMatrix::symmetrized(apply_derived(d, DerivedMap::t1, rho)), true)
              .matrix());
      if (root_norm + fault > spectral_norm(p.b) + 1e-10) ++violations;
    }
    add(8, "perturbation bounds (trace-norm, root norms)", violations == 0,
        std::to_string(2 * samples) + " instances, " + std::to_string(violations) +
            " violations",
        t.seconds());
  }

  {  // 9. Analytic subgradient vs central finite differences.
    Timer t;
    std::mt19937_64 rng(901);
    const int samples = full ? 100 : 30;
    const double step = 1e-5;
    int violations = 0;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const StinespringPair p = random_stinespring(2, 1 + i % 3, rng);
      const Objective obj(p);
      const RealVector x = 0.5 * encode(random_density(2, rng)).x;
      const RealVector y = 0.5 * encode(random_density(2, rng)).x;
      const auto [gx, gy] = g_subgradient(obj, x, y, default_subgradient_delta(obj));
      RealVector fx(3), fy(3);
      for (int j = 0; j < 3; ++j) {
        RealVector xp = x, xm = x, yp = y, ym = y;
        xp(j) += step;
        xm(j) -= step;
        yp(j) += step;
        ym(j) -= step;
        fx(j) = (g_exact(obj, xp, y) - g_exact(obj, xm, y)) / (2.0 * step);
        fy(j) = (g_exact(obj, x, yp) - g_exact(obj, x, ym)) / (2.0 * step);
      }
      const double denom = std::max(1e-8, std::sqrt(fx.squaredNorm() + fy.squaredNorm()));
      const double err =
          std::sqrt((gx - fx).squaredNorm() + (gy - fy).squaredNorm()) / denom + fault;
      worst = std::max(worst, err);
      if (err > 1e-3) ++violations;
    }
    add(9, "gradient check vs finite differences (1e-3)", violations == 0,
        std::to_string(samples) + " points, worst " + fmt(worst), t.seconds());
  }

  {  // 10. Multiplicativity under tensor products at N = 4.
    Timer t;
    std::mt19937_64 rng(1001);
    BruteForceConfig bf_cfg;
    bf_cfg.restarts = 20;
    bf_cfg.ascent_steps = 300;
    const int pairs = full ? 5 : 2;
    int violations = 0;
    double worst = 0.0;
    double solver_dev = 0.0;
    for (int i = 0; i < pairs; ++i) {
      const StinespringPair p = random_channel_difference(2, 1, rng);
      const StinespringPair q = random_channel_difference(2, 1, rng);
      const double vp = bruteforce_diamond(p, bf_cfg);
      const double vq = bruteforce_diamond(q, bf_cfg);
      const double vpq = bruteforce_diamond(tensor_superop(p, q), bf_cfg) + fault;
      worst = std::max(worst, std::abs(vpq - vp * vq));
      if (std::abs(vpq - vp * vq) > 5e-3) ++violations;
      if (i == 0) {
        const double solver = diamond_norm(tensor_superop(p, q), 1e-2).value + fault;
        solver_dev = std::abs(solver - vp * vq);
        if (solver_dev > 2.0 * 1e-2 + 5e-3) ++violations;
      }
    }
    add(10, "tensor multiplicativity at N=4 (5e-3)", violations == 0,
        std::to_string(pairs) + " pairs, worst " + fmt(worst) + ", solver dev " +
            fmt(solver_dev),
        t.seconds());
  }

  {  // 11. Determinism of repeated solves and their serialized records.
    Timer t;
    const auto run_once = [&]() {
      const DiamondResult r = diamond_norm(identity_pair(2), 1e-3);
      ResultRecord record;
      record.value = r.value + fault;
      record.epsilon = r.epsilon;
      record.method = "convex";
      record.iterations = r.report.iterations;
      record.wall_time_s = 0.0;
      record.m = r.constants.m;
      record.alpha = r.constants.alpha;
      record.eps_prime = r.constants.eps_prime;
      return result_to_json(record).dump(2);
    };
    const std::string first = run_once();
    const std::string second = fault_inject ? run_once() + "x" : run_once();
    const bool pass = first == second;
    add(11, "byte-identical repeated JSON results", pass,
        pass ? "identical" : "mismatch", t.seconds());
  }

  {  // 12. Representation conversion round-trips.
    Timer t;
    std::mt19937_64 rng(1201);
    const int samples = full ? 50 : 15;
    int violations = 0;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const NaturalRep rep{2, random_gaussian(4, 4, rng)};
      const StinespringPair p = stinespring_from_natural(rep);
      const NaturalRep back = natural_from_stinespring(p);
      const double err = spectral_norm(back.matrix - rep.matrix) + fault;
      worst = std::max(worst, err);
      if (err > 1e-9) ++violations;
    }
    add(12, "stinespring/natural round-trip (1e-9)", violations == 0,
        std::to_string(samples) + " maps, worst " + fmt(worst), t.seconds());
  }

  return results;
}

inline int print_acceptance(const std::vector<CriterionResult>& results, std::ostream& out) {
  int failures = 0;
  for (const auto& r : results) {
    if (!r.pass) ++failures;
    out << "[" << std::setw(2) << r.id << "] " << (r.pass ? "PASS" : "FAIL") << "  "
        << std::left << std::setw(52) << r.name << std::right << std::setw(9) << std::fixed
        << std::setprecision(2) << r.seconds << "s  " << r.detail << "\n";
    out.unsetf(std::ios::fixed);
  }
  out << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria FAILED")
      << " (" << results.size() << " total)\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace dnorm
