// solver.hpp — Oracle-based convex minimization and the diamond-norm
// algorithm built on it.
//
// The default engine is a central-cut ellipsoid method over the product
// coordinates, alternating feasibility cuts (from the membership oracle's
// minimal-eigenvector separator) with objective cuts (from the analytic
// subgradient of the δ-regularized target). The certified optimality gap is
// derived from the ellipsoid volume: once vol(E_k) < λⁿ·vol(B_r), a point of
// the λ-shrunk feasible set has been cut, which can only happen to points
// whose value exceeds the best one seen; hence
//   best − min ≤ λ_k·(range + η) + oracle slacks,
// with λ_k = (vol(E_k)/vol(B_r))^{1/n} tracked in closed form through the
// log-determinant.
//
// membership_only mode keeps only the oracle interfaces the classical
// theorem assumes: a yes/no membership oracle and an evaluation oracle.
// It minimizes the epigraph coordinate t over {(z,t) : z ∈ S, g(z) ≤ t} by
// hit-and-run sampling with a shrinking level, which is randomized (seeded)
// and far slower, but exercises the weaker oracle contract.

#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "dnorm/matrix.hpp"
#include "dnorm/objective.hpp"
#include "dnorm/pauli.hpp"
#include "dnorm/superop.hpp"

namespace dnorm {

enum class SolverMode { separation_cuts, membership_only };

struct SolverConfig {
  double epsilon = 1e-3;  // accuracy target of minimize (ε′ in the diamond-norm chain)
  std::optional<long> max_iterations;  // unset: 50·n²·ln(R/(r·ε)) by default
  SolverMode mode = SolverMode::separation_cuts;
  unsigned long long seed = 1;  // membership_only randomized steps only

  void validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("SolverConfig: epsilon must be positive");
    if (max_iterations && *max_iterations < 1) {
      throw std::invalid_argument("SolverConfig: max_iterations must be >= 1");
    }
  }
};

struct SolveReport {
  double opt_value = 0.0;
  RealVector opt_point;
  long iterations = 0;
  double certified_gap = 0.0;
  double wall_time_s = 0.0;
};

struct BudgetExceededError : std::runtime_error {
  SolveReport best;
  explicit BudgetExceededError(std::string what, SolveReport best_so_far)
      : std::runtime_error(std::move(what)), best(std::move(best_so_far)) {}
};

// Oracle view of a convex body B(center, r) ⊆ S ⊆ B(0, R).
struct ConvexBody {
  Eigen::Index dim = 0;
  double inner_radius = 0.0;
  double outer_radius = 0.0;
  RealVector center;
  std::function<OracleAnswer(const RealVector&, double eps)> membership;
};

// Oracle view of a convex function over the body. `eval` answers to any
// requested additive accuracy. `subgradient` returns an exact gradient of a
// convex model function within `oracle_slack` of the true objective
// (the δ-regularization bias); it is ignored in membership_only mode.
struct ConvexObjective {
  std::function<double(const RealVector&, double eps)> eval;
  std::function<RealVector(const RealVector&)> subgradient;
  double range = 0.0;        // upper bound on max − min over the body
  double oracle_slack = 0.0; // |model − objective| bound (η)
};

namespace detail {

inline long default_budget(Eigen::Index n, double outer, double inner, double eps) {
  const double it = 50.0 * double(n) * double(n) * std::log(outer / (inner * eps));
  return std::max<long>(64, long(std::ceil(it)));
}

class WallTimer {
 public:
  WallTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline SolveReport minimize_separation(const ConvexBody& body, const ConvexObjective& obj,
                                       const SolverConfig& cfg) {
  const WallTimer timer;
  const Eigen::Index n = body.dim;
  if (n < 2) throw std::invalid_argument("minimize: dimension must be at least 2");
  const double eps = cfg.epsilon;
  const double eval_eps = eps / 8.0;
  const double outer = body.outer_radius;
  const double inner = body.inner_radius;
  const long budget = cfg.max_iterations
                          ? *cfg.max_iterations
                          : default_budget(n, outer, inner, eps);

  RealVector x = body.center;
  Eigen::MatrixXd shape = outer * outer * Eigen::MatrixXd::Identity(n, n);
  double logdet = 2.0 * double(n) * std::log(outer);
  const double nd = double(n);
  const double logdet_step =
      nd * std::log(nd * nd / (nd * nd - 1.0)) + std::log((nd - 1.0) / (nd + 1.0));

  double best_val = std::numeric_limits<double>::infinity();
  RealVector best_pt;
  bool found = false;
  double certified = std::numeric_limits<double>::infinity();
  double numeric_slack = 1e-12 * (1.0 + 2.0 * outer);

  const auto make_report = [&](long iters) {
    SolveReport rep;
    rep.opt_value = best_val;
    rep.opt_point = best_pt;
    rep.iterations = iters;
    rep.certified_gap = certified;
    rep.wall_time_s = timer.seconds();
    return rep;
  };

  long k = 0;
  for (k = 1; k <= budget; ++k) {
    const OracleAnswer ans = body.membership(x, eps);
    RealVector dir;
    if (ans.verdict) {
      const double v = obj.eval(x, eval_eps);
      if (v < best_val) {
        best_val = v;
        best_pt = x;
        found = true;
      }
      RealVector h = obj.subgradient(x);
      const double hnorm = h.norm();
      numeric_slack = std::max(numeric_slack, 1e-12 * (1.0 + hnorm) * 2.0 * outer);
      if (hnorm * 2.0 * outer <= eps / 8.0) {
        // Flat to within budget across the entire body: the linearization
        // pins the minimum at this point.
        certified = std::min(certified,
                             eval_eps + 2.0 * obj.oracle_slack + eps / 8.0 + numeric_slack);
        break;
      }
      dir = std::move(h);
    } else {
      dir = -ans.cut->normal;
    }

    // Central cut keeping {y : dir·(y − x) ≤ 0}.
    const RealVector ad = shape * dir;
    const double s = dir.dot(ad);
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw PrecisionError("minimize: ellipsoid degenerated below double precision");
    }
    const RealVector gt = ad / std::sqrt(s);
    x -= gt / (nd + 1.0);
    shape = (nd * nd / (nd * nd - 1.0)) *
            (shape - (2.0 / (nd + 1.0)) * (gt * gt.transpose()));
    shape = 0.5 * (shape + shape.transpose());
    logdet += logdet_step;

    if (found) {
      const double lambda = std::min(std::exp(logdet / (2.0 * nd)) / inner, 1.0);
      const double gap = lambda * (obj.range + obj.oracle_slack) + eval_eps +
                         2.0 * obj.oracle_slack + numeric_slack;
      certified = std::min(certified, gap);
      if (certified <= eps) break;
    }
  }

  if (!found || !(certified <= eps)) {
    throw BudgetExceededError("minimize: iteration budget exhausted before the certified gap closed",
                              make_report(std::min(k, budget)));
  }
  return make_report(std::min(k, budget));
}

inline SolveReport minimize_membership_walk(const ConvexBody& body, const ConvexObjective& obj,
                                            const SolverConfig& cfg) {
  const WallTimer timer;
  const Eigen::Index n = body.dim;
  const double eps = cfg.epsilon;
  const double eval_eps = eps / 8.0;
  const double member_eps = eps / 4.0;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const double f0 = obj.eval(body.center, eval_eps);
  const double span = obj.range + 1.0;
  double level = f0 + 0.10 * span;       // current upper level for t
  const double t_floor = f0 - span;      // t never needs to go below the range bound

  // Walk state in the epigraph body {(z,t) : z ∈ S, g(z) ≤ t ≤ level}.
  RealVector z = body.center;
  double t = f0 + 0.05 * span;
  double best_val = f0;
  RealVector best_pt = body.center;
  double certified = std::numeric_limits<double>::infinity();

  const auto inside = [&](const RealVector& q, double qt) {
    if (qt > level || qt < t_floor) return false;
    if ((q - body.center).norm() > body.outer_radius + 1.0) return false;
    if (!body.membership(q, member_eps).verdict) return false;
    return obj.eval(q, eval_eps) <= qt;
  };

  const long steps_per_round = 8 * long(n) + 16;
  const long round_budget = cfg.max_iterations ? *cfg.max_iterations : (40 + 12 * long(n));
  long rounds_done = 0;
  long stall = 0;
  bool converged = false;
  for (long round = 1; round <= round_budget; ++round) {
    rounds_done = round;
    double t_sum = 0.0;
    long t_count = 0;
    for (long step = 0; step < steps_per_round; ++step) {
      RealVector dirz(n);
      for (Eigen::Index i = 0; i < n; ++i) dirz(i) = gauss(rng);
      double dirt = gauss(rng);
      const double norm = std::sqrt(dirz.squaredNorm() + dirt * dirt);
      dirz /= norm;
      dirt /= norm;

      // Bracket the chord through (z, t) along ±(dirz, dirt), then bisect.
      const double reach = 2.0 * (body.outer_radius + span) + 1.0;
      double lo = 0.0, hi = reach;
      for (int b = 0; b < 40; ++b) {
        const double mid = 0.5 * (lo + hi);
        if (inside(z + mid * dirz, t + mid * dirt)) lo = mid; else hi = mid;
      }
      const double fwd = lo;
      lo = 0.0; hi = reach;
      for (int b = 0; b < 40; ++b) {
        const double mid = 0.5 * (lo + hi);
        if (inside(z - mid * dirz, t - mid * dirt)) lo = mid; else hi = mid;
      }
      const double bwd = lo;
      const double u = std::uniform_real_distribution<double>(-bwd, fwd)(rng);
      z += u * dirz;
      t += u * dirt;

      if (step >= steps_per_round / 2) {
        t_sum += t;
        ++t_count;
      }
      const double fz = obj.eval(z, eval_eps);
      if (fz < best_val && body.membership(z, member_eps).verdict) {
        best_val = fz;
        best_pt = z;
      }
    }
    const double t_avg = t_count > 0 ? t_sum / double(t_count) : level;
    // Never cut the level below the best value actually observed.
    const double new_level = std::max(t_avg, best_val + eps / 2.0);
    const double improvement = level - new_level;
    certified = std::min(certified, std::max(improvement, 0.0) + eps);
    if (new_level < level) {
      level = new_level;
      // Restart the walker at the best point, which satisfies the new level.
      z = best_pt;
      t = std::min(level, best_val + eps / 2.0);
    }
    if (improvement <= eps / 4.0) {
      if (++stall >= 2) {
        converged = true;
        break;
      }
    } else {
      stall = 0;
    }
  }

  SolveReport rep;
  rep.opt_value = best_val;
  rep.opt_point = best_pt;
  rep.iterations = rounds_done;
  rep.certified_gap = certified;
  rep.wall_time_s = timer.seconds();
  if (!converged && certified > 4.0 * eps) {
    throw BudgetExceededError("minimize: round budget exhausted in membership_only mode", rep);
  }
  return rep;
}

}  // namespace detail

// Generic oracle entry point; the spec'd test harness path.
inline SolveReport minimize_oracle(const ConvexBody& body, const ConvexObjective& obj,
                                   const SolverConfig& cfg) {
  cfg.validate();
  if (cfg.mode == SolverMode::membership_only) {
    return detail::minimize_membership_walk(body, obj, cfg);
  }
  return detail::minimize_separation(body, obj, cfg);
}

// Minimize g over the product body S⁽¹⁾ × S⁽¹⁾ described by `set`.
inline SolveReport minimize(const FeasibleSetSpec& set, const Objective& obj,
                            const SolverConfig& cfg) {
  cfg.validate();
  if (set.dim_v != obj.dim_v()) throw std::invalid_argument("minimize: dimension mismatch");
  const Eigen::Index m = set.coord_dim();

  ConvexBody body;
  body.dim = 2 * m;
  body.inner_radius = set.inner_radius();
  body.outer_radius = set.outer_radius();
  body.center = RealVector::Zero(2 * m);
  body.membership = [set, m](const RealVector& z, double eps) {
    return product_membership(set, z.head(m), z.tail(m), eps);
  };

  const double eta_target = cfg.epsilon / 8.0;
  const double delta = std::min(
      default_subgradient_delta(obj),
      std::pow(eta_target / (double(obj.dim_a()) * (obj.norm_b() + obj.norm_c() + 1.0)), 2));

  ConvexObjective cobj;
  cobj.range = obj.range_bound();
  cobj.oracle_slack = subgradient_slack(obj, delta);
  cobj.eval = [&obj, set, m](const RealVector& z, double eps) {
    // Every queried point must decode to PSD matrices; the shrinkage exists
    // to guarantee exactly this.
    for (int half = 0; half < 2; ++half) {
      const RealVector part = half == 0 ? RealVector(z.head(m)) : RealVector(z.tail(m));
      const EigenDecomposition d = eig_hermitian(decode(set.dim_v, part));
      if (d.eigenvalues(d.eigenvalues.size() - 1) < -1e-10) {
        throw std::logic_error("minimize: objective queried outside the PSD region");
      }
    }
    return g_oracle(obj, z.head(m), z.tail(m), eps);
  };
  cobj.subgradient = [&obj, delta, m](const RealVector& z) {
    auto [gx, gy] = g_subgradient(obj, z.head(m), z.tail(m), delta);
    RealVector g(2 * m);
    g.head(m) = gx;
    g.tail(m) = gy;
    return g;
  };
  return minimize_oracle(body, cobj, cfg);
}

struct DiamondConstants {
  double m = 0.0;
  double alpha = 0.0;
  double eps_prime = 0.0;
  bool zero_map = false;
};

struct DiamondResult {
  double value = 0.0;
  double epsilon = 0.0;
  SolveReport report;
  DiamondConstants constants;
};

// M, α, ε′ for the accuracy chain ε′ + 2αM ≤ ε. ‖T_i‖ is over-approximated
// within 1%. α and ε′ are additionally capped (α ≤ 1/4, ε′ ≤ ε/4) so the
// chain stays valid for maps whose scale M is small against ε; the caps are
// inactive in any well-scaled instance.
inline DiamondConstants compute_constants(const StinespringPair& p, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("compute_constants: epsilon must be positive");
  const DerivedPair d = derived_pair(p);
  const double upper1 = superop_spectral_norm(d, DerivedMap::t1) * (1.0 + 1e-8);
  const double upper2 = superop_spectral_norm(d, DerivedMap::t2) * (1.0 + 1e-8);
  DiamondConstants c;
  c.m = double(p.dim_v) * std::sqrt(upper1 * upper2);
  if (c.m <= 0.0) {
    c.zero_map = true;
    return c;
  }
  c.alpha = std::min(epsilon / (4.0 * c.m), 0.25);
  c.eps_prime = std::min(c.alpha / std::sqrt(double(p.dim_v)), epsilon / 4.0);
  return c;
}

// |result.value − ‖T‖◇| ≤ epsilon. Deterministic in separation_cuts mode.
inline DiamondResult diamond_norm(const StinespringPair& p, double epsilon,
                                  const SolverConfig& cfg = SolverConfig{}) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("diamond_norm: epsilon must be positive");
  DiamondResult result;
  result.epsilon = epsilon;
  result.constants = compute_constants(p, epsilon);
  if (result.constants.zero_map) {
    result.value = 0.0;
    return result;
  }

  const Objective obj(p);
  const FeasibleSetSpec shrunk{p.dim_v, result.constants.alpha};
  SolverConfig inner = cfg;
  inner.epsilon = result.constants.eps_prime;
  result.report = minimize(shrunk, obj, inner);

  // Tolerance ledger: the certified solve accuracy plus the shrinkage bias
  // must stay within the requested epsilon.
  const double total = result.report.certified_gap +
                       2.0 * result.constants.alpha * result.constants.m;
  if (!(total <= epsilon)) {
    throw PrecisionError("diamond_norm: accounted tolerances exceed the requested epsilon");
  }
  result.value = std::max(0.0, -result.report.opt_value);
  return result;
}

}  // namespace dnorm
