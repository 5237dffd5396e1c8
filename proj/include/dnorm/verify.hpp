// verify.hpp — Independent desk-scale estimates of the diamond norm, used to
// cross-check the convex solver.
//
// bruteforce_diamond maximizes ‖(T⊗I)(|ψ⟩⟨ψ|)‖₁ over pure entangled inputs
// with an ancilla of dimension N (which suffices for the maximum), by
// multi-start projected gradient ascent on the unit sphere. The trace norm
// is differentiated through the sign/polar matrix of the output's
// decomposition. fidelity_seesaw maximizes √F(T₁(ρ), T₂(ξ)) directly in
// Pauli coordinates by alternating projected ascent. unitary_diamond is the
// closed form for differences of unitary channels: 2·√(1−d²), where d is the
// planar distance from the origin to the convex hull of the eigenvalues of
// U†V. All three are lower-bound instruments except the closed form, which
// is exact.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dnorm/matrix.hpp"
#include "dnorm/objective.hpp"
#include "dnorm/pauli.hpp"
#include "dnorm/superop.hpp"

namespace dnorm {

struct BruteForceConfig {
  int restarts = 64;
  int ascent_steps = 400;
  unsigned long long seed = 20240901;
  double tol = 1e-10;

  void validate() const {
    if (restarts < 8) throw std::invalid_argument("BruteForceConfig: restarts must be >= 8");
    if (!(tol > 0.0)) throw std::invalid_argument("BruteForceConfig: tol must be positive");
    if (ascent_steps < 1) throw std::invalid_argument("BruteForceConfig: ascent_steps must be >= 1");
  }
};

namespace detail {

// (T⊗I_anc) applied to |ψ⟩⟨ψ| for the map with generators (B, C): computes
// Tr over the middle ancilla factor A of (B⊗I)ψ ((C⊗I)ψ)†.
inline CMatrix apply_extended(const StinespringPair& p, const CVector& psi, Eigen::Index anc) {
  const Eigen::Index n = p.dim_v;
  const Eigen::Index a = p.dim_a;
  CVector bp = CVector::Zero(n * a * anc);
  CVector cp = CVector::Zero(n * a * anc);
  for (Eigen::Index v = 0; v < n * a; ++v)
    for (Eigen::Index w = 0; w < anc; ++w) {
      Complex sb = 0.0, sc = 0.0;
      for (Eigen::Index m = 0; m < n; ++m) {
        sb += p.b(v, m) * psi(m * anc + w);
        sc += p.c(v, m) * psi(m * anc + w);
      }
      bp(v * anc + w) = sb;
      cp(v * anc + w) = sc;
    }
  CMatrix out = CMatrix::Zero(n * anc, n * anc);
  for (Eigen::Index v = 0; v < n; ++v)
    for (Eigen::Index w = 0; w < anc; ++w)
      for (Eigen::Index v2 = 0; v2 < n; ++v2)
        for (Eigen::Index w2 = 0; w2 < anc; ++w2) {
          Complex sum = 0.0;
          for (Eigen::Index t = 0; t < a; ++t) {
            sum += bp((v * a + t) * anc + w) * std::conj(cp((v2 * a + t) * anc + w2));
          }
          out(v * anc + w, v2 * anc + w2) = sum;
        }
  return out;
}

// Polar/sign matrix Z with ‖W‖₁ = Re Tr(Z†W).
inline CMatrix trace_norm_sign(const CMatrix& w) {
  const double asym = (w - w.adjoint()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  if (asym <= 1e-11 * scale) {
    const EigenDecomposition d = eig_hermitian(HermitianMatrix::symmetrized(w));
    RealVector signs(d.eigenvalues.size());
    for (Eigen::Index i = 0; i < signs.size(); ++i) signs(i) = d.eigenvalues(i) >= 0 ? 1.0 : -1.0;
    return d.eigenvectors * signs.asDiagonal() * d.eigenvectors.adjoint();
  }
  Eigen::JacobiSVD<CMatrix> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Hermitian quadratic form G with Re ψ†Gψ = Re Tr(Z†·(T⊗I)(ψψ†)).
inline CMatrix ascent_form(const StinespringPair& p, const CMatrix& z, Eigen::Index anc) {
  const Eigen::Index n = p.dim_v;
  const Eigen::Index a = p.dim_a;
  const Eigen::Index big = n * a * anc;
  CMatrix lifted = CMatrix::Zero(big, big);
  const CMatrix zdag = z.adjoint();
  for (Eigen::Index v = 0; v < n; ++v)
    for (Eigen::Index w = 0; w < anc; ++w)
      for (Eigen::Index v2 = 0; v2 < n; ++v2)
        for (Eigen::Index w2 = 0; w2 < anc; ++w2) {
          const Complex val = zdag(v * anc + w, v2 * anc + w2);
          if (val == Complex(0.0, 0.0)) continue;
          for (Eigen::Index t = 0; t < a; ++t) {
            lifted((v * a + t) * anc + w, (v2 * a + t) * anc + w2) = val;
          }
        }
  const CMatrix bt = kron(p.b, CMatrix::Identity(anc, anc));
  const CMatrix ct = kron(p.c, CMatrix::Identity(anc, anc));
  const CMatrix g = ct.adjoint() * lifted * bt;
  return 0.5 * (g + g.adjoint());
}

}  // namespace detail

// Lower bound on ‖T‖◇ by ascent over pure inputs ψ ∈ C^{N·N}; converges to
// the norm for Hermitian-preserving maps at desk scale. Deterministic for a
// fixed seed.
inline double bruteforce_diamond(const StinespringPair& p, const BruteForceConfig& cfg = {}) {
  cfg.validate();
  const Eigen::Index n = p.dim_v;
  const Eigen::Index anc = n;
  const Eigen::Index dim = n * anc;
  double best = 0.0;

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::mt19937_64 rng(cfg.seed + 1000003ULL * (unsigned long long)(restart));
    std::normal_distribution<double> gauss(0.0, 1.0);
    CVector psi(dim);
    for (Eigen::Index i = 0; i < dim; ++i) psi(i) = Complex(gauss(rng), gauss(rng));
    psi.normalize();

    double value = trace_norm(detail::apply_extended(p, psi, anc));
    double step = 0.5;
    for (int it = 0; it < cfg.ascent_steps; ++it) {
      const CMatrix w = detail::apply_extended(p, psi, anc);
      const CMatrix z = detail::trace_norm_sign(w);
      const CMatrix form = detail::ascent_form(p, z, anc);
      CVector grad = 2.0 * (form * psi);
      // Project onto the tangent space of the sphere (real inner product).
      const double overlap = (psi.adjoint() * grad).value().real();
      grad -= overlap * psi;
      const double gnorm = grad.norm();
      if (gnorm * 2.0 < cfg.tol) break;

      bool improved = false;
      for (int back = 0; back < 30; ++back) {
        CVector trial = (psi + step * grad).normalized();
        const double tval = trace_norm(detail::apply_extended(p, trial, anc));
        if (tval > value + 1e-15) {
          psi = std::move(trial);
          value = tval;
          step *= 1.5;
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved) {
        // Aggressive exact step on the current linearization.
        const EigenDecomposition d = eig_hermitian(HermitianMatrix::symmetrized(form));
        CVector trial = d.eigenvectors.col(0);
        const double tval = trace_norm(detail::apply_extended(p, trial, anc));
        if (tval > value + cfg.tol) {
          psi = std::move(trial);
          value = tval;
        } else {
          break;
        }
      }
    }
    best = std::max(best, value);
  }
  return best;
}

// Exact diamond norm of the difference of two unitary channels:
// 2√(1−d²) with d the distance from the origin to the convex hull of the
// eigenvalues of U†V.
inline double unitary_diamond(const CMatrix& u, const CMatrix& v) {
  if (!is_unitary(u) || !is_unitary(v) || u.rows() != v.rows()) {
    throw std::invalid_argument("unitary_diamond: inputs must be unitaries of equal dimension");
  }
  Eigen::ComplexEigenSolver<CMatrix> solver(u.adjoint() * v);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("unitary_diamond: eigensolver failed");
  }
  std::vector<std::pair<double, double>> pts;
  pts.reserve(size_t(solver.eigenvalues().size()));
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    pts.emplace_back(solver.eigenvalues()(i).real(), solver.eigenvalues()(i).imag());
  }

  // Distance from the origin to the convex hull of the eigenvalue points.
  // The origin lies in the hull iff the points do not fit in an open
  // half-plane through the origin, i.e. iff the largest angular gap between
  // consecutive points is at most π. Otherwise the nearest hull point lies
  // on a vertex or an edge, both covered by the pairwise segment scan.
  const auto seg_dist = [](std::pair<double, double> a, std::pair<double, double> b) {
    const double dx = b.first - a.first, dy = b.second - a.second;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(-(a.first * dx + a.second * dy) / len2, 0.0, 1.0);
    const double px = a.first + t * dx, py = a.second + t * dy;
    return std::sqrt(px * px + py * py);
  };
  bool origin_inside = false;
  std::vector<double> angles;
  angles.reserve(pts.size());
  for (const auto& a : pts) {
    if (std::hypot(a.first, a.second) < 1e-13) {
      origin_inside = true;  // the origin is itself a hull point
      break;
    }
    angles.push_back(std::atan2(a.second, a.first));
  }
  if (!origin_inside) {
    std::sort(angles.begin(), angles.end());
    double max_gap = angles.front() + 2.0 * M_PI - angles.back();
    for (size_t i = 1; i < angles.size(); ++i) {
      max_gap = std::max(max_gap, angles[i] - angles[i - 1]);
    }
    origin_inside = max_gap <= M_PI + 1e-12;
  }
  double d = 0.0;
  if (!origin_inside) {
    d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i; j < pts.size(); ++j) d = std::min(d, seg_dist(pts[i], pts[j]));
  }
  d = std::min(d, 1.0);
  return 2.0 * std::sqrt(std::max(0.0, 1.0 - d * d));
}

// Lower bound on max √F(T₁(ρ), T₂(ξ)) by alternating ascent in Pauli
// coordinates: each block takes the better of a projected gradient step and
// a line-searched step toward the top eigenvector of the state-space
// gradient. Joint concavity of √F makes the linearization gap
//   λ_max(D_x) − Tr(D_x Φ(x)) + λ_max(D_y) − Tr(D_y Φ(y))
// an upper bound on the remaining suboptimality, which drives the stop.
inline double fidelity_seesaw(const DerivedPair& d, const BruteForceConfig& cfg = {}) {
  cfg.validate();
  const Eigen::Index n = d.dim_v;
  const Eigen::Index coords = n * n - 1;
  const StinespringPair pair(n, d.dim_a, d.b, d.c);
  const Objective obj(pair);
  const double delta = 1e-12 * (1.0 + obj.norm_t1() + obj.norm_t2());

  // Exact metric projection onto K⁽¹⁾: eigenvalues onto the probability
  // simplex, then re-encode.
  const auto project = [&](const RealVector& x) {
    const EigenDecomposition e = eig_hermitian(decode(n, x));
    RealVector lam = e.eigenvalues;
    std::vector<double> sorted(lam.data(), lam.data() + lam.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (size_t k = 0; k < sorted.size(); ++k) {
      cumulative += sorted[k];
      const double candidate = (cumulative - 1.0) / double(k + 1);
      if (k + 1 == sorted.size() || sorted[k + 1] <= candidate) {
        theta = candidate;
        break;
      }
    }
    RealVector clipped = (lam.array() - theta).cwiseMax(0.0);
    const CMatrix m = e.eigenvectors * clipped.asDiagonal() * e.eigenvectors.adjoint();
    return encode(HermitianMatrix::symmetrized(m)).x;
  };

  // Concave 1-D maximization of √F along a feasible segment.
  const auto line_search = [&](const RealVector& from, const RealVector& vertex,
                               const auto& eval) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (eval(RealVector((1.0 - m1) * from + m1 * vertex)) <
          eval(RealVector((1.0 - m2) * from + m2 * vertex))) {
        lo = m1;
      } else {
        hi = m2;
      }
    }
    return RealVector((1.0 - 0.5 * (lo + hi)) * from + 0.5 * (lo + hi) * vertex);
  };

  double best = 0.0;
  const int restarts = std::max(2, cfg.restarts / 8);
  for (int restart = 0; restart < restarts; ++restart) {
    std::mt19937_64 rng(cfg.seed + 7919ULL * (unsigned long long)(restart));
    std::normal_distribution<double> gauss(0.0, 1.0);
    RealVector x = RealVector::Zero(coords);
    RealVector y = RealVector::Zero(coords);
    if (restart > 0) {
      for (Eigen::Index i = 0; i < coords; ++i) {
        x(i) = 0.3 * gauss(rng);
        y(i) = 0.3 * gauss(rng);
      }
      x = project(x);
      y = project(y);
    }

    double value = -g_exact(obj, x, y);
    double step = 1.0;
    int stall = 0;
    for (int it = 0; it < cfg.ascent_steps && stall < 10; ++it) {
      const auto [dx, dy] = sqrtf_state_gradients(obj, x, y, delta);
      const bool x_block = (it % 2 == 0);
      const HermitianMatrix& dmat = x_block ? dx : dy;
      const RealVector& cur = x_block ? x : y;
      const auto eval = [&](const RealVector& candidate) {
        return x_block ? -g_exact(obj, candidate, y) : -g_exact(obj, x, candidate);
      };

      // Joint linearization gap bounds the remaining suboptimality.
      const EigenDecomposition de = eig_hermitian(dmat);
      const HermitianMatrix& omat = x_block ? dy : dx;
      const EigenDecomposition oe = eig_hermitian(omat);
      const double gap =
          de.eigenvalues(0) - (dmat.matrix() * decode(n, cur).matrix()).trace().real() +
          oe.eigenvalues(0) -
          (omat.matrix() * decode(n, x_block ? y : x).matrix()).trace().real();
      if (gap <= std::max(cfg.tol, 1e-9) * (1.0 + std::abs(value))) break;

      // Projected gradient trial; fall back to a line-searched move toward
      // the top eigenvector of the linearization when it stalls.
      double next_val = value;
      RealVector next = cur;
      {
        RealVector grad(coords);
        const double inv_n = 1.0 / double(n);
        const PauliBasis& basis = PauliBasis::for_dim(n);
        for (Eigen::Index i = 1; i < basis.size(); ++i) {
          grad(i - 1) = inv_n * (dmat.matrix() * basis.op(i)).trace().real();
        }
        for (int back = 0; back < 15 && step > 1e-14; ++back) {
          RealVector trial = project(cur + step * grad);
          const double tval = eval(trial);
          if (tval > value + 1e-15) {
            next = std::move(trial);
            next_val = tval;
            step *= 1.4;
            break;
          }
          step *= 0.5;
        }
      }
      {
        const CVector top = de.eigenvectors.col(0);
        const RealVector vertex =
            encode(HermitianMatrix::symmetrized(top * top.adjoint())).x;
        const RealVector fw_candidate = line_search(cur, vertex, eval);
        const double fw_val = eval(fw_candidate);
        if (fw_val > next_val) {
          next = fw_candidate;
          next_val = fw_val;
        }
      }
      if (next_val > value) {
        (x_block ? x : y) = next;
        value = next_val;
        stall = 0;
      } else {
        ++stall;
      }
    }
    best = std::max(best, value);
  }
  return best;
}

}  // namespace dnorm
