// Copyright 2026 The perfpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "perfpriv/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "perfpriv/errors.hpp"

namespace perfpriv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvLn2 = 1.4426950408889634;  // 1/ln 2

// Generator for the multi-start search. std:: distributions are
// implementation-defined; report bytes must not depend on the toolchain.
struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Euclidean projection onto the probability simplex.
Vector project_simplex(const Vector& v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumulative += u[i];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[i] - candidate > 0.0) theta = candidate;
  }
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = std::max(v(i) - theta, 0.0);
  const double total = out.sum();
  if (total > 0.0) out /= total;  // absorb roundoff
  return out;
}

// Maximization of D(q || p_ref) / D(M q || p_x) over the simplex in the
// (restricted) coordinates of p_ref. p_ref and p_x are strictly positive.
struct RatioProblem {
  Vector p_ref;
  Matrix m;
  Vector p_x;

  // Second-order data at p_ref: substituting u = diag(1/sqrt(p_ref)) eps
  // turns the divergence ratio limit into a Rayleigh quotient of
  // r_tilde = Q~^T Q~ restricted to the tangent space of the simplex.
  Matrix complement;   // tangent-space basis, orthogonal to sqrt(p_ref)
  Vector proj_eigs;    // eigenvalues of the restricted quotient, nonincreasing
  Matrix proj_vecs;
  double limit_value = 0.0;  // sup of the ratio as q -> p_ref
  Vector limit_dir;          // approach direction achieving it

  RatioProblem(Vector ref, Matrix channel_cols, Vector px)
      : p_ref(std::move(ref)), m(std::move(channel_cols)), p_x(std::move(px)) {
    const Vector sqrt_ref = p_ref.cwiseSqrt();
    const Matrix q_tilde =
        p_x.cwiseSqrt().cwiseInverse().asDiagonal() * m * sqrt_ref.asDiagonal();
    const Matrix r_tilde = q_tilde.transpose() * q_tilde;
    complement = orthonormal_complement(sqrt_ref);
    if (complement.cols() == 0) {
      limit_value = 0.0;
      limit_dir = Vector::Zero(p_ref.size());
      return;
    }
    const SymmetricEigenResult eig =
        symmetric_eigen(complement.transpose() * r_tilde * complement);
    proj_eigs = eig.eigenvalues;
    proj_vecs = eig.eigenvectors;
    const double lambda_min = proj_eigs(proj_eigs.size() - 1);
    limit_value = lambda_min > 1e-15 ? 1.0 / lambda_min : kInf;
    limit_dir = sqrt_ref.asDiagonal() * (complement * proj_vecs.col(proj_vecs.cols() - 1));
  }

  Eigen::Index dim() const { return p_ref.size(); }

  double quadratic(const Vector& eps) const {
    const double num = (eps.array().square() / p_ref.array()).sum();
    const Vector push = m * eps;
    const double den = (push.array().square() / p_x.array()).sum();
    if (den <= num * 1e-18) return kInf;
    return num / den;
  }

  double evaluate(const Vector& q) const {
    const Vector eps = q - p_ref;
    const double dist = eps.norm();
    if (dist < 1e-12) return limit_value;
    if (dist < 1e-6) return quadratic(eps);
    double num = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      if (q(i) > 0.0) num += q(i) * std::log2(q(i) / p_ref(i));
    }
    const Vector qx = m * q;
    double den = 0.0;
    for (Eigen::Index j = 0; j < qx.size(); ++j) {
      if (qx(j) > 0.0) den += qx(j) * std::log2(qx(j) / p_x(j));
    }
    if (den < 1e-12) {
      return (num > 1e-9) ? kInf : quadratic(eps);
    }
    return std::max(num, 0.0) / den;
  }

  Vector gradient(const Vector& q) const {
    const Vector eps = q - p_ref;
    if (eps.norm() < 1e-6) {
      const Vector d1 = eps.cwiseQuotient(p_ref);
      const double num = eps.dot(d1);
      const Vector push = m * eps;
      const Vector d2 = m.transpose() * push.cwiseQuotient(p_x);
      const double den = push.dot(push.cwiseQuotient(p_x));
      if (den <= 0.0) return Vector::Zero(q.size());
      return (2.0 * d1 * den - num * 2.0 * d2) / (den * den);
    }
    double num = 0.0;
    Vector dnum(q.size());
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      const double qi = std::max(q(i), 1e-18);
      dnum(i) = std::log2(qi / p_ref(i)) + kInvLn2;
      if (q(i) > 0.0) num += q(i) * std::log2(q(i) / p_ref(i));
    }
    const Vector qx = m * q;
    double den = 0.0;
    Vector inner(qx.size());
    for (Eigen::Index j = 0; j < qx.size(); ++j) {
      const double qj = std::max(qx(j), 1e-18);
      inner(j) = std::log2(qj / p_x(j)) + kInvLn2;
      if (qx(j) > 0.0) den += qx(j) * std::log2(qx(j) / p_x(j));
    }
    if (den <= 0.0) return Vector::Zero(q.size());
    const Vector dden = m.transpose() * inner;
    return (dnum * den - num * dden) / (den * den);
  }
};

struct PolishOutcome {
  double value = 0.0;
  Vector argmax;
  int iterations = 0;
};

PolishOutcome polish(const RatioProblem& problem, Vector start, int max_iterations) {
  Vector q = project_simplex(start);
  double f = problem.evaluate(q);
  int it = 0;
  for (; it < max_iterations; ++it) {
    if (std::isinf(f)) break;
    Vector g = problem.gradient(q);
    g.array() -= g.mean();  // stay in the simplex tangent space
    const double gnorm = g.norm();
    if (gnorm < 1e-14) break;
    g /= gnorm;

    bool improved = false;
    for (double step = 0.5; step > 1e-13; step *= 0.5) {
      const Vector qn = project_simplex(q + step * g);
      const double fn = problem.evaluate(qn);
      if (fn > f + 1e-15) {
        q = qn;
        f = fn;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return PolishOutcome{f, q, it};
}

struct SearchOutcome {
  double value = 0.0;
  Vector argmax;
  std::vector<StartRecord> trace;
};

SearchOutcome maximize_ratio(const RatioProblem& problem, const OptimizerOptions& opts) {
  const Eigen::Index s = problem.dim();
  SearchOutcome out;
  // The central limit is a certified lower bound on the supremum; seed
  // the incumbent with it so the reported value can never fall below.
  out.value = problem.limit_value;
  out.argmax = project_simplex(problem.p_ref + 1e-7 * problem.limit_dir);
  out.trace.push_back(StartRecord{"limit", problem.limit_value, 0});

  auto run_start = [&](const char* kind, const Vector& start) {
    const PolishOutcome res = polish(problem, start, opts.max_iterations);
    out.trace.push_back(StartRecord{kind, res.value, res.iterations});
    if (res.value > out.value) {
      out.value = res.value;
      out.argmax = res.argmax;
    }
  };

  for (Eigen::Index i = 0; i < s; ++i) {
    Vector corner = Vector::Zero(s);
    corner(i) = 1.0;
    run_start("corner", corner);
  }
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = i + 1; j < s; ++j) {
      Vector mid = Vector::Zero(s);
      mid(i) = 0.5;
      mid(j) = 0.5;
      run_start("midpoint", mid);
    }
  }
  SplitMix64 rng{opts.seed};
  for (int r = 0; r < opts.random_starts; ++r) {
    Vector q(s);
    for (Eigen::Index i = 0; i < s; ++i) {
      q(i) = -std::log(std::max(rng.uniform(), 1e-300));
    }
    q /= q.sum();
    run_start("random", q);
  }
  if (opts.grid_step > 0.0 && s <= 3) {
    // Dense scan, then one polish from the best lattice point.
    const int steps = std::max(1, static_cast<int>(std::llround(1.0 / opts.grid_step)));
    Vector best_grid;
    double best_val = -kInf;
    auto consider = [&](const Vector& q) {
      const double v = problem.evaluate(q);
      if (v > best_val) {
        best_val = v;
        best_grid = q;
      }
    };
    if (s == 2) {
      for (int a = 0; a <= steps; ++a) {
        Vector q(2);
        q << static_cast<double>(a) / steps, 1.0 - static_cast<double>(a) / steps;
        consider(q);
      }
    } else if (s == 3) {
      for (int a = 0; a <= steps; ++a) {
        for (int b = 0; b <= steps - a; ++b) {
          Vector q(3);
          q << static_cast<double>(a) / steps, static_cast<double>(b) / steps,
              static_cast<double>(steps - a - b) / steps;
          consider(q);
        }
      }
    }
    if (best_grid.size() > 0) run_start("grid", best_grid);
  }
  return out;
}

}  // namespace

SpectralReport spectral_report(const JointPMF& joint) {
  const Marginals m = marginals(joint);
  SpectralReport report;
  report.q_matrix = m.p_x.vec().cwiseSqrt().cwiseInverse().asDiagonal() * joint.table() *
                    m.p_y.vec().cwiseSqrt().cwiseInverse().asDiagonal();
  const SvdResult dec = svd(report.q_matrix);
  report.singular_values = dec.singular_values;
  report.rho_m =
      dec.singular_values.size() >= 2 ? std::min(dec.singular_values(1), 1.0) : 0.0;

  const Vector c = m.p_y.vec().cwiseSqrt();
  const Matrix r = report.q_matrix.transpose() * report.q_matrix;
  const Matrix w = orthonormal_complement(c);
  if (w.cols() == 0) {
    report.stationary_values = Vector(0);
    return report;
  }
  const SymmetricEigenResult eig = symmetric_eigen(w.transpose() * r * w);
  report.stationary_values = eig.eigenvalues;
  report.directions.reserve(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    report.directions.push_back(c.asDiagonal() * (w * eig.eigenvectors.col(i)));
  }
  return report;
}

double kl_ratio(const ProbVector& q_y, const JointPMF& joint) {
  if (q_y.size() != joint.y_size()) {
    throw ContractViolationError("kl_ratio: q_y length does not match the joint");
  }
  const Marginals m = marginals(joint);
  if ((q_y.vec() - m.p_y.vec()).cwiseAbs().maxCoeff() <= 1e-12) {
    throw InvalidInputError("kl_ratio: undefined at q_Y = p_Y");
  }
  const RatioProblem problem(m.p_y.vec(), conditional_channel(joint).matrix(), m.p_x.vec());
  return problem.evaluate(q_y.vec());
}

VStarResult v_star(const JointPMF& joint, const OptimizerOptions& opt_opts,
                   const AnalysisOptions& opts) {
  if (joint.y_size() < 2) {
    throw InvalidInputError("v_star: needs at least two Y symbols");
  }
  const Marginals m = marginals(joint);
  const Channel channel = conditional_channel(joint);
  if (perfect_privacy_feasible(channel, opts.rank_tol)) {
    // Some q_Y != p_Y maps onto p_X, so the ratio is unbounded; no
    // finite search is run.
    return VStarResult{kInf, std::nullopt, {}};
  }
  const RatioProblem problem(m.p_y.vec(), channel.matrix(), m.p_x.vec());
  SearchOutcome res = maximize_ratio(problem, opt_opts);
  return VStarResult{res.value, std::move(res.argmax), std::move(res.trace)};
}

PsiResult psi(const JointPMF& joint, const ProbVector& extreme_pt,
              const OptimizerOptions& opt_opts, const AnalysisOptions& opts) {
  if (extreme_pt.size() != joint.y_size()) {
    throw ContractViolationError("psi: extreme point length does not match the joint");
  }
  const Marginals m = marginals(joint);
  const Channel channel = conditional_channel(joint);
  const PrivacyPolytope poly = build_polytope(channel, m.p_y, opts.rank_tol, opts.max_y);

  const Vector residual = poly.a_matrix * extreme_pt.vec() - poly.b;
  if (residual.cwiseAbs().maxCoeff() > 1e-8) {
    throw ContractViolationError("psi: point does not satisfy the polytope constraints");
  }
  std::vector<int> support;
  for (Eigen::Index i = 0; i < extreme_pt.size(); ++i) {
    if (extreme_pt[i] > 1e-9) support.push_back(static_cast<int>(i));
  }
  if (static_cast<int>(support.size()) > poly.rank) {
    throw ContractViolationError("psi: point is not a basic solution of the polytope");
  }
  if (support.size() <= 1) {
    // A corner admits no distribution at finite divergence other than
    // itself.
    return PsiResult{0.0, extreme_pt, {}};
  }

  Vector ref(support.size());
  Matrix cols(joint.x_size(), support.size());
  for (std::size_t i = 0; i < support.size(); ++i) {
    ref(i) = extreme_pt[support[i]];
    cols.col(i) = channel.matrix().col(support[i]);
  }
  ref /= ref.sum();  // absorb the clamped zeros

  const RatioProblem problem(ref, cols, m.p_x.vec());
  SearchOutcome res = maximize_ratio(problem, opt_opts);

  Vector full = Vector::Zero(joint.y_size());
  for (std::size_t i = 0; i < support.size(); ++i) full(support[i]) = res.argmax(i);
  return PsiResult{res.value, ProbVector(full), std::move(res.trace)};
}

SlopeReport slope_lower_bound(const JointPMF& joint, const OptimizerOptions& opt_opts,
                              const AnalysisOptions& opts) {
  SlopeReport report;
  const Marginals m = marginals(joint);
  const Channel channel = conditional_channel(joint);

  if (!perfect_privacy_feasible(channel, opts.rank_tol)) {
    // Slope at zero utility: exactly the divergence-ratio supremum.
    VStarResult vs = v_star(joint, opt_opts, opts);
    report.exact = true;
    report.v_star_value = vs.value;
    report.lower_bound = vs.value;
    report.trace = std::move(vs.trace);
    return report;
  }

  const double mi = mutual_information(joint);
  if (mi < 1e-12) {
    throw InvalidInputError("slope_lower_bound: X and Y are independent, slope is degenerate");
  }

  const G0Result g = g0(joint, opts);
  report.v_star_value = kInf;
  for (const ProbVector& atom : g.mechanism.conditionals) {
    PsiResult p = psi(joint, atom, opt_opts, opts);
    report.psi_values.push_back(p.value);
    report.psi_argmax.push_back(p.argmax_q);
    report.trace.insert(report.trace.end(), p.trace.begin(), p.trace.end());
  }
  report.l_value = *std::max_element(report.psi_values.begin(), report.psi_values.end());
  report.entropy_term = (entropy(m.p_y) - g.g0_bits) / mi;
  report.lower_bound = std::max(report.l_value, report.entropy_term);
  return report;
}

BscAnalysis bsc_analysis(double p_x, double alpha) {
  if (!(p_x > 0.0 && p_x < 1.0)) {
    throw InvalidInputError("bsc_analysis: p_x must lie in (0, 1)");
  }
  if (!(alpha > 0.0 && alpha <= 0.5)) {
    if (alpha < 1.0) {
      alpha = 1.0 - alpha;  // relabeled output channel
    } else {
      throw InvalidInputError("bsc_analysis: alpha must lie in (0, 1)");
    }
  }
  BscAnalysis out;
  out.reflected = p_x > 0.5;
  out.p_x = out.reflected ? 1.0 - p_x : p_x;
  out.alpha = alpha;
  out.p_y = out.p_x * (1.0 - alpha) + alpha * (1.0 - out.p_x);

  const double px = out.p_x;
  const double py = out.p_y;
  out.rho_m_sq =
      (alpha * alpha + (1.0 - 2.0 * alpha) * (px + py - 2.0 * px * py)) / (py * (1.0 - py)) -
      1.0;
  if (out.rho_m_sq < 0.0) out.rho_m_sq = 0.0;

  Matrix table(2, 2);
  table << px * (1.0 - alpha), px * alpha, (1.0 - px) * alpha, (1.0 - px) * (1.0 - alpha);
  const SpectralReport spectral = spectral_report(JointPMF(table));
  if (std::abs(out.rho_m_sq - spectral.rho_m * spectral.rho_m) > 1e-9) {
    throw NumericalError("bsc_analysis: closed form and spectrum disagree on rho_m^2");
  }

  out.slope_actual = out.rho_m_sq > 1e-15 ? 1.0 / out.rho_m_sq : kInf;
  if (std::abs(px - 0.5) < 1e-12) {
    // log((1-p_y)/p_y) / log((1-p_x)/p_x) -> (1 - 2 alpha) as p_x -> 1/2.
    out.slope_upper = (1.0 - 2.0 * alpha) * (1.0 - 2.0 * alpha);
  } else {
    out.slope_upper =
        (1.0 - 2.0 * alpha) * std::log((1.0 - py) / py) / std::log((1.0 - px) / px);
  }
  out.bound_violated = out.slope_actual > out.slope_upper;
  return out;
}

}  // namespace perfpriv
