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

#include "perfpriv/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "perfpriv/errors.hpp"

namespace perfpriv {

namespace {

// LP weights below this are degenerate dust, not mechanism atoms.
constexpr double kAtomTol = 1e-9;

Vector default_y_values(Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = static_cast<double>(i + 1);
  return v;
}

// The weighting LP shared by all three objectives: mix the polytope's
// extreme points back into p_y at minimum cost.
LpSolution solve_weighting(const std::vector<ProbVector>& points, const ProbVector& target,
                           const Vector& costs) {
  const Eigen::Index n = target.size();
  const Eigen::Index k = static_cast<Eigen::Index>(points.size());
  Matrix e(n, k);
  for (Eigen::Index j = 0; j < k; ++j) e.col(j) = points[j].vec();
  LpSolution sol = solve(StandardLP{costs, e, target.vec()});
  if (sol.status != LpStatus::kOptimal) {
    // p_y itself is always a convex combination of the extreme points, so
    // anything but optimal means the enumeration or solver went wrong.
    throw NumericalError("privacy LP did not reach an optimum (status " +
                         std::to_string(static_cast<int>(sol.status)) + ")");
  }
  return sol;
}

Mechanism assemble_mechanism(const std::vector<ProbVector>& points, const Vector& weights,
                             const ProbVector& marginal,
                             const std::optional<std::vector<double>>& realizations_all) {
  std::vector<int> kept;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights(i) > kAtomTol) kept.push_back(static_cast<int>(i));
  }
  if (kept.empty()) {
    throw NumericalError("mechanism assembly: no atom survived the weight cutoff");
  }

  Vector p_u(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) p_u(i) = weights(kept[i]);
  p_u /= p_u.sum();

  Mechanism mech{ProbVector(p_u), {}, Matrix(kept.size(), marginal.size()), std::nullopt};
  for (std::size_t i = 0; i < kept.size(); ++i) {
    mech.conditionals.push_back(points[kept[i]]);
    for (Eigen::Index y = 0; y < marginal.size(); ++y) {
      mech.channel_u_given_y(i, y) = p_u(i) * points[kept[i]][y] / marginal[y];
    }
  }
  if (realizations_all) {
    std::vector<double> r;
    r.reserve(kept.size());
    for (int idx : kept) r.push_back((*realizations_all)[idx]);
    mech.realizations = std::move(r);
  }
  return mech;
}

}  // namespace

bool perfect_privacy_feasible(const Channel& channel, double rank_tol) {
  return null_space(channel.matrix(), rank_tol).cols() > 0;
}

G0Result g0(const JointPMF& joint, const AnalysisOptions& opts) {
  const Marginals m = marginals(joint);
  const Channel channel = conditional_channel(joint);

  PrivacyPolytope poly = build_polytope(channel, m.p_y, opts.rank_tol, opts.max_y);
  Vector costs(poly.extreme_points.size());
  for (std::size_t i = 0; i < poly.extreme_points.size(); ++i) {
    costs(i) = entropy(poly.extreme_points[i]);
  }
  LpSolution lp = solve_weighting(poly.extreme_points, m.p_y, costs);
  Mechanism mech = assemble_mechanism(poly.extreme_points, lp.weights, m.p_y, std::nullopt);
  const double min_cond = lp.objective;
  const double value = std::max(entropy(m.p_y) - min_cond, 0.0);
  return G0Result{value, min_cond, std::move(mech), std::move(poly), std::move(lp)};
}

MmseResult mmse_perfect_privacy(const JointPMF& joint, std::optional<Vector> y_values,
                                const AnalysisOptions& opts) {
  const Marginals m = marginals(joint);
  const Channel channel = conditional_channel(joint);
  const Vector values = y_values ? *y_values : default_y_values(joint.y_size());
  if (values.size() != joint.y_size()) {
    throw ContractViolationError("mmse_perfect_privacy: y_values length mismatch");
  }

  const PrivacyPolytope poly = build_polytope(channel, m.p_y, opts.rank_tol, opts.max_y);
  Vector costs(poly.extreme_points.size());
  std::vector<double> means(poly.extreme_points.size());
  for (std::size_t i = 0; i < poly.extreme_points.size(); ++i) {
    costs(i) = variance_under(poly.extreme_points[i], values);
    means[i] = mean_under(poly.extreme_points[i], values);
  }
  const LpSolution sol = solve_weighting(poly.extreme_points, m.p_y, costs);
  return MmseResult{sol.objective, variance_under(m.p_y, values),
                    assemble_mechanism(poly.extreme_points, sol.weights, m.p_y, means)};
}

MinErrorResult min_error_perfect_privacy(const JointPMF& joint, std::optional<Vector> y_values,
                                         const AnalysisOptions& opts) {
  const Marginals m = marginals(joint);
  const Channel channel = conditional_channel(joint);
  const Vector values = y_values ? *y_values : default_y_values(joint.y_size());
  if (values.size() != joint.y_size()) {
    throw ContractViolationError("min_error_perfect_privacy: y_values length mismatch");
  }

  const PrivacyPolytope poly = build_polytope(channel, m.p_y, opts.rank_tol, opts.max_y);
  // Maximize the weighted modal masses; negate for the minimizing solver.
  Vector costs(poly.extreme_points.size());
  std::vector<double> modes(poly.extreme_points.size());
  for (std::size_t i = 0; i < poly.extreme_points.size(); ++i) {
    const Vector& p = poly.extreme_points[i].vec();
    Eigen::Index arg = 0;  // ties resolve to the smallest index
    for (Eigen::Index y = 1; y < p.size(); ++y) {
      if (p(y) > p(arg)) arg = y;
    }
    costs(i) = -p(arg);
    modes[i] = values(arg);
  }
  const LpSolution sol = solve_weighting(poly.extreme_points, m.p_y, costs);
  return MinErrorResult{std::clamp(1.0 + sol.objective, 0.0, 1.0),
                        assemble_mechanism(poly.extreme_points, sol.weights, m.p_y, modes)};
}

NonPrivateInfo non_private_information(const JointPMF& joint, double col_tol) {
  const Marginals m = marginals(joint);
  const Channel channel = conditional_channel(joint);
  ColumnGroups groups = identical_column_groups(channel, col_tol);

  // Mass of the posterior-class variable: one atom per kept column, a
  // group representative absorbing its whole group's mass.
  Vector t(groups.kept_columns.size());
  for (std::size_t i = 0; i < groups.kept_columns.size(); ++i) {
    const int col = groups.kept_columns[i];
    double mass = m.p_y[col];
    for (const std::vector<int>& g : groups.groups) {
      if (g.front() == col) {
        mass = 0.0;
        for (int member : g) mass += m.p_y[member];
        break;
      }
    }
    t(i) = mass;
  }

  NonPrivateInfo out{0.0, 0.0, ProbVector(t), std::move(groups)};
  out.c_x_bits = entropy(out.t_pmf);
  out.d_x_bits = std::max(entropy(m.p_y) - out.c_x_bits, 0.0);
  return out;
}

EqualityClass classify_non_private_equality(const JointPMF& joint, const AnalysisOptions& opts) {
  const Channel channel = conditional_channel(joint);
  if (!perfect_privacy_feasible(channel, opts.rank_tol)) {
    return EqualityClass::kNotFeasible;
  }
  const ColumnGroups groups = identical_column_groups(channel, opts.col_tol);
  const Matrix& reduced = groups.reduced_channel.matrix();
  const bool reduced_full_rank = null_space(reduced, opts.rank_tol).cols() == 0;
  return reduced_full_rank ? EqualityClass::kEquality : EqualityClass::kStrict;
}

bool feasible_general(const Channel& x_given_w, const Channel& y_given_w, double rank_tol) {
  if (x_given_w.in_size() != y_given_w.in_size()) {
    throw ContractViolationError("feasible_general: channel input sizes differ");
  }
  const Matrix kernel = null_space(x_given_w.matrix(), rank_tol);
  for (Eigen::Index j = 0; j < kernel.cols(); ++j) {
    if ((y_given_w.matrix() * kernel.col(j)).cwiseAbs().maxCoeff() > 1e-8) return true;
  }
  return false;
}

G0GeneralResult g0_general(const Joint3PMF& joint3, const AnalysisOptions& opts) {
  const ProbVector p_w = joint3.marginal_w();
  const ProbVector p_y = joint3.marginal_y();
  const Channel x_given_w = joint3.channel_x_given_w();
  const Channel y_given_w = joint3.channel_y_given_w();

  PrivacyPolytope poly = build_polytope(x_given_w, p_w, opts.rank_tol, opts.max_y);
  Vector costs(poly.extreme_points.size());
  for (std::size_t i = 0; i < poly.extreme_points.size(); ++i) {
    costs(i) = entropy(Vector(y_given_w.matrix() * poly.extreme_points[i].vec()));
  }
  LpSolution lp = solve_weighting(poly.extreme_points, p_w, costs);
  Mechanism mech = assemble_mechanism(poly.extreme_points, lp.weights, p_w, std::nullopt);
  const double min_cond = lp.objective;
  const double value = std::max(entropy(p_y) - min_cond, 0.0);
  return G0GeneralResult{value, min_cond, std::move(mech), std::move(poly), std::move(lp)};
}

namespace {

// First X row holding two positive Y cells, with those two columns.
struct PerturbationSite {
  Eigen::Index x = -1, y1 = -1, y2 = -1;
};

PerturbationSite find_site(const JointPMF& joint) {
  for (Eigen::Index x = 0; x < joint.x_size(); ++x) {
    Eigen::Index first = -1;
    for (Eigen::Index y = 0; y < joint.y_size(); ++y) {
      if (joint.table()(x, y) <= 0.0) continue;
      if (first < 0) {
        first = y;
      } else {
        return PerturbationSite{x, first, y};
      }
    }
  }
  return PerturbationSite{};
}

}  // namespace

double max_admissible_perturbation(const JointPMF& joint) {
  const PerturbationSite site = find_site(joint);
  if (site.x < 0) {
    throw InvalidInputError(
        "full_data_perturbation: Y is a deterministic function of X, no mass can be shifted");
  }
  return std::min(joint.table()(site.x, site.y1), joint.table()(site.x, site.y2));
}

Joint3PMF full_data_perturbation(const JointPMF& joint, double eps) {
  if (eps < 0.0) {
    throw InvalidInputError("full_data_perturbation: eps must be nonnegative");
  }
  const PerturbationSite site = find_site(joint);
  if (site.x < 0) {
    throw InvalidInputError(
        "full_data_perturbation: Y is a deterministic function of X, no mass can be shifted");
  }
  const double max_eps = std::min(joint.table()(site.x, site.y1), joint.table()(site.x, site.y2));
  if (eps > max_eps) {
    throw InvalidInputError("full_data_perturbation: eps " + std::to_string(eps) +
                            " exceeds the admissible maximum " + std::to_string(max_eps));
  }

  Matrix cond_u1 = joint.table();
  cond_u1(site.x, site.y1) += eps;
  cond_u1(site.x, site.y2) -= eps;
  Matrix cond_u2 = 2.0 * joint.table() - cond_u1;

  return Joint3PMF({0.5 * cond_u1, 0.5 * cond_u2});
}

double gaussian_full_data_bound(double rho) {
  if (rho == 0.0) {
    throw InvalidInputError("gaussian_full_data_bound: correlation must be nonzero");
  }
  const double a = std::abs(rho);
  if (a > 1.0) {
    throw InvalidInputError("gaussian_full_data_bound: |rho| must not exceed 1");
  }
  return -std::log2(a);
}

PrivacyReport analyze_privacy(const JointPMF& joint, const AnalysisOptions& opts) {
  const G0Result g = g0(joint, opts);
  const NonPrivateInfo npi = non_private_information(joint, opts.col_tol);

  PrivacyDiagnostics diag;
  diag.rank_tol = opts.rank_tol;
  diag.col_tol = opts.col_tol;
  diag.rank = g.polytope.rank;
  diag.null_dim = g.polytope.null_dim;
  diag.reduced_null_dim =
      static_cast<int>(null_space(npi.groups.reduced_channel.matrix(), opts.rank_tol).cols());
  diag.extreme_point_count = static_cast<int>(g.polytope.extreme_points.size());
  diag.lp_iterations = g.lp.iterations;
  diag.g0_minus_dx = g.g0_bits - npi.d_x_bits;

  return PrivacyReport{g.polytope.null_dim > 0,
                       g.g0_bits,
                       g.min_cond_entropy_bits,
                       g.mechanism,
                       npi.d_x_bits,
                       npi.c_x_bits,
                       classify_non_private_equality(joint, opts),
                       diag};
}

}  // namespace perfpriv
