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

#ifndef PERFPRIV_PRIVACY_HPP_
#define PERFPRIV_PRIVACY_HPP_

#include <optional>
#include <vector>

#include "perfpriv/lp.hpp"
#include "perfpriv/polytope.hpp"
#include "perfpriv/probability.hpp"

namespace perfpriv {

// A finite-support release variable U. Conditionals are the per-atom
// output distributions p_{Y|u}; the channel view P_{U|Y} follows from
// Bayes. Realizations carry the numeric value attached to each atom when
// the objective needs one (conditional mean or modal symbol).
struct Mechanism {
  ProbVector p_u;
  std::vector<ProbVector> conditionals;
  Matrix channel_u_given_y;  // |U| x |Y|
  std::optional<std::vector<double>> realizations;

  Eigen::Index support_size() const { return p_u.size(); }
};

struct AnalysisOptions {
  double rank_tol = kDefaultRankTol;
  double col_tol = kDefaultColTol;
  int max_y = kDefaultMaxY;
};

// A release independent of X but correlated with Y exists iff the channel
// P_{X|Y} has a nontrivial kernel.
bool perfect_privacy_feasible(const Channel& channel, double rank_tol = kDefaultRankTol);

struct G0Result {
  double g0_bits = 0.0;
  double min_cond_entropy_bits = 0.0;
  Mechanism mechanism;
  PrivacyPolytope polytope;
  LpSolution lp;
};

// Maximum I(Y;U) over releases independent of X. Phase one enumerates the
// extreme points of the privacy polytope, phase two weights them through
// a linear program with entropy costs.
G0Result g0(const JointPMF& joint, const AnalysisOptions& opts = {});

struct MmseResult {
  double mmse = 0.0;
  double var_y = 0.0;
  Mechanism mechanism;
};

// Minimum E[(Y-U)^2] over releases independent of X. Same polytope, with
// per-point conditional variances as LP costs; each surviving atom is
// placed at its conditional mean.
MmseResult mmse_perfect_privacy(const JointPMF& joint,
                                std::optional<Vector> y_values = std::nullopt,
                                const AnalysisOptions& opts = {});

struct MinErrorResult {
  double p_err = 0.0;
  Mechanism mechanism;
};

// Minimum Pr{Y != U} over releases independent of X. LP maximizes the
// weighted modal masses; each atom is placed at its modal symbol (ties
// resolved toward the smallest index).
MinErrorResult min_error_perfect_privacy(const JointPMF& joint,
                                         std::optional<Vector> y_values = std::nullopt,
                                         const AnalysisOptions& opts = {});

struct NonPrivateInfo {
  double d_x_bits = 0.0;  // information in Y carrying nothing about X
  double c_x_bits = 0.0;  // entropy of the posterior-class variable
  ProbVector t_pmf;       // pmf of the posterior-class variable
  ColumnGroups groups;
};

NonPrivateInfo non_private_information(const JointPMF& joint, double col_tol = kDefaultColTol);

// Structural trichotomy for g0 versus the non-private information:
// infeasible (both zero), equal, or strictly separated.
enum class EqualityClass { kNotFeasible, kEquality, kStrict };

EqualityClass classify_non_private_equality(const JointPMF& joint,
                                            const AnalysisOptions& opts = {});

// General observation model: the release mechanism sees W instead of Y.
// Feasibility requires a kernel direction of P_{X|W} that moves the Y
// marginal.
bool feasible_general(const Channel& x_given_w, const Channel& y_given_w,
                      double rank_tol = kDefaultRankTol);

struct G0GeneralResult {
  double value_bits = 0.0;
  double min_cond_entropy_bits = 0.0;
  Mechanism mechanism_w;  // conditionals live on the W alphabet
  PrivacyPolytope polytope;
  LpSolution lp;
};

G0GeneralResult g0_general(const Joint3PMF& joint3, const AnalysisOptions& opts = {});

// Largest eps for which full_data_perturbation keeps all masses valid.
double max_admissible_perturbation(const JointPMF& joint);

// Two-atom release built from the full data (X,Y): shifts eps of mass
// between two Y symbols inside one X row, oppositely for the two atoms.
// The result keeps (X,Y) intact, leaves X independent of U, and makes Y
// depend on U whenever eps > 0.
Joint3PMF full_data_perturbation(const JointPMF& joint, double eps);

// Closed-form utility floor for a jointly Gaussian pair when the release
// sees both coordinates: -log2 |rho|.
double gaussian_full_data_bound(double rho);

struct PrivacyDiagnostics {
  double rank_tol = 0.0;
  double col_tol = 0.0;
  int rank = 0;
  int null_dim = 0;
  int reduced_null_dim = 0;
  int extreme_point_count = 0;
  int lp_iterations = 0;
  double g0_minus_dx = 0.0;  // numerical cross-check of the classification
};

struct PrivacyReport {
  bool feasible = false;
  double g0_bits = 0.0;
  double min_cond_entropy_bits = 0.0;
  Mechanism mechanism;
  double d_x_bits = 0.0;
  double c_x_bits = 0.0;
  EqualityClass equality_class = EqualityClass::kNotFeasible;
  PrivacyDiagnostics diagnostics;
};

PrivacyReport analyze_privacy(const JointPMF& joint, const AnalysisOptions& opts = {});

}  // namespace perfpriv

#endif  // PERFPRIV_PRIVACY_HPP_
