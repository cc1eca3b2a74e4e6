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

#ifndef PERFPRIV_CORRELATION_HPP_
#define PERFPRIV_CORRELATION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "perfpriv/privacy.hpp"
#include "perfpriv/probability.hpp"

namespace perfpriv {

// Spectrum of the correlation matrix Q = P_X^{-1/2} P_{XY} P_Y^{-1/2}.
// Its top singular value is always 1; the second one is the maximal
// correlation. The stationary values are the limits of the divergence
// ratio D(q_X||p_X)/D(q_Y||p_Y) as q_Y approaches p_Y along the listed
// directions, which are constrained to the simplex tangent space.
struct SpectralReport {
  Matrix q_matrix;
  Vector singular_values;  // nonincreasing
  double rho_m = 0.0;      // maximal correlation
  Vector stationary_values;       // |Y|-1 values, nonincreasing; largest is rho_m^2
  std::vector<Vector> directions; // approach direction per stationary value
};

SpectralReport spectral_report(const JointPMF& joint);

// D(q_Y||p_Y) / D(q_X||p_X) with q_X induced through the channel.
// +infinity when q_X collapses onto p_X while q_Y does not; evaluation
// near p_Y switches to the second-order expansion of both divergences.
// Throws for q_Y = p_Y, where the ratio is undefined.
double kl_ratio(const ProbVector& q_y, const JointPMF& joint);

struct OptimizerOptions {
  std::uint64_t seed = 0xC0FFEE;
  int random_starts = 64;
  int max_iterations = 300;
  // Optional dense pre-scan spacing for alphabets of size <= 3; 0 turns
  // the scan off.
  double grid_step = 0.0;
};

struct StartRecord {
  std::string kind;  // "limit", "corner", "midpoint", "random", "grid"
  double value = 0.0;
  int iterations = 0;
};

// Supremum of kl_ratio over the simplex. Infinite exactly when a
// perfectly private release exists; otherwise a multi-start projected
// gradient search reports the best certified value, never less than the
// central limit 1/min-stationary-value.
struct VStarResult {
  double value = 0.0;
  std::optional<Vector> argmax;
  std::vector<StartRecord> trace;
};

VStarResult v_star(const JointPMF& joint, const OptimizerOptions& opt_opts = {},
                   const AnalysisOptions& opts = {});

// Supremum of D(q_Y||p_{Y|u'}) / D(q_X||p_X) over distributions q_Y
// supported inside the extreme point's support. Zero for corner points.
struct PsiResult {
  double value = 0.0;
  ProbVector argmax_q;
  std::vector<StartRecord> trace;
};

PsiResult psi(const JointPMF& joint, const ProbVector& extreme_pt,
              const OptimizerOptions& opt_opts = {}, const AnalysisOptions& opts = {});

// Slope of the utility-privacy trade-off at vanishing leakage. Exact
// (equal to V*) when no perfectly private release exists; otherwise a
// lower bound combining the per-atom ratio suprema with an entropy term.
struct SlopeReport {
  bool exact = false;
  double v_star_value = 0.0;  // +inf when a perfectly private release exists
  std::vector<double> psi_values;
  std::vector<ProbVector> psi_argmax;
  double l_value = 0.0;
  double entropy_term = 0.0;
  double lower_bound = 0.0;
  std::vector<StartRecord> trace;
};

SlopeReport slope_lower_bound(const JointPMF& joint, const OptimizerOptions& opt_opts = {},
                              const AnalysisOptions& opts = {});

// Binary source through a binary symmetric channel: closed-form maximal
// correlation, the exact trade-off slope 1/rho_m^2, and the binary-
// entropy chain bound it refutes.
struct BscAnalysis {
  double p_x = 0.0;   // effective source bias (reflected into (0, 1/2])
  double alpha = 0.0; // effective crossover (reflected into (0, 1/2])
  double p_y = 0.0;
  bool reflected = false;
  double rho_m_sq = 0.0;
  double slope_upper = 0.0;   // chain-rule bound on the slope
  double slope_actual = 0.0;  // 1 / rho_m^2
  bool bound_violated = false;
};

BscAnalysis bsc_analysis(double p_x, double alpha);

}  // namespace perfpriv

#endif  // PERFPRIV_CORRELATION_HPP_
