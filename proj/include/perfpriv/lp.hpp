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

#ifndef PERFPRIV_LP_HPP_
#define PERFPRIV_LP_HPP_

#include "perfpriv/numerics.hpp"

namespace perfpriv {

// min cost . w  subject to  eq_matrix w = eq_rhs, w >= 0.
struct StandardLP {
  Vector cost;
  Matrix eq_matrix;
  Vector eq_rhs;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  Vector weights;
  double objective = 0.0;
  LpStatus status = LpStatus::kInfeasible;
  Vector dual;  // certifying multipliers, valid when optimal
  int iterations = 0;
};

// Two-phase dense simplex with Bland's anti-cycling pivot rule; the
// weighting programs routinely hit degenerate vertices (duplicated
// extreme points, tied entropies).
//
// One solve per instance at a time; distinct instances are independent.
class SimplexSolver {
 public:
  explicit SimplexSolver(StandardLP lp);
  LpSolution solve();

  static constexpr double kPivotTol = 1e-10;
  static constexpr double kFeasTol = 1e-8;

 private:
  enum class PhaseResult { kConverged, kUnbounded };
  PhaseResult run_phase(const Vector& costs, bool allow_artificial_entering);

  StandardLP lp_;
  Vector flip_;         // row sign flips making the rhs nonnegative
  Matrix columns_;      // flipped [E | I]
  Vector rhs_;          // flipped eq_rhs
  std::vector<int> basis_;
  Vector basic_values_;
  Vector dual_;
  int iterations_ = 0;
};

LpSolution solve(const StandardLP& lp);

}  // namespace perfpriv

#endif  // PERFPRIV_LP_HPP_
