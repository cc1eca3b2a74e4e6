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

#include "perfpriv/lp.hpp"

#include <Eigen/LU>
#include <limits>
#include <numeric>

#include "perfpriv/errors.hpp"

namespace perfpriv {

namespace {
constexpr int kMaxIterations = 100000;
}

SimplexSolver::SimplexSolver(StandardLP lp) : lp_(std::move(lp)) {
  const Eigen::Index n = lp_.eq_matrix.rows();
  const Eigen::Index k = lp_.eq_matrix.cols();
  if (k == 0 || n == 0) {
    throw ContractViolationError("SimplexSolver: empty program");
  }
  if (lp_.cost.size() != k || lp_.eq_rhs.size() != n) {
    throw ContractViolationError("SimplexSolver: inconsistent dimensions");
  }
  if (!lp_.cost.allFinite() || !lp_.eq_matrix.allFinite() || !lp_.eq_rhs.allFinite()) {
    throw ContractViolationError("SimplexSolver: non-finite data");
  }

  flip_ = Vector::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lp_.eq_rhs(i) < 0.0) flip_(i) = -1.0;
  }
  columns_ = Matrix(n, k + n);
  columns_.leftCols(k) = flip_.asDiagonal() * lp_.eq_matrix;
  columns_.rightCols(n) = Matrix::Identity(n, n);
  rhs_ = flip_.cwiseProduct(lp_.eq_rhs);

  basis_.resize(n);
  std::iota(basis_.begin(), basis_.end(), static_cast<int>(k));
}

// Runs Bland-rule simplex iterations for the given cost vector until no
// entering column remains or a descent ray is found.
SimplexSolver::PhaseResult SimplexSolver::run_phase(const Vector& costs,
                                                    bool allow_artificial_entering) {
  const Eigen::Index n = rhs_.size();
  const Eigen::Index total = columns_.cols();
  const Eigen::Index k = total - n;

  while (true) {
    if (++iterations_ > kMaxIterations) {
      throw NumericalError("SimplexSolver: iteration cap exceeded");
    }

    Matrix basis_matrix(n, n);
    Vector basis_costs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      basis_matrix.col(i) = columns_.col(basis_[i]);
      basis_costs(i) = costs(basis_[i]);
    }
    Eigen::FullPivLU<Matrix> lu(basis_matrix);
    if (!lu.isInvertible()) {
      throw NumericalError("SimplexSolver: singular basis matrix");
    }
    basic_values_ = lu.solve(rhs_);
    dual_ = Eigen::FullPivLU<Matrix>(basis_matrix.transpose()).solve(basis_costs);

    std::vector<char> in_basis(total, 0);
    for (int idx : basis_) in_basis[idx] = 1;

    // Bland: smallest-index column with a negative reduced cost enters.
    int entering = -1;
    for (Eigen::Index j = 0; j < total; ++j) {
      if (in_basis[j]) continue;
      if (!allow_artificial_entering && j >= k) continue;
      const double reduced = costs(j) - dual_.dot(columns_.col(j));
      if (reduced < -kPivotTol) {
        entering = static_cast<int>(j);
        break;
      }
    }
    if (entering < 0) return PhaseResult::kConverged;

    const Vector direction = lu.solve(columns_.col(entering));
    double best_ratio = std::numeric_limits<double>::infinity();
    int leaving_pos = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (direction(i) <= kPivotTol) continue;
      const double ratio = std::max(basic_values_(i), 0.0) / direction(i);
      // Ties broken on the smaller basis-variable index (Bland).
      if (ratio < best_ratio - 1e-15 ||
          (ratio <= best_ratio + 1e-15 &&
           (leaving_pos < 0 || basis_[i] < basis_[leaving_pos]))) {
        best_ratio = ratio;
        leaving_pos = static_cast<int>(i);
      }
    }
    if (leaving_pos < 0) return PhaseResult::kUnbounded;
    basis_[leaving_pos] = entering;
  }
}

LpSolution SimplexSolver::solve() {
  const Eigen::Index n = rhs_.size();
  const Eigen::Index k = lp_.cost.size();

  // Phase 1: drive the artificial variables to zero.
  Vector phase1_costs = Vector::Zero(k + n);
  phase1_costs.tail(n).setOnes();
  if (run_phase(phase1_costs, /*allow_artificial_entering=*/true) ==
      PhaseResult::kUnbounded) {
    // The phase-1 objective is bounded below by zero.
    throw NumericalError("SimplexSolver: descent ray in the feasibility phase");
  }

  double artificial_mass = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (basis_[i] >= k) artificial_mass += std::max(basic_values_(i), 0.0);
  }
  LpSolution out;
  out.iterations = iterations_;
  if (artificial_mass > kFeasTol) {
    out.status = LpStatus::kInfeasible;
    return out;
  }

  // Phase 2: optimize the real objective. Artificial columns stay in the
  // tableau (they may linger in the basis at level zero for redundant
  // rows) but are never allowed to enter.
  Vector phase2_costs = Vector::Zero(k + n);
  phase2_costs.head(k) = lp_.cost;
  const PhaseResult phase2 = run_phase(phase2_costs, /*allow_artificial_entering=*/false);
  out.iterations = iterations_;
  if (phase2 == PhaseResult::kUnbounded) {
    out.status = LpStatus::kUnbounded;
    return out;
  }

  Vector weights = Vector::Zero(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (basis_[i] < k) {
      if (basic_values_(i) < -kFeasTol) {
        throw NumericalError("SimplexSolver: negative basic variable at optimum");
      }
      weights(basis_[i]) = std::max(basic_values_(i), 0.0);
    }
  }

  const double residual = (lp_.eq_matrix * weights - lp_.eq_rhs).cwiseAbs().maxCoeff();
  if (residual > kFeasTol) {
    throw NumericalError("SimplexSolver: constraint residual " + std::to_string(residual));
  }

  out.weights = std::move(weights);
  out.objective = lp_.cost.dot(out.weights);
  out.status = LpStatus::kOptimal;
  out.dual = flip_.cwiseProduct(dual_);
  return out;
}

LpSolution solve(const StandardLP& lp) { return SimplexSolver(lp).solve(); }

}  // namespace perfpriv
