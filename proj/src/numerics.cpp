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

#include "perfpriv/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "perfpriv/errors.hpp"

namespace perfpriv {

SvdResult svd(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw ContractViolationError("svd: matrix dimensions must be positive");
  }
  if (!m.allFinite()) {
    throw ContractViolationError("svd: matrix has non-finite entries");
  }
  Eigen::JacobiSVD<Matrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("svd: decomposition did not converge");
  }
  return SvdResult{solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

int numerical_rank(const SvdResult& s, double rank_tol) {
  if (s.singular_values.size() == 0) return 0;
  const double cutoff = rank_tol * s.singular_values(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.singular_values.size(); ++i) {
    if (s.singular_values(i) > cutoff) ++rank;
  }
  return rank;
}

Matrix null_space(const Matrix& m, double rank_tol) {
  if (rank_tol <= 0) {
    throw ContractViolationError("null_space: rank_tol must be positive");
  }
  const SvdResult s = svd(m);
  const int rank = numerical_rank(s, rank_tol);
  // Trailing right singular vectors span the kernel.
  return s.right_vectors.rightCols(m.cols() - rank);
}

Matrix orthonormal_complement(const Vector& c) {
  if (c.size() == 0 || c.norm() == 0.0) {
    throw ContractViolationError("orthonormal_complement: zero vector");
  }
  Matrix row(1, c.size());
  row.row(0) = c.transpose();
  return null_space(row, kDefaultRankTol);
}

SymmetricEigenResult symmetric_eigen(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw ContractViolationError("symmetric_eigen: matrix must be square");
  }
  if (!m.allFinite()) {
    throw ContractViolationError("symmetric_eigen: non-finite entries");
  }
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9) {
    throw ContractViolationError("symmetric_eigen: matrix is not symmetric (max |M - M^T| = " +
                                 std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric_eigen: iteration did not converge");
  }
  // Eigen returns eigenvalues in increasing order; flip to nonincreasing.
  const Eigen::Index n = m.rows();
  SymmetricEigenResult out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = Matrix(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

}  // namespace perfpriv
