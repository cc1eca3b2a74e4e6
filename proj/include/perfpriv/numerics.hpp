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

#ifndef PERFPRIV_NUMERICS_HPP_
#define PERFPRIV_NUMERICS_HPP_

#include <Eigen/Dense>

namespace perfpriv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Singular values at or below rank_tol * sigma_max count as zero.
inline constexpr double kDefaultRankTol = 1e-9;

struct SvdResult {
  Matrix left_vectors;     // full U, orthonormal columns
  Vector singular_values;  // nonincreasing, length min(rows, cols)
  Matrix right_vectors;    // full V, orthonormal columns
};

// Full SVD of a dense matrix. Throws NumericalError if the decomposition
// does not converge, ContractViolationError on non-finite input.
SvdResult svd(const Matrix& m);

// Number of singular values above rank_tol * sigma_max.
int numerical_rank(const SvdResult& s, double rank_tol = kDefaultRankTol);

// Orthonormal basis of {z : M z = 0} as matrix columns. May have zero
// columns when M has full column rank.
Matrix null_space(const Matrix& m, double rank_tol = kDefaultRankTol);

// Orthonormal basis of the hyperplane {x : c . x = 0} for a nonzero c.
Matrix orthonormal_complement(const Vector& c);

struct SymmetricEigenResult {
  Vector eigenvalues;   // nonincreasing
  Matrix eigenvectors;  // orthonormal columns, matching order
};

// Eigendecomposition of a symmetric matrix. Input must be symmetric
// within 1e-9, otherwise ContractViolationError.
SymmetricEigenResult symmetric_eigen(const Matrix& m);

}  // namespace perfpriv

#endif  // PERFPRIV_NUMERICS_HPP_
