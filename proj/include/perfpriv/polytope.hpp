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

#ifndef PERFPRIV_POLYTOPE_HPP_
#define PERFPRIV_POLYTOPE_HPP_

#include <vector>

#include "perfpriv/probability.hpp"

namespace perfpriv {

// Channel columns closer than this in L-infinity norm count as identical.
inline constexpr double kDefaultColTol = 1e-9;

// Enumerating extreme points is combinatorial in the Y alphabet size;
// refuse above this cap unless the caller raises it explicitly.
inline constexpr int kDefaultMaxY = 20;

// The set of output distributions q on Y that leave the X marginal
// unchanged: {q >= 0 | A q = A p_Y}, where the rows of A span the row
// space of the channel (equivalently, the orthogonal complement of its
// kernel). Extreme points are the basic feasible solutions.
struct PrivacyPolytope {
  Matrix a_matrix;  // rank x |Y|, orthonormal rows
  Vector b;         // A * p_Y
  std::vector<ProbVector> extreme_points;
  std::vector<std::vector<int>> support_sets;  // chosen column set per point
  int rank = 0;      // number of constraint rows
  int null_dim = 0;  // |Y| - rank; the polytope is a single point when 0
};

PrivacyPolytope build_polytope(const Channel& channel, const ProbVector& p_y,
                               double rank_tol = kDefaultRankTol,
                               int max_y = kDefaultMaxY);

// Partition of the channel's input symbols into groups whose columns are
// identical within col_tol (transitive closure of pairwise matches).
// Only groups of size >= 2 are listed; singletons stay implicit.
struct ColumnGroups {
  std::vector<std::vector<int>> groups;  // ascending members, ordered by first member
  int duplicate_count = 0;               // total symbols covered by groups
  std::vector<int> kept_columns;         // original indices kept in the reduced channel
  Channel reduced_channel;               // one representative column per group

  int group_count() const { return static_cast<int>(groups.size()); }
};

ColumnGroups identical_column_groups(const Channel& channel, double col_tol = kDefaultColTol);

// Distributions that concentrate each duplicate group's mass on a single
// member, together with product-form mixture weights reconstructing p_y.
struct GroupConcentrations {
  std::vector<ProbVector> vectors;
  std::vector<double> weights;
};

GroupConcentrations build_s_prime(const ColumnGroups& groups, const ProbVector& p_y);

}  // namespace perfpriv

#endif  // PERFPRIV_POLYTOPE_HPP_
