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

#include "perfpriv/polytope.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "perfpriv/errors.hpp"

namespace perfpriv {

namespace {

// Candidate basic solutions may carry roundoff slightly below zero.
constexpr double kNegativeBand = 1e-9;
constexpr double kSingularBasisTol = 1e-10;
constexpr double kDedupTol = 1e-7;

// Visit all k-subsets of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

PrivacyPolytope build_polytope(const Channel& channel, const ProbVector& p_y,
                               double rank_tol, int max_y) {
  const int n = static_cast<int>(channel.in_size());
  if (p_y.size() != n) {
    throw ContractViolationError("build_polytope: p_y length does not match channel");
  }
  if (n > max_y) {
    throw SizeCapError("build_polytope: |Y| = " + std::to_string(n) + " exceeds the cap of " +
                       std::to_string(max_y) +
                       "; raise it with --max-y if the combinatorial cost is acceptable");
  }

  const SvdResult dec = svd(channel.matrix());
  const int rank = numerical_rank(dec, rank_tol);

  PrivacyPolytope poly;
  poly.rank = rank;
  poly.null_dim = n - rank;
  poly.a_matrix = dec.right_vectors.leftCols(rank).transpose();
  poly.b = poly.a_matrix * p_y.vec();

  if (poly.null_dim == 0) {
    // Only p_y itself satisfies the constraints.
    poly.extreme_points.push_back(p_y);
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    poly.support_sets.push_back(all);
    return poly;
  }

  for_each_subset(n, rank, [&](const std::vector<int>& subset) {
    Matrix basis(rank, rank);
    for (int c = 0; c < rank; ++c) basis.col(c) = poly.a_matrix.col(subset[c]);

    const Eigen::JacobiSVD<Matrix> bsvd(basis, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = bsvd.singularValues()(0);
    const double smin = bsvd.singularValues()(rank - 1);
    if (smax <= 0.0 || smin <= kSingularBasisTol * smax) return;  // dependent columns

    const Vector x_b = bsvd.solve(poly.b);
    if ((x_b.array() < -kNegativeBand).any()) return;  // infeasible candidate

    Vector x = Vector::Zero(n);
    for (int c = 0; c < rank; ++c) x(subset[c]) = std::max(x_b(c), 0.0);

    for (const ProbVector& seen : poly.extreme_points) {
      if ((seen.vec() - x).cwiseAbs().maxCoeff() <= kDedupTol) return;
    }
    poly.extreme_points.emplace_back(std::move(x));
    poly.support_sets.push_back(subset);
  });

  return poly;
}

ColumnGroups identical_column_groups(const Channel& channel, double col_tol) {
  const int n = static_cast<int>(channel.in_size());
  const Matrix& m = channel.matrix();

  // Union-find over pairwise column matches.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((m.col(i) - m.col(j)).cwiseAbs().maxCoeff() <= col_tol) {
        parent[find(j)] = find(i);
      }
    }
  }

  std::vector<std::vector<int>> classes(n);
  for (int i = 0; i < n; ++i) classes[find(i)].push_back(i);

  std::vector<std::vector<int>> groups;
  std::vector<int> kept;
  int duplicates = 0;
  for (int i = 0; i < n; ++i) {
    if (classes[i].empty()) continue;
    kept.push_back(classes[i].front());
    if (classes[i].size() >= 2) {
      duplicates += static_cast<int>(classes[i].size());
      groups.push_back(classes[i]);
    }
  }
  std::sort(kept.begin(), kept.end());

  Matrix reduced(m.rows(), kept.size());
  for (std::size_t c = 0; c < kept.size(); ++c) reduced.col(c) = m.col(kept[c]);

  return ColumnGroups{std::move(groups), duplicates, std::move(kept), Channel(std::move(reduced))};
}

GroupConcentrations build_s_prime(const ColumnGroups& groups, const ProbVector& p_y) {
  GroupConcentrations out;
  if (groups.groups.empty()) return out;  // nothing to concentrate

  const int b = groups.group_count();
  std::vector<double> group_mass(b, 0.0);
  std::vector<bool> grouped(p_y.size(), false);
  for (int g = 0; g < b; ++g) {
    for (int idx : groups.groups[g]) {
      group_mass[g] += p_y[idx];
      grouped[idx] = true;
    }
  }

  // Odometer over one chosen member per group, lexicographic.
  std::vector<std::size_t> pick(b, 0);
  while (true) {
    Vector s = Vector::Zero(p_y.size());
    double weight = 1.0;
    for (Eigen::Index k = 0; k < p_y.size(); ++k) {
      if (!grouped[k]) s(k) = p_y[k];
    }
    for (int g = 0; g < b; ++g) {
      const int member = groups.groups[g][pick[g]];
      s(member) = group_mass[g];
      weight *= p_y[member] / group_mass[g];
    }
    out.vectors.emplace_back(std::move(s));
    out.weights.push_back(weight);

    int g = b - 1;
    while (g >= 0 && pick[g] + 1 == groups.groups[g].size()) pick[g--] = 0;
    if (g < 0) break;
    ++pick[g];
  }
  return out;
}

}  // namespace perfpriv
