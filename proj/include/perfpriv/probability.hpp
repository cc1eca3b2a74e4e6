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

#ifndef PERFPRIV_PROBABILITY_HPP_
#define PERFPRIV_PROBABILITY_HPP_

#include <vector>

#include "perfpriv/numerics.hpp"

namespace perfpriv {

// Probability masses must sum to 1 within this tolerance; inputs outside
// the band are rejected, never silently renormalized.
inline constexpr double kMassTol = 1e-9;

// A probability mass function over a finite alphabet.
class ProbVector {
 public:
  explicit ProbVector(Vector masses);
  static ProbVector point_mass(Eigen::Index n, Eigen::Index i);

  Eigen::Index size() const { return masses_.size(); }
  double operator[](Eigen::Index i) const { return masses_(i); }
  const Vector& vec() const { return masses_; }

 private:
  Vector masses_;
};

// A column-stochastic matrix; column j is the conditional pmf of the
// output given input symbol j.
class Channel {
 public:
  explicit Channel(Matrix m);

  const Matrix& matrix() const { return m_; }
  Eigen::Index out_size() const { return m_.rows(); }
  Eigen::Index in_size() const { return m_.cols(); }

 private:
  Matrix m_;
};

// Joint distribution of a pair (X, Y), stored as an |X| x |Y| table.
// Both marginals must be strictly positive: a symbol with zero mass
// carries no information and the support should be reduced instead.
class JointPMF {
 public:
  explicit JointPMF(Matrix pxy);
  static JointPMF from_channel(const Channel& x_given_y, const ProbVector& p_y);

  const Matrix& table() const { return pxy_; }
  Eigen::Index x_size() const { return pxy_.rows(); }
  Eigen::Index y_size() const { return pxy_.cols(); }

 private:
  Matrix pxy_;
};

// Joint distribution of a triple (X, Y, W), stored as one |X| x |Y|
// slice per w. All three marginals must be strictly positive.
class Joint3PMF {
 public:
  explicit Joint3PMF(std::vector<Matrix> slices_by_w);

  Eigen::Index x_size() const { return slices_[0].rows(); }
  Eigen::Index y_size() const { return slices_[0].cols(); }
  Eigen::Index w_size() const { return static_cast<Eigen::Index>(slices_.size()); }
  const Matrix& slice(Eigen::Index w) const { return slices_[w]; }

  ProbVector marginal_x() const;
  ProbVector marginal_y() const;
  ProbVector marginal_w() const;
  JointPMF marginal_xy() const;
  Channel channel_x_given_w() const;
  Channel channel_y_given_w() const;

 private:
  std::vector<Matrix> slices_;
};

struct Marginals {
  ProbVector p_x;
  ProbVector p_y;
};

Marginals marginals(const JointPMF& j);

// P_{X|Y}: column j of the joint table divided by p_Y(j).
Channel conditional_channel(const JointPMF& j);

// Shannon entropy in bits, with 0 log 0 = 0.
double entropy(const ProbVector& p);
double entropy(const Vector& masses);

// Relative entropy D(q || p) in bits; +infinity when q puts mass outside
// the support of p.
double kl_divergence(const ProbVector& q, const ProbVector& p);

double mutual_information(const JointPMF& j);

// Mean and variance of the numeric values under pmf p.
double mean_under(const ProbVector& p, const Vector& values);
double variance_under(const ProbVector& p, const Vector& values);

}  // namespace perfpriv

#endif  // PERFPRIV_PROBABILITY_HPP_
