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

#include "perfpriv/probability.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "perfpriv/errors.hpp"

namespace perfpriv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_finite_nonnegative(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidInputError(std::string(what) + ": non-finite entries");
  }
  if (m.minCoeff() < 0.0) {
    throw InvalidInputError(std::string(what) + ": negative entries");
  }
}

}  // namespace

ProbVector::ProbVector(Vector masses) : masses_(std::move(masses)) {
  if (masses_.size() == 0) {
    throw InvalidInputError("ProbVector: empty mass vector");
  }
  check_finite_nonnegative(masses_, "ProbVector");
  const double total = masses_.sum();
  if (std::abs(total - 1.0) > kMassTol) {
    throw InvalidInputError("ProbVector: masses sum to " + std::to_string(total) +
                            ", expected 1 within 1e-9");
  }
}

ProbVector ProbVector::point_mass(Eigen::Index n, Eigen::Index i) {
  Vector v = Vector::Zero(n);
  v(i) = 1.0;
  return ProbVector(std::move(v));
}

Channel::Channel(Matrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.cols() == 0) {
    throw InvalidInputError("Channel: empty matrix");
  }
  check_finite_nonnegative(m_, "Channel");
  for (Eigen::Index j = 0; j < m_.cols(); ++j) {
    const double s = m_.col(j).sum();
    if (std::abs(s - 1.0) > kMassTol) {
      throw InvalidInputError("Channel: column " + std::to_string(j) + " sums to " +
                              std::to_string(s) + ", expected 1 within 1e-9");
    }
  }
}

JointPMF::JointPMF(Matrix pxy) : pxy_(std::move(pxy)) {
  if (pxy_.rows() == 0 || pxy_.cols() == 0) {
    throw InvalidInputError("JointPMF: empty table");
  }
  check_finite_nonnegative(pxy_, "JointPMF");
  const double total = pxy_.sum();
  if (std::abs(total - 1.0) > kMassTol) {
    throw InvalidInputError("JointPMF: total mass is " + std::to_string(total) +
                            ", expected 1 within 1e-9 (pass --normalize to rescale)");
  }
  for (Eigen::Index i = 0; i < pxy_.rows(); ++i) {
    if (pxy_.row(i).sum() <= 0.0) {
      throw InvalidInputError("JointPMF: X symbol " + std::to_string(i) +
                              " has zero marginal mass; remove it from the support");
    }
  }
  for (Eigen::Index j = 0; j < pxy_.cols(); ++j) {
    if (pxy_.col(j).sum() <= 0.0) {
      throw InvalidInputError("JointPMF: Y symbol " + std::to_string(j) +
                              " has zero marginal mass; remove it from the support");
    }
  }
}

JointPMF JointPMF::from_channel(const Channel& x_given_y, const ProbVector& p_y) {
  if (x_given_y.in_size() != p_y.size()) {
    throw InvalidInputError("from_channel: channel input size does not match p_y");
  }
  return JointPMF(x_given_y.matrix() * p_y.vec().asDiagonal());
}

Joint3PMF::Joint3PMF(std::vector<Matrix> slices_by_w) : slices_(std::move(slices_by_w)) {
  if (slices_.empty()) {
    throw InvalidInputError("Joint3PMF: no W slices");
  }
  const Eigen::Index rows = slices_[0].rows();
  const Eigen::Index cols = slices_[0].cols();
  double total = 0.0;
  for (const Matrix& s : slices_) {
    if (s.rows() != rows || s.cols() != cols) {
      throw InvalidInputError("Joint3PMF: inconsistent slice dimensions");
    }
    check_finite_nonnegative(s, "Joint3PMF");
    total += s.sum();
  }
  if (std::abs(total - 1.0) > kMassTol) {
    throw InvalidInputError("Joint3PMF: total mass is " + std::to_string(total) +
                            ", expected 1 within 1e-9");
  }
  for (Eigen::Index w = 0; w < w_size(); ++w) {
    if (slices_[w].sum() <= 0.0) {
      throw InvalidInputError("Joint3PMF: W symbol " + std::to_string(w) +
                              " has zero marginal mass; remove it from the support");
    }
  }
  Vector px = Vector::Zero(rows);
  Vector py = Vector::Zero(cols);
  for (const Matrix& s : slices_) {
    px += s.rowwise().sum();
    py += s.colwise().sum().transpose();
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (px(i) <= 0.0) {
      throw InvalidInputError("Joint3PMF: X symbol " + std::to_string(i) +
                              " has zero marginal mass; remove it from the support");
    }
  }
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (py(j) <= 0.0) {
      throw InvalidInputError("Joint3PMF: Y symbol " + std::to_string(j) +
                              " has zero marginal mass; remove it from the support");
    }
  }
}

ProbVector Joint3PMF::marginal_x() const {
  Vector px = Vector::Zero(x_size());
  for (const Matrix& s : slices_) px += s.rowwise().sum();
  return ProbVector(std::move(px));
}

ProbVector Joint3PMF::marginal_y() const {
  Vector py = Vector::Zero(y_size());
  for (const Matrix& s : slices_) py += s.colwise().sum().transpose();
  return ProbVector(std::move(py));
}

ProbVector Joint3PMF::marginal_w() const {
  Vector pw(w_size());
  for (Eigen::Index w = 0; w < w_size(); ++w) pw(w) = slices_[w].sum();
  return ProbVector(std::move(pw));
}

JointPMF Joint3PMF::marginal_xy() const {
  Matrix pxy = Matrix::Zero(x_size(), y_size());
  for (const Matrix& s : slices_) pxy += s;
  return JointPMF(std::move(pxy));
}

Channel Joint3PMF::channel_x_given_w() const {
  Matrix m(x_size(), w_size());
  for (Eigen::Index w = 0; w < w_size(); ++w) {
    m.col(w) = slices_[w].rowwise().sum() / slices_[w].sum();
  }
  return Channel(std::move(m));
}

Channel Joint3PMF::channel_y_given_w() const {
  Matrix m(y_size(), w_size());
  for (Eigen::Index w = 0; w < w_size(); ++w) {
    m.col(w) = slices_[w].colwise().sum().transpose() / slices_[w].sum();
  }
  return Channel(std::move(m));
}

Marginals marginals(const JointPMF& j) {
  return Marginals{ProbVector(j.table().rowwise().sum()),
                   ProbVector(j.table().colwise().sum().transpose())};
}

Channel conditional_channel(const JointPMF& j) {
  const Vector p_y = j.table().colwise().sum().transpose();
  Matrix m(j.x_size(), j.y_size());
  for (Eigen::Index col = 0; col < j.y_size(); ++col) {
    m.col(col) = j.table().col(col) / p_y(col);
  }
  return Channel(std::move(m));
}

double entropy(const Vector& masses) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < masses.size(); ++i) {
    const double p = masses(i);
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h < 0.0 ? 0.0 : h;
}

double entropy(const ProbVector& p) { return entropy(p.vec()); }

double kl_divergence(const ProbVector& q, const ProbVector& p) {
  if (q.size() != p.size()) {
    throw ContractViolationError("kl_divergence: length mismatch");
  }
  double d = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const double qi = q[i];
    if (qi == 0.0) continue;
    if (p[i] == 0.0) return kInf;
    d += qi * std::log2(qi / p[i]);
  }
  return d < 0.0 ? 0.0 : d;
}

double mutual_information(const JointPMF& j) {
  const Vector px = j.table().rowwise().sum();
  const Vector py = j.table().colwise().sum().transpose();
  double mi = 0.0;
  for (Eigen::Index x = 0; x < j.x_size(); ++x) {
    for (Eigen::Index y = 0; y < j.y_size(); ++y) {
      const double p = j.table()(x, y);
      if (p > 0.0) mi += p * std::log2(p / (px(x) * py(y)));
    }
  }
  return mi < 0.0 ? 0.0 : mi;
}

double mean_under(const ProbVector& p, const Vector& values) {
  if (p.size() != values.size()) {
    throw ContractViolationError("mean_under: length mismatch");
  }
  return p.vec().dot(values);
}

double variance_under(const ProbVector& p, const Vector& values) {
  const double m = mean_under(p, values);
  const double m2 = p.vec().dot(values.cwiseProduct(values));
  const double v = m2 - m * m;
  return v < 0.0 ? 0.0 : v;
}

}  // namespace perfpriv
