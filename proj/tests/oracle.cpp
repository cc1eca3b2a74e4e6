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

#include "oracle.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracle {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Segment kernel_segment(const Matrix& channel, const Vector& marginal) {
  Eigen::FullPivLU<Matrix> lu(channel);
  lu.setThreshold(1e-9);
  const Matrix kernel = lu.kernel();
  if (lu.dimensionOfKernel() != 1) {
    throw std::runtime_error("kernel_segment: kernel dimension is not 1");
  }
  Vector z = kernel.col(0);
  z /= z.norm();
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (std::abs(z(i)) > 1e-12) {
      if (z(i) < 0) z = -z;
      break;
    }
  }
  Segment seg;
  seg.direction = z;
  seg.t_lo = -kInf;
  seg.t_hi = kInf;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z(i) > 1e-12) {
      seg.t_lo = std::max(seg.t_lo, -marginal(i) / z(i));
    } else if (z(i) < -1e-12) {
      seg.t_hi = std::min(seg.t_hi, -marginal(i) / z(i));
    }
  }
  return seg;
}

double min_mixture_on_segment(const Matrix& channel, const Vector& marginal,
                              const std::function<double(const Vector&)>& f, int steps) {
  const Segment seg = kernel_segment(channel, marginal);
  std::vector<double> ts(steps + 1);
  std::vector<double> fs(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    const double tau = static_cast<double>(i) / steps;
    ts[i] = seg.t_lo + tau * (seg.t_hi - seg.t_lo);
    fs[i] = f(seg.at(ts[i], marginal));
  }
  double best = f(marginal);  // single-atom mixture
  for (int a = 0; a <= steps; ++a) {
    if (ts[a] >= 0.0) break;
    for (int b = steps; b >= 0; --b) {
      if (ts[b] <= 0.0) break;
      const double w = ts[b] / (ts[b] - ts[a]);
      best = std::min(best, w * fs[a] + (1.0 - w) * fs[b]);
    }
  }
  return best;
}

double grid_g0(const JointPMF& joint, int steps) {
  const Vector py = joint.table().colwise().sum().transpose();
  Matrix channel(joint.x_size(), joint.y_size());
  for (Eigen::Index j = 0; j < joint.y_size(); ++j) {
    channel.col(j) = joint.table().col(j) / py(j);
  }
  const double min_h =
      min_mixture_on_segment(channel, py, [](const Vector& q) { return entropy_ref(q); }, steps);
  return entropy_ref(py) - min_h;
}

double grid_mmse(const JointPMF& joint, const Vector& y_values, int steps) {
  const Vector py = joint.table().colwise().sum().transpose();
  Matrix channel(joint.x_size(), joint.y_size());
  for (Eigen::Index j = 0; j < joint.y_size(); ++j) {
    channel.col(j) = joint.table().col(j) / py(j);
  }
  auto var = [&](const Vector& q) {
    const double total = q.sum();
    const double mean = q.dot(y_values) / total;
    const double mean2 = q.dot(y_values.cwiseProduct(y_values)) / total;
    return mean2 - mean * mean;
  };
  return min_mixture_on_segment(channel, py, var, steps);
}

double grid_min_error(const JointPMF& joint, int steps) {
  const Vector py = joint.table().colwise().sum().transpose();
  Matrix channel(joint.x_size(), joint.y_size());
  for (Eigen::Index j = 0; j < joint.y_size(); ++j) {
    channel.col(j) = joint.table().col(j) / py(j);
  }
  const double max_mass = -min_mixture_on_segment(
      channel, py, [](const Vector& q) { return -q.maxCoeff(); }, steps);
  return 1.0 - max_mass;
}

double grid_g0_general(const Joint3PMF& joint3, int steps) {
  const Vector pw = joint3.marginal_w().vec();
  const Vector py = joint3.marginal_y().vec();
  const Matrix x_given_w = joint3.channel_x_given_w().matrix();
  const Matrix y_given_w = joint3.channel_y_given_w().matrix();
  const double min_h = min_mixture_on_segment(
      x_given_w, pw,
      [&](const Vector& q) { return entropy_ref(y_given_w * q); }, steps);
  return entropy_ref(py) - min_h;
}

double grid_v_star_binary(const JointPMF& joint, int steps) {
  if (joint.y_size() != 2) {
    throw std::runtime_error("grid_v_star_binary: needs |Y| = 2");
  }
  const Vector py = joint.table().colwise().sum().transpose();
  const Vector px = joint.table().rowwise().sum();
  Matrix channel(joint.x_size(), 2);
  for (Eigen::Index j = 0; j < 2; ++j) channel.col(j) = joint.table().col(j) / py(j);

  auto kl = [](const Vector& q, const Vector& p) {
    double d = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      if (q(i) > 0.0) d += q(i) * std::log2(q(i) / p(i));
    }
    return std::max(d, 0.0);
  };

  double best = 1.0;
  for (int i = 0; i <= steps; ++i) {
    Vector q(2);
    q << static_cast<double>(i) / steps, 1.0 - static_cast<double>(i) / steps;
    if (std::abs(q(0) - py(0)) < 1e-12) continue;
    const double num = kl(q, py);
    const double den = kl(channel * q, px);
    if (den <= 0.0) continue;
    best = std::max(best, num / den);
  }
  return best;
}

double brute_force_lp_min(const perfpriv::StandardLP& lp) {
  const int n = static_cast<int>(lp.eq_matrix.rows());
  const int k = static_cast<int>(lp.eq_matrix.cols());
  const int max_size = std::min(n, k);
  const double rhs_scale = 1.0 + lp.eq_rhs.cwiseAbs().maxCoeff();

  double best = kInf;
  // Every basic feasible solution lives on some column subset of size at
  // most n; enumerate them all.
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> cols;
    for (int j = 0; j < k; ++j) {
      if (mask & (1u << j)) cols.push_back(j);
    }
    if (static_cast<int>(cols.size()) > max_size) continue;
    Matrix sub(n, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) sub.col(c) = lp.eq_matrix.col(cols[c]);
    const Vector w = sub.colPivHouseholderQr().solve(lp.eq_rhs);
    if ((sub * w - lp.eq_rhs).cwiseAbs().maxCoeff() > 1e-9 * rhs_scale) continue;
    if ((w.array() < -1e-9).any()) continue;
    double obj = 0.0;
    for (std::size_t c = 0; c < cols.size(); ++c) obj += lp.cost(cols[c]) * std::max(w(c), 0.0);
    best = std::min(best, obj);
  }
  if (std::isinf(best)) {
    throw std::runtime_error("brute_force_lp_min: no feasible basic solution");
  }
  return best;
}

double kahan_sum(const Vector& v) {
  double sum = 0.0, carry = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double y = v(i) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double entropy_ref(const Vector& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) h -= p(i) * std::log2(p(i));
  }
  return std::max(h, 0.0);
}

double TestRng::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(gen);
}

int TestRng::uniform_int(int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  return dist(gen);
}

Matrix random_joint_table(TestRng& rng, int nx, int ny, double min_cell) {
  Matrix t(nx, ny);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) t(i, j) = min_cell + rng.uniform(0.0, 1.0);
  }
  t /= t.sum();
  return t;
}

JointPMF random_joint(TestRng& rng, int nx, int ny, double min_cell) {
  return JointPMF(random_joint_table(rng, nx, ny, min_cell));
}

JointPMF random_joint_with_duplicates(TestRng& rng, int nx, int ny, int base_cols) {
  Matrix base(nx, base_cols);
  for (int c = 0; c < base_cols; ++c) {
    Vector col(nx);
    for (int i = 0; i < nx; ++i) col(i) = 0.05 + rng.uniform(0.0, 1.0);
    base.col(c) = col / col.sum();
  }
  Matrix channel(nx, ny);
  for (int j = 0; j < ny; ++j) {
    // Cover every base column once, then assign the rest at random.
    const int pick = j < base_cols ? j : rng.uniform_int(0, base_cols - 1);
    channel.col(j) = base.col(pick);
  }
  Vector py(ny);
  for (int j = 0; j < ny; ++j) py(j) = 0.05 + rng.uniform(0.0, 1.0);
  py /= py.sum();
  return JointPMF(channel * py.asDiagonal());
}

Joint3PMF random_joint3(TestRng& rng, int nx, int ny, int nw, double min_cell) {
  std::vector<Matrix> slices;
  double total = 0.0;
  for (int w = 0; w < nw; ++w) {
    Matrix s(nx, ny);
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) s(i, j) = min_cell + rng.uniform(0.0, 1.0);
    }
    total += s.sum();
    slices.push_back(std::move(s));
  }
  for (Matrix& s : slices) s /= total;
  return Joint3PMF(slices);
}

}  // namespace oracle
