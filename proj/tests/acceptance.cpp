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

// Acceptance suite: every pinned target runs at its stated tolerance and
// prints one pass/fail line. The process exits nonzero if any criterion
// fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oracle.hpp"
#include "perfpriv/correlation.hpp"
#include "perfpriv/errors.hpp"
#include "perfpriv/privacy.hpp"
#include "perfpriv/report.hpp"

using namespace perfpriv;

namespace {

int failures = 0;

class Criterion {
 public:
  Criterion(int id, std::string name) : id_(id), name_(std::move(name)) {}

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      if (!detail_.empty()) detail_ += "; ";
      detail_ += what;
    }
  }

  template <typename T>
  void require_close(T measured, T target, T tol, const std::string& what) {
    std::ostringstream os;
    os << what << ": measured " << measured << ", expected " << target << " +/- " << tol;
    require(std::abs(measured - target) <= tol, os.str());
  }

  ~Criterion() {
    if (pass_) {
      std::printf("[PASS] criterion %2d: %s\n", id_, name_.c_str());
    } else {
      std::printf("[FAIL] criterion %2d: %s -- %s\n", id_, name_.c_str(), detail_.c_str());
      ++failures;
    }
  }

 private:
  int id_;
  std::string name_;
  bool pass_ = true;
  std::string detail_;
};

JointPMF example1_joint() {
  Matrix m(2, 4);
  m << 0.15, 0.2, 0.0625, 0.05, 0.35, 0.05, 0.0625, 0.075;
  return JointPMF(m);
}

JointPMF example3_joint() {
  Matrix m(2, 3);
  m << 0.10, 0.15, 0.18, 0.10, 0.35, 0.12;
  return JointPMF(m);
}

JointPMF bsc_joint(double px, double alpha) {
  Matrix m(2, 2);
  m << px * (1 - alpha), px * alpha, (1 - px) * alpha, (1 - px) * (1 - alpha);
  return JointPMF(m);
}

double elapsed_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string run_tool(const std::string& args, int* exit_code) {
  const std::string cmd = std::string(PERFPRIV_TOOL_PATH) + " " + args + " 2>/dev/null";
  std::string output;
  std::array<char, 4096> buf{};
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    *exit_code = -1;
    return output;
  }
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), n);
  const int status = pclose(pipe);
  *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return output;
}

void criterion1() {
  Criterion c(1, "reference instance: utility LP end to end");
  const auto start = std::chrono::steady_clock::now();
  const G0Result g = g0(example1_joint());
  const double seconds = elapsed_seconds(start);

  c.require_close(g.g0_bits, 0.9063, 1e-3, "g0 bits");
  c.require_close(g.min_cond_entropy_bits, 0.8437, 1e-3, "LP objective");

  Matrix expected(4, 4);
  expected << 0.675, 0.325, 0, 0, 0.1875, 0, 0.8125, 0, 0, 0.1563, 0, 0.8437, 0, 0, 0.625,
      0.375;  // one extreme point per row
  c.require(g.polytope.extreme_points.size() == 4, "expected 4 extreme points");
  for (int r = 0; r < expected.rows(); ++r) {
    bool found = false;
    for (const ProbVector& p : g.polytope.extreme_points) {
      if ((p.vec() - expected.row(r).transpose()).cwiseAbs().maxCoeff() <= 1e-3) {
        found = true;
        break;
      }
    }
    c.require(found, "extreme point row " + std::to_string(r) + " not matched");
  }

  Matrix puy(3, 4);
  puy << 0.9423, 0.9074, 0, 0, 0.0577, 0, 1, 0, 0, 0.0926, 0, 1;
  bool channel_matches = g.mechanism.support_size() == 3 &&
                         (g.mechanism.channel_u_given_y - puy).cwiseAbs().maxCoeff() <= 1e-2;
  if (!channel_matches) {
    // Alternate-optimum escape hatch: same objective, valid mechanism.
    const Marginals m = marginals(example1_joint());
    double mixture_entropy = 0.0;
    Vector mix = Vector::Zero(4);
    for (Eigen::Index u = 0; u < g.mechanism.support_size(); ++u) {
      mixture_entropy += g.mechanism.p_u[u] * entropy(g.mechanism.conditionals[u]);
      mix += g.mechanism.p_u[u] * g.mechanism.conditionals[u].vec();
    }
    channel_matches = std::abs(mixture_entropy - g.min_cond_entropy_bits) <= 1e-6 &&
                      (mix - m.p_y.vec()).cwiseAbs().maxCoeff() <= 1e-8;
    c.require(channel_matches, "release channel matches neither the pinned optimum nor an "
                               "equivalent optimum");
  }
  c.require(seconds < 1.0, "runtime " + std::to_string(seconds) + "s exceeds 1s");
}

void criterion2() {
  Criterion c(2, "reference instance: estimation error");
  const MmseResult r = mmse_perfect_privacy(example1_joint());
  c.require_close(r.mmse, 0.2406, 1e-3, "mmse");
  c.require_close(r.var_y, 1.1094, 1e-3, "var[Y]");
  c.require(r.mmse <= r.var_y + 1e-9, "mmse exceeds var[Y]");
  c.require(r.mechanism.realizations.has_value() && r.mechanism.realizations->size() == 3,
            "expected 3 release values");
  if (r.mechanism.realizations && r.mechanism.realizations->size() == 3) {
    const std::vector<double>& u = *r.mechanism.realizations;
    c.require_close(u[0], 1.325, 1e-3, "release value 1");
    c.require_close(u[1], 3.6874, 1e-3, "release value 2");
    c.require_close(u[2], 3.375, 1e-3, "release value 3");
  }
}

void criterion3() {
  Criterion c(3, "reference instance: decision error");
  const MinErrorResult r = min_error_perfect_privacy(example1_joint());
  c.require_close(r.p_err, 0.2789, 1e-3, "p_err");
  c.require(r.p_err <= 0.5, "p_err exceeds the trivial bound 0.5");
  c.require(r.mechanism.realizations.has_value() && r.mechanism.realizations->size() == 3,
            "expected 3 release symbols");
  if (r.mechanism.realizations && r.mechanism.realizations->size() == 3) {
    const std::vector<double>& u = *r.mechanism.realizations;
    c.require_close(u[0], 1.0, 1e-9, "release symbol 1");
    c.require_close(u[1], 3.0, 1e-9, "release symbol 2");
    c.require_close(u[2], 4.0, 1e-9, "release symbol 3");
  }
}

void criterion4() {
  Criterion c(4, "three-symbol instance: slope lower bound");
  const auto start = std::chrono::steady_clock::now();
  const JointPMF j = example3_joint();
  const Marginals m = marginals(j);
  c.require_close(entropy(m.p_y), 1.4855, 1e-3, "H(Y)");
  c.require_close(mutual_information(j), 0.0539, 1e-3, "I(X;Y)");
  const G0Result g = g0(j);
  c.require_close(g.g0_bits, 0.5147, 1e-3, "g0 bits");
  const SlopeReport slope = slope_lower_bound(j);
  c.require(slope.psi_values.size() == 2, "expected 2 atom suprema");
  if (slope.psi_values.size() == 2) {
    const double hi = std::max(slope.psi_values[0], slope.psi_values[1]);
    const double lo = std::min(slope.psi_values[0], slope.psi_values[1]);
    c.require_close(hi, 43.52, 0.05, "larger atom supremum");
    c.require_close(lo, 15.86, 0.05, "smaller atom supremum");
  }
  c.require_close(slope.lower_bound, 43.52, 0.05, "slope lower bound");
  const double seconds = elapsed_seconds(start);
  c.require(seconds < 5.0, "runtime " + std::to_string(seconds) + "s exceeds 5s");
}

void criterion5() {
  Criterion c(5, "binary counterexample and closed-form correlation");
  const BscAnalysis r = bsc_analysis(0.6, 0.45);
  c.require_close(r.slope_actual, 104.12, 0.5, "1/rho_m^2");
  c.require_close(r.slope_upper, 0.0099, 5e-4, "chain bound");
  c.require(r.bound_violated, "bound_violated should be true");

  oracle::TestRng rng(2025);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double px = rng.uniform(0.02, 0.5);
    const double alpha = rng.uniform(0.02, 0.5);
    const double py = px * (1 - alpha) + alpha * (1 - px);
    const double closed =
        (alpha * alpha + (1 - 2 * alpha) * (px + py - 2 * px * py)) / (py * (1 - py)) - 1.0;
    const SpectralReport s = spectral_report(bsc_joint(px, alpha));
    worst = std::max(worst, std::abs(closed - s.rho_m * s.rho_m));
  }
  std::ostringstream os;
  os << "max |closed form - sigma_2^2| = " << worst;
  c.require(worst <= 1e-9, os.str());
}

void criterion6() {
  Criterion c(6, "spectral invariants across 500 random joints");
  oracle::TestRng rng(2026);
  double worst_sigma = 0.0, worst_fixed_point = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int nx = rng.uniform_int(2, 8);
    const int ny = rng.uniform_int(2, 8);
    const JointPMF j = oracle::random_joint(rng, nx, ny, 0.01);
    const SpectralReport r = spectral_report(j);
    worst_sigma = std::max(worst_sigma, std::abs(r.singular_values(0) - 1.0));
    const Vector cvec = marginals(j).p_y.vec().cwiseSqrt();
    const Matrix gram = r.q_matrix.transpose() * r.q_matrix;
    worst_fixed_point =
        std::max(worst_fixed_point, (gram * cvec - cvec).cwiseAbs().maxCoeff());
  }
  std::ostringstream os1, os2;
  os1 << "max |sigma_1 - 1| = " << worst_sigma;
  os2 << "max fixed-point residual = " << worst_fixed_point;
  c.require(worst_sigma <= 1e-8, os1.str());
  c.require(worst_fixed_point <= 1e-8, os2.str());
}

void criterion7() {
  Criterion c(7, "utility dominates non-private information across 500 joints");
  oracle::TestRng rng(2027);
  int equality_seen = 0, strict_seen = 0;
  for (int trial = 0; trial < 500; ++trial) {
    JointPMF j = [&] {
      switch (trial % 3) {
        case 0:
          return oracle::random_joint(rng, rng.uniform_int(2, 5), rng.uniform_int(2, 8));
        case 1: {
          const int nx = rng.uniform_int(2, 4);
          const int base = rng.uniform_int(2, nx);  // reduced channel keeps full rank
          return oracle::random_joint_with_duplicates(rng, nx, base + rng.uniform_int(1, 4),
                                                      base);
        }
        default: {
          const int nx = rng.uniform_int(2, 3);
          const int base = nx + rng.uniform_int(1, 2);  // reduced channel stays deficient
          return oracle::random_joint_with_duplicates(rng, nx, base + rng.uniform_int(1, 3),
                                                      base);
        }
      }
    }();
    const G0Result g = g0(j);
    const NonPrivateInfo npi = non_private_information(j);
    const EqualityClass cls = classify_non_private_equality(j);
    c.require(g.g0_bits >= npi.d_x_bits - 1e-8,
              "utility fell below the non-private information");
    if (cls == EqualityClass::kEquality) {
      ++equality_seen;
      c.require(std::abs(g.g0_bits - npi.d_x_bits) <= 1e-7,
                "equality class but |g0 - d_x| > 1e-7");
    } else if (cls == EqualityClass::kStrict && g.polytope.null_dim > 0) {
      ++strict_seen;
      c.require(g.g0_bits - npi.d_x_bits > 1e-6, "strict class but gap <= 1e-6");
    }
  }
  c.require(equality_seen >= 100, "too few equality instances generated");
  c.require(strict_seen >= 100, "too few strict instances generated");
}

void criterion8() {
  Criterion c(8, "linear programs agree with dense-grid search");
  oracle::TestRng rng(2028);
  int tested = 0;
  double worst = 0.0;
  while (tested < 100) {
    const JointPMF j = oracle::random_joint(rng, 2, 3);
    const G0Result g = g0(j);
    if (g.polytope.null_dim != 1) continue;
    ++tested;
    worst = std::max(worst, std::abs(g.g0_bits - oracle::grid_g0(j, 1000)));
    Vector values(3);
    values << 1, 2, 3;
    worst = std::max(worst, std::abs(mmse_perfect_privacy(j, values).mmse -
                                     oracle::grid_mmse(j, values, 1000)));
    worst = std::max(worst, std::abs(min_error_perfect_privacy(j).p_err -
                                     oracle::grid_min_error(j, 1000)));
  }
  std::ostringstream os;
  os << "max LP-vs-grid deviation = " << worst;
  c.require(worst <= 1e-4, os.str());

  int vstar_tested = 0;
  double worst_rel = 0.0;
  while (vstar_tested < 50) {
    const JointPMF j = oracle::random_joint(rng, 3, 2);
    if (perfect_privacy_feasible(conditional_channel(j))) continue;
    ++vstar_tested;
    const double mine = v_star(j).value;
    const double grid = oracle::grid_v_star_binary(j, 10000);
    worst_rel = std::max(worst_rel, std::abs(mine - grid) / std::max(1.0, grid));
  }
  std::ostringstream os2;
  os2 << "max relative ratio-supremum deviation = " << worst_rel;
  c.require(worst_rel <= 1e-3, os2.str());
}

void criterion9() {
  Criterion c(9, "release invariants across 500 feasible joints");
  oracle::TestRng rng(2029);
  double worst_indep = 0.0, worst_marginal = 0.0, worst_leak = 0.0;
  bool support_ok = true;
  for (int trial = 0; trial < 500; ++trial) {
    const int nx = rng.uniform_int(2, 4);
    const int ny = rng.uniform_int(nx + 1, 8);
    const JointPMF j = oracle::random_joint(rng, nx, ny, 0.01);
    const Marginals m = marginals(j);
    const Channel ch = conditional_channel(j);
    const G0Result g = g0(j);

    support_ok = support_ok && g.mechanism.support_size() <= ny;
    Vector mix = Vector::Zero(ny);
    Matrix pxu(nx, g.mechanism.support_size());
    for (Eigen::Index u = 0; u < g.mechanism.support_size(); ++u) {
      const Vector pushed = ch.matrix() * g.mechanism.conditionals[u].vec();
      worst_indep = std::max(worst_indep, (pushed - m.p_x.vec()).cwiseAbs().maxCoeff());
      mix += g.mechanism.p_u[u] * g.mechanism.conditionals[u].vec();
      pxu.col(u) = g.mechanism.p_u[u] * pushed;
    }
    worst_marginal = std::max(worst_marginal, (mix - m.p_y.vec()).cwiseAbs().maxCoeff());
    worst_leak = std::max(worst_leak, mutual_information(JointPMF(pxu)));
  }
  std::ostringstream os;
  os << "max independence residual = " << worst_indep
     << ", max marginal residual = " << worst_marginal << ", max leakage = " << worst_leak;
  c.require(worst_indep <= 1e-7, os.str());
  c.require(worst_marginal <= 1e-8, "marginal preservation failed: " + os.str());
  c.require(worst_leak <= 1e-6, "leakage bound failed: " + os.str());
  c.require(support_ok, "a release used more atoms than |Y|");
}

void criterion10() {
  Criterion c(10, "full-data two-atom construction across 200 joints");
  oracle::TestRng rng(2030);
  for (int trial = 0; trial < 200; ++trial) {
    const int nx = rng.uniform_int(2, 5);
    const int ny = rng.uniform_int(2, 6);
    const JointPMF j = oracle::random_joint(rng, nx, ny, 0.01);
    const double eps = max_admissible_perturbation(j) / 2.0;
    const Joint3PMF t = full_data_perturbation(j, eps);

    c.require((t.marginal_xy().table() - j.table()).cwiseAbs().maxCoeff() <= 1e-12,
              "pair marginal not preserved");
    const Channel xw = t.channel_x_given_w();
    const Vector px = marginals(j).p_x.vec();
    c.require((xw.matrix().col(0) - px).cwiseAbs().maxCoeff() <= 1e-12 &&
                  (xw.matrix().col(1) - px).cwiseAbs().maxCoeff() <= 1e-12,
              "sensitive marginal moved");
    const Channel yw = t.channel_y_given_w();
    const Vector py = marginals(j).p_y.vec();
    c.require((yw.matrix().col(0) - py).cwiseAbs().maxCoeff() >= eps / 2.0,
              "release atom carries nothing about Y");
    if (trial >= 3 && trial % 97 != 0) continue;  // spot-check the error paths cheaply
    bool threw = false;
    try {
      full_data_perturbation(j, 2.5 * eps + 1.0);
    } catch (const InvalidInputError&) {
      threw = true;
    }
    c.require(threw, "oversized eps accepted");
  }
}

void criterion11() {
  Criterion c(11, "byte-identical reports on repeated runs");
  for (const char* name : {"example1.json", "example3.json"}) {
    const std::string path = std::string(PERFPRIV_FIXTURE_DIR) + "/" + name;
    int code1 = 0, code2 = 0;
    const std::string once = run_tool("analyze " + path, &code1);
    const std::string twice = run_tool("analyze " + path, &code2);
    c.require(code1 == 0 && code2 == 0,
              std::string(name) + ": analyze exited nonzero");
    c.require(!once.empty() && once == twice,
              std::string(name) + ": repeated runs differ");
  }
}

void supplement_gaussian() {
  Criterion c(12, "supplement: gaussian full-data closed form");
  c.require(gaussian_full_data_bound(0.5) == 1.0, "-log2(0.5) must be exactly 1");
  c.require(gaussian_full_data_bound(1.0) == 0.0, "-log2(1) must be exactly 0");
  c.require_close(gaussian_full_data_bound(0.25), 2.0, 1e-15, "-log2(0.25)");
}

}  // namespace

int main() {
  std::printf("perfpriv acceptance suite\n");
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  supplement_gaussian();
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
