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

#ifndef PERFPRIV_REPORT_HPP_
#define PERFPRIV_REPORT_HPP_

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "perfpriv/correlation.hpp"
#include "perfpriv/privacy.hpp"

namespace perfpriv {

inline constexpr const char* kToolName = "perfpriv";
inline constexpr const char* kToolVersion = "0.1.0";

struct CliOptions {
  bool normalize = false;
  bool emit_plot_data = false;
  int max_y = kDefaultMaxY;
  double rank_tol = kDefaultRankTol;
  double col_tol = kDefaultColTol;
  double grid_step = 0.0;
  std::uint64_t seed = 0xC0FFEE;
  bool seed_overridden = false;

  AnalysisOptions analysis() const { return AnalysisOptions{rank_tol, col_tol, max_y}; }
  OptimizerOptions optimizer() const {
    OptimizerOptions o;
    o.seed = seed;
    o.grid_step = grid_step;
    return o;
  }
};

// A parsed probability table plus everything needed to echo it back in a
// report: labels, digest of the normalized table, parse warnings.
struct InputDocument {
  std::string format;  // "json" or "csv"
  std::vector<std::string> x_labels, y_labels, w_labels;
  std::optional<JointPMF> joint;
  std::optional<Joint3PMF> joint3;
  bool normalized = false;
  std::string digest;
  std::vector<std::string> warnings;

  bool is_three_way() const { return joint3.has_value(); }
};

// Parse from text. format must be "json" or "csv"; parse errors carry
// line/column positions.
InputDocument parse_input(const std::string& text, const std::string& format, bool normalize);

// Reads the file and dispatches on the extension (.csv versus JSON).
InputDocument load_input_file(const std::string& path, bool normalize);

// Numeric Y values for the estimation objectives: parsed from the Y
// labels when they are all numeric, else 1..|Y| (with a warning when
// labels exist but cannot be parsed).
Vector y_values_for(const InputDocument& input, std::vector<std::string>* warnings);

// Full report for `analyze` or one of the single-quantity subcommands.
// The same computation paths back both, so scalars agree bit for bit.
nlohmann::json build_report(const std::string& command, const InputDocument& input,
                            const CliOptions& opts);

nlohmann::json build_bsc_report(double p_x, double alpha, const CliOptions& opts);

// Deterministic serialization: keys sorted, floats at 17 significant
// digits, infinities as the string "inf".
std::string dump_canonical(const nlohmann::json& j);

}  // namespace perfpriv

#endif  // PERFPRIV_REPORT_HPP_
