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

#include "perfpriv/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "perfpriv/errors.hpp"

namespace perfpriv {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string table_digest(const std::vector<Matrix>& slices) {
  std::string bytes = std::to_string(slices.size()) + "|" + std::to_string(slices[0].rows()) +
                      "x" + std::to_string(slices[0].cols());
  for (const Matrix& m : slices) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        bytes += ",";
        bytes += format_double(m(r, c));
      }
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a(bytes)));
  return buf;
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double parse_cell(const std::string& cell, int line, int col) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(cell, &used);
  } catch (const std::exception&) {
    throw InvalidInputError("csv parse error at line " + std::to_string(line) + ", column " +
                            std::to_string(col) + ": '" + cell + "' is not a number");
  }
  for (std::size_t i = used; i < cell.size(); ++i) {
    if (!std::isspace(static_cast<unsigned char>(cell[i]))) {
      throw InvalidInputError("csv parse error at line " + std::to_string(line) + ", column " +
                              std::to_string(col) + ": trailing characters in '" + cell + "'");
    }
  }
  return value;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

// Rejects negative entries, then either rescales the total mass to 1 or
// rejects tables outside the validation band.
void normalize_or_reject(std::vector<Matrix>& slices, bool normalize, bool* normalized) {
  double total = 0.0;
  for (const Matrix& m : slices) {
    if (!m.allFinite()) throw InvalidInputError("input table has non-finite entries");
    if (m.minCoeff() < 0.0) throw InvalidInputError("input table has negative entries");
    total += m.sum();
  }
  if (std::abs(total - 1.0) <= kMassTol) return;
  if (!normalize) {
    throw InvalidInputError("input table mass is " + format_double(total) +
                            ", expected 1 within 1e-9; pass --normalize to rescale");
  }
  if (total <= 0.0) throw InvalidInputError("input table mass is not positive");
  for (Matrix& m : slices) m /= total;
  *normalized = true;
}

std::vector<std::string> read_label_array(const json& j, const char* key) {
  std::vector<std::string> labels;
  if (!j.contains(key)) return labels;
  if (!j[key].is_array()) {
    throw InvalidInputError(std::string("input field '") + key + "' must be an array");
  }
  for (const json& item : j[key]) {
    if (item.is_string()) {
      labels.push_back(item.get<std::string>());
    } else if (item.is_number()) {
      labels.push_back(format_double(item.get<double>()));
    } else {
      throw InvalidInputError(std::string("labels in '") + key + "' must be strings or numbers");
    }
  }
  return labels;
}

InputDocument parse_json_input(const std::string& text, bool normalize) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw InvalidInputError("json parse error at line " + std::to_string(line) + ", column " +
                            std::to_string(col) + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw InvalidInputError("input document must be a JSON object");
  }

  InputDocument input;
  input.format = "json";
  input.x_labels = read_label_array(doc, "x_labels");
  input.y_labels = read_label_array(doc, "y_labels");
  input.w_labels = read_label_array(doc, "w_labels");

  const bool has_pxy = doc.contains("pxy");
  const bool has_pxyw = doc.contains("pxyw");
  if (has_pxy == has_pxyw) {
    throw InvalidInputError("input must contain exactly one of 'pxy' or 'pxyw'");
  }

  auto as_number = [](const json& v, const char* where) -> double {
    if (!v.is_number()) throw InvalidInputError(std::string("non-numeric entry in ") + where);
    return v.get<double>();
  };

  if (has_pxy) {
    const json& rows = doc["pxy"];
    if (!rows.is_array() || rows.empty() || !rows[0].is_array() || rows[0].empty()) {
      throw InvalidInputError("'pxy' must be a non-empty 2-D array");
    }
    const std::size_t cols = rows[0].size();
    Matrix table(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!rows[r].is_array() || rows[r].size() != cols) {
        throw InvalidInputError("'pxy' row " + std::to_string(r) + " has inconsistent length");
      }
      for (std::size_t c = 0; c < cols; ++c) {
        table(r, c) = as_number(rows[r][c], "'pxy'");
      }
    }
    std::vector<Matrix> slices{table};
    normalize_or_reject(slices, normalize, &input.normalized);
    input.digest = table_digest(slices);
    input.joint = JointPMF(slices[0]);
  } else {
    const json& x_list = doc["pxyw"];
    if (!x_list.is_array() || x_list.empty() || !x_list[0].is_array() || x_list[0].empty() ||
        !x_list[0][0].is_array() || x_list[0][0].empty()) {
      throw InvalidInputError("'pxyw' must be a non-empty 3-D array indexed [x][y][w]");
    }
    const std::size_t ny = x_list[0].size();
    const std::size_t nw = x_list[0][0].size();
    std::vector<Matrix> slices(nw, Matrix(x_list.size(), ny));
    for (std::size_t x = 0; x < x_list.size(); ++x) {
      if (!x_list[x].is_array() || x_list[x].size() != ny) {
        throw InvalidInputError("'pxyw' slice " + std::to_string(x) + " has inconsistent shape");
      }
      for (std::size_t y = 0; y < ny; ++y) {
        if (!x_list[x][y].is_array() || x_list[x][y].size() != nw) {
          throw InvalidInputError("'pxyw' row [" + std::to_string(x) + "][" + std::to_string(y) +
                                  "] has inconsistent length");
        }
        for (std::size_t w = 0; w < nw; ++w) {
          slices[w](x, y) = as_number(x_list[x][y][w], "'pxyw'");
        }
      }
    }
    normalize_or_reject(slices, normalize, &input.normalized);
    input.digest = table_digest(slices);
    input.joint3 = Joint3PMF(slices);
  }
  return input;
}

InputDocument parse_csv_input(const std::string& text, bool normalize) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first >= lines.size()) {
    throw InvalidInputError("csv parse error at line 1, column 1: empty input");
  }

  InputDocument input;
  input.format = "csv";
  const std::vector<std::string> header = split_csv_line(lines[first]);
  if (header.size() < 2) {
    throw InvalidInputError("csv parse error at line " + std::to_string(first + 1) +
                            ", column 1: header must list the Y labels");
  }
  input.y_labels.assign(header.begin() + 1, header.end());
  const std::size_t ny = input.y_labels.size();

  std::vector<Vector> rows;
  for (std::size_t li = first + 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(lines[li]);
    if (cells.size() != ny + 1) {
      throw InvalidInputError("csv parse error at line " + std::to_string(li + 1) +
                              ", column 1: expected " + std::to_string(ny + 1) + " cells, got " +
                              std::to_string(cells.size()));
    }
    input.x_labels.push_back(cells[0]);
    Vector row(ny);
    for (std::size_t c = 0; c < ny; ++c) {
      row(c) = parse_cell(cells[c + 1], static_cast<int>(li + 1), static_cast<int>(c + 2));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw InvalidInputError("csv parse error at line " + std::to_string(first + 2) +
                            ", column 1: no data rows");
  }
  Matrix table(rows.size(), ny);
  for (std::size_t r = 0; r < rows.size(); ++r) table.row(r) = rows[r];

  std::vector<Matrix> slices{table};
  normalize_or_reject(slices, normalize, &input.normalized);
  input.digest = table_digest(slices);
  input.joint = JointPMF(slices[0]);
  return input;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_to_json(m.row(r)));
  return rows;
}

json mechanism_to_json(const Mechanism& mech) {
  json out;
  out["p_u"] = vector_to_json(mech.p_u.vec());
  json conds = json::array();
  for (const ProbVector& c : mech.conditionals) conds.push_back(vector_to_json(c.vec()));
  out["conditionals"] = conds;
  out["p_u_given_y"] = matrix_to_json(mech.channel_u_given_y);
  if (mech.realizations) {
    json r = json::array();
    for (double v : *mech.realizations) r.push_back(v);
    out["realizations"] = r;
  }
  return out;
}

json trace_to_json(const std::vector<StartRecord>& trace) {
  json arr = json::array();
  for (const StartRecord& r : trace) {
    json item;
    item["kind"] = r.kind;
    item["value"] = r.value;
    item["iterations"] = r.iterations;
    arr.push_back(item);
  }
  return arr;
}

const char* equality_class_name(EqualityClass c) {
  switch (c) {
    case EqualityClass::kNotFeasible:
      return "NotFeasible";
    case EqualityClass::kEquality:
      return "Equality";
    case EqualityClass::kStrict:
      return "Strict";
  }
  return "unknown";
}

json plot_data_json(const PrivacyPolytope& poly, const ProbVector& p_y) {
  json out;
  json pts = json::array();
  for (const ProbVector& p : poly.extreme_points) pts.push_back(vector_to_json(p.vec()));
  out["extreme_points"] = pts;
  out["p_y"] = vector_to_json(p_y.vec());
  if (p_y.size() == 3) {
    // Barycentric embedding of the 2-simplex for plotting.
    const double sqrt3_2 = 0.86602540378443865;
    auto embed = [&](const Vector& q) {
      json pt = json::array();
      pt.push_back(q(1) + 0.5 * q(2));
      pt.push_back(sqrt3_2 * q(2));
      return pt;
    };
    json d2;
    d2["vertices"] = json::array({json::array({0.0, 0.0}), json::array({1.0, 0.0}),
                                  json::array({0.5, sqrt3_2})});
    json epts = json::array();
    for (const ProbVector& p : poly.extreme_points) epts.push_back(embed(p.vec()));
    d2["extreme_points"] = epts;
    d2["p_y"] = embed(p_y.vec());
    out["simplex_2d"] = d2;
  }
  return out;
}

json input_to_json(const InputDocument& input) {
  json in;
  in["format"] = input.format;
  in["digest"] = input.digest;
  in["normalized"] = input.normalized;
  if (input.is_three_way()) {
    in["x_size"] = static_cast<int>(input.joint3->x_size());
    in["y_size"] = static_cast<int>(input.joint3->y_size());
    in["w_size"] = static_cast<int>(input.joint3->w_size());
  } else {
    in["x_size"] = static_cast<int>(input.joint->x_size());
    in["y_size"] = static_cast<int>(input.joint->y_size());
  }
  if (!input.x_labels.empty()) in["x_labels"] = input.x_labels;
  if (!input.y_labels.empty()) in["y_labels"] = input.y_labels;
  if (!input.w_labels.empty()) in["w_labels"] = input.w_labels;
  return in;
}

json options_to_json(const CliOptions& opts) {
  json o;
  o["normalize"] = opts.normalize;
  o["emit_plot_data"] = opts.emit_plot_data;
  o["max_y"] = opts.max_y;
  o["rank_tol"] = opts.rank_tol;
  o["col_tol"] = opts.col_tol;
  o["grid_step"] = opts.grid_step;
  o["seed"] = opts.seed;
  o["seed_overridden"] = opts.seed_overridden;
  return o;
}

json tool_to_json() {
  json t;
  t["name"] = kToolName;
  t["version"] = kToolVersion;
  return t;
}

struct ReportBuilder {
  const InputDocument& input;
  const CliOptions& opts;
  json results = json::object();
  json diagnostics = json::object();
  std::vector<std::string> warnings;

  const JointPMF& joint() const {
    if (input.is_three_way()) {
      throw InvalidInputError(
          "this subcommand needs a two-way joint; three-way inputs support only "
          "'g0' and 'feasible'");
    }
    return *input.joint;
  }

  void add_feasible() {
    if (input.is_three_way()) {
      results["feasible"] = feasible_general(input.joint3->channel_x_given_w(),
                                             input.joint3->channel_y_given_w(), opts.rank_tol);
      return;
    }
    const Channel channel = conditional_channel(joint());
    results["feasible"] = perfect_privacy_feasible(channel, opts.rank_tol);
    results["null_dim"] =
        static_cast<int>(null_space(channel.matrix(), opts.rank_tol).cols());
  }

  void add_g0() {
    if (input.is_three_way()) {
      const G0GeneralResult g = g0_general(*input.joint3, opts.analysis());
      results["g0_bits"] = g.value_bits;
      results["min_cond_entropy_bits"] = g.min_cond_entropy_bits;
      results["h_y_bits"] = entropy(input.joint3->marginal_y());
      results["mechanism_w"] = mechanism_to_json(g.mechanism_w);
      diagnostics["null_dim"] = g.polytope.null_dim;
      diagnostics["extreme_point_count"] = static_cast<int>(g.polytope.extreme_points.size());
      diagnostics["lp_iterations"] = g.lp.iterations;
      if (opts.emit_plot_data) {
        results["plot_data"] = plot_data_json(g.polytope, input.joint3->marginal_w());
      }
      return;
    }
    const G0Result g = g0(joint(), opts.analysis());
    const Marginals m = marginals(joint());
    results["feasible"] = g.polytope.null_dim > 0;
    results["g0_bits"] = g.g0_bits;
    results["min_cond_entropy_bits"] = g.min_cond_entropy_bits;
    results["h_y_bits"] = entropy(m.p_y);
    results["mechanism"] = mechanism_to_json(g.mechanism);
    diagnostics["rank"] = g.polytope.rank;
    diagnostics["null_dim"] = g.polytope.null_dim;
    diagnostics["extreme_point_count"] = static_cast<int>(g.polytope.extreme_points.size());
    diagnostics["lp_iterations"] = g.lp.iterations;
    if (opts.emit_plot_data) {
      results["plot_data"] = plot_data_json(g.polytope, m.p_y);
    }
  }

  void add_mmse() {
    const Vector values = y_values_for(input, &warnings);
    const MmseResult r = mmse_perfect_privacy(joint(), values, opts.analysis());
    results["mmse"] = r.mmse;
    results["var_y"] = r.var_y;
    results["y_values"] = vector_to_json(values);
    results["mmse_mechanism"] = mechanism_to_json(r.mechanism);
  }

  void add_minerr() {
    const Vector values = y_values_for(input, &warnings);
    const MinErrorResult r = min_error_perfect_privacy(joint(), values, opts.analysis());
    const Marginals m = marginals(joint());
    results["p_err"] = r.p_err;
    results["p_err_upper_bound"] = 1.0 - m.p_y.vec().maxCoeff();
    results["min_error_mechanism"] = mechanism_to_json(r.mechanism);
  }

  void add_dx() {
    const NonPrivateInfo npi = non_private_information(joint(), opts.col_tol);
    results["d_x_bits"] = npi.d_x_bits;
    results["c_x_bits"] = npi.c_x_bits;
    results["t_pmf"] = vector_to_json(npi.t_pmf.vec());
    results["equality_class"] =
        equality_class_name(classify_non_private_equality(joint(), opts.analysis()));
    json groups = json::array();
    for (const std::vector<int>& g : npi.groups.groups) groups.push_back(g);
    results["duplicate_groups"] = groups;
  }

  void add_maxcorr() {
    const SpectralReport r = spectral_report(joint());
    results["rho_m"] = r.rho_m;
    results["q_singular_values"] = vector_to_json(r.singular_values);
    results["stationary_values"] = vector_to_json(r.stationary_values);
    json dirs = json::array();
    for (const Vector& d : r.directions) dirs.push_back(vector_to_json(d));
    results["stationary_directions"] = dirs;
  }

  void add_vstar() {
    const VStarResult r = v_star(joint(), opts.optimizer(), opts.analysis());
    results["v_star"] = r.value;
    diagnostics["v_star_trace"] = trace_to_json(r.trace);
  }

  void add_slope() {
    const SlopeReport r = slope_lower_bound(joint(), opts.optimizer(), opts.analysis());
    json s;
    s["exact"] = r.exact;
    s["v_star"] = r.v_star_value;
    s["psi_values"] = r.psi_values;
    json argmax = json::array();
    for (const ProbVector& q : r.psi_argmax) argmax.push_back(vector_to_json(q.vec()));
    s["psi_argmax"] = argmax;
    s["l_value"] = r.l_value;
    s["entropy_term"] = r.entropy_term;
    s["lower_bound"] = r.lower_bound;
    results["slope"] = s;
    diagnostics["slope_trace"] = trace_to_json(r.trace);
  }

  void add_analyze() {
    add_g0();
    add_dx();
    add_mmse();
    add_minerr();
    add_maxcorr();

    const Channel channel = conditional_channel(joint());
    const bool feasible = perfect_privacy_feasible(channel, opts.rank_tol);
    results["feasible"] = feasible;
    results["i_xy_bits"] = mutual_information(joint());

    if (feasible) {
      results["v_star"] = std::numeric_limits<double>::infinity();
      if (mutual_information(joint()) < 1e-12) {
        // Independent pair: utility is free, the trade-off slope has no
        // meaning. Record that instead of failing the whole report.
        results["slope"] = nullptr;
        warnings.push_back("slope skipped: X and Y are independent");
      } else {
        add_slope();
      }
    } else {
      add_vstar();
      results["slope"] = nullptr;
    }
  }

  json build(const std::string& command) {
    if (command == "analyze") {
      add_analyze();
    } else if (command == "g0") {
      add_g0();
    } else if (command == "mmse") {
      add_mmse();
    } else if (command == "minerr") {
      add_minerr();
    } else if (command == "dx") {
      add_dx();
    } else if (command == "maxcorr") {
      add_maxcorr();
    } else if (command == "vstar") {
      add_vstar();
    } else if (command == "slope") {
      add_slope();
    } else if (command == "feasible") {
      add_feasible();
    } else {
      throw InvalidInputError("unknown subcommand '" + command + "'");
    }

    for (const std::string& w : input.warnings) warnings.push_back(w);
    json report;
    report["command"] = command;
    report["input"] = input_to_json(input);
    report["options"] = options_to_json(opts);
    report["results"] = results;
    diagnostics["warnings"] = warnings;
    report["diagnostics"] = diagnostics;
    report["tool"] = tool_to_json();
    return report;
  }
};

}  // namespace

InputDocument parse_input(const std::string& text, const std::string& format, bool normalize) {
  if (format == "json") return parse_json_input(text, normalize);
  if (format == "csv") return parse_csv_input(text, normalize);
  throw InvalidInputError("unknown input format '" + format + "'");
}

InputDocument load_input_file(const std::string& path, bool normalize) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidInputError("cannot open input file '" + path + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const bool csv = path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
  return parse_input(buffer.str(), csv ? "csv" : "json", normalize);
}

Vector y_values_for(const InputDocument& input, std::vector<std::string>* warnings) {
  const Eigen::Index n = input.is_three_way() ? input.joint3->y_size() : input.joint->y_size();
  Vector values(n);
  for (Eigen::Index i = 0; i < n; ++i) values(i) = static_cast<double>(i + 1);
  if (input.y_labels.empty()) return values;

  Vector parsed(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::size_t used = 0;
    try {
      parsed(i) = std::stod(input.y_labels[i], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != input.y_labels[i].size() || input.y_labels[i].empty()) {
      if (warnings) {
        warnings->push_back("y labels are not numeric; using values 1..|Y| for estimation");
      }
      return values;
    }
  }
  return parsed;
}

nlohmann::json build_report(const std::string& command, const InputDocument& input,
                            const CliOptions& opts) {
  ReportBuilder builder{input, opts};
  return builder.build(command);
}

nlohmann::json build_bsc_report(double p_x, double alpha, const CliOptions& opts) {
  const BscAnalysis r = bsc_analysis(p_x, alpha);
  json results;
  results["p_x"] = r.p_x;
  results["alpha"] = r.alpha;
  results["p_y"] = r.p_y;
  results["reflected"] = r.reflected;
  results["rho_m_sq"] = r.rho_m_sq;
  results["slope_actual"] = r.slope_actual;
  results["slope_upper"] = r.slope_upper;
  results["bound_violated"] = r.bound_violated;

  json report;
  report["command"] = "bsc";
  report["options"] = options_to_json(opts);
  report["results"] = results;
  json diag;
  diag["warnings"] = json::array();
  report["diagnostics"] = diag;
  report["tool"] = tool_to_json();
  return report;
}

namespace {

void dump_value(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump_value(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const json& item : j) {
        if (!first) out += ',';
        first = false;
        dump_value(item, out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isnan(v)) {
        throw NumericalError("report serialization: NaN value");
      }
      if (std::isinf(v)) {
        out += v > 0 ? "\"inf\"" : "\"-inf\"";
      } else {
        out += format_double(v);
      }
      break;
    }
    default:
      out += j.dump();
      break;
  }
}

}  // namespace

std::string dump_canonical(const nlohmann::json& j) {
  std::string out;
  dump_value(j, out);
  out += '\n';
  return out;
}

}  // namespace perfpriv
