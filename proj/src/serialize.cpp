// Copyright 2026 The qecopt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qecopt/serialize.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace qecopt {

json matrix_to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      data.push_back({m(i, j).real(), m(i, j).imag()});
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("data")) {
    throw ValidationError("matrix: expected {rows, cols, data}");
  }
  const std::size_t rows = j.at("rows").get<std::size_t>();
  const std::size_t cols = j.at("cols").get<std::size_t>();
  const json& data = j.at("data");
  if (!data.is_array() || data.size() != rows * cols) {
    throw ValidationError("matrix: data length does not match rows*cols");
  }
  ComplexMatrix m(rows, cols);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t jx = 0; jx < cols; ++jx, ++idx) {
      const json& e = data[idx];
      if (!e.is_array() || e.size() != 2) {
        throw ValidationError("matrix: entries must be [re, im] pairs");
      }
      m(i, jx) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  return m;
}

json channel_to_json(const QuantumChannel& ch) {
  json kraus = json::array();
  for (const ComplexMatrix& k : ch.kraus()) kraus.push_back(matrix_to_json(k));
  return json{{"schema_version", 1},
              {"dim_in", ch.dim_in()},
              {"dim_out", ch.dim_out()},
              {"kraus", std::move(kraus)}};
}

QuantumChannel channel_from_json(const json& j) {
  if (!j.contains("kraus") || !j.at("kraus").is_array() || j.at("kraus").empty()) {
    throw ValidationError("channel: missing kraus list");
  }
  std::vector<ComplexMatrix> ks;
  for (const json& k : j.at("kraus")) ks.push_back(matrix_from_json(k));
  QuantumChannel ch = QuantumChannel::make_unchecked(std::move(ks));
  if (j.contains("dim_in") && j.at("dim_in").get<std::size_t>() != ch.dim_in()) {
    throw ValidationError("channel: dim_in does not match Kraus shapes");
  }
  if (j.contains("dim_out") && j.at("dim_out").get<std::size_t>() != ch.dim_out()) {
    throw ValidationError("channel: dim_out does not match Kraus shapes");
  }
  return ch;
}

void save_channel(const QuantumChannel& ch, const json& provenance,
                  const std::string& path) {
  json j = channel_to_json(ch);
  if (!provenance.is_null()) j["provenance"] = provenance;
  write_json_file(j, path);
}

LoadedChannel load_channel(const std::string& path) {
  const json j = read_json_file(path);
  json prov = j.contains("provenance") ? j.at("provenance") : json();
  return LoadedChannel{channel_from_json(j), std::move(prov)};
}

namespace {

template <typename F>
void for_each_policy_field(NumericPolicy& p, F&& f) {
  f("hermitian_symmetry", p.hermitian_symmetry);
  f("reconstruction", p.reconstruction);
  f("linear_solve", p.linear_solve);
  f("unitary_check", p.unitary_check);
  f("tp_internal", p.tp_internal);
  f("tp_ingest", p.tp_ingest);
  f("psd_floor", p.psd_floor);
  f("fw_gap", p.fw_gap);
  f("fw_gap_target", p.fw_gap_target);
  f("sdp_duality_measure", p.sdp_duality_measure);
  f("sdp_gap", p.sdp_gap);
  f("sdp_equality_residual", p.sdp_equality_residual);
  f("nullspace_cutoff", p.nullspace_cutoff);
  f("nullspace_cutoff_wide", p.nullspace_cutoff_wide);
  f("kraus_cutoff", p.kraus_cutoff);
  f("dominant_ratio", p.dominant_ratio);
  f("design_epsilon", p.design_epsilon);
  f("monotonicity_slack", p.monotonicity_slack);
}

template <typename F>
void for_each_policy_int_field(NumericPolicy& p, F&& f) {
  f("fw_max_iters", p.fw_max_iters);
  f("pure_restarts", p.pure_restarts);
  f("newton_max_iters", p.newton_max_iters);
  f("design_max_iters", p.design_max_iters);
}

}  // namespace

json policy_to_json(const NumericPolicy& policy) {
  json j;
  NumericPolicy p = policy;
  for_each_policy_field(p, [&](const char* name, double& v) { j[name] = v; });
  for_each_policy_int_field(p, [&](const char* name, int& v) { j[name] = v; });
  return j;
}

NumericPolicy policy_from_json(const json& j, NumericPolicy base) {
  if (!j.is_object()) throw ValidationError("numeric policy must be an object");
  json remaining = j;
  for_each_policy_field(base, [&](const char* name, double& v) {
    if (remaining.contains(name)) {
      v = remaining.at(name).get<double>();
      remaining.erase(name);
    }
  });
  for_each_policy_int_field(base, [&](const char* name, int& v) {
    if (remaining.contains(name)) {
      v = remaining.at(name).get<int>();
      remaining.erase(name);
    }
  });
  if (!remaining.empty()) {
    throw ValidationError("numeric policy: unknown field '" +
                          remaining.begin().key() + "'");
  }
  return base;
}

json design_result_to_json(const DesignResult& r) {
  json trace = json::array();
  for (const IterationRecord& rec : r.fidelity_trace) {
    json row{{"iteration", rec.iteration},
             {"f_after_encoding_step", rec.f_after_encoding_step},
             {"f_after_recovery_step", rec.f_after_recovery_step}};
    if (!rec.per_error_after_encoding.empty()) {
      row["per_error_after_encoding"] = rec.per_error_after_encoding;
      row["per_error_after_recovery"] = rec.per_error_after_recovery;
    }
    trace.push_back(std::move(row));
  }
  json j{{"schema_version", 1},
         {"final_f_avg", r.final_f_avg},
         {"bounds",
          {{"f_mixed_lower", r.lower_bound_f_mixed},
           {"f_avg_upper", r.upper_bound_f_avg}}},
         {"fidelity_trace", std::move(trace)},
         {"encoding", channel_to_json(r.encoding)},
         {"recovery", channel_to_json(r.recovery)},
         {"process_matrices",
          {{"x_recovery", matrix_to_json(r.x_recovery.x)},
           {"x_encoding", matrix_to_json(r.x_encoding.x)}}},
         {"dual_certificates",
          {{"y_recovery", matrix_to_json(r.y_recovery)},
           {"y_encoding", matrix_to_json(r.y_encoding)}}},
         {"certification",
          {{"checked", r.certificates_checked},
           {"worst_gap", r.worst_certificate_gap},
           {"worst_slackness", r.worst_certificate_slackness},
           {"all_pass", r.all_certified}}},
         {"argmin_eigenvalue_gap", r.argmin_eigenvalue_gap},
         {"notes", r.notes}};
  if (r.robust_worst_case) j["robust_worst_case"] = *r.robust_worst_case;
  return j;
}

std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file for hashing: " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_json_file(const json& j, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << j.dump(2) << "\n";
}

void write_text_file(const std::string& text, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

}  // namespace qecopt
