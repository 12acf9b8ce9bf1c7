// Copyright 2026 The qecopt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qecopt/serialize.hpp"

namespace qecopt::cli {

// Exit codes: 0 success, 1 validation, 2 solver failure, 3 reproduction
// tolerance failure.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSolver = 2;
constexpr int kExitReproduction = 3;

/// A channel source: either a file or a seeded generator spec. The special
/// names "identity" and "partial_trace" are accepted where the design
/// pipeline allows them.
struct ChannelSpec {
  std::string file;
  std::string special;  ///< "identity" | "partial_trace" | ""
  bool generated = false;
  std::uint64_t seed = 1;
  double delta_e = 0.75;
  std::size_t dim_sys = 4;
  std::size_t dim_bath = 2;
  bool project_tp = false;

  static ChannelSpec parse(const json& j, const std::string& field);
};

struct ExperimentConfig {
  int schema_version = 1;
  std::string mode;  ///< design|robust|reproduce-paper|channel-gen|fidelity
  std::size_t n_sys = 2;
  std::vector<ChannelSpec> errors;
  std::optional<ChannelSpec> encoding;  ///< fidelity mode
  std::optional<ChannelSpec> recovery;  ///< fidelity mode
  json target;                          ///< "identity" or a matrix object
  double epsilon = 1e-6;
  int max_iters = 100;
  std::string order = "encoding_first";
  std::string out_dir = "out";
  std::string data_dir;
  bool trace = false;
  int jobs = 1;
  json policy_overrides;

  std::string config_path;  ///< provenance
  std::string config_hash;

  static ExperimentConfig load(const std::string& path);

  /// Policy = defaults + QECOPT_NUMERIC_POLICY file (if set) + config
  /// overrides, in that order.
  NumericPolicy policy() const;

  ComplexMatrix target_matrix() const;
};

int run_design(const ExperimentConfig& cfg, std::ostream& log);
int run_robust(const ExperimentConfig& cfg, std::ostream& log);
int run_channel_gen(const ExperimentConfig& cfg, std::ostream& log);
int run_fidelity(const ExperimentConfig& cfg, std::ostream& log);

struct ReproduceOptions {
  std::string data_dir;
  std::string out_dir = "out";
  bool dry_run = false;
  int jobs = 1;
  bool trace = false;
  json policy_overrides;
};

/// Re-runs the bundled reference study (two shipped error channels, the
/// fidelity tables in data/expected_fidelities.json) and writes a
/// pass/fail comparison report. Returns kExitReproduction when any cell
/// misses its tolerance.
int run_reproduce(const ReproduceOptions& opts, std::ostream& log);

/// Entrywise |.| of the process matrices and dual certificates of a stored
/// design result, as CSV files for external bar plotting.
int run_export_magnitudes(const std::string& result_path,
                          const std::string& out_dir, std::ostream& log);

/// Prints the per-iteration flop model for both problem shapes and the
/// dual speed-up factors.
int run_flops(int qubits_sys, int qubits_anc, std::ostream& out);

}  // namespace qecopt::cli
