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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qecopt/channel.hpp"
#include "qecopt/fidelity.hpp"
#include "qecopt/sdp.hpp"

namespace qecopt {

/// Hermitian PSD matrix of Kraus-coefficient outer products in a fixed
/// operator basis. Rank equals the number of Kraus elements.
struct ProcessMatrix {
  ComplexMatrix x;
  BasisSet basis;

  BasisKind kind() const { return basis.kind(); }

  /// Checks Hermiticity, the PSD floor and the equality-constraint residual.
  void validate(const NumericPolicy& policy = NumericPolicy::defaults()) const;
};

struct IterationRecord {
  int iteration = 0;  ///< 1-based
  double f_after_encoding_step = 0.0;
  double f_after_recovery_step = 0.0;
  /// Robust runs: per-error-channel fidelities after each half step.
  std::vector<double> per_error_after_encoding;
  std::vector<double> per_error_after_recovery;
};

struct DesignResult {
  QuantumChannel encoding;
  QuantumChannel recovery;
  std::vector<IterationRecord> fidelity_trace;
  double final_f_avg = 0.0;
  double lower_bound_f_mixed = 0.0;  ///< of the final extracted pair
  double upper_bound_f_avg = 0.0;    ///< relaxed objective of the last solve
  std::optional<double> robust_worst_case;
  ProcessMatrix x_recovery;
  ProcessMatrix x_encoding;
  ComplexMatrix y_recovery;  ///< dual certificate of the last recovery solve
  ComplexMatrix y_encoding;  ///< dual certificate of the last encoding solve
  int certificates_checked = 0;
  double worst_certificate_gap = 0.0;
  double worst_certificate_slackness = 0.0;
  bool all_certified = true;
  double argmin_eigenvalue_gap = 0.0;  ///< of the f_mixed argmin density
  std::vector<std::string> notes;
};

/// Kraus extraction from a process matrix: X = V S V^dag gives one element
/// sqrt(s_r) sum_i V_ir B_i per eigenvalue above kraus_cutoff * Tr X. The
/// result is trace preserving to 1e-7 and rebuilding X from the emitted
/// coefficients matches to the dropped-tail mass.
QuantumChannel kraus_from_process(const ProcessMatrix& pm,
                                  const NumericPolicy& policy = NumericPolicy::defaults());

/// Number of dominant Kraus elements: the largest k with s_k / s_1 above
/// the dominance ratio.
std::size_t dominant_rank(const ProcessMatrix& pm,
                          const NumericPolicy& policy = NumericPolicy::defaults());

/// The fixed recovery that discards the encoding ancilla: n_CA selection
/// matrices with (R_r)_ij = 1 exactly when j = i * n_CA + r (0-based).
/// Applying it equals the partial trace over the trailing ancilla factor.
QuantumChannel partial_trace_recovery(std::size_t ns, std::size_t nca);

struct HalfStepResult {
  QuantumChannel channel;
  ProcessMatrix process;
  SdpSolution solution;
};

/// One recovery half-step: assemble W_R, solve by the dual path, recover
/// X_R, extract Kraus elements.
HalfStepResult optimize_recovery(const QuantumChannel& error,
                                 const QuantumChannel& encoding,
                                 const ComplexMatrix& target,
                                 const SolveOptions& opts = {});

/// One encoding half-step, mirror of optimize_recovery.
HalfStepResult optimize_encoding(const QuantumChannel& error,
                                 const QuantumChannel& recovery,
                                 const ComplexMatrix& target,
                                 const SolveOptions& opts = {});

enum class LoopOrder { EncodingFirst, RecoveryFirst };

struct DesignOptions {
  LoopOrder order = LoopOrder::EncodingFirst;
  NumericPolicy policy = NumericPolicy::defaults();
  TraceSink trace;
  /// Initial encoding for RecoveryFirst order; defaults to the ancilla-zero
  /// isometry rho -> rho (x) |0><0|.
  std::optional<QuantumChannel> initial_encoding;
};

/// Alternating bi-convex design. Starting from the initial recovery the loop
/// optimizes the encoding, then the recovery, and repeats until the change
/// in fidelity across an iteration's second half-step drops below epsilon
/// or max_iters is reached. Fidelities are recomputed from the extracted
/// Kraus sets so the trace reflects realizable channels.
DesignResult biconvex_design(const QuantumChannel& error,
                             const QuantumChannel& initial_recovery,
                             const ComplexMatrix& target, double epsilon,
                             int max_iters, const DesignOptions& opts = {});

/// Worst-case design over a finite error set: each half-step solves the
/// epigraph problem, and the reported fidelities are minima over the set.
DesignResult robust_design(const std::vector<QuantumChannel>& errors,
                           const QuantumChannel& initial_recovery,
                           const ComplexMatrix& target, double epsilon,
                           int max_iters, const DesignOptions& opts = {});

/// Completes an isometry to a square unitary [c1 c2]. The added columns are
/// the orthonormal complement obtained by re-orthonormalizing coordinate
/// vectors in index order, so the completion is deterministic.
ComplexMatrix complete_isometry_to_unitary(
    const ComplexMatrix& c1,
    const NumericPolicy& policy = NumericPolicy::defaults());

}  // namespace qecopt
