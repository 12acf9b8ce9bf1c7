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

namespace qecopt {

/// Central record of every tolerance and iteration cap used by the library.
/// Solvers and tests share the same instance so that a change in one place
/// is a change everywhere.
struct NumericPolicy {
  // Linear algebra kernel.
  double hermitian_symmetry = 1e-12;  ///< max |M - M^dag| for "Hermitian"
  double reconstruction = 1e-10;      ///< eig/svd/expm residual, relative
  double linear_solve = 1e-8;         ///< least-squares residual bound
  double unitary_check = 1e-8;        ///< isometry/unitary input validation

  // Channels.
  double tp_internal = 1e-10;  ///< trace-preservation, constructed channels
  double tp_ingest = 1e-6;     ///< trace-preservation, ingested file data
  double psd_floor = -1e-10;   ///< smallest admissible eigenvalue of a state

  // Fidelity.
  double fw_gap = 1e-6;        ///< required Frank-Wolfe certificate
  double fw_gap_target = 1e-9; ///< gap the iteration actually aims for
  int fw_max_iters = 10000;
  int pure_restarts = 64;

  // SDP solver.
  double sdp_duality_measure = 1e-9;  ///< barrier stop: nu / mu
  double sdp_gap = 1e-6;              ///< certified |primal - dual|
  double sdp_equality_residual = 1e-8;
  int newton_max_iters = 200;         ///< total Newton steps per solve
  double nullspace_cutoff = 1e-7;     ///< relative, for dual-to-primal
  double nullspace_cutoff_wide = 1e-5;

  // Design loop.
  double kraus_cutoff = 1e-8;     ///< eigenvalue drop threshold, rel. Tr X
  double dominant_ratio = 1e-3;   ///< s_{k+1}/s_1 below this => k dominant
  double design_epsilon = 1e-6;   ///< default stopping level
  int design_max_iters = 100;
  double monotonicity_slack = 1e-7;

  static const NumericPolicy& defaults() {
    static const NumericPolicy p{};
    return p;
  }
};

}  // namespace qecopt
