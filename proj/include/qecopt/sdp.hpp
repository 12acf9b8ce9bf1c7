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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qecopt/fidelity.hpp"
#include "qecopt/matrix.hpp"
#include "qecopt/numeric_policy.hpp"

namespace qecopt {

/// The semidefinite program
///
///     maximize    Tr X W
///     subject to  X >= 0,   sum_ij X_ij B_i^dag B_j = I_m
///
/// over Hermitian X of dimension n = r*m, with an orthonormal operator
/// basis {B_i in C^{r x m}}. The robust variant carries several data
/// matrices and maximizes the worst case min_a Tr X W_a.
struct SdpProblem {
  std::vector<SdpDataMatrix> w_list;
  BasisSet basis;
  std::size_t m;  ///< constraint dimension
  std::size_t n;  ///< variable dimension, = r*m

  static SdpProblem make(std::vector<SdpDataMatrix> w_list, BasisSet basis,
                         const NumericPolicy& policy = NumericPolicy::defaults());
};

struct SdpSolution {
  ComplexMatrix x;           ///< primal, Hermitian PSD
  ComplexMatrix y;           ///< dual, Hermitian m x m
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;          ///< |dual_value - primal_value|
  int iterations = 0;        ///< Newton steps spent
  std::optional<double> t;   ///< robust epigraph value (worst case)
  std::vector<double> lambda;///< robust: data-matrix weights, sum to 1
};

struct TraceEvent {
  std::string stage;       ///< "dual" | "primal" | "robust"
  int iteration;
  double objective;
  double duality_measure;  ///< barrier parameter over path weight, nu/mu
  double step_length;
};
using TraceSink = std::function<void(const TraceEvent&)>;

struct SolveOptions {
  NumericPolicy policy = NumericPolicy::defaults();
  TraceSink trace;
};

/// A(X) = sum_ij X_ij B_i^dag B_j.
ComplexMatrix apply_basis_constraint(const BasisSet& basis, const ComplexMatrix& x);

/// K(Y)_ij = Tr(B_j^dag B_i Y); the adjoint of apply_basis_constraint.
/// For the canonical matrix-unit basis K(Y) = I_r (x) Y, so K(cI) = cI and
/// a strictly feasible dual start is always available.
ComplexMatrix apply_k_operator(const BasisSet& basis, const ComplexMatrix& y);

/// Minimizes Tr Y subject to K(Y) - W >= 0 by a barrier interior-point
/// method with Newton centering steps, then recovers the primal X through
/// dual_to_primal. Complex data is embedded into a real symmetric SDP at
/// the solver boundary and folded back on return.
SdpSolution solve_dual(const SdpProblem& p, const SolveOptions& opts = {});

/// Recovers the primal optimum from a dual-optimal Y by solving
///
///     (K(Y) - W) X = 0,   sum_ij X_ij B_i^dag B_j = I_m
///
/// on the near-null eigenspace of K(Y) - W. Eigenvalues below
/// nullspace_cutoff * ||W|| count as zero; the cutoff widens once to
/// nullspace_cutoff_wide before the solve fails.
ComplexMatrix dual_to_primal(const SdpProblem& p, const ComplexMatrix& y,
                             const NumericPolicy& policy = NumericPolicy::defaults());

/// Direct interior-point solve in X with the equality constraint eliminated
/// by an orthonormal null-space parameterization. Cross-validates the dual
/// path and carries the robust variant.
SdpSolution solve_primal(const SdpProblem& p, const SolveOptions& opts = {});

/// Epigraph form of the worst-case problem: maximize t subject to
/// Tr X W_a >= t for every data matrix, X >= 0 and the equality constraint.
/// Requires at least two data matrices. The reported dual certificate is
/// the single-W dual at the optimal mixture sum_a lambda_a W_a.
SdpSolution solve_robust(const SdpProblem& p, const SolveOptions& opts = {});

struct CertifyReport {
  double gap = 0.0;
  double slackness = 0.0;          ///< ||(K(Y) - W) X||_F
  double equality_residual = 0.0;  ///< ||A(X) - I_m||_F
  double x_min_eigenvalue = 0.0;
  double slack_min_eigenvalue = 0.0;
  double robust_t_violation = 0.0; ///< max_a (t - Tr X W_a), robust only
  bool pass = false;
  std::string detail;
};

/// Checks the optimality conditions Tr X W = Tr Y and (K(Y) - W) X = 0
/// together with feasibility margins, against the policy tolerances.
CertifyReport certify(const SdpSolution& sol, const SdpProblem& p,
                      const NumericPolicy& policy = NumericPolicy::defaults());

enum class FlopMode { PrimalRecovery, PrimalEncoding, Dual };

/// Closed-form flops per interior-point iteration: r^2 (r^2-1)^2 m^6 for a
/// primal solve and r^2 m^6 for the dual, a dual speed-up of (r^2-1)^2.
double flops_primal_per_iteration(double r, double m);
double flops_dual_per_iteration(double r, double m);

/// Evaluates the per-iteration flop model for system/ancilla qubit counts,
/// n_S = 2^qubits_sys and n_CA = 2^qubits_anc. FlopMode::Dual refers to the
/// dual of the recovery problem.
double flop_estimate(int qubits_sys, int qubits_anc, FlopMode mode);

}  // namespace qecopt
