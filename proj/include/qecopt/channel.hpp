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

#include <cstdint>
#include <vector>

#include "qecopt/matrix.hpp"
#include "qecopt/numeric_policy.hpp"

namespace qecopt {

/// Density matrix: Hermitian, positive semidefinite, unit trace.
struct DensityMatrix {
  ComplexMatrix mat;

  std::size_t dim() const { return mat.rows(); }

  /// Validating constructor; tolerances from the policy record.
  static DensityMatrix make(const ComplexMatrix& m,
                            const NumericPolicy& policy = NumericPolicy::defaults());

  /// |index><index| on an n-dimensional space.
  static DensityMatrix basis_state(std::size_t n, std::size_t index);

  /// Maximally mixed state I/n.
  static DensityMatrix maximally_mixed(std::size_t n);
};

/// Quantum channel in operator-sum (Kraus) representation.
///
/// Every element maps dim_in -> dim_out. A trace-preserving channel
/// satisfies sum_k K_k^dag K_k = I_{dim_in}.
class QuantumChannel {
 public:
  /// Validates shapes and trace preservation against tp_tolerance.
  static QuantumChannel make(std::vector<ComplexMatrix> kraus,
                             double tp_tolerance);

  /// Shape checks only. For ingesting rounded external data that is then
  /// repaired via project_to_tp().
  static QuantumChannel make_unchecked(std::vector<ComplexMatrix> kraus);

  static QuantumChannel identity(std::size_t n);

  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }
  std::size_t size() const { return kraus_.size(); }

  /// || sum K^dag K - I ||_F.
  double tp_residual() const;

 private:
  QuantumChannel(std::vector<ComplexMatrix> kraus, std::size_t din,
                 std::size_t dout)
      : kraus_(std::move(kraus)), dim_in_(din), dim_out_(dout) {}

  std::vector<ComplexMatrix> kraus_;
  std::size_t dim_in_, dim_out_;
};

/// sum_k K rho K^dag with no output validation.
ComplexMatrix apply_matrix(const QuantumChannel& ch, const ComplexMatrix& rho);

/// Channel action on a state; the output is validated as a density matrix.
DensityMatrix apply(const QuantumChannel& ch, const DensityMatrix& rho,
                    const NumericPolicy& policy = NumericPolicy::defaults());

/// Kraus set {O_i I_j} over all pairs; outer after inner.
QuantumChannel compose(const QuantumChannel& outer, const QuantumChannel& inner);

/// Channel obtained from a joint unitary on system (x) bath with the bath
/// prepared in the pure basis state |bath_state_index>:
///
///     E_e = (I_sys (x) <e|_B) U (I_sys (x) |b0>_B),  e = 0..dim_bath-1.
///
/// The bath is the trailing tensor factor. Trace preservation of the result
/// is exact up to round-off when u is unitary.
QuantumChannel from_unitary_bath(const ComplexMatrix& u, std::size_t dim_sys,
                                 std::size_t bath_state_index,
                                 std::size_t dim_bath,
                                 const NumericPolicy& policy = NumericPolicy::defaults());

/// Seeded random error channel: a Hermitian generator with independent
/// standard-normal real and imaginary parts, symmetrized, rescaled so its
/// largest singular value equals delta_e, exponentiated to U = exp(-iH),
/// and turned into a channel via from_unitary_bath with bath state |0>.
/// Deterministic in (seed, delta_e, dims).
QuantumChannel random_error_channel(std::uint64_t seed, double delta_e,
                                    std::size_t dim_sys, std::size_t dim_bath);

/// Nearest trace-preserving repair K_k <- K_k (sum K^dag K)^{-1/2}.
/// Throws NumericalError when the normalization matrix is singular.
QuantumChannel project_to_tp(const QuantumChannel& ch);

}  // namespace qecopt
