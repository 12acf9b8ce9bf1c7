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
#include <string>
#include <vector>

#include "qecopt/channel.hpp"
#include "qecopt/matrix.hpp"
#include "qecopt/numeric_policy.hpp"

namespace qecopt {

enum class BasisKind { Recovery, Encoding };

/// Orthonormal operator basis for expanding Kraus elements.
///
/// Recovery bases hold n_S x n_C matrices, encoding bases n_C x n_S; the
/// cardinality is n_S * n_C either way.
class BasisSet {
 public:
  static BasisSet make(std::vector<ComplexMatrix> elements, BasisKind kind,
                       const NumericPolicy& policy = NumericPolicy::defaults());

  std::size_t size() const { return elements_.size(); }
  const ComplexMatrix& element(std::size_t i) const { return elements_[i]; }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  BasisKind kind() const { return kind_; }
  std::size_t rows() const { return elements_[0].rows(); }
  /// Constraint dimension m of the associated SDP (= element columns).
  std::size_t cols() const { return elements_[0].cols(); }

  /// Coefficients of k in this basis: x_i = Tr(B_i^dag k).
  std::vector<cplx> coefficients(const ComplexMatrix& k) const;

  /// Linear combination sum_i x_i B_i.
  ComplexMatrix combine(const std::vector<cplx>& x) const;

 private:
  BasisSet(std::vector<ComplexMatrix> elements, BasisKind kind)
      : elements_(std::move(elements)), kind_(kind) {}

  std::vector<ComplexMatrix> elements_;
  BasisKind kind_;
};

/// Matrix units e_a e_b^dag enumerated row-major.
BasisSet canonical_basis(std::size_t ns, std::size_t nc, BasisKind kind);

/// Rank-4 fidelity tensor. F[i][j][k][l] couples recovery coefficients
/// (i, j) to encoding coefficients (k, l); the pairing symmetry
/// F_ijkl = conj(F_jilk) holds by construction.
class FidelityTensor {
 public:
  FidelityTensor(std::size_t n, std::size_t ns, std::size_t nc)
      : n_(n), ns_(ns), nc_(nc), f_(n * n * n * n) {}

  std::size_t n() const { return n_; }
  std::size_t ns() const { return ns_; }
  std::size_t nc() const { return nc_; }

  cplx& at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return f_[((i * n_ + j) * n_ + k) * n_ + l];
  }
  const cplx& at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return f_[((i * n_ + j) * n_ + k) * n_ + l];
  }

  /// Full contraction sum_ijkl (X_R)_ij (X_C)_kl F_ijkl; the fidelity of the
  /// channel pair the process matrices describe.
  double contract(const ComplexMatrix& x_r, const ComplexMatrix& x_c) const;

  /// Partial contraction against a fixed encoding process matrix, yielding
  /// the recovery-problem data matrix.
  ComplexMatrix w_recovery(const ComplexMatrix& x_c) const;

  /// Partial contraction against a fixed recovery process matrix.
  ComplexMatrix w_encoding(const ComplexMatrix& x_r) const;

 private:
  std::size_t n_, ns_, nc_;
  std::vector<cplx> f_;
};

/// Hermitian PSD data matrix of a recovery or encoding SDP.
struct SdpDataMatrix {
  ComplexMatrix w;
  std::string provenance;
};

/// Average gate fidelity (1/n^2) sum_k |Tr(target^dag K_k)|^2 of a square
/// channel against a target unitary. Equals 1 exactly when the channel
/// implements the target.
double f_avg(const QuantumChannel& s, const ComplexMatrix& target);

struct MixedFidelityResult {
  double value;
  DensityMatrix argmin;
  double fw_gap;            ///< certified conditional-gradient gap
  int iterations;
  double eigenvalue_gap;    ///< lambda_1 - lambda_2 of the argmin density
};

/// min over densities of sum_k |Tr(target^dag K_k rho)|^2, solved by
/// conditional-gradient descent with exact line search. The linear
/// subproblem is the projector onto the minimal eigenvector of the
/// gradient. Throws NumericalError if the certified gap is still above
/// policy.fw_gap after fw_max_iters iterations.
MixedFidelityResult f_mixed(const QuantumChannel& s, const ComplexMatrix& target,
                            const NumericPolicy& policy = NumericPolicy::defaults());

/// Heuristic upper bound on the pure-state fidelity minimum: seeded random
/// restarts with projected gradient descent on the unit sphere and step
/// halving. The underlying problem is not convex, so this is an estimate.
double f_pure_estimate(const QuantumChannel& s, const ComplexMatrix& target,
                       int restarts,
                       const NumericPolicy& policy = NumericPolicy::defaults(),
                       std::uint64_t seed = 0x5eedf1de11717ull);

/// Dense fidelity tensor for an error channel and a basis pair.
FidelityTensor build_f_tensor(const QuantumChannel& error,
                              const ComplexMatrix& target,
                              const BasisSet& basis_r, const BasisSet& basis_c);

/// Recovery-problem data matrix
///   W_ij = sum_{e,c} conj(Tr(L^dag B_i E_e C_c)) Tr(L^dag B_j E_e C_c) / n_S^2
/// so that Tr(X W) equals f_avg for any process matrix X built from a
/// recovery's coefficient outer products.
SdpDataMatrix assemble_w_recovery(const QuantumChannel& error,
                                  const QuantumChannel& encoding,
                                  const ComplexMatrix& target,
                                  const BasisSet& basis_r);

/// Encoding-problem mirror of assemble_w_recovery.
SdpDataMatrix assemble_w_encoding(const QuantumChannel& error,
                                  const QuantumChannel& recovery,
                                  const ComplexMatrix& target,
                                  const BasisSet& basis_c);

}  // namespace qecopt
