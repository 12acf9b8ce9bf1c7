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

#include "qecopt/channel.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "qecopt/linalg.hpp"
#include "qecopt/rng.hpp"

namespace qecopt {

DensityMatrix DensityMatrix::make(const ComplexMatrix& m,
                                  const NumericPolicy& policy) {
  if (!m.is_square()) throw DimensionError("density matrix must be square");
  if (hermiticity_defect(m) > 1e-9) {
    throw NumericalError("density matrix is not Hermitian");
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw NumericalError("density matrix trace " + std::to_string(tr) +
                         " is not 1");
  }
  NumericPolicy loose = policy;
  loose.hermitian_symmetry = 1e-9;
  EigResult eig = hermitian_eig(m, loose);
  if (eig.eigenvalues.back() < policy.psd_floor) {
    throw NumericalError("density matrix has eigenvalue " +
                         std::to_string(eig.eigenvalues.back()));
  }
  return DensityMatrix{hermitian_part(m)};
}

DensityMatrix DensityMatrix::basis_state(std::size_t n, std::size_t index) {
  if (index >= n) throw DimensionError("basis_state index out of range");
  ComplexMatrix m(n, n);
  m(index, index) = 1.0;
  return DensityMatrix{m};
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0 / double(n);
  return DensityMatrix{m};
}

QuantumChannel QuantumChannel::make_unchecked(std::vector<ComplexMatrix> kraus) {
  if (kraus.empty()) throw DimensionError("channel needs at least one Kraus element");
  const std::size_t dout = kraus[0].rows();
  const std::size_t din = kraus[0].cols();
  for (const ComplexMatrix& k : kraus) {
    if (k.rows() != dout || k.cols() != din) {
      throw DimensionError("Kraus elements must share identical dimensions");
    }
  }
  return QuantumChannel(std::move(kraus), din, dout);
}

QuantumChannel QuantumChannel::make(std::vector<ComplexMatrix> kraus,
                                    double tp_tolerance) {
  QuantumChannel ch = make_unchecked(std::move(kraus));
  const double residual = ch.tp_residual();
  if (residual > tp_tolerance) {
    throw NumericalError("channel is not trace preserving: residual " +
                         std::to_string(residual));
  }
  return ch;
}

QuantumChannel QuantumChannel::identity(std::size_t n) {
  return QuantumChannel({ComplexMatrix::identity(n)}, n, n);
}

double QuantumChannel::tp_residual() const {
  ComplexMatrix acc(dim_in_, dim_in_);
  for (const ComplexMatrix& k : kraus_) acc += k.adjoint() * k;
  return (acc - ComplexMatrix::identity(dim_in_)).frobenius_norm();
}

ComplexMatrix apply_matrix(const QuantumChannel& ch, const ComplexMatrix& rho) {
  if (rho.rows() != ch.dim_in() || rho.cols() != ch.dim_in()) {
    throw DimensionError("apply: state dimension does not match channel input");
  }
  ComplexMatrix out(ch.dim_out(), ch.dim_out());
  for (const ComplexMatrix& k : ch.kraus()) out += k * rho * k.adjoint();
  return out;
}

DensityMatrix apply(const QuantumChannel& ch, const DensityMatrix& rho,
                    const NumericPolicy& policy) {
  return DensityMatrix::make(apply_matrix(ch, rho.mat), policy);
}

QuantumChannel compose(const QuantumChannel& outer, const QuantumChannel& inner) {
  if (inner.dim_out() != outer.dim_in()) {
    throw DimensionError("compose: inner output " + std::to_string(inner.dim_out()) +
                         " does not match outer input " + std::to_string(outer.dim_in()));
  }
  std::vector<ComplexMatrix> ks;
  ks.reserve(outer.size() * inner.size());
  for (const ComplexMatrix& o : outer.kraus())
    for (const ComplexMatrix& i : inner.kraus()) ks.push_back(o * i);
  return QuantumChannel::make_unchecked(std::move(ks));
}

QuantumChannel from_unitary_bath(const ComplexMatrix& u, std::size_t dim_sys,
                                 std::size_t bath_state_index,
                                 std::size_t dim_bath,
                                 const NumericPolicy& policy) {
  const std::size_t n = dim_sys * dim_bath;
  if (!u.is_square() || u.rows() != n) {
    throw DimensionError("from_unitary_bath: u must be dim_sys*dim_bath square");
  }
  if (bath_state_index >= dim_bath) {
    throw DimensionError("from_unitary_bath: bath state index out of range");
  }
  const double defect = (u.adjoint() * u - ComplexMatrix::identity(n)).max_abs();
  if (defect > policy.unitary_check) {
    throw NumericalError("from_unitary_bath: u is not unitary (defect " +
                         std::to_string(defect) + ")");
  }
  // Bath is the trailing factor: row (i, e) of u is index i*dim_bath + e.
  std::vector<ComplexMatrix> ks;
  ks.reserve(dim_bath);
  for (std::size_t e = 0; e < dim_bath; ++e) {
    ComplexMatrix k(dim_sys, dim_sys);
    for (std::size_t i = 0; i < dim_sys; ++i)
      for (std::size_t j = 0; j < dim_sys; ++j)
        k(i, j) = u(i * dim_bath + e, j * dim_bath + bath_state_index);
    ks.push_back(std::move(k));
  }
  return QuantumChannel::make(std::move(ks), policy.tp_internal);
}

QuantumChannel random_error_channel(std::uint64_t seed, double delta_e,
                                    std::size_t dim_sys, std::size_t dim_bath) {
  if (delta_e <= 0) throw ValidationError("random_error_channel: delta_e must be positive");
  const std::size_t n = dim_sys * dim_bath;
  ShiftRegisterRng rng(seed);
  ComplexMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.next_complex_gaussian();
  ComplexMatrix h = hermitian_part(g);
  const double norm = spectral_norm(h);
  if (norm == 0.0) throw NumericalError("random_error_channel: degenerate draw");
  h *= cplx(delta_e / norm);
  return from_unitary_bath(expm_hermitian(h, 1.0), dim_sys, 0, dim_bath);
}

QuantumChannel project_to_tp(const QuantumChannel& ch) {
  ComplexMatrix acc(ch.dim_in(), ch.dim_in());
  for (const ComplexMatrix& k : ch.kraus()) acc += k.adjoint() * k;
  EigResult eig = hermitian_eig(acc);
  const std::size_t n = ch.dim_in();
  if (eig.eigenvalues.back() < 1e-12) {
    throw NumericalError("project_to_tp: normalization matrix is singular");
  }
  ComplexMatrix inv_sqrt(n, n);
  for (std::size_t i = 0; i < n; ++i)
    inv_sqrt(i, i) = 1.0 / std::sqrt(eig.eigenvalues[i]);
  inv_sqrt = eig.eigenvectors * inv_sqrt * eig.eigenvectors.adjoint();
  std::vector<ComplexMatrix> ks;
  ks.reserve(ch.size());
  for (const ComplexMatrix& k : ch.kraus()) ks.push_back(k * inv_sqrt);
  return QuantumChannel::make(std::move(ks), 1e-12);
}

}  // namespace qecopt
