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

#include "qecopt/fidelity.hpp"

#include <algorithm>
#include <cmath>

#include "qecopt/linalg.hpp"
#include "qecopt/rng.hpp"

namespace qecopt {

namespace {

void check_square_channel(const QuantumChannel& s, const ComplexMatrix& target) {
  if (s.dim_in() != s.dim_out()) {
    throw DimensionError("fidelity: channel must map a space to itself");
  }
  if (!target.is_square() || target.rows() != s.dim_in()) {
    throw DimensionError("fidelity: target dimension does not match channel");
  }
}

/// L^dag K_k for every Kraus element.
std::vector<ComplexMatrix> targeted_kraus(const QuantumChannel& s,
                                          const ComplexMatrix& target) {
  std::vector<ComplexMatrix> out;
  out.reserve(s.size());
  const ComplexMatrix ldag = target.adjoint();
  for (const ComplexMatrix& k : s.kraus()) out.push_back(ldag * k);
  return out;
}

}  // namespace

BasisSet BasisSet::make(std::vector<ComplexMatrix> elements, BasisKind kind,
                        const NumericPolicy& policy) {
  if (elements.empty()) throw DimensionError("basis set may not be empty");
  const std::size_t r = elements[0].rows(), c = elements[0].cols();
  if (elements.size() != r * c) {
    throw DimensionError("basis cardinality must equal rows * cols");
  }
  for (const ComplexMatrix& b : elements) {
    if (b.rows() != r || b.cols() != c) {
      throw DimensionError("basis elements must share one shape");
    }
  }
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = 0; j < elements.size(); ++j) {
      const cplx g = inner(elements[i], elements[j]);
      const cplx want = (i == j) ? cplx(1.0) : cplx(0.0);
      if (std::abs(g - want) > policy.hermitian_symmetry) {
        throw NumericalError("basis set is not orthonormal");
      }
    }
  }
  return BasisSet(std::move(elements), kind);
}

std::vector<cplx> BasisSet::coefficients(const ComplexMatrix& k) const {
  std::vector<cplx> x(size());
  for (std::size_t i = 0; i < size(); ++i) x[i] = inner(elements_[i], k);
  return x;
}

ComplexMatrix BasisSet::combine(const std::vector<cplx>& x) const {
  if (x.size() != size()) throw DimensionError("combine: coefficient count mismatch");
  ComplexMatrix out(rows(), cols());
  for (std::size_t i = 0; i < size(); ++i) {
    if (x[i] == cplx(0.0)) continue;
    const ComplexMatrix& b = elements_[i];
    for (std::size_t r = 0; r < rows(); ++r)
      for (std::size_t c = 0; c < cols(); ++c) out(r, c) += x[i] * b(r, c);
  }
  return out;
}

BasisSet canonical_basis(std::size_t ns, std::size_t nc, BasisKind kind) {
  if (ns < 1 || nc < 1) throw DimensionError("canonical_basis: dims must be >= 1");
  const std::size_t rows = (kind == BasisKind::Recovery) ? ns : nc;
  const std::size_t cols = (kind == BasisKind::Recovery) ? nc : ns;
  std::vector<ComplexMatrix> elems;
  elems.reserve(rows * cols);
  for (std::size_t a = 0; a < rows; ++a)
    for (std::size_t b = 0; b < cols; ++b) {
      ComplexMatrix e(rows, cols);
      e(a, b) = 1.0;
      elems.push_back(std::move(e));
    }
  return BasisSet::make(std::move(elems), kind);
}

double FidelityTensor::contract(const ComplexMatrix& x_r,
                                const ComplexMatrix& x_c) const {
  if (x_r.rows() != n_ || x_c.rows() != n_) {
    throw DimensionError("contract: process matrix dimension mismatch");
  }
  cplx acc = 0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      const cplx xr = x_r(i, j);
      if (xr == cplx(0.0)) continue;
      for (std::size_t k = 0; k < n_; ++k)
        for (std::size_t l = 0; l < n_; ++l)
          acc += xr * x_c(k, l) * at(i, j, k, l);
    }
  return acc.real();
}

ComplexMatrix FidelityTensor::w_recovery(const ComplexMatrix& x_c) const {
  // Tr(X_R W) = sum_ijkl (X_R)_ij (X_C)_kl F_ijkl requires W_ij = sum_kl
  // (X_C)_kl F_jikl.
  ComplexMatrix w(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      cplx acc = 0;
      for (std::size_t k = 0; k < n_; ++k)
        for (std::size_t l = 0; l < n_; ++l) acc += x_c(k, l) * at(j, i, k, l);
      w(i, j) = acc;
    }
  return hermitian_part(w);
}

ComplexMatrix FidelityTensor::w_encoding(const ComplexMatrix& x_r) const {
  ComplexMatrix w(n_, n_);
  for (std::size_t k = 0; k < n_; ++k)
    for (std::size_t l = 0; l < n_; ++l) {
      cplx acc = 0;
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) acc += x_r(i, j) * at(i, j, l, k);
      w(k, l) = acc;
    }
  return hermitian_part(w);
}

double f_avg(const QuantumChannel& s, const ComplexMatrix& target) {
  check_square_channel(s, target);
  const double n = double(s.dim_in());
  double acc = 0;
  const ComplexMatrix ldag = target.adjoint();
  for (const ComplexMatrix& k : s.kraus()) {
    acc += std::norm(trace_of_product(ldag, k));
  }
  return acc / (n * n);
}

MixedFidelityResult f_mixed(const QuantumChannel& s, const ComplexMatrix& target,
                            const NumericPolicy& policy) {
  check_square_channel(s, target);
  const std::size_t n = s.dim_in();
  const std::vector<ComplexMatrix> sk = targeted_kraus(s, target);

  auto value_at = [&](const ComplexMatrix& rho) {
    double v = 0;
    for (const ComplexMatrix& k : sk) v += std::norm(trace_of_product(k, rho));
    return v;
  };
  auto gradient_at = [&](const ComplexMatrix& rho) {
    ComplexMatrix g(n, n);
    for (const ComplexMatrix& k : sk) {
      const cplx t = trace_of_product(k, rho);
      g += std::conj(t) * k + t * k.adjoint();
    }
    return g;
  };

  ComplexMatrix rho = DensityMatrix::maximally_mixed(n).mat;
  double value = value_at(rho);
  double gap = 0;
  int it = 0;
  NumericPolicy loose = policy;
  loose.hermitian_symmetry = 1e-9;
  for (; it < policy.fw_max_iters; ++it) {
    const ComplexMatrix g = gradient_at(rho);
    EigResult eig = hermitian_eig(g, loose);
    // Linear subproblem over densities: projector onto the minimal
    // eigenvector of the gradient.
    const std::size_t last = n - 1;
    ComplexMatrix vertex(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        vertex(a, b) = eig.eigenvectors(a, last) * std::conj(eig.eigenvectors(b, last));
    const ComplexMatrix d = vertex - rho;
    gap = -trace_of_product(g, d).real();
    if (gap <= policy.fw_gap_target) break;
    double curvature = 0;
    for (const ComplexMatrix& k : sk) curvature += std::norm(trace_of_product(k, d));
    double step = 1.0;
    if (curvature > 0) step = std::clamp(gap / (2.0 * curvature), 0.0, 1.0);
    if (step == 0.0) break;
    rho = hermitian_part(rho + cplx(step) * d);
    value = value_at(rho);
  }
  if (gap > policy.fw_gap) {
    throw NumericalError("f_mixed: conditional gradient stalled with gap " +
                         std::to_string(gap));
  }

  EigResult spec = hermitian_eig(rho, loose);
  const double eigen_gap =
      (n >= 2) ? spec.eigenvalues[0] - spec.eigenvalues[1] : spec.eigenvalues[0];
  MixedFidelityResult out{value, DensityMatrix{rho}, gap, it, eigen_gap};
  return out;
}

double f_pure_estimate(const QuantumChannel& s, const ComplexMatrix& target,
                       int restarts, const NumericPolicy& policy,
                       std::uint64_t seed) {
  check_square_channel(s, target);
  const std::size_t n = s.dim_in();
  const std::vector<ComplexMatrix> sk = targeted_kraus(s, target);

  auto value_at = [&](const ComplexMatrix& psi) {
    double v = 0;
    for (const ComplexMatrix& k : sk) {
      cplx q = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          q += std::conj(psi(i, 0)) * k(i, j) * psi(j, 0);
      v += std::norm(q);
    }
    return v;
  };

  auto descend = [&](ComplexMatrix psi) {
    double v = value_at(psi);
    for (int it = 0; it < 500; ++it) {
      // Euclidean gradient wrt conj(psi), then projected off the sphere.
      ComplexMatrix grad(n, 1);
      for (const ComplexMatrix& k : sk) {
        cplx q = 0;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            q += std::conj(psi(i, 0)) * k(i, j) * psi(j, 0);
        grad += std::conj(q) * (k * psi) + q * (k.adjoint() * psi);
      }
      const cplx radial = inner(psi, grad);
      grad -= radial * psi;
      const double gnorm = grad.frobenius_norm();
      if (gnorm < 1e-10) break;
      double step = 0.5;
      bool moved = false;
      while (step > 1e-13) {
        ComplexMatrix trial = psi - cplx(step) * grad;
        trial *= cplx(1.0 / trial.frobenius_norm());
        const double tv = value_at(trial);
        if (tv < v - 1e-12) {
          psi = trial;
          v = tv;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    return v;
  };

  ShiftRegisterRng rng(seed);
  double best = std::numeric_limits<double>::infinity();
  // Deterministic warm start: minimal eigenvector of the gradient at the
  // maximally mixed state, then the seeded random restarts.
  {
    ComplexMatrix g(n, n);
    const ComplexMatrix rho = DensityMatrix::maximally_mixed(n).mat;
    for (const ComplexMatrix& k : sk) {
      const cplx t = trace_of_product(k, rho);
      g += std::conj(t) * k + t * k.adjoint();
    }
    NumericPolicy loose = policy;
    loose.hermitian_symmetry = 1e-9;
    EigResult eig = hermitian_eig(g, loose);
    ComplexMatrix psi(n, 1);
    for (std::size_t i = 0; i < n; ++i) psi(i, 0) = eig.eigenvectors(i, n - 1);
    best = std::min(best, descend(psi));
  }
  for (int r = 0; r < restarts; ++r) {
    ComplexMatrix psi(n, 1);
    for (std::size_t i = 0; i < n; ++i) psi(i, 0) = rng.next_complex_gaussian();
    const double norm = psi.frobenius_norm();
    if (norm == 0.0) continue;
    psi *= cplx(1.0 / norm);
    best = std::min(best, descend(psi));
  }
  return best;
}

FidelityTensor build_f_tensor(const QuantumChannel& error,
                              const ComplexMatrix& target,
                              const BasisSet& basis_r, const BasisSet& basis_c) {
  if (basis_r.kind() != BasisKind::Recovery || basis_c.kind() != BasisKind::Encoding) {
    throw DimensionError("build_f_tensor: basis kinds are swapped");
  }
  const std::size_t ns = basis_r.rows();
  const std::size_t nc = basis_r.cols();
  if (basis_c.rows() != nc || basis_c.cols() != ns) {
    throw DimensionError("build_f_tensor: basis shapes do not pair up");
  }
  if (error.dim_in() != nc || error.dim_out() != nc) {
    throw DimensionError("build_f_tensor: error channel must act on the code space");
  }
  if (!target.is_square() || target.rows() != ns) {
    throw DimensionError("build_f_tensor: target acts on the system space");
  }
  const std::size_t n = basis_r.size();
  FidelityTensor f(n, ns, nc);
  const ComplexMatrix ldag = target.adjoint();
  // tau[e][i][k] = Tr(L^dag B_Ri E_e B_Ck)
  std::vector<std::vector<cplx>> tau(error.size(), std::vector<cplx>(n * n));
  for (std::size_t e = 0; e < error.size(); ++e) {
    for (std::size_t i = 0; i < n; ++i) {
      const ComplexMatrix pre = ldag * basis_r.element(i) * error.kraus()[e];
      for (std::size_t k = 0; k < n; ++k) {
        tau[e][i * n + k] = trace_of_product(pre, basis_c.element(k));
      }
    }
  }
  const double scale = 1.0 / double(ns * ns);
  for (std::size_t e = 0; e < error.size(); ++e)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t l = 0; l < n; ++l)
            f.at(i, j, k, l) +=
                tau[e][i * n + k] * std::conj(tau[e][j * n + l]) * scale;
  return f;
}

SdpDataMatrix assemble_w_recovery(const QuantumChannel& error,
                                  const QuantumChannel& encoding,
                                  const ComplexMatrix& target,
                                  const BasisSet& basis_r) {
  if (basis_r.kind() != BasisKind::Recovery) {
    throw DimensionError("assemble_w_recovery: need a recovery basis");
  }
  if (encoding.dim_out() != error.dim_in()) {
    throw DimensionError("assemble_w_recovery: encoding/error dimension mismatch");
  }
  const std::size_t ns = basis_r.rows();
  const std::size_t n = basis_r.size();
  const ComplexMatrix ldag = target.adjoint();
  ComplexMatrix w(n, n);
  std::vector<cplx> g(n);
  for (const ComplexMatrix& ee : error.kraus()) {
    for (const ComplexMatrix& cc : encoding.kraus()) {
      const ComplexMatrix ec = ee * cc;
      for (std::size_t i = 0; i < n; ++i) {
        const cplx t = trace_of_product(ldag * basis_r.element(i), ec);
        g[i] = std::conj(t) / double(ns);
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w(i, j) += g[i] * std::conj(g[j]);
    }
  }
  return SdpDataMatrix{hermitian_part(w), "W_R"};
}

SdpDataMatrix assemble_w_encoding(const QuantumChannel& error,
                                  const QuantumChannel& recovery,
                                  const ComplexMatrix& target,
                                  const BasisSet& basis_c) {
  if (basis_c.kind() != BasisKind::Encoding) {
    throw DimensionError("assemble_w_encoding: need an encoding basis");
  }
  if (recovery.dim_in() != error.dim_out()) {
    throw DimensionError("assemble_w_encoding: recovery/error dimension mismatch");
  }
  const std::size_t ns = basis_c.cols();
  const std::size_t n = basis_c.size();
  const ComplexMatrix ldag = target.adjoint();
  ComplexMatrix w(n, n);
  std::vector<cplx> g(n);
  for (const ComplexMatrix& rr : recovery.kraus()) {
    for (const ComplexMatrix& ee : error.kraus()) {
      const ComplexMatrix re = ldag * rr * ee;
      for (std::size_t k = 0; k < n; ++k) {
        const cplx t = trace_of_product(re, basis_c.element(k));
        g[k] = std::conj(t) / double(ns);
      }
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) w(k, l) += g[k] * std::conj(g[l]);
    }
  }
  return SdpDataMatrix{hermitian_part(w), "W_C"};
}

}  // namespace qecopt
