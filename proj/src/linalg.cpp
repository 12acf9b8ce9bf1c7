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

#include "qecopt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qecopt {

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// One two-sided Jacobi rotation zeroing a(p,q). The rotation is U = P * Q
// where P = diag(e^{i phi}, 1) strips the phase of a(p,q) and Q is the
// classical real rotation for the resulting symmetric 2x2 block.
void apply_jacobi_rotation(ComplexMatrix& a, ComplexMatrix& v, std::size_t p,
                           std::size_t q) {
  const cplx apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const cplx phase = apq / mag;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const cplx upp = phase * c;
  const cplx upq = phase * s;
  const cplx uqp = -s;
  const cplx uqq = c;

  const std::size_t n = a.rows();
  // a <- U^dag a U, columns first then rows.
  for (std::size_t k = 0; k < n; ++k) {
    const cplx akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * upp + akq * uqp;
    a(k, q) = akp * upq + akq * uqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const cplx apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
    a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = cplx(a(p, p).real(), 0.0);
  a(q, q) = cplx(a(q, q).real(), 0.0);

  for (std::size_t k = 0; k < n; ++k) {
    const cplx vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * upp + vkq * uqp;
    v(k, q) = vkp * upq + vkq * uqq;
  }
}

}  // namespace

EigResult hermitian_eig(const ComplexMatrix& m, const NumericPolicy& policy) {
  if (!m.is_square()) throw DimensionError("hermitian_eig: non-square input");
  const double scale = std::max(1.0, m.max_abs());
  if (hermiticity_defect(m) > policy.hermitian_symmetry * std::max(1.0, scale)) {
    throw NumericalError("hermitian_eig: input is not Hermitian within tolerance");
  }
  const std::size_t n = m.rows();
  ComplexMatrix a = hermitian_part(m);
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double target = 1e-14 * std::max(1.0, a.frobenius_norm());
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) apply_jacobi_rotation(a, v, p, q);
  }

  // Descending sort with stable index tie-break so downstream Kraus
  // extraction is reproducible.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });

  EigResult out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.eigenvalues[c] = a(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r)
      out.eigenvectors(r, c) = v(r, order[c]);
  }
  return out;
}

SvdResult svd(const ComplexMatrix& m) {
  if (m.rows() < m.cols()) {
    // Work on the smaller normal matrix and swap factors back.
    SvdResult t = svd(m.adjoint());
    return SvdResult{t.v, t.singular_values, t.u};
  }
  const std::size_t k = m.cols();
  const ComplexMatrix h = m.adjoint() * m;
  NumericPolicy loose = NumericPolicy::defaults();
  loose.hermitian_symmetry = 1e-9;  // h is Hermitian by construction
  EigResult eig = hermitian_eig(h, loose);

  SvdResult out;
  out.singular_values.resize(k);
  out.v = eig.eigenvectors;
  out.u = ComplexMatrix(m.rows(), k);
  const double smax = eig.eigenvalues.empty()
                          ? 0.0
                          : std::sqrt(std::max(0.0, eig.eigenvalues[0]));
  const double cutoff = smax * 1e-13;

  // Columns of u for healthy singular values come from m v / s; the rest
  // are filled from the orthonormal complement.
  std::vector<std::size_t> weak;
  for (std::size_t c = 0; c < k; ++c) {
    const double s = std::sqrt(std::max(0.0, eig.eigenvalues[c]));
    out.singular_values[c] = s;
    if (s > cutoff && s > 0.0) {
      for (std::size_t r = 0; r < m.rows(); ++r) {
        cplx acc = 0;
        for (std::size_t j = 0; j < m.cols(); ++j) acc += m(r, j) * eig.eigenvectors(j, c);
        out.u(r, c) = acc / s;
      }
    } else {
      weak.push_back(c);
    }
  }
  if (!weak.empty()) {
    ComplexMatrix strong(m.rows(), k - weak.size());
    std::size_t sc = 0;
    for (std::size_t c = 0; c < k; ++c) {
      if (std::find(weak.begin(), weak.end(), c) != weak.end()) continue;
      for (std::size_t r = 0; r < m.rows(); ++r) strong(r, sc) = out.u(r, c);
      ++sc;
    }
    ComplexMatrix full = complete_orthonormal_columns(strong);
    for (std::size_t w = 0; w < weak.size(); ++w)
      for (std::size_t r = 0; r < m.rows(); ++r)
        out.u(r, weak[w]) = full(r, strong.cols() + w);
  }
  return out;
}

ComplexMatrix expm_hermitian(const ComplexMatrix& h, double scale,
                             const NumericPolicy& policy) {
  EigResult eig = hermitian_eig(h, policy);
  const std::size_t n = h.rows();
  ComplexMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = -scale * eig.eigenvalues[i];
    d(i, i) = cplx(std::cos(theta), std::sin(theta));
  }
  return eig.eigenvectors * d * eig.eigenvectors.adjoint();
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.empty()) return 0.0;
  SvdResult s = svd(m);
  return s.singular_values.empty() ? 0.0 : s.singular_values[0];
}

ComplexMatrix vec_row_major(const ComplexMatrix& m) {
  ComplexMatrix v(m.rows() * m.cols(), 1);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v(i * m.cols() + j, 0) = m(i, j);
  return v;
}

ComplexMatrix unvec_row_major(const ComplexMatrix& v, std::size_t rows,
                              std::size_t cols) {
  if (v.cols() != 1 || v.rows() != rows * cols) {
    throw DimensionError("unvec_row_major: bad vector length");
  }
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = v(i * cols + j, 0);
  return m;
}

ComplexMatrix lstsq_min_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("lstsq: rhs row mismatch");
  SvdResult f = svd(a);
  const double smax = f.singular_values.empty() ? 0.0 : f.singular_values[0];
  const double cutoff = smax * 1e-12;
  // x = v diag(1/s) u^dag b over the numerical range.
  ComplexMatrix utb = f.u.adjoint() * b;
  for (std::size_t i = 0; i < f.singular_values.size(); ++i) {
    const double s = f.singular_values[i];
    const cplx w = (s > cutoff) ? cplx(1.0 / s) : cplx(0.0);
    for (std::size_t j = 0; j < utb.cols(); ++j) utb(i, j) *= w;
  }
  return f.v * utb;
}

ComplexMatrix solve_constrained_nullspace(const ComplexMatrix& a,
                                          const ComplexMatrix& b,
                                          const NumericPolicy& policy) {
  const std::size_t n2 = a.cols();
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(double(n2))));
  if (n * n != n2) {
    throw DimensionError("solve_constrained_nullspace: operator columns must be a square count");
  }
  ComplexMatrix x = unvec_row_major(lstsq_min_norm(a, b), n, n);
  x = hermitian_part(x);
  const double residual = (a * vec_row_major(x) - b).frobenius_norm();
  if (residual > policy.linear_solve * (1.0 + b.frobenius_norm())) {
    throw NumericalError("solve_constrained_nullspace: residual " +
                         std::to_string(residual) + " above tolerance");
  }
  return x;
}

ComplexMatrix complete_orthonormal_columns(const ComplexMatrix& q,
                                           const NumericPolicy& policy) {
  const std::size_t n = q.rows();
  if (q.cols() > n) throw DimensionError("complete_orthonormal_columns: too many columns");
  {
    ComplexMatrix gram = q.adjoint() * q;
    ComplexMatrix eye = ComplexMatrix::identity(q.cols());
    if ((gram - eye).max_abs() > policy.unitary_check) {
      throw NumericalError("complete_orthonormal_columns: input columns not orthonormal");
    }
  }
  std::vector<ComplexMatrix> cols;
  cols.reserve(n);
  for (std::size_t c = 0; c < q.cols(); ++c) {
    ComplexMatrix v(n, 1);
    for (std::size_t r = 0; r < n; ++r) v(r, 0) = q(r, c);
    cols.push_back(v);
  }
  for (std::size_t e = 0; e < n && cols.size() < n; ++e) {
    ComplexMatrix v(n, 1);
    v(e, 0) = 1.0;
    // Two Gram-Schmidt passes keep the result orthonormal to round-off.
    for (int pass = 0; pass < 2; ++pass) {
      for (const ComplexMatrix& u : cols) {
        const cplx proj = inner(u, v);
        v -= proj * u;
      }
    }
    const double norm = v.frobenius_norm();
    if (norm > 1e-8) {
      v *= cplx(1.0 / norm);
      cols.push_back(v);
    }
  }
  if (cols.size() != n) {
    throw NumericalError("complete_orthonormal_columns: completion fell short");
  }
  ComplexMatrix out(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) out(r, c) = cols[c](r, 0);
  return out;
}

std::optional<RealMatrix> cholesky(const RealMatrix& a) {
  if (!a.is_square()) throw DimensionError("cholesky: non-square input");
  const std::size_t n = a.rows();
  RealMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return std::nullopt;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

RealMatrix cholesky_solve(const RealMatrix& l, const RealMatrix& b) {
  const std::size_t n = l.rows();
  if (b.rows() != n) throw DimensionError("cholesky_solve: rhs mismatch");
  RealMatrix x = b;
  for (std::size_t col = 0; col < b.cols(); ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = x(i, col);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, col);
      x(i, col) = s / l(i, i);
    }
    for (std::size_t ii = n; ii > 0; --ii) {
      const std::size_t i = ii - 1;
      double s = x(i, col);
      for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * x(k, col);
      x(i, col) = s / l(i, i);
    }
  }
  return x;
}

double log_det_from_cholesky(const RealMatrix& l) {
  double s = 0;
  for (std::size_t i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
  return 2.0 * s;
}

double sym_max_eig(const RealMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 0) return 0.0;
  RealMatrix v(n, 1);
  for (std::size_t i = 0; i < n; ++i) v(i, 0) = 1.0 / std::sqrt(double(n));
  double lambda = 0.0;
  // Shift so the dominant eigenvalue of (a + shift I) is the largest in
  // magnitude even when a is indefinite.
  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(a(i, j));
    shift = std::max(shift, row);
  }
  for (int it = 0; it < 200; ++it) {
    RealMatrix w = a * v;
    for (std::size_t i = 0; i < n; ++i) w(i, 0) += shift * v(i, 0);
    const double norm = w.frobenius_norm();
    if (norm == 0.0) return -shift;
    w *= 1.0 / norm;
    lambda = inner(w, a * w);
    v = w;
  }
  return lambda;
}

}  // namespace qecopt
