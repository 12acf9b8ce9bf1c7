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
#include <vector>

#include "qecopt/matrix.hpp"
#include "qecopt/numeric_policy.hpp"

namespace qecopt {

struct EigResult {
  std::vector<double> eigenvalues;  ///< descending, ties broken by index
  ComplexMatrix eigenvectors;       ///< unitary, columns match eigenvalues
};

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Deterministic and accurate at the dense sizes used here (n <= 64-ish).
/// Throws NumericalError if the input fails the Hermiticity tolerance.
EigResult hermitian_eig(const ComplexMatrix& m,
                        const NumericPolicy& policy = NumericPolicy::defaults());

struct SvdResult {
  ComplexMatrix u;                     ///< orthonormal columns, rows x k
  std::vector<double> singular_values; ///< descending, k = min(rows, cols)
  ComplexMatrix v;                     ///< orthonormal columns, cols x k
};

/// Singular value decomposition m = u diag(s) v^dag.
///
/// Computed from the Hermitian eigendecomposition of m^dag m (or m m^dag,
/// whichever is smaller) plus column recovery. Singular values below about
/// sqrt(eps)*||m|| inherit the squared conditioning of the normal matrix;
/// adequate for the well-separated spectra this library produces.
SvdResult svd(const ComplexMatrix& m);

/// exp(-i * scale * h) for Hermitian h, via eigendecomposition.
ComplexMatrix expm_hermitian(const ComplexMatrix& h, double scale,
                             const NumericPolicy& policy = NumericPolicy::defaults());

/// Largest singular value.
double spectral_norm(const ComplexMatrix& m);

/// Minimum-norm least-squares solution of a x = b (b may have many columns).
ComplexMatrix lstsq_min_norm(const ComplexMatrix& a, const ComplexMatrix& b);

/// Least-squares solve of a stacked linear system on a Hermitian unknown.
///
/// `a` maps vec(X) (row-major, X is n x n with n = sqrt(a.cols())) to the
/// stacked left-hand sides; `b` is the stacked right-hand side as a column.
/// Returns the Hermitian-symmetrized minimum-norm solution. Throws
/// NumericalError when the residual of a vec(X) = b exceeds the linear-solve
/// tolerance (an inconsistent system signals a degenerate optimum upstream).
ComplexMatrix solve_constrained_nullspace(
    const ComplexMatrix& a, const ComplexMatrix& b,
    const NumericPolicy& policy = NumericPolicy::defaults());

/// Row-major vec: n x n matrix to an n^2 x 1 column.
ComplexMatrix vec_row_major(const ComplexMatrix& m);
ComplexMatrix unvec_row_major(const ComplexMatrix& v, std::size_t rows,
                              std::size_t cols);

/// Extends a matrix with orthonormal columns to a full unitary by
/// re-orthonormalizing coordinate vectors in index order. Deterministic.
ComplexMatrix complete_orthonormal_columns(
    const ComplexMatrix& q,
    const NumericPolicy& policy = NumericPolicy::defaults());

/// Cholesky factor L (lower, L L^T = a) of a symmetric positive definite
/// matrix, or nullopt if a pivot fails. No balancing or pivoting.
std::optional<RealMatrix> cholesky(const RealMatrix& a);

/// Solves L L^T x = b given the Cholesky factor.
RealMatrix cholesky_solve(const RealMatrix& l, const RealMatrix& b);

/// 2 * sum(log diag(L)).
double log_det_from_cholesky(const RealMatrix& l);

/// Largest eigenvalue of a symmetric matrix by fixed-count power iteration
/// (deterministic start). Good to ~1e-12 for the scales used here.
double sym_max_eig(const RealMatrix& a);

}  // namespace qecopt
