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

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "qecopt/errors.hpp"

namespace qecopt {

using cplx = std::complex<double>;

namespace detail {
inline double conj_if_complex(double x) { return x; }
inline cplx conj_if_complex(const cplx& x) { return std::conj(x); }
inline double abs2(double x) { return x * x; }
inline double abs2(const cplx& x) { return std::norm(x); }
}  // namespace detail

/// Dense row-major matrix over double or std::complex<double>.
///
/// Value type: copyable, immutable-by-convention once handed to another
/// module. Everything here is sized for the dense n <= 64 regime; no
/// attempt is made at blocking or sparsity.
template <typename S>
class DenseMatrix {
 public:
  DenseMatrix() : rows_(0), cols_(0) {}
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, S{}) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<S> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionError("entry count does not match rows x cols");
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S{1};
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }
  bool is_square() const { return rows_ == cols_; }

  S& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const S& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  const std::vector<S>& entries() const { return data_; }
  std::vector<S>& entries() { return data_; }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  /// Conjugate transpose (plain transpose over the reals).
  DenseMatrix adjoint() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        t(c, r) = detail::conj_if_complex((*this)(r, c));
    return t;
  }

  DenseMatrix conjugate() const {
    DenseMatrix t(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i)
      t.data_[i] = detail::conj_if_complex(data_[i]);
    return t;
  }

  S trace() const {
    if (!is_square()) throw DimensionError("trace of non-square matrix");
    S t{};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0;
    for (const S& x : data_) s += detail::abs2(x);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0;
    for (const S& x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  DenseMatrix& operator+=(const DenseMatrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  DenseMatrix& operator-=(const DenseMatrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  DenseMatrix& operator*=(const S& a) {
    for (S& x : data_) x *= a;
    return *this;
  }

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) {
    a += b;
    return a;
  }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) {
    a -= b;
    return a;
  }
  friend DenseMatrix operator*(const S& a, DenseMatrix m) {
    m *= a;
    return m;
  }
  friend DenseMatrix operator*(DenseMatrix m, const S& a) {
    m *= a;
    return m;
  }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) {
      throw DimensionError("matmul shape mismatch: (" +
                           std::to_string(a.rows_) + "x" +
                           std::to_string(a.cols_) + ") * (" +
                           std::to_string(b.rows_) + "x" +
                           std::to_string(b.cols_) + ")");
    }
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const S aik = a(i, k);
        if (aik == S{}) continue;
        const S* brow = &b.data_[k * b.cols_];
        S* crow = &c.data_[i * b.cols_];
        for (std::size_t j = 0; j < b.cols_; ++j) crow[j] += aik * brow[j];
      }
    }
    return c;
  }

 private:
  void check_same_shape(const DenseMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw DimensionError("shape mismatch in elementwise op");
    }
  }

  std::size_t rows_, cols_;
  std::vector<S> data_;
};

using ComplexMatrix = DenseMatrix<cplx>;
using RealMatrix = DenseMatrix<double>;

/// Tr(a b) without forming the product.
template <typename S>
S trace_of_product(const DenseMatrix<S>& a, const DenseMatrix<S>& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw DimensionError("trace_of_product shape mismatch");
  }
  S t{};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t += a(i, j) * b(j, i);
  return t;
}

/// Frobenius inner product <a, b> = Tr(a^dag b).
inline cplx inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("inner product shape mismatch");
  }
  cplx t{};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      t += std::conj(a(i, j)) * b(i, j);
  return t;
}

inline double inner(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("inner product shape mismatch");
  }
  double t = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t += a(i, j) * b(i, j);
  return t;
}

template <typename S>
DenseMatrix<S> kron(const DenseMatrix<S>& a, const DenseMatrix<S>& b) {
  DenseMatrix<S> k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ia = 0; ia < a.rows(); ++ia)
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
      const S av = a(ia, ja);
      if (av == S{}) continue;
      for (std::size_t ib = 0; ib < b.rows(); ++ib)
        for (std::size_t jb = 0; jb < b.cols(); ++jb)
          k(ia * b.rows() + ib, ja * b.cols() + jb) = av * b(ib, jb);
    }
  return k;
}

enum class TracedFactor { Last, First };

/// Partial trace of a square matrix on a two-factor space.
///
/// With TracedFactor::Last the input lives on H_keep (x) H_trace and the
/// output entry [i,j] is the trace of the (i,j) sub-block of size
/// dim_trace x dim_trace. TracedFactor::First traces the leading factor.
template <typename S>
DenseMatrix<S> partial_trace(const DenseMatrix<S>& m, std::size_t dim_keep,
                             std::size_t dim_trace, TracedFactor which) {
  if (!m.is_square() || m.rows() != dim_keep * dim_trace) {
    throw DimensionError("partial_trace: matrix is not dim_keep*dim_trace square");
  }
  DenseMatrix<S> out(dim_keep, dim_keep);
  if (which == TracedFactor::Last) {
    for (std::size_t i = 0; i < dim_keep; ++i)
      for (std::size_t j = 0; j < dim_keep; ++j) {
        S t{};
        for (std::size_t k = 0; k < dim_trace; ++k)
          t += m(i * dim_trace + k, j * dim_trace + k);
        out(i, j) = t;
      }
  } else {
    for (std::size_t i = 0; i < dim_keep; ++i)
      for (std::size_t j = 0; j < dim_keep; ++j) {
        S t{};
        for (std::size_t k = 0; k < dim_trace; ++k)
          t += m(k * dim_keep + i, k * dim_keep + j);
        out(i, j) = t;
      }
  }
  return out;
}

/// max |m - m^dag| over entries.
inline double hermiticity_defect(const ComplexMatrix& m) {
  if (!m.is_square()) throw DimensionError("hermiticity of non-square matrix");
  double d = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
  return d;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.is_square() && hermiticity_defect(m) <= tol;
}

/// (m + m^dag)/2.
inline ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  ComplexMatrix h(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return h;
}

inline RealMatrix real_part(const ComplexMatrix& m) {
  RealMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).real();
  return r;
}

inline RealMatrix imag_part(const ComplexMatrix& m) {
  RealMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).imag();
  return r;
}

inline ComplexMatrix to_complex(const RealMatrix& m) {
  ComplexMatrix c(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = m(i, j);
  return c;
}

}  // namespace qecopt
