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

#include "qecopt/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qecopt/linalg.hpp"

namespace qecopt {

namespace {

constexpr double kMuGrowth = 10.0;
constexpr double kCenterDecrement = 1e-12;  // stop centering at lambda^2/2 below this
constexpr double kMu0 = 1.0;

NumericPolicy loose_hermitian(const NumericPolicy& policy) {
  NumericPolicy p = policy;
  p.hermitian_symmetry = 1e-8;
  return p;
}

// ---------------------------------------------------------------------------
// Complex <-> real-symmetric embedding.
//
// T(M) = [[Re M, -Im M], [Im M, Re M]] is an algebra homomorphism with
// T(M^dag) = T(M)^T, so Hermitian PSD complex matrices map to symmetric PSD
// real ones. The embedded basis doubles: {T(B_i)/sqrt(2), T(iB_i)/sqrt(2)}
// stays orthonormal, and data matrices embed as T(W)/2 so objectives carry
// over exactly.
// ---------------------------------------------------------------------------

RealMatrix embed_t(const ComplexMatrix& m) {
  const std::size_t r = m.rows(), c = m.cols();
  RealMatrix out(2 * r, 2 * c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const double re = m(i, j).real(), im = m(i, j).imag();
      out(i, j) = re;
      out(i, j + c) = -im;
      out(i + r, j) = im;
      out(i + r, j + c) = re;
    }
  return out;
}

ComplexMatrix fold_c(const RealMatrix& m) {
  if (m.rows() % 2 != 0 || m.cols() % 2 != 0) {
    throw DimensionError("fold_c: embedded matrix must have even dimensions");
  }
  const std::size_t r = m.rows() / 2, c = m.cols() / 2;
  ComplexMatrix out(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      out(i, j) = cplx(0.5 * (m(i, j) + m(i + r, j + c)),
                       0.5 * (m(i + r, j) - m(i, j + c)));
    }
  return out;
}

struct EmbeddedSdp {
  std::size_t en = 0;                    // embedded variable dimension, 2n
  std::size_t em = 0;                    // embedded constraint dimension, 2m
  std::vector<RealMatrix> w_list;        // en x en symmetric
  std::vector<RealMatrix> basis;         // en elements of shape 2r x em
  std::vector<RealMatrix> products;      // products[i*en+j] = basis[i]^T basis[j]

  RealMatrix constraint(const RealMatrix& x) const {  // A(X)
    RealMatrix out(em, em);
    for (std::size_t i = 0; i < en; ++i)
      for (std::size_t j = 0; j < en; ++j) {
        const double xij = x(i, j);
        if (xij == 0.0) continue;
        const RealMatrix& p = products[i * en + j];
        for (std::size_t u = 0; u < em; ++u)
          for (std::size_t v = 0; v < em; ++v) out(u, v) += xij * p(u, v);
      }
    return out;
  }

  RealMatrix k_op(const RealMatrix& y) const {  // K(Y)_ij = Tr(B_j^T B_i Y)
    RealMatrix out(en, en);
    for (std::size_t i = 0; i < en; ++i)
      for (std::size_t j = 0; j < en; ++j)
        out(i, j) = trace_of_product(products[j * en + i], y);
    return out;
  }
};

EmbeddedSdp embed_problem(const SdpProblem& p) {
  EmbeddedSdp e;
  e.en = 2 * p.n;
  e.em = 2 * p.m;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  e.basis.reserve(e.en);
  for (std::size_t i = 0; i < p.n; ++i) {
    e.basis.push_back(inv_sqrt2 * embed_t(p.basis.element(i)));
  }
  for (std::size_t i = 0; i < p.n; ++i) {
    e.basis.push_back(inv_sqrt2 * embed_t(cplx(0, 1) * p.basis.element(i)));
  }
  for (const SdpDataMatrix& w : p.w_list) {
    e.w_list.push_back(0.5 * embed_t(w.w));
  }
  e.products.reserve(e.en * e.en);
  for (std::size_t i = 0; i < e.en; ++i) {
    const RealMatrix bt = e.basis[i].transpose();
    for (std::size_t j = 0; j < e.en; ++j) e.products.push_back(bt * e.basis[j]);
  }
  return e;
}

// Orthonormal basis of real symmetric k x k matrices: E_ii first, then
// (E_ij + E_ji)/sqrt(2) in row-major pair order.
std::vector<RealMatrix> symmetric_basis(std::size_t k) {
  std::vector<RealMatrix> out;
  out.reserve(k * (k + 1) / 2);
  for (std::size_t i = 0; i < k; ++i) {
    RealMatrix e(k, k);
    e(i, i) = 1.0;
    out.push_back(std::move(e));
  }
  const double w = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      RealMatrix e(k, k);
      e(i, j) = e(j, i) = w;
      out.push_back(std::move(e));
    }
  return out;
}

// Orthonormal basis of complex Hermitian k x k matrices (k^2 real dims).
std::vector<ComplexMatrix> hermitian_basis(std::size_t k) {
  std::vector<ComplexMatrix> out;
  out.reserve(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    ComplexMatrix e(k, k);
    e(i, i) = 1.0;
    out.push_back(std::move(e));
  }
  const double w = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      ComplexMatrix e(k, k);
      e(i, j) = e(j, i) = w;
      out.push_back(e);
      ComplexMatrix f(k, k);
      f(i, j) = cplx(0, -w);
      f(j, i) = cplx(0, w);
      out.push_back(std::move(f));
    }
  return out;
}

// Real coordinates of a Hermitian matrix in the hermitian_basis order.
std::vector<double> herm_coords(const ComplexMatrix& m) {
  const std::size_t k = m.rows();
  std::vector<double> out;
  out.reserve(k * k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(m(i, i).real());
  const double s = std::sqrt(2.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      out.push_back(s * m(i, j).real());
      out.push_back(-s * m(i, j).imag());
    }
  return out;
}

RealMatrix solve_spd(const RealMatrix& h, const RealMatrix& rhs) {
  // Ridge retries cover the nearly singular Hessians that show up late on
  // the central path.
  double ridge = 0.0;
  for (int attempt = 0; attempt < 4; ++attempt) {
    RealMatrix hr = h;
    if (ridge > 0.0) {
      for (std::size_t i = 0; i < hr.rows(); ++i) hr(i, i) += ridge;
    }
    if (auto l = cholesky(hr)) return cholesky_solve(*l, rhs);
    double tr = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i) tr += std::abs(h(i, i));
    ridge = (ridge == 0.0) ? 1e-14 * std::max(tr, 1.0) : ridge * 1e4;
  }
  throw NumericalError("sdp: Newton system lost positive definiteness");
}

struct DualCoreResult {
  RealMatrix y;
  double mu_final = 0.0;
  int newton_steps = 0;
};

// minimize Tr Y  s.t.  K(Y) - W >= 0 (embedded, real symmetric).
DualCoreResult dual_barrier(const EmbeddedSdp& e, const NumericPolicy& policy,
                            const TraceSink& trace) {
  const RealMatrix& w = e.w_list[0];
  const std::vector<RealMatrix> ybasis = symmetric_basis(e.em);
  const std::size_t d = ybasis.size();

  std::vector<RealMatrix> kb;  // K(H_a), symmetric en x en
  kb.reserve(d);
  for (const RealMatrix& h : ybasis) kb.push_back(e.k_op(h));

  // Strictly feasible start: K(cI) = cI under an orthonormal basis.
  RealMatrix y = (sym_max_eig(w) + 1.0) * RealMatrix::identity(e.em);
  const double nu = double(e.en);
  double mu = kMu0;
  int steps = 0;

  auto slack_of = [&](const RealMatrix& yy) { return e.k_op(yy) - w; };

  for (;;) {
    for (int center_it = 0;; ++center_it) {
      if (steps >= policy.newton_max_iters) {
        throw NumericalError("solve_dual: max Newton iterations exceeded");
      }
      const RealMatrix s = slack_of(y);
      auto l = cholesky(s);
      if (!l) throw NumericalError("solve_dual: slack left the PSD cone");
      const RealMatrix sinv = cholesky_solve(*l, RealMatrix::identity(e.en));

      std::vector<RealMatrix> t(d);
      RealMatrix grad(d, 1);
      for (std::size_t a = 0; a < d; ++a) {
        t[a] = sinv * kb[a];
        grad(a, 0) = mu * ybasis[a].trace() - t[a].trace();
      }
      RealMatrix hess(d, d);
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) {
          const double v = trace_of_product(t[a], t[b]);
          hess(a, b) = v;
          hess(b, a) = v;
        }
      RealMatrix delta = solve_spd(hess, double(-1.0) * grad);
      double lambda2 = 0.0;
      for (std::size_t a = 0; a < d; ++a) lambda2 -= grad(a, 0) * delta(a, 0);
      if (lambda2 / 2.0 <= kCenterDecrement || center_it > 50) break;

      const double base_obj =
          mu * y.trace() - log_det_from_cholesky(*l);
      double alpha = 1.0;
      bool accepted = false;
      while (alpha > 1e-14) {
        RealMatrix ytrial = y;
        for (std::size_t a = 0; a < d; ++a)
          ytrial += (alpha * delta(a, 0)) * ybasis[a];
        if (auto lt = cholesky(slack_of(ytrial))) {
          const double obj =
              mu * ytrial.trace() - log_det_from_cholesky(*lt);
          if (obj <= base_obj - 1e-4 * alpha * lambda2) {
            y = ytrial;
            accepted = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      ++steps;
      if (trace) trace({"dual", steps, y.trace(), nu / mu, alpha});
      if (!accepted) break;  // stalled line search: centered to round-off
    }
    if (nu / mu <= policy.sdp_duality_measure) break;
    mu *= kMuGrowth;
  }
  return {y, mu, steps};
}

struct PrimalGeometry {
  RealMatrix x0;                        // strictly feasible
  std::vector<RealMatrix> null_basis;   // orthonormal, spans ker A on sym
};

PrimalGeometry build_primal_geometry(const EmbeddedSdp& e) {
  const std::vector<RealMatrix> sym_m = symmetric_basis(e.em);
  const std::vector<RealMatrix> sym_n = symmetric_basis(e.en);
  const std::size_t dm = sym_m.size(), dn = sym_n.size();

  // Row space of A = span{K(H_a)}; orthonormalize it first.
  std::vector<RealMatrix> range;
  range.reserve(dm);
  for (const RealMatrix& h : sym_m) {
    RealMatrix v = e.k_op(h);
    for (int pass = 0; pass < 2; ++pass)
      for (const RealMatrix& u : range) v -= inner(u, v) * u;
    const double norm = v.frobenius_norm();
    if (norm < 1e-10) {
      throw NumericalError("sdp: equality constraint map is rank deficient");
    }
    range.push_back((1.0 / norm) * v);
  }

  PrimalGeometry g;
  g.null_basis.reserve(dn - dm);
  for (const RealMatrix& h : sym_n) {
    RealMatrix v = h;
    for (int pass = 0; pass < 2; ++pass) {
      for (const RealMatrix& u : range) v -= inner(u, v) * u;
      for (const RealMatrix& u : g.null_basis) v -= inner(u, v) * u;
    }
    const double norm = v.frobenius_norm();
    if (norm > 1e-8) g.null_basis.push_back((1.0 / norm) * v);
    if (g.null_basis.size() == dn - dm) break;
  }
  if (g.null_basis.size() != dn - dm) {
    throw NumericalError("sdp: null-space basis construction fell short");
  }

  // Minimum-norm particular solution X0 = K(M) with A(K(M)) = I; A K is
  // positive definite when A is surjective.
  RealMatrix gram(dm, dm);
  std::vector<RealMatrix> ak(dm);
  for (std::size_t a = 0; a < dm; ++a) ak[a] = e.constraint(e.k_op(sym_m[a]));
  for (std::size_t a = 0; a < dm; ++a)
    for (std::size_t b = 0; b < dm; ++b) gram(a, b) = inner(sym_m[a], ak[b]);
  RealMatrix rhs(dm, 1);
  const RealMatrix eye_m = RealMatrix::identity(e.em);
  for (std::size_t a = 0; a < dm; ++a) rhs(a, 0) = inner(sym_m[a], eye_m);
  const RealMatrix coeff = solve_spd(gram, rhs);
  RealMatrix m0(e.em, e.em);
  for (std::size_t a = 0; a < dm; ++a) m0 += coeff(a, 0) * sym_m[a];
  g.x0 = e.k_op(m0);
  if (!cholesky(g.x0)) {
    throw NumericalError("sdp: particular feasible point is not positive definite");
  }
  return g;
}

struct PrimalCoreResult {
  RealMatrix x;
  double t = 0.0;                // epigraph value (robust only)
  double mu_final = 0.0;
  int newton_steps = 0;
  std::vector<double> slack;     // robust inequality slacks at the end
};

// maximize Tr X W (or the epigraph t against several W) over the affine
// slice X = X0 + sum_k z_k D_k, X >= 0, by a log-det barrier.
PrimalCoreResult primal_barrier(const EmbeddedSdp& e, const PrimalGeometry& geo,
                                bool robust, const NumericPolicy& policy,
                                const TraceSink& trace, const char* stage) {
  const std::size_t d = geo.null_basis.size();
  const std::size_t ell = e.w_list.size();
  // c[alpha][k] = Tr(D_k W_alpha), s0[alpha] = Tr(X0 W_alpha).
  std::vector<std::vector<double>> c(ell, std::vector<double>(d));
  std::vector<double> s0(ell);
  for (std::size_t al = 0; al < ell; ++al) {
    for (std::size_t k = 0; k < d; ++k)
      c[al][k] = inner(geo.null_basis[k], e.w_list[al]);
    s0[al] = inner(geo.x0, e.w_list[al]);
  }

  std::vector<double> z(d, 0.0);
  double tvar = 0.0;
  if (robust) {
    tvar = *std::min_element(s0.begin(), s0.end()) - 1.0;
  }
  const double nu = double(e.en) + (robust ? double(ell) : 0.0);
  const std::size_t nvar = d + (robust ? 1 : 0);

  auto x_of = [&](const std::vector<double>& zz) {
    RealMatrix x = geo.x0;
    for (std::size_t k = 0; k < d; ++k) {
      if (zz[k] != 0.0) x += zz[k] * geo.null_basis[k];
    }
    return x;
  };
  auto slacks_of = [&](const std::vector<double>& zz, double tt) {
    std::vector<double> s(ell);
    for (std::size_t al = 0; al < ell; ++al) {
      double v = s0[al];
      for (std::size_t k = 0; k < d; ++k) v += zz[k] * c[al][k];
      s[al] = v - (robust ? tt : 0.0);
    }
    return s;
  };

  double mu = kMu0;
  int steps = 0;
  for (;;) {
    for (int center_it = 0;; ++center_it) {
      if (steps >= policy.newton_max_iters) {
        throw NumericalError(std::string(stage) + ": max Newton iterations exceeded");
      }
      const RealMatrix x = x_of(z);
      auto l = cholesky(x);
      if (!l) throw NumericalError(std::string(stage) + ": iterate left the PSD cone");
      const RealMatrix xinv = cholesky_solve(*l, RealMatrix::identity(e.en));
      const std::vector<double> s = slacks_of(z, tvar);

      std::vector<RealMatrix> mk(d);
      for (std::size_t k = 0; k < d; ++k) mk[k] = xinv * geo.null_basis[k];

      RealMatrix grad(nvar, 1);
      for (std::size_t k = 0; k < d; ++k) {
        double gk = -mk[k].trace();
        if (robust) {
          for (std::size_t al = 0; al < ell; ++al) gk -= c[al][k] / s[al];
        } else {
          gk -= mu * c[0][k];
        }
        grad(k, 0) = gk;
      }
      if (robust) {
        double gt = -mu;
        for (std::size_t al = 0; al < ell; ++al) gt += 1.0 / s[al];
        grad(d, 0) = gt;
      }

      RealMatrix hess(nvar, nvar);
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t j = k; j < d; ++j) {
          double v = trace_of_product(mk[k], mk[j]);
          if (robust) {
            for (std::size_t al = 0; al < ell; ++al)
              v += c[al][k] * c[al][j] / (s[al] * s[al]);
          }
          hess(k, j) = v;
          hess(j, k) = v;
        }
      if (robust) {
        for (std::size_t k = 0; k < d; ++k) {
          double v = 0.0;
          for (std::size_t al = 0; al < ell; ++al)
            v -= c[al][k] / (s[al] * s[al]);
          hess(k, d) = v;
          hess(d, k) = v;
        }
        double v = 0.0;
        for (std::size_t al = 0; al < ell; ++al) v += 1.0 / (s[al] * s[al]);
        hess(d, d) = v;
      }

      RealMatrix delta = solve_spd(hess, double(-1.0) * grad);
      double lambda2 = 0.0;
      for (std::size_t k = 0; k < nvar; ++k) lambda2 -= grad(k, 0) * delta(k, 0);
      if (lambda2 / 2.0 <= kCenterDecrement || center_it > 50) break;

      auto barrier_obj = [&](const std::vector<double>& zz, double tt,
                             double* ok) -> double {
        const RealMatrix xx = x_of(zz);
        auto lx = cholesky(xx);
        const std::vector<double> ss = slacks_of(zz, tt);
        bool feasible = bool(lx);
        for (double sv : ss) feasible = feasible && sv > 0.0;
        if (!feasible) {
          *ok = 0.0;
          return 0.0;
        }
        *ok = 1.0;
        double obj = -log_det_from_cholesky(*lx);
        if (robust) {
          obj -= mu * tt;
          for (double sv : ss) obj -= std::log(sv);
        } else {
          double lin = 0.0;
          for (std::size_t k = 0; k < d; ++k) lin += zz[k] * c[0][k];
          obj -= mu * lin;
        }
        return obj;
      };

      double ok = 0.0;
      const double base_obj = barrier_obj(z, tvar, &ok);
      double alpha = 1.0;
      bool accepted = false;
      while (alpha > 1e-14) {
        std::vector<double> zt = z;
        for (std::size_t k = 0; k < d; ++k) zt[k] += alpha * delta(k, 0);
        const double tt = tvar + (robust ? alpha * delta(d, 0) : 0.0);
        const double obj = barrier_obj(zt, tt, &ok);
        if (ok != 0.0 && obj <= base_obj - 1e-4 * alpha * lambda2) {
          z = zt;
          tvar = tt;
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      ++steps;
      if (trace) {
        double objective = robust ? tvar : slacks_of(z, 0.0)[0];
        trace({stage, steps, objective, nu / mu, alpha});
      }
      if (!accepted) break;
    }
    if (nu / mu <= policy.sdp_duality_measure) break;
    mu *= kMuGrowth;
  }

  PrimalCoreResult out;
  out.x = x_of(z);
  out.t = tvar;
  out.mu_final = mu;
  out.newton_steps = steps;
  out.slack = slacks_of(z, tvar);
  return out;
}

// Least-squares dual estimate from the primal central point: at the center
// K(Y) = mu W + X^{-1} holds for the scaled multiplier, so Y solves
// K(Y) = W + X^{-1}/mu in the least-squares sense.
RealMatrix dual_estimate_from_primal(const EmbeddedSdp& e, const RealMatrix& x,
                                     const RealMatrix& w, double mu) {
  auto l = cholesky(x);
  if (!l) throw NumericalError("sdp: primal point not positive definite");
  const RealMatrix xinv = cholesky_solve(*l, RealMatrix::identity(e.en));
  RealMatrix target = w + (1.0 / mu) * xinv;

  const std::vector<RealMatrix> sym_m = symmetric_basis(e.em);
  const std::size_t dm = sym_m.size();
  std::vector<RealMatrix> kb(dm);
  for (std::size_t a = 0; a < dm; ++a) kb[a] = e.k_op(sym_m[a]);
  RealMatrix gram(dm, dm), rhs(dm, 1);
  for (std::size_t a = 0; a < dm; ++a) {
    for (std::size_t b = a; b < dm; ++b) {
      const double v = inner(kb[a], kb[b]);
      gram(a, b) = v;
      gram(b, a) = v;
    }
    rhs(a, 0) = inner(kb[a], target);
  }
  const RealMatrix coeff = solve_spd(gram, rhs);
  RealMatrix y(e.em, e.em);
  for (std::size_t a = 0; a < dm; ++a) y += coeff(a, 0) * sym_m[a];
  return y;
}

void require_single_w(const SdpProblem& p, const char* who) {
  if (p.w_list.size() != 1) {
    throw ValidationError(std::string(who) + " expects exactly one data matrix");
  }
}

double real_trace_with(const ComplexMatrix& x, const ComplexMatrix& w) {
  return trace_of_product(x, w).real();
}

}  // namespace

SdpProblem SdpProblem::make(std::vector<SdpDataMatrix> w_list, BasisSet basis,
                            const NumericPolicy& policy) {
  if (w_list.empty()) throw ValidationError("SdpProblem: no data matrices");
  const std::size_t n = basis.size();
  const std::size_t m = basis.cols();
  NumericPolicy loose = loose_hermitian(policy);
  for (const SdpDataMatrix& w : w_list) {
    if (!w.w.is_square() || w.w.rows() != n) {
      throw DimensionError("SdpProblem: data matrix dimension must equal basis size");
    }
    const double scale = 1.0 + w.w.max_abs();
    if (hermiticity_defect(w.w) > policy.hermitian_symmetry * scale) {
      throw NumericalError("SdpProblem: data matrix is not Hermitian");
    }
    EigResult eig = hermitian_eig(w.w, loose);
    if (eig.eigenvalues.back() < -1e-10 * scale) {
      throw NumericalError("SdpProblem: data matrix is not positive semidefinite");
    }
  }
  return SdpProblem{std::move(w_list), std::move(basis), m, n};
}

ComplexMatrix apply_basis_constraint(const BasisSet& basis, const ComplexMatrix& x) {
  const std::size_t n = basis.size();
  if (!x.is_square() || x.rows() != n) {
    throw DimensionError("apply_basis_constraint: X must be basis-sized");
  }
  const std::size_t m = basis.cols();
  ComplexMatrix out(m, m);
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexMatrix bi_dag = basis.element(i).adjoint();
    for (std::size_t j = 0; j < n; ++j) {
      const cplx xij = x(i, j);
      if (xij == cplx(0.0)) continue;
      out += xij * (bi_dag * basis.element(j));
    }
  }
  return out;
}

ComplexMatrix apply_k_operator(const BasisSet& basis, const ComplexMatrix& y) {
  const std::size_t n = basis.size();
  const std::size_t m = basis.cols();
  if (!y.is_square() || y.rows() != m) {
    throw DimensionError("apply_k_operator: Y must be m x m");
  }
  ComplexMatrix out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const ComplexMatrix bj_dag_y = basis.element(j).adjoint();
    for (std::size_t i = 0; i < n; ++i) {
      out(i, j) = trace_of_product(bj_dag_y * basis.element(i), y);
    }
  }
  return out;
}

SdpSolution solve_dual(const SdpProblem& p, const SolveOptions& opts) {
  require_single_w(p, "solve_dual");
  const EmbeddedSdp e = embed_problem(p);
  const DualCoreResult core = dual_barrier(e, opts.policy, opts.trace);

  SdpSolution sol;
  sol.y = hermitian_part(cplx(2.0) * fold_c(core.y));
  sol.dual_value = core.y.trace();
  sol.iterations = core.newton_steps;
  sol.x = dual_to_primal(p, sol.y, opts.policy);
  sol.primal_value = real_trace_with(sol.x, p.w_list[0].w);
  sol.gap = std::abs(sol.dual_value - sol.primal_value);
  return sol;
}

ComplexMatrix dual_to_primal(const SdpProblem& p, const ComplexMatrix& y,
                             const NumericPolicy& policy) {
  require_single_w(p, "dual_to_primal");
  const ComplexMatrix& w = p.w_list[0].w;
  const ComplexMatrix slack =
      hermitian_part(apply_k_operator(p.basis, y) - w);
  EigResult eig = hermitian_eig(slack, loose_hermitian(policy));
  const std::size_t n = p.n;
  const double wscale = std::max(spectral_norm(w), 1e-30);

  std::string failure = "dual_to_primal: empty null space";
  for (const double factor : {policy.nullspace_cutoff, policy.nullspace_cutoff_wide}) {
    // Absolute floor handles vanishing data (W ~ 0) where the slack itself
    // is a round-off-sized multiple of the identity.
    const double cutoff = std::max(factor * wscale, 1e-9);
    std::size_t q = 0;
    while (q < n && eig.eigenvalues[n - 1 - q] <= cutoff) ++q;
    if (q == 0) continue;

    ComplexMatrix null_vecs(n, q);
    for (std::size_t c = 0; c < q; ++c)
      for (std::size_t r = 0; r < n; ++r)
        null_vecs(r, c) = eig.eigenvectors(r, n - q + c);

    // Small constrained solve inside the null space: find Hermitian Xi with
    // A(N Xi N^dag) = I_m.
    const std::vector<ComplexMatrix> xi_basis = hermitian_basis(q);
    const std::size_t dq = xi_basis.size();
    const std::size_t dm = p.m * p.m;
    ComplexMatrix amat(dm, dq);
    for (std::size_t tcol = 0; tcol < dq; ++tcol) {
      const ComplexMatrix ax = apply_basis_constraint(
          p.basis, null_vecs * xi_basis[tcol] * null_vecs.adjoint());
      const std::vector<double> col = herm_coords(ax);
      for (std::size_t r = 0; r < dm; ++r) amat(r, tcol) = col[r];
    }
    ComplexMatrix rhs(dm, 1);
    {
      const std::vector<double> id = herm_coords(ComplexMatrix::identity(p.m));
      for (std::size_t r = 0; r < dm; ++r) rhs(r, 0) = id[r];
    }
    const ComplexMatrix coeff = lstsq_min_norm(amat, rhs);
    ComplexMatrix xi(q, q);
    for (std::size_t tcol = 0; tcol < dq; ++tcol)
      xi += coeff(tcol, 0) * xi_basis[tcol];
    ComplexMatrix x = hermitian_part(null_vecs * hermitian_part(xi) * null_vecs.adjoint());

    const double eq_res =
        (apply_basis_constraint(p.basis, x) - ComplexMatrix::identity(p.m))
            .frobenius_norm();
    if (eq_res > policy.sdp_equality_residual * (1.0 + std::sqrt(double(p.m)))) {
      failure = "dual_to_primal: null space too small, equality residual " +
                std::to_string(eq_res);
      continue;
    }
    EigResult xeig = hermitian_eig(x, loose_hermitian(policy));
    if (xeig.eigenvalues.back() < -1e-9 * std::max(1.0, x.max_abs())) {
      failure = "dual_to_primal: recovered X is indefinite";
      continue;
    }
    return x;
  }
  throw NumericalError(failure);
}

SdpSolution solve_primal(const SdpProblem& p, const SolveOptions& opts) {
  require_single_w(p, "solve_primal");
  const EmbeddedSdp e = embed_problem(p);
  const PrimalGeometry geo = build_primal_geometry(e);
  const PrimalCoreResult core =
      primal_barrier(e, geo, /*robust=*/false, opts.policy, opts.trace, "primal");

  const RealMatrix yest =
      dual_estimate_from_primal(e, core.x, e.w_list[0], core.mu_final);

  SdpSolution sol;
  sol.x = hermitian_part(fold_c(core.x));
  sol.y = hermitian_part(cplx(2.0) * fold_c(yest));
  sol.primal_value = real_trace_with(sol.x, p.w_list[0].w);
  sol.dual_value = yest.trace();
  sol.gap = std::abs(sol.dual_value - sol.primal_value);
  sol.iterations = core.newton_steps;
  return sol;
}

SdpSolution solve_robust(const SdpProblem& p, const SolveOptions& opts) {
  if (p.w_list.size() < 2) {
    throw ValidationError("solve_robust expects at least two data matrices");
  }
  const EmbeddedSdp e = embed_problem(p);
  const PrimalGeometry geo = build_primal_geometry(e);
  const PrimalCoreResult core =
      primal_barrier(e, geo, /*robust=*/true, opts.policy, opts.trace, "robust");

  // Active-constraint weights off the central path: lambda_a = 1/(mu s_a),
  // normalized; the stationarity condition makes them sum to 1 already.
  const std::size_t ell = p.w_list.size();
  std::vector<double> lambda(ell);
  double lsum = 0.0;
  for (std::size_t a = 0; a < ell; ++a) {
    lambda[a] = 1.0 / (core.mu_final * std::max(core.slack[a], 1e-300));
    lsum += lambda[a];
  }
  for (double& l : lambda) l /= lsum;

  // Dual certificate for the mixture problem min Tr Y, K(Y) >= sum_a l_a W_a.
  EmbeddedSdp emix = e;
  emix.w_list.clear();
  RealMatrix wmix(e.en, e.en);
  for (std::size_t a = 0; a < ell; ++a) wmix += lambda[a] * e.w_list[a];
  emix.w_list.push_back(wmix);
  const DualCoreResult dual = dual_barrier(emix, opts.policy, opts.trace);

  ComplexMatrix wmix_c(p.n, p.n);
  for (std::size_t a = 0; a < ell; ++a) wmix_c += cplx(lambda[a]) * p.w_list[a].w;

  SdpSolution sol;
  sol.x = hermitian_part(fold_c(core.x));
  sol.y = hermitian_part(cplx(2.0) * fold_c(dual.y));
  sol.t = core.t;
  sol.lambda = lambda;
  sol.primal_value = real_trace_with(sol.x, wmix_c);
  sol.dual_value = dual.y.trace();
  sol.gap = std::abs(sol.dual_value - sol.primal_value);
  sol.iterations = core.newton_steps + dual.newton_steps;
  return sol;
}

CertifyReport certify(const SdpSolution& sol, const SdpProblem& p,
                      const NumericPolicy& policy) {
  ComplexMatrix w_eff(p.n, p.n);
  if (p.w_list.size() == 1) {
    w_eff = p.w_list[0].w;
  } else {
    if (sol.lambda.size() != p.w_list.size()) {
      throw ValidationError("certify: robust solution is missing mixture weights");
    }
    for (std::size_t a = 0; a < p.w_list.size(); ++a)
      w_eff += cplx(sol.lambda[a]) * p.w_list[a].w;
  }

  CertifyReport rep;
  const double primal = real_trace_with(sol.x, w_eff);
  const double dual = sol.y.trace().real();
  rep.gap = std::abs(primal - dual);

  const ComplexMatrix slack =
      hermitian_part(apply_k_operator(p.basis, sol.y) - w_eff);
  rep.slackness = (slack * sol.x).frobenius_norm();
  rep.equality_residual =
      (apply_basis_constraint(p.basis, sol.x) - ComplexMatrix::identity(p.m))
          .frobenius_norm();
  const NumericPolicy loose = loose_hermitian(policy);
  rep.x_min_eigenvalue = hermitian_eig(sol.x, loose).eigenvalues.back();
  rep.slack_min_eigenvalue = hermitian_eig(slack, loose).eigenvalues.back();
  if (sol.t) {
    for (std::size_t a = 0; a < p.w_list.size(); ++a) {
      rep.robust_t_violation = std::max(
          rep.robust_t_violation, *sol.t - real_trace_with(sol.x, p.w_list[a].w));
    }
  }

  const double scale = 1.0 + w_eff.max_abs();
  rep.pass = rep.gap <= policy.sdp_gap && rep.slackness <= policy.sdp_gap &&
             rep.equality_residual <= 1e-6 &&
             rep.x_min_eigenvalue >= -1e-9 * std::max(1.0, sol.x.max_abs()) &&
             rep.slack_min_eigenvalue >= -1e-8 * scale &&
             rep.robust_t_violation <= policy.sdp_gap;

  std::ostringstream os;
  os << "gap=" << rep.gap << " slackness=" << rep.slackness
     << " equality=" << rep.equality_residual
     << " min_eig_x=" << rep.x_min_eigenvalue
     << " min_eig_slack=" << rep.slack_min_eigenvalue;
  if (sol.t) os << " robust_t_violation=" << rep.robust_t_violation;
  rep.detail = os.str();
  return rep;
}

double flops_primal_per_iteration(double r, double m) {
  const double r2 = r * r;
  return r2 * (r2 - 1.0) * (r2 - 1.0) * std::pow(m, 6);
}

double flops_dual_per_iteration(double r, double m) {
  return r * r * std::pow(m, 6);
}

double flop_estimate(int qubits_sys, int qubits_anc, FlopMode mode) {
  if (qubits_sys < 0 || qubits_anc < 0) {
    throw ValidationError("flop_estimate: qubit counts must be nonnegative");
  }
  const double ns = std::exp2(qubits_sys);
  const double nca = std::exp2(qubits_anc);
  const double nc = ns * nca;
  switch (mode) {
    case FlopMode::PrimalRecovery:
      return flops_primal_per_iteration(ns, nc);
    case FlopMode::PrimalEncoding:
      return flops_primal_per_iteration(nc, ns);
    case FlopMode::Dual:
      return flops_dual_per_iteration(ns, nc);
  }
  throw ValidationError("flop_estimate: unknown mode");
}

}  // namespace qecopt
