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

#include "qecopt/design.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qecopt/linalg.hpp"

namespace qecopt {

namespace {

NumericPolicy loose_hermitian(const NumericPolicy& policy) {
  NumericPolicy p = policy;
  p.hermitian_symmetry = 1e-8;
  return p;
}

QuantumChannel trivial_encoding(std::size_t ns, std::size_t nca) {
  // rho -> rho (x) |0><0| as a single isometric Kraus element.
  ComplexMatrix c(ns * nca, ns);
  for (std::size_t i = 0; i < ns; ++i) c(i * nca, i) = 1.0;
  return QuantumChannel::make({c}, 1e-12);
}

double pipeline_f_avg(const QuantumChannel& recovery, const QuantumChannel& error,
                      const QuantumChannel& encoding, const ComplexMatrix& target) {
  return f_avg(compose(recovery, compose(error, encoding)), target);
}

/// Extraction plus exact trace-preservation repair; the repair moves the
/// channel by at most the solver's equality residual.
QuantumChannel extract_channel(const ProcessMatrix& pm, const NumericPolicy& policy) {
  return project_to_tp(kraus_from_process(pm, policy));
}

struct CertAggregate {
  int checked = 0;
  double worst_gap = 0.0;
  double worst_slackness = 0.0;
  bool all_pass = true;

  void add(const CertifyReport& rep) {
    ++checked;
    worst_gap = std::max(worst_gap, rep.gap);
    worst_slackness = std::max(worst_slackness, rep.slackness);
    all_pass = all_pass && rep.pass;
  }
};

}  // namespace

void ProcessMatrix::validate(const NumericPolicy& policy) const {
  if (!x.is_square() || x.rows() != basis.size()) {
    throw DimensionError("ProcessMatrix: X must be basis-sized and square");
  }
  const double scale = std::max(1.0, x.max_abs());
  if (hermiticity_defect(x) > 1e-10 * scale) {
    throw NumericalError("ProcessMatrix: X is not Hermitian");
  }
  EigResult eig = hermitian_eig(x, loose_hermitian(policy));
  if (eig.eigenvalues.back() < -1e-9 * scale) {
    throw NumericalError("ProcessMatrix: X has eigenvalue " +
                         std::to_string(eig.eigenvalues.back()));
  }
  const double eq =
      (apply_basis_constraint(basis, x) - ComplexMatrix::identity(basis.cols()))
          .frobenius_norm();
  if (eq > 1e-7) {
    throw NumericalError("ProcessMatrix: equality residual " + std::to_string(eq));
  }
}

QuantumChannel kraus_from_process(const ProcessMatrix& pm, const NumericPolicy& policy) {
  pm.validate(policy);
  EigResult eig = hermitian_eig(pm.x, loose_hermitian(policy));
  const double tr = pm.x.trace().real();
  const double cutoff = policy.kraus_cutoff * tr;
  std::vector<ComplexMatrix> ks;
  const std::size_t n = pm.basis.size();
  for (std::size_t r = 0; r < n; ++r) {
    const double s = eig.eigenvalues[r];
    if (s <= cutoff) continue;
    std::vector<cplx> coeff(n);
    const double root = std::sqrt(s);
    for (std::size_t i = 0; i < n; ++i) coeff[i] = root * eig.eigenvectors(i, r);
    ks.push_back(pm.basis.combine(coeff));
  }
  if (ks.empty()) throw NumericalError("kraus_from_process: no eigenvalue above cutoff");
  return QuantumChannel::make(std::move(ks), 1e-7);
}

std::size_t dominant_rank(const ProcessMatrix& pm, const NumericPolicy& policy) {
  EigResult eig = hermitian_eig(pm.x, loose_hermitian(policy));
  if (eig.eigenvalues.empty() || eig.eigenvalues[0] <= 0.0) return 0;
  std::size_t k = 1;
  while (k < eig.eigenvalues.size() &&
         eig.eigenvalues[k] / eig.eigenvalues[0] >= policy.dominant_ratio) {
    ++k;
  }
  return k;
}

QuantumChannel partial_trace_recovery(std::size_t ns, std::size_t nca) {
  if (ns < 1 || nca < 1) throw DimensionError("partial_trace_recovery: dims must be >= 1");
  std::vector<ComplexMatrix> ks;
  ks.reserve(nca);
  for (std::size_t r = 0; r < nca; ++r) {
    ComplexMatrix k(ns, ns * nca);
    for (std::size_t i = 0; i < ns; ++i) k(i, i * nca + r) = 1.0;
    ks.push_back(std::move(k));
  }
  return QuantumChannel::make(std::move(ks), 1e-12);
}

HalfStepResult optimize_recovery(const QuantumChannel& error,
                                 const QuantumChannel& encoding,
                                 const ComplexMatrix& target,
                                 const SolveOptions& opts) {
  const std::size_t ns = encoding.dim_in();
  const std::size_t nc = error.dim_in();
  BasisSet basis = canonical_basis(ns, nc, BasisKind::Recovery);
  SdpDataMatrix w = assemble_w_recovery(error, encoding, target, basis);
  SdpProblem prob = SdpProblem::make({std::move(w)}, basis, opts.policy);
  SdpSolution sol = solve_dual(prob, opts);
  ProcessMatrix pm{sol.x, std::move(basis)};
  QuantumChannel ch = extract_channel(pm, opts.policy);
  return HalfStepResult{std::move(ch), std::move(pm), std::move(sol)};
}

HalfStepResult optimize_encoding(const QuantumChannel& error,
                                 const QuantumChannel& recovery,
                                 const ComplexMatrix& target,
                                 const SolveOptions& opts) {
  const std::size_t ns = recovery.dim_out();
  const std::size_t nc = error.dim_in();
  BasisSet basis = canonical_basis(ns, nc, BasisKind::Encoding);
  SdpDataMatrix w = assemble_w_encoding(error, recovery, target, basis);
  SdpProblem prob = SdpProblem::make({std::move(w)}, basis, opts.policy);
  SdpSolution sol = solve_dual(prob, opts);
  ProcessMatrix pm{sol.x, std::move(basis)};
  QuantumChannel ch = extract_channel(pm, opts.policy);
  return HalfStepResult{std::move(ch), std::move(pm), std::move(sol)};
}

namespace {

struct LoopState {
  QuantumChannel recovery;
  QuantumChannel encoding;
  ProcessMatrix x_recovery;
  ProcessMatrix x_encoding;
  ComplexMatrix y_recovery;
  ComplexMatrix y_encoding;
  double upper_bound = 0.0;
};

/// Shared alternation driver; `errors` has one entry for a plain design and
/// several for a robust one.
DesignResult run_design(const std::vector<QuantumChannel>& errors,
                        const QuantumChannel& initial_recovery,
                        const ComplexMatrix& target, double epsilon,
                        int max_iters, const DesignOptions& opts, bool robust) {
  if (errors.empty()) throw ValidationError("design: no error channels");
  const std::size_t nc = errors[0].dim_in();
  for (const QuantumChannel& e : errors) {
    if (e.dim_in() != nc || e.dim_out() != nc) {
      throw DimensionError("design: error channels must share square dimensions");
    }
  }
  const std::size_t ns = initial_recovery.dim_out();
  if (initial_recovery.dim_in() != nc) {
    throw DimensionError("design: initial recovery does not match the code space");
  }
  if (initial_recovery.tp_residual() > 1e-8) {
    throw ValidationError("design: initial recovery is not trace preserving");
  }
  if (!target.is_square() || target.rows() != ns) {
    throw DimensionError("design: target must act on the system space");
  }
  if (max_iters < 1) throw ValidationError("design: max_iters must be positive");
  if (nc % ns != 0) throw DimensionError("design: code dimension must be a multiple of n_S");

  const BasisSet basis_r = canonical_basis(ns, nc, BasisKind::Recovery);
  const BasisSet basis_c = canonical_basis(ns, nc, BasisKind::Encoding);
  const SolveOptions solve_opts{opts.policy, opts.trace};

  LoopState st{
      initial_recovery,
      opts.initial_encoding ? *opts.initial_encoding : trivial_encoding(ns, nc / ns),
      ProcessMatrix{ComplexMatrix::identity(ns * nc), basis_r},
      ProcessMatrix{ComplexMatrix::identity(ns * nc), basis_c},
      ComplexMatrix::identity(nc),
      ComplexMatrix::identity(ns)};

  DesignResult result{st.encoding, st.recovery, {}, 0, 0, 0, std::nullopt,
                      st.x_recovery, st.x_encoding, st.y_recovery, st.y_encoding,
                      0, 0, 0, true, 0, {}};
  CertAggregate certs;

  auto per_error_f = [&](const QuantumChannel& r, const QuantumChannel& c) {
    std::vector<double> out;
    out.reserve(errors.size());
    for (const QuantumChannel& e : errors) out.push_back(pipeline_f_avg(r, e, c, target));
    return out;
  };
  auto min_f = [](const std::vector<double>& v) {
    return *std::min_element(v.begin(), v.end());
  };

  auto solve_half = [&](BasisKind which) -> HalfStepResult {
    std::vector<SdpDataMatrix> ws;
    ws.reserve(errors.size());
    for (const QuantumChannel& e : errors) {
      ws.push_back(which == BasisKind::Recovery
                       ? assemble_w_recovery(e, st.encoding, target, basis_r)
                       : assemble_w_encoding(e, st.recovery, target, basis_c));
    }
    const BasisSet& basis = (which == BasisKind::Recovery) ? basis_r : basis_c;
    SdpProblem prob = SdpProblem::make(std::move(ws), basis, opts.policy);
    SdpSolution sol = robust ? solve_robust(prob, solve_opts) : solve_dual(prob, solve_opts);
    certs.add(certify(sol, prob, opts.policy));
    ProcessMatrix pm{sol.x, basis};
    QuantumChannel ch = extract_channel(pm, opts.policy);
    return HalfStepResult{std::move(ch), std::move(pm), std::move(sol)};
  };

  auto record_looseness = [&](const HalfStepResult& half, double f_real, int iteration) {
    const double relaxed = robust ? *half.solution.t : half.solution.primal_value;
    if (std::abs(relaxed - f_real) > 1e-5) {
      std::ostringstream os;
      os << "relaxation looseness at iteration " << iteration << ": objective "
         << relaxed << " vs extracted " << f_real;
      result.notes.push_back(os.str());
    }
  };

  const bool encoding_first = (opts.order == LoopOrder::EncodingFirst);
  double previous_second = -1.0;
  double delta = 0.0;
  for (int it = 1; it <= max_iters; ++it) {
    IterationRecord rec;
    rec.iteration = it;
    double first_val = 0.0, second_val = 0.0;

    auto encoding_step = [&]() {
      HalfStepResult half = solve_half(BasisKind::Encoding);
      st.encoding = half.channel;
      st.x_encoding = half.process;
      st.y_encoding = half.solution.y;
      rec.per_error_after_encoding = per_error_f(st.recovery, st.encoding);
      rec.f_after_encoding_step = min_f(rec.per_error_after_encoding);
      record_looseness(half, rec.f_after_encoding_step, it);
      result.upper_bound_f_avg =
          robust ? *half.solution.t : half.solution.primal_value;
      return rec.f_after_encoding_step;
    };
    auto recovery_step = [&]() {
      HalfStepResult half = solve_half(BasisKind::Recovery);
      st.recovery = half.channel;
      st.x_recovery = half.process;
      st.y_recovery = half.solution.y;
      rec.per_error_after_recovery = per_error_f(st.recovery, st.encoding);
      rec.f_after_recovery_step = min_f(rec.per_error_after_recovery);
      record_looseness(half, rec.f_after_recovery_step, it);
      result.upper_bound_f_avg =
          robust ? *half.solution.t : half.solution.primal_value;
      return rec.f_after_recovery_step;
    };

    if (encoding_first) {
      first_val = encoding_step();
      second_val = recovery_step();
    } else {
      first_val = recovery_step();
      second_val = encoding_step();
    }
    result.fidelity_trace.push_back(rec);

    delta = second_val - first_val;
    (void)previous_second;
    previous_second = second_val;
    if (delta < epsilon) break;
  }

  result.encoding = st.encoding;
  result.recovery = st.recovery;
  result.x_recovery = st.x_recovery;
  result.x_encoding = st.x_encoding;
  result.y_recovery = st.y_recovery;
  result.y_encoding = st.y_encoding;

  const std::vector<double> final_fs = per_error_f(st.recovery, st.encoding);
  result.final_f_avg = min_f(final_fs);
  if (robust) result.robust_worst_case = result.final_f_avg;

  // Lower bound from the mixed-state fidelity of the extracted pair,
  // computed once at convergence. For robust runs, against the worst error.
  std::size_t worst = 0;
  for (std::size_t a = 1; a < final_fs.size(); ++a) {
    if (final_fs[a] < final_fs[worst]) worst = a;
  }
  MixedFidelityResult mixed =
      f_mixed(compose(st.recovery, compose(errors[worst], st.encoding)), target,
              opts.policy);
  result.lower_bound_f_mixed = mixed.value;
  result.argmin_eigenvalue_gap = mixed.eigenvalue_gap;

  result.certificates_checked = certs.checked;
  result.worst_certificate_gap = certs.worst_gap;
  result.worst_certificate_slackness = certs.worst_slackness;
  result.all_certified = certs.all_pass;
  return result;
}

}  // namespace

DesignResult biconvex_design(const QuantumChannel& error,
                             const QuantumChannel& initial_recovery,
                             const ComplexMatrix& target, double epsilon,
                             int max_iters, const DesignOptions& opts) {
  return run_design({error}, initial_recovery, target, epsilon, max_iters, opts,
                    /*robust=*/false);
}

DesignResult robust_design(const std::vector<QuantumChannel>& errors,
                           const QuantumChannel& initial_recovery,
                           const ComplexMatrix& target, double epsilon,
                           int max_iters, const DesignOptions& opts) {
  if (errors.size() < 2) {
    throw ValidationError("robust_design: need at least two error channels");
  }
  return run_design(errors, initial_recovery, target, epsilon, max_iters, opts,
                    /*robust=*/true);
}

ComplexMatrix complete_isometry_to_unitary(const ComplexMatrix& c1,
                                           const NumericPolicy& policy) {
  const std::size_t n = c1.rows();
  const std::size_t k = c1.cols();
  if (k > n) throw DimensionError("complete_isometry_to_unitary: wide input");
  {
    const ComplexMatrix gram = c1.adjoint() * c1;
    if ((gram - ComplexMatrix::identity(k)).max_abs() > policy.unitary_check) {
      throw NumericalError("complete_isometry_to_unitary: input is not an isometry");
    }
  }
  // Re-orthonormalize the input columns (a no-op beyond round-off for exact
  // isometries, and the repair step for rounded data), then extend with
  // coordinate vectors in index order.
  std::vector<ComplexMatrix> cols;
  cols.reserve(n);
  auto push_orthonormalized = [&](ComplexMatrix v) -> bool {
    for (int pass = 0; pass < 2; ++pass)
      for (const ComplexMatrix& u : cols) v -= inner(u, v) * u;
    const double norm = v.frobenius_norm();
    if (norm < 1e-8) return false;
    v *= cplx(1.0 / norm);
    cols.push_back(std::move(v));
    return true;
  };
  for (std::size_t c = 0; c < k; ++c) {
    ComplexMatrix v(n, 1);
    for (std::size_t r = 0; r < n; ++r) v(r, 0) = c1(r, c);
    if (!push_orthonormalized(std::move(v))) {
      throw NumericalError("complete_isometry_to_unitary: dependent input columns");
    }
  }
  for (std::size_t e = 0; e < n && cols.size() < n; ++e) {
    ComplexMatrix v(n, 1);
    v(e, 0) = 1.0;
    push_orthonormalized(std::move(v));
  }
  if (cols.size() != n) {
    throw NumericalError("complete_isometry_to_unitary: completion fell short");
  }
  ComplexMatrix u(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) u(r, c) = cols[c](r, 0);
  return u;
}

}  // namespace qecopt
