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

#include "qecopt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <iomanip>
#include <map>
#include <sstream>

#include "qecopt/linalg.hpp"

namespace qecopt::cli {

namespace {

NumericPolicy effective_policy(const json& overrides) {
  NumericPolicy p = NumericPolicy::defaults();
  if (const char* env = std::getenv("QECOPT_NUMERIC_POLICY")) {
    p = policy_from_json(read_json_file(env), p);
  }
  if (overrides.is_object() && !overrides.empty()) {
    p = policy_from_json(overrides, p);
  }
  return p;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Buffered solver-trace collector; written out after the run so that
/// concurrent pipelines stay order-deterministic.
struct TraceBuffer {
  std::vector<TraceEvent> events;
  TraceSink sink() {
    return [this](const TraceEvent& e) { events.push_back(e); };
  }
  void write(const std::string& dir) const {
    std::ostringstream csv;
    csv << "stage,iteration,objective,duality_measure,step_length\n";
    std::ostringstream jsonl;
    for (const TraceEvent& e : events) {
      csv << e.stage << ',' << e.iteration << ',' << fmt_double(e.objective)
          << ',' << fmt_double(e.duality_measure) << ','
          << fmt_double(e.step_length) << '\n';
      json row{{"stage", e.stage},
               {"iteration", e.iteration},
               {"objective", e.objective},
               {"duality_measure", e.duality_measure},
               {"step_length", e.step_length}};
      jsonl << row.dump() << '\n';
    }
    write_text_file(csv.str(), dir + "/solver_trace.csv");
    write_text_file(jsonl.str(), dir + "/solver_trace.jsonl");
  }
};

QuantumChannel resolve_error_channel(const ChannelSpec& spec,
                                     const NumericPolicy& policy,
                                     json* provenance) {
  if (!spec.special.empty()) {
    throw ValidationError("error channel spec: '" + spec.special +
                          "' is not a valid error source");
  }
  if (spec.generated) {
    QuantumChannel ch =
        random_error_channel(spec.seed, spec.delta_e, spec.dim_sys, spec.dim_bath);
    if (provenance) {
      *provenance = json{{"generator", "seeded-hermitian"},
                         {"seed", spec.seed},
                         {"delta_e", spec.delta_e},
                         {"dim_sys", spec.dim_sys},
                         {"dim_bath", spec.dim_bath}};
    }
    return ch;
  }
  LoadedChannel loaded = load_channel(spec.file);
  if (provenance) {
    *provenance = json{{"file", spec.file},
                       {"hash", file_hash_hex(spec.file)},
                       {"projected_to_tp", spec.project_tp}};
    if (!loaded.provenance.is_null()) (*provenance)["source"] = loaded.provenance;
  }
  if (spec.project_tp) return project_to_tp(loaded.channel);
  const double residual = loaded.channel.tp_residual();
  if (residual > policy.tp_ingest) {
    throw ValidationError(spec.file + ": trace-preservation residual " +
                          std::to_string(residual) +
                          " above ingest tolerance; set project_tp");
  }
  return loaded.channel;
}

std::string trace_csv(const DesignResult& r) {
  std::ostringstream os;
  const bool robust = !r.fidelity_trace.empty() &&
                      !r.fidelity_trace.front().per_error_after_recovery.empty();
  os << "iteration,f_after_encoding_step,f_after_recovery_step";
  if (robust) {
    const std::size_t ell = r.fidelity_trace.front().per_error_after_recovery.size();
    for (std::size_t a = 0; a < ell; ++a)
      os << ",f_enc_error" << a << ",f_rec_error" << a;
  }
  os << '\n';
  for (const IterationRecord& rec : r.fidelity_trace) {
    os << rec.iteration << ',' << fmt_double(rec.f_after_encoding_step) << ','
       << fmt_double(rec.f_after_recovery_step);
    if (robust) {
      for (std::size_t a = 0; a < rec.per_error_after_encoding.size(); ++a)
        os << ',' << fmt_double(rec.per_error_after_encoding[a]) << ','
           << fmt_double(rec.per_error_after_recovery[a]);
    }
    os << '\n';
  }
  return os.str();
}

int run_design_like(const ExperimentConfig& cfg, std::ostream& log, bool robust) {
  try {
    const NumericPolicy policy = cfg.policy();
    if (cfg.errors.empty() || (robust && cfg.errors.size() < 2) ||
        (!robust && cfg.errors.size() != 1)) {
      throw ValidationError(robust ? "robust mode needs >= 2 error channels"
                                   : "design mode needs exactly 1 error channel");
    }
    std::vector<QuantumChannel> errors;
    json error_prov = json::array();
    for (const ChannelSpec& spec : cfg.errors) {
      json prov;
      errors.push_back(resolve_error_channel(spec, policy, &prov));
      error_prov.push_back(std::move(prov));
    }
    const std::size_t nc = errors[0].dim_in();
    if (nc % cfg.n_sys != 0) {
      throw ValidationError("n_sys does not divide the code dimension");
    }
    const QuantumChannel r0 = partial_trace_recovery(cfg.n_sys, nc / cfg.n_sys);
    const ComplexMatrix target = cfg.target_matrix();

    DesignOptions dopts;
    dopts.policy = policy;
    dopts.order = (cfg.order == "recovery_first") ? LoopOrder::RecoveryFirst
                                                  : LoopOrder::EncodingFirst;
    TraceBuffer tb;
    if (cfg.trace) dopts.trace = tb.sink();

    DesignResult res =
        robust ? robust_design(errors, r0, target, cfg.epsilon, cfg.max_iters, dopts)
               : biconvex_design(errors[0], r0, target, cfg.epsilon, cfg.max_iters,
                                 dopts);

    json out = design_result_to_json(res);
    out["numeric_policy"] = policy_to_json(policy);
    out["provenance"] = json{{"mode", cfg.mode},
                             {"config", cfg.config_path},
                             {"config_hash", cfg.config_hash},
                             {"errors", std::move(error_prov)},
                             {"epsilon", cfg.epsilon},
                             {"max_iters", cfg.max_iters}};
    write_json_file(out, cfg.out_dir + "/result.json");
    write_text_file(trace_csv(res), cfg.out_dir + "/trace.csv");
    if (cfg.trace) tb.write(cfg.out_dir);

    log << "final f_avg " << res.final_f_avg;
    if (res.robust_worst_case) log << " (worst case over " << errors.size() << " errors)";
    log << " after " << res.fidelity_trace.size() << " iterations, bounds ["
        << res.lower_bound_f_mixed << ", " << res.upper_bound_f_avg << "]\n";
    log << "certificates: " << res.certificates_checked << " checked, worst gap "
        << res.worst_certificate_gap << ", all "
        << (res.all_certified ? "pass" : "FAIL") << "\n";
    log << "wrote " << cfg.out_dir << "/result.json\n";
    return res.all_certified ? kExitOk : kExitSolver;
  } catch (const ValidationError& e) {
    log << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    log << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
}

}  // namespace

ChannelSpec ChannelSpec::parse(const json& j, const std::string& field) {
  ChannelSpec spec;
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "identity" || s == "partial_trace") {
      spec.special = s;
    } else {
      spec.file = s;
    }
    return spec;
  }
  if (!j.is_object()) {
    throw ValidationError(field + ": expected a string or an object");
  }
  if (j.contains("file")) {
    spec.file = j.at("file").get<std::string>();
    spec.project_tp = j.value("project_tp", false);
    return spec;
  }
  if (j.contains("seed")) {
    spec.generated = true;
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.delta_e = j.value("delta_e", 0.75);
    spec.dim_sys = j.value("dim_sys", std::size_t{4});
    spec.dim_bath = j.value("dim_bath", std::size_t{2});
    if (spec.delta_e <= 0) throw ValidationError(field + ".delta_e must be positive");
    return spec;
  }
  throw ValidationError(field + ": needs either \"file\" or generator \"seed\"");
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  const json j = read_json_file(path);
  ExperimentConfig cfg;
  cfg.config_path = path;
  cfg.config_hash = file_hash_hex(path);
  if (!j.is_object()) throw ValidationError(path + ": config must be an object");
  cfg.schema_version = j.value("schema_version", 1);
  if (cfg.schema_version != 1) {
    throw ValidationError("config.schema_version: only version 1 is supported");
  }
  if (!j.contains("mode")) throw ValidationError("config.mode is required");
  cfg.mode = j.at("mode").get<std::string>();
  static const char* kModes[] = {"design", "robust", "reproduce-paper",
                                 "channel-gen", "fidelity"};
  if (std::find_if(std::begin(kModes), std::end(kModes), [&](const char* m) {
        return cfg.mode == m;
      }) == std::end(kModes)) {
    throw ValidationError("config.mode: unknown mode '" + cfg.mode + "'");
  }
  cfg.n_sys = j.value("n_sys", std::size_t{2});
  if (cfg.n_sys < 1) throw ValidationError("config.n_sys must be >= 1");
  if (j.contains("error")) cfg.errors.push_back(ChannelSpec::parse(j.at("error"), "config.error"));
  if (j.contains("errors")) {
    std::size_t idx = 0;
    for (const json& e : j.at("errors")) {
      cfg.errors.push_back(
          ChannelSpec::parse(e, "config.errors[" + std::to_string(idx++) + "]"));
    }
  }
  if (j.contains("encoding"))
    cfg.encoding = ChannelSpec::parse(j.at("encoding"), "config.encoding");
  if (j.contains("recovery"))
    cfg.recovery = ChannelSpec::parse(j.at("recovery"), "config.recovery");
  cfg.target = j.value("target", json("identity"));
  cfg.epsilon = j.value("epsilon", 1e-6);
  if (!(cfg.epsilon >= 0)) throw ValidationError("config.epsilon must be >= 0");
  cfg.max_iters = j.value("max_iters", 100);
  if (cfg.max_iters < 1) throw ValidationError("config.max_iters must be >= 1");
  cfg.order = j.value("order", std::string("encoding_first"));
  if (cfg.order != "encoding_first" && cfg.order != "recovery_first") {
    throw ValidationError("config.order must be encoding_first or recovery_first");
  }
  cfg.out_dir = j.value("out", std::string("out"));
  cfg.data_dir = j.value("data", std::string());
  cfg.trace = j.value("trace", false);
  cfg.jobs = j.value("jobs", 1);
  if (cfg.jobs < 1) throw ValidationError("config.jobs must be >= 1");
  cfg.policy_overrides = j.value("policy", json::object());
  return cfg;
}

NumericPolicy ExperimentConfig::policy() const {
  return effective_policy(policy_overrides);
}

ComplexMatrix ExperimentConfig::target_matrix() const {
  if (target.is_null() || (target.is_string() && target.get<std::string>() == "identity")) {
    return ComplexMatrix::identity(n_sys);
  }
  if (!target.is_object()) {
    throw ValidationError("config.target: expected \"identity\" or a matrix object");
  }
  ComplexMatrix u = matrix_from_json(target);
  if (!u.is_square() || u.rows() != n_sys) {
    throw ValidationError("config.target: matrix must be n_sys x n_sys");
  }
  if ((u.adjoint() * u - ComplexMatrix::identity(n_sys)).max_abs() > 1e-8) {
    throw ValidationError("config.target: matrix is not unitary");
  }
  return u;
}

int run_design(const ExperimentConfig& cfg, std::ostream& log) {
  return run_design_like(cfg, log, /*robust=*/false);
}

int run_robust(const ExperimentConfig& cfg, std::ostream& log) {
  return run_design_like(cfg, log, /*robust=*/true);
}

int run_channel_gen(const ExperimentConfig& cfg, std::ostream& log) {
  try {
    if (cfg.errors.size() != 1 || !cfg.errors[0].generated) {
      throw ValidationError("channel-gen: config needs one generator error spec");
    }
    const ChannelSpec& spec = cfg.errors[0];
    const QuantumChannel ch =
        random_error_channel(spec.seed, spec.delta_e, spec.dim_sys, spec.dim_bath);
    const json prov{{"generator", "seeded-hermitian"},
                    {"seed", spec.seed},
                    {"delta_e", spec.delta_e},
                    {"dim_sys", spec.dim_sys},
                    {"dim_bath", spec.dim_bath},
                    {"tp", "exact"}};
    const std::string path = cfg.out_dir + "/channel.json";
    save_channel(ch, prov, path);
    log << "wrote " << path << " (" << ch.size() << " Kraus elements, "
        << ch.dim_out() << "x" << ch.dim_in() << ", tp residual "
        << ch.tp_residual() << ")\n";
    return kExitOk;
  } catch (const ValidationError& e) {
    log << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}

int run_fidelity(const ExperimentConfig& cfg, std::ostream& log) {
  try {
    const NumericPolicy policy = cfg.policy();
    if (cfg.errors.size() != 1) {
      throw ValidationError("fidelity mode needs exactly one error channel");
    }
    const QuantumChannel error = resolve_error_channel(cfg.errors[0], policy, nullptr);
    const std::size_t nc = error.dim_in();
    const std::size_t ns = cfg.n_sys;
    if (nc % ns != 0) throw ValidationError("n_sys does not divide the code dimension");

    auto resolve_side = [&](const std::optional<ChannelSpec>& spec, bool is_encoding) {
      if (!spec || spec->special == "identity") {
        if (!spec && nc != ns) {
          throw ValidationError("encoding/recovery required when dimensions differ");
        }
        if (spec && nc != ns) {
          throw ValidationError("'identity' requires matching dimensions");
        }
        return QuantumChannel::identity(ns);
      }
      if (spec->special == "partial_trace") {
        if (is_encoding) throw ValidationError("'partial_trace' is a recovery, not an encoding");
        return partial_trace_recovery(ns, nc / ns);
      }
      LoadedChannel loaded = load_channel(spec->file);
      if (spec->project_tp) return project_to_tp(loaded.channel);
      return loaded.channel;
    };
    const QuantumChannel enc = resolve_side(cfg.encoding, true);
    const QuantumChannel rec = resolve_side(cfg.recovery, false);
    const ComplexMatrix target = cfg.target_matrix();
    const QuantumChannel pipeline = compose(rec, compose(error, enc));

    const double favg = f_avg(pipeline, target);
    const MixedFidelityResult fm = f_mixed(pipeline, target, policy);
    const double fp = f_pure_estimate(pipeline, target, policy.pure_restarts, policy);

    json out{{"f_avg", favg},
             {"f_pure_estimate", fp},
             {"f_mixed",
              {{"value", fm.value},
               {"fw_gap", fm.fw_gap},
               {"iterations", fm.iterations},
               {"argmin_eigenvalue_gap", fm.eigenvalue_gap}}}};
    write_json_file(out, cfg.out_dir + "/fidelities.json");
    log << "f_mixed " << fm.value << " <= f_pure_estimate " << fp << " <= f_avg "
        << favg << "\n";
    return kExitOk;
  } catch (const ValidationError& e) {
    log << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    log << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
}

namespace {

struct ReproCell {
  std::string id;
  std::string description;
  double computed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

json cell_to_json(const ReproCell& c) {
  return json{{"id", c.id},           {"description", c.description},
              {"computed", c.computed}, {"expected", c.expected},
              {"tolerance", c.tolerance}, {"pass", c.pass}};
}

}  // namespace

int run_reproduce(const ReproduceOptions& opts, std::ostream& log) {
  try {
    const std::string data = opts.data_dir;
    const std::string exp_path = data + "/expected_fidelities.json";
    const json exp = read_json_file(exp_path);
    const json& t1 = exp.at("table1");
    const json& t2 = exp.at("table2");
    const std::size_t ns = exp.value("n_sys", std::size_t{2});

    std::map<std::string, std::string> channel_files;
    for (const auto& [label, fname] : exp.at("channels").items()) {
      channel_files[label] = data + "/" + fname.get<std::string>();
    }
    if (channel_files.size() != 2) {
      throw ValidationError("expected_fidelities.json: need exactly two channels");
    }
    const std::string label_a = channel_files.begin()->first;
    const std::string label_b = std::next(channel_files.begin())->first;

    if (opts.dry_run) {
      log << "plan (dry run, no solves):\n";
      for (const auto& [label, path] : channel_files) {
        log << "  ingest " << path << " as " << label
            << " and project to trace preserving form\n";
      }
      log << "  alternating design per error: 1 iteration, then "
          << t1.at("iterations").get<int>() << " iterations (epsilon "
          << t1.at("epsilon").get<double>() << ")\n";
      log << "  worst-case design over both errors: 1 iteration, then "
          << t2.at("iterations").get<int>() << " iterations\n";
      log << "  evaluate " << t1.at("cells").size() << " fidelity cells + "
          << t2.at("rows").size() << " worst-case rows -> " << opts.out_dir
          << "/report.json\n";
      return kExitOk;
    }

    const NumericPolicy policy = effective_policy(opts.policy_overrides);
    json hashes;
    hashes["expected_fidelities"] = file_hash_hex(exp_path);
    std::map<std::string, QuantumChannel> chan;
    for (const auto& [label, path] : channel_files) {
      LoadedChannel raw = load_channel(path);
      chan.emplace(label, project_to_tp(raw.channel));
      hashes[label] = file_hash_hex(path);
    }
    const QuantumChannel& ea = chan.at(label_a);
    const QuantumChannel& eb = chan.at(label_b);
    const std::size_t nc = ea.dim_in();
    if (eb.dim_in() != nc) throw ValidationError("channel dimensions disagree");
    const QuantumChannel r0 = partial_trace_recovery(ns, nc / ns);
    const ComplexMatrix target = ComplexMatrix::identity(ns);

    DesignOptions dopts;
    dopts.policy = policy;

    struct Pipeline {
      DesignResult one;
      DesignResult full;
    };
    auto run_single = [&](const QuantumChannel& e) {
      return Pipeline{
          biconvex_design(e, r0, target, 0.0, 1, dopts),
          biconvex_design(e, r0, target, t1.at("epsilon").get<double>(),
                          t1.at("iterations").get<int>(), dopts)};
    };
    auto run_rob = [&]() {
      const std::vector<QuantumChannel> errs{ea, eb};
      return Pipeline{
          robust_design(errs, r0, target, 0.0, 1, dopts),
          robust_design(errs, r0, target, t2.at("epsilon").get<double>(),
                        t2.at("iterations").get<int>(), dopts)};
    };

    std::optional<Pipeline> pa_opt, pb_opt, pr_opt;
    if (opts.jobs > 1) {
      auto fa = std::async(std::launch::async, [&] { return run_single(ea); });
      auto fb = std::async(std::launch::async, [&] { return run_single(eb); });
      auto fr = std::async(std::launch::async, run_rob);
      pa_opt = fa.get();
      pb_opt = fb.get();
      pr_opt = fr.get();
    } else {
      pa_opt = run_single(ea);
      pb_opt = run_single(eb);
      pr_opt = run_rob();
    }
    const Pipeline& pa = *pa_opt;
    const Pipeline& pb = *pb_opt;
    const Pipeline& pr = *pr_opt;

    // Channel zoo for the table cells, keyed by the labels used in the
    // expectation file.
    std::map<std::string, QuantumChannel> rec{{"R0", r0}};
    std::map<std::string, QuantumChannel> enc;
    auto stash = [&](const std::string& suffix, const Pipeline& p) {
      rec.emplace("R" + suffix + "1", p.one.recovery);
      enc.emplace("C" + suffix + "1", p.one.encoding);
      rec.emplace("R" + suffix + "100", p.full.recovery);
      enc.emplace("C" + suffix + "100", p.full.encoding);
    };
    stash("a", pa);
    stash("b", pb);
    std::map<std::string, QuantumChannel> err;
    err.emplace(label_a, ea);
    err.emplace(label_b, eb);

    std::vector<ReproCell> cells;
    for (const json& c : t1.at("cells")) {
      ReproCell cell;
      cell.id = c.at("id").get<std::string>();
      cell.description = c.value("description", std::string());
      cell.expected = c.at("expected").get<double>();
      cell.tolerance = c.at("tolerance").get<double>();
      const QuantumChannel& r = rec.at(c.at("recovery").get<std::string>());
      const QuantumChannel& cc = enc.at(c.at("encoding").get<std::string>());
      const QuantumChannel& e = err.at(c.at("error").get<std::string>());
      cell.computed = f_avg(compose(r, compose(e, cc)), target);
      cell.pass = std::abs(cell.computed - cell.expected) <= cell.tolerance;
      cells.push_back(std::move(cell));
    }

    const double alpha_tol = t2.value("alpha_equal_tolerance", 1e-3);
    auto robust_row_values = [&](const std::string& stage) -> std::vector<double> {
      if (stage == "encoding_only") return pr.one.fidelity_trace.front().per_error_after_encoding;
      if (stage == "iteration_1") return pr.one.fidelity_trace.front().per_error_after_recovery;
      if (stage == "saturation") return pr.full.fidelity_trace.back().per_error_after_recovery;
      throw ValidationError("expected_fidelities.json: unknown robust stage " + stage);
    };
    for (const json& row : t2.at("rows")) {
      const std::string id = row.at("id").get<std::string>();
      const std::vector<double> vals = robust_row_values(row.at("stage").get<std::string>());
      const double expected = row.at("expected").get<double>();
      const double tol = row.at("tolerance").get<double>();
      const char* suffix[2] = {".alpha0", ".alpha1"};
      for (int a = 0; a < 2; ++a) {
        ReproCell cell;
        cell.id = id + suffix[a];
        cell.description = row.value("description", std::string());
        cell.computed = vals[a];
        cell.expected = expected;
        cell.tolerance = tol;
        cell.pass = std::abs(cell.computed - cell.expected) <= tol;
        cells.push_back(std::move(cell));
      }
      ReproCell gap;
      gap.id = id + ".alpha_gap";
      gap.description = "worst-case fidelities must agree across the error set";
      gap.computed = std::abs(vals[0] - vals[1]);
      gap.expected = 0.0;
      gap.tolerance = alpha_tol;
      gap.pass = gap.computed <= alpha_tol;
      cells.push_back(std::move(gap));
    }

    // Certification rollup across every SDP solved above.
    int cert_checked = 0;
    double worst_gap = 0.0, worst_slack = 0.0;
    bool cert_pass = true;
    for (const DesignResult* r :
         {&pa.one, &pa.full, &pb.one, &pb.full, &pr.one, &pr.full}) {
      cert_checked += r->certificates_checked;
      worst_gap = std::max(worst_gap, r->worst_certificate_gap);
      worst_slack = std::max(worst_slack, r->worst_certificate_slackness);
      cert_pass = cert_pass && r->all_certified;
    }

    bool all_pass = cert_pass;
    json cell_json = json::array();
    for (const ReproCell& c : cells) {
      all_pass = all_pass && c.pass;
      cell_json.push_back(cell_to_json(c));
      log << (c.pass ? "  ok   " : "  MISS ") << c.id << ": computed "
          << std::setprecision(6) << c.computed << " expected " << c.expected
          << " +- " << c.tolerance << "\n";
    }
    log << "certificates: " << cert_checked << " solves, worst gap " << worst_gap
        << ", worst slackness " << worst_slack << ", all "
        << (cert_pass ? "pass" : "FAIL") << "\n";

    json report{{"schema_version", 1},
                {"cells", std::move(cell_json)},
                {"certification",
                 {{"checked", cert_checked},
                  {"worst_gap", worst_gap},
                  {"worst_slackness", worst_slack},
                  {"all_pass", cert_pass}}},
                {"input_hashes", hashes},
                {"all_pass", all_pass}};
    write_json_file(report, opts.out_dir + "/report.json");

    auto dump_result = [&](const DesignResult& r, const std::string& name) {
      json out = design_result_to_json(r);
      out["numeric_policy"] = policy_to_json(policy);
      out["provenance"] = json{{"input_hashes", hashes}};
      write_json_file(out, opts.out_dir + "/" + name);
    };
    dump_result(pa.full, "design_" + label_a + ".json");
    dump_result(pb.full, "design_" + label_b + ".json");
    dump_result(pr.full, "robust_" + label_a + "_" + label_b + ".json");

    log << (all_pass ? "reproduction PASS" : "reproduction FAIL") << ", report at "
        << opts.out_dir << "/report.json\n";
    return all_pass ? kExitOk : kExitReproduction;
  } catch (const ValidationError& e) {
    log << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    log << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
}

int run_export_magnitudes(const std::string& result_path,
                          const std::string& out_dir, std::ostream& log) {
  try {
    const json j = read_json_file(result_path);
    if (!j.contains("process_matrices") || !j.contains("dual_certificates")) {
      throw ValidationError(result_path + ": missing process matrices or dual certificates");
    }
    auto write_abs_csv = [&](const json& mj, const std::string& name) {
      const ComplexMatrix m = matrix_from_json(mj);
      std::ostringstream os;
      for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t jx = 0; jx < m.cols(); ++jx) {
          if (jx) os << ',';
          os << fmt_double(std::abs(m(i, jx)));
        }
        os << '\n';
      }
      write_text_file(os.str(), out_dir + "/magnitudes/" + name + ".csv");
    };
    write_abs_csv(j.at("process_matrices").at("x_recovery"), "xr");
    write_abs_csv(j.at("process_matrices").at("x_encoding"), "xc");
    write_abs_csv(j.at("dual_certificates").at("y_recovery"), "yr");
    write_abs_csv(j.at("dual_certificates").at("y_encoding"), "yc");
    log << "wrote " << out_dir << "/magnitudes/{xr,xc,yr,yc}.csv\n";
    return kExitOk;
  } catch (const ValidationError& e) {
    log << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}

int run_flops(int qubits_sys, int qubits_anc, std::ostream& out) {
  try {
    const double ns = std::exp2(qubits_sys);
    const double nca = std::exp2(qubits_anc);
    const double nc = ns * nca;
    struct Row {
      const char* name;
      double r, m;
    } rows[] = {{"recovery", ns, nc}, {"encoding", nc, ns}};
    out << "flops per interior-point iteration (n_S=" << ns << ", n_CA=" << nca
        << ")\n";
    out << std::left << std::setw(10) << "mode" << std::right << std::setw(16)
        << "primal" << std::setw(16) << "dual" << std::setw(12) << "speed-up"
        << "\n";
    for (const Row& r : rows) {
      const double primal = flops_primal_per_iteration(r.r, r.m);
      const double dual = flops_dual_per_iteration(r.r, r.m);
      const double speedup = (r.r * r.r - 1.0) * (r.r * r.r - 1.0);
      out << std::left << std::setw(10) << r.name << std::right << std::setw(16)
          << primal << std::setw(16) << dual << std::setw(12) << speedup;
      if (speedup == 0.0) out << "  (out of model: r = 1)";
      out << "\n";
    }
    return kExitOk;
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace qecopt::cli
