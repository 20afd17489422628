// Copyright 2026 The gkpkerr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gkpkerr/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <thread>

#include <json.hpp>

#include "gkpkerr/gates.hpp"

namespace gkpkerr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

void note_error(RunRecord& record, ErrorKind kind) {
  if (!record.worst_error || exit_code_for(kind) > exit_code_for(*record.worst_error)) record.worst_error = kind;
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) out += (out.empty() ? "" : ";") + f;
  return out;
}

bool truncation_agrees(const SweepConfig& config, double f, double f_enlarged) {
  const double diff = std::abs(f - f_enlarged);
  return diff <= std::max(config.truncation_abs_tol, config.truncation_rel_tol * std::abs(1.0 - f));
}

ResultRow make_row(double delta, double gamma, int n_rounds, const std::string& decoder, double fidelity,
                   double success, int dim, const std::string& flags) {
  ResultRow row;
  row.delta = delta;
  row.gamma = gamma;
  row.n_rounds = n_rounds;
  row.decoder = decoder;
  row.fidelity = fidelity;
  row.infidelity = 1.0 - fidelity;
  row.success_prob = success;
  row.dim = dim;
  row.flags = flags;
  return row;
}

Qubit plus_y() { return qubit_state("+i"); }

// Per-point output of a sweep task, merged in config order afterwards.
struct TaskOutput {
  std::vector<ResultRow> rows;
  std::vector<PointDiagnostics> diagnostics;
  std::vector<SbsRecord> records;
  std::optional<ErrorKind> error;
};

void merge(RunRecord& record, std::vector<TaskOutput>& outputs) {
  for (auto& out : outputs) {
    record.rows.insert(record.rows.end(), out.rows.begin(), out.rows.end());
    record.diagnostics.insert(record.diagnostics.end(), out.diagnostics.begin(), out.diagnostics.end());
    record.sbs_records.insert(record.sbs_records.end(), out.records.begin(), out.records.end());
    if (out.error) note_error(record, *out.error);
  }
}

std::string point_label(double delta, double gamma) {
  return "delta=" + format_double(delta) + ",gamma=" + format_double(gamma);
}

std::vector<int> sorted_rounds(std::vector<int> rounds) {
  std::sort(rounds.begin(), rounds.end());
  rounds.erase(std::unique(rounds.begin(), rounds.end()), rounds.end());
  return rounds;
}

// Contexts at the working truncation and, when checking, at dim + 20.
struct ContextPair {
  std::optional<CodeContext> base;
  std::optional<CodeContext> enlarged;
  std::string error;
  std::optional<ErrorKind> kind;
};

std::vector<ContextPair> build_contexts(const SweepConfig& config, bool with_basis) {
  std::vector<ContextPair> out(config.deltas.size());
  parallel_for(static_cast<int>(config.deltas.size()), config.threads, [&](int i) {
    const double delta = config.deltas[i];
    try {
      const int dim = dim_for(config, delta);
      out[i].base = make_context(config, delta, dim, with_basis);
      if (config.truncation_check) out[i].enlarged = make_context(config, delta, dim + 20, with_basis);
    } catch (const Error& e) {
      out[i].error = e.what();
      out[i].kind = e.kind();
    }
  });
  return out;
}

TaskOutput failed_point(double delta, double gamma, int dim, const std::string& decoder, const Error& e) {
  TaskOutput out;
  out.rows.push_back(make_row(delta, gamma, 0, decoder, NAN, NAN, dim, std::string("error:") + to_string(e.kind())));
  PointDiagnostics d;
  d.delta = delta;
  d.gamma = gamma;
  d.dim = dim;
  d.error = e.what();
  out.diagnostics.push_back(d);
  out.error = e.kind();
  return out;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kInvalidArgument:
      return 2;
    case ErrorKind::kPostSelectionStarved:
      return 4;
    default:
      return 3;
  }
}

int dim_for(const SweepConfig& config, double delta) { return config.dim > 0 ? config.dim : default_dim(delta); }

SbsParams sbs_params(const SweepConfig& config, double delta) {
  SbsParams p = SbsParams::for_delta(delta);
  p.rotations = {parse_rotation_axis(config.rotation_first), parse_rotation_axis(config.rotation_second)};
  p.p_eg = config.p_eg;
  p.p_ge = config.p_ge;
  p.ancilla_dephasing = config.ancilla_dephasing;
  p.round_loss_gamma = config.round_loss_gamma;
  return p;
}

IntegratorOptions integrator_options(const SweepConfig& config) {
  IntegratorOptions o;
  o.min_steps = config.min_steps;
  o.safety = config.step_safety;
  return o;
}

CodeContext make_context(const SweepConfig& config, double delta, int dim, bool with_basis) {
  GkpCode code = GkpCode::build(delta, dim);
  SbsChannel channel = build_sbs_round(sbs_params(config, delta), dim);
  SbsBasis basis;
  if (with_basis) basis = build_sbs_basis(code, channel);
  return CodeContext{std::move(code), std::move(channel), std::move(basis)};
}

EvolutionResult kerr_gate(const OscillatorState& input, double gamma, const SweepConfig& config) {
  const double t_gate = kerr_gate_time(config.kerr_rate);
  const NoiseSpec noise = NoiseSpec::from_gamma(gamma, t_gate, config.dephasing / t_gate);
  return lindblad_evolve(input, kerr_hamiltonian(input.dim(), config.kerr_rate), noise, integrator_options(config));
}

namespace {

void fill_evolution(PointDiagnostics& d, const EvolutionResult& ev) {
  d.steps = ev.steps;
  d.step = ev.step;
  d.max_trace_drift = ev.max_trace_drift;
  d.min_eigenvalue = ev.min_eigenvalue;
  d.wall_time_s = ev.wall_time_s;
}

}  // namespace

Fig2aPoint fig2a_point(const SweepConfig& config, const GkpCode& code, double gamma) {
  const OscillatorState input = logical_state(code, LogicalLabel::kPlusY);
  const EvolutionResult ev = kerr_gate(input, gamma, config);
  const PerfectEdResult dec = decode_perfect_ed(ev.state, code);
  Fig2aPoint out;
  out.fidelity = logical_fidelity(dec.rho_l, magic_target());
  out.success_prob = dec.success_prob;
  out.diagnostics.delta = code.delta();
  out.diagnostics.gamma = gamma;
  out.diagnostics.dim = code.dim();
  out.diagnostics.span_weight = dec.span_weight;
  fill_evolution(out.diagnostics, ev);
  return out;
}

RunRecord run_fig2a(const SweepConfig& config) {
  config.validate();
  const auto start = Clock::now();
  RunRecord record;
  record.command = "fig2a";
  record.config = config;
  record.notes.push_back("input |+Y_delta>, perfect-ED decoder, target sqrt(H)|+i>");

  std::vector<std::optional<GkpCode>> codes(config.deltas.size()), larger(config.deltas.size());
  std::vector<std::string> code_errors(config.deltas.size());
  std::vector<std::optional<ErrorKind>> code_kinds(config.deltas.size());
  parallel_for(static_cast<int>(config.deltas.size()), config.threads, [&](int i) {
    try {
      const int dim = dim_for(config, config.deltas[i]);
      codes[i] = GkpCode::build(config.deltas[i], dim);
      if (config.truncation_check) larger[i] = GkpCode::build(config.deltas[i], dim + 20);
    } catch (const Error& e) {
      code_errors[i] = e.what();
      code_kinds[i] = e.kind();
    }
  });

  const int ng = static_cast<int>(config.gammas.size());
  const int n = static_cast<int>(config.deltas.size()) * ng;
  std::vector<TaskOutput> outputs(n);
  parallel_for(n, config.threads, [&](int t) {
    const int i = t / ng;
    const double delta = config.deltas[i], gamma = config.gammas[t % ng];
    const int dim = dim_for(config, delta);
    try {
      if (!codes[i]) throw Error(*code_kinds[i], code_errors[i]);
      Fig2aPoint p = fig2a_point(config, *codes[i], gamma);
      std::vector<std::string> flags;
      if (larger[i]) {
        const double f2 = fig2a_point(config, *larger[i], gamma).fidelity;
        p.diagnostics.truncation_checked = true;
        p.diagnostics.truncation_difference = std::abs(p.fidelity - f2);
        p.diagnostics.truncation_converged = truncation_agrees(config, p.fidelity, f2);
        if (!p.diagnostics.truncation_converged) flags.push_back("trunc_unconverged");
      }
      outputs[t].rows.push_back(
          make_row(delta, gamma, 0, "perfect_ed", p.fidelity, p.success_prob, dim, join_flags(flags)));
      outputs[t].diagnostics.push_back(p.diagnostics);
    } catch (const Error& e) {
      outputs[t] = failed_point(delta, gamma, dim, "perfect_ed", e);
    }
  });
  merge(record, outputs);
  record.wall_time_s = seconds_since(start);
  return record;
}

std::vector<RoundPoint> fig2b_curve(const SweepConfig& config, const CodeContext& ctx, double gamma,
                                    std::vector<int> n_rounds, PointDiagnostics* diagnostics) {
  n_rounds = sorted_rounds(std::move(n_rounds));
  const OscillatorState input = OscillatorState::from_ket(encode_in_cell(ctx.basis, plus_y()));
  const EvolutionResult ev = kerr_gate(input, gamma, config);
  if (diagnostics) {
    diagnostics->delta = ctx.code.delta();
    diagnostics->gamma = gamma;
    diagnostics->dim = ctx.code.dim();
    fill_evolution(*diagnostics, ev);
    diagnostics->span_weight = decode_perfect_ed(ev.state, ctx.code).span_weight;
  }
  const Qubit target = magic_target();
  std::vector<RoundPoint> out;
  Matrix rho = ev.state.density();
  double weight = 1.0;
  Matrix2 frame = Matrix2::Identity();
  int done = 0;
  for (int n : n_rounds) {
    for (; done < n; ++done) {
      Matrix next = apply_round(rho, ctx.channel, true);
      const double p = next.trace().real();
      weight *= p;
      if (!(weight >= 1e-12)) {
        throw Error(ErrorKind::kPostSelectionStarved, "success probability below 1e-12 at round " +
                                                          std::to_string(done + 1));
      }
      rho = (0.5 / p) * (next + next.adjoint());
      frame = ctx.channel.logical_frame * frame;
    }
    const OscillatorState state = OscillatorState::from_density(rho, 1.0, 1e-8);
    RoundPoint point;
    point.n_rounds = n;
    point.success_prob = weight;
    point.fidelity_sbs = logical_fidelity(undo_frame(decode_sbs(state, ctx.basis), frame), target);
    point.fidelity_perfect_ed =
        logical_fidelity(undo_frame(decode_perfect_ed(state, ctx.code).rho_l, frame), target);
    out.push_back(point);
  }
  return out;
}

RunRecord run_fig2b(const SweepConfig& config) {
  config.validate();
  const auto start = Clock::now();
  RunRecord record;
  record.command = "fig2b";
  record.config = config;
  record.notes.push_back("input |(0,0),+Y>, post-selected rounds, SBS decoder with Pauli frame undone");
  record.notes.push_back("the reference 2-round value 2.4e-4 is compared as an infidelity");

  const auto contexts = build_contexts(config, true);
  const int ng = static_cast<int>(config.gammas.size());
  const int n = static_cast<int>(config.deltas.size()) * ng;
  std::vector<TaskOutput> outputs(n);
  parallel_for(n, config.threads, [&](int t) {
    const int i = t / ng;
    const double delta = config.deltas[i], gamma = config.gammas[t % ng];
    const int dim = dim_for(config, delta);
    try {
      if (!contexts[i].base) throw Error(*contexts[i].kind, contexts[i].error);
      PointDiagnostics diag;
      const auto curve = fig2b_curve(config, *contexts[i].base, gamma, config.n_rounds, &diag);
      std::vector<RoundPoint> check;
      if (contexts[i].enlarged) {
        check = fig2b_curve(config, *contexts[i].enlarged, gamma, config.n_rounds);
        diag.truncation_checked = true;
      }
      for (std::size_t k = 0; k < curve.size(); ++k) {
        const auto& pt = curve[k];
        std::vector<std::string> flags;
        if (!check.empty()) {
          const double diff = std::abs(pt.fidelity_sbs - check[k].fidelity_sbs);
          diag.truncation_difference = std::max(diag.truncation_difference, diff);
          if (!truncation_agrees(config, pt.fidelity_sbs, check[k].fidelity_sbs)) {
            diag.truncation_converged = false;
            flags.push_back("trunc_unconverged");
          }
        }
        if (config.decoder != "perfect_ed") {
          outputs[t].rows.push_back(
              make_row(delta, gamma, pt.n_rounds, "sbs", pt.fidelity_sbs, pt.success_prob, dim, join_flags(flags)));
        }
        if (config.decoder != "sbs") {
          outputs[t].rows.push_back(make_row(delta, gamma, pt.n_rounds, "perfect_ed", pt.fidelity_perfect_ed,
                                             pt.success_prob, dim, join_flags(flags)));
        }
      }
      outputs[t].diagnostics.push_back(diag);
    } catch (const Error& e) {
      outputs[t] = failed_point(delta, gamma, dim, "sbs", e);
    }
  });
  merge(record, outputs);
  record.wall_time_s = seconds_since(start);
  return record;
}

namespace {

// Top-level channel settings taken from the realistic block.
SweepConfig realistic_view(const SweepConfig& config) {
  SweepConfig view = config;
  view.p_eg = config.realistic.p_eg;
  view.p_ge = config.realistic.p_ge;
  view.round_loss_gamma = config.realistic.round_loss_gamma;
  view.dephasing = config.realistic.dephasing;
  view.gamma_init = config.realistic.gamma_init;
  return view;
}

}  // namespace

RealisticPoint realistic_point(const SweepConfig& config, int dim) {
  const SweepConfig view = realistic_view(config);
  const RealisticConfig& rc = config.realistic;
  const CodeContext ctx = make_context(view, rc.delta, dim, true);

  Matrix rho0 = encode_in_cell(ctx.basis, plus_y());
  Matrix start_rho = rho0 * rho0.adjoint();
  if (rc.gamma_init > 0.0) start_rho = apply_kraus(loss_channel(dim, rc.gamma_init), start_rho);
  const OscillatorState input = OscillatorState::from_density(start_rho, 1.0, 1e-8);
  const EvolutionResult ev = kerr_gate(input, rc.gamma, view);

  RealisticPoint out;
  out.diagnostics.delta = rc.delta;
  out.diagnostics.gamma = rc.gamma;
  out.diagnostics.dim = dim;
  fill_evolution(out.diagnostics, ev);
  out.diagnostics.span_weight = decode_perfect_ed(ev.state, ctx.code).span_weight;

  std::vector<int> rounds;
  for (int n : config.n_rounds) {
    if (n <= rc.n_rounds) rounds.push_back(n);
  }
  rounds.push_back(rc.n_rounds);
  rounds = sorted_rounds(rounds);

  const Qubit target = magic_target();
  Matrix rho = ev.state.density();
  double weight = 1.0;
  Matrix2 frame = Matrix2::Identity();
  int done = 0;
  for (int n : rounds) {
    for (; done < n; ++done) {
      Matrix next = apply_round(rho, ctx.channel, true);
      const double p = next.trace().real();
      SbsRecord rec;
      rec.point = point_label(rc.delta, rc.gamma);
      rec.round = done + 1;
      rec.syndrome = "gg";
      rec.outcome_model = "postselect";
      rec.pre_weight = weight;
      rec.round_prob = p;
      weight *= p;
      rec.post_weight = weight;
      out.records.push_back(rec);
      if (!(weight >= 1e-12)) throw Error(ErrorKind::kPostSelectionStarved, "realistic run starved");
      rho = (0.5 / p) * (next + next.adjoint());
      frame = ctx.channel.logical_frame * frame;
    }
    const OscillatorState state = OscillatorState::from_density(rho, 1.0, 1e-8);
    RoundPoint pt;
    pt.n_rounds = n;
    pt.success_prob = weight;
    pt.fidelity_sbs = logical_fidelity(undo_frame(decode_sbs(state, ctx.basis), frame), target);
    pt.fidelity_perfect_ed = logical_fidelity(undo_frame(decode_perfect_ed(state, ctx.code).rho_l, frame), target);
    out.curve.push_back(pt);
  }
  return out;
}

RunRecord run_realistic(const SweepConfig& config) {
  config.validate();
  const auto start = Clock::now();
  RunRecord record;
  record.command = "realistic";
  record.config = config;
  const RealisticConfig& rc = config.realistic;
  record.notes.push_back("input |(0,0),+Y> with loss gamma_init before the gate");
  record.notes.push_back("readout confusion applies to both measurements of every round");
  record.notes.push_back("rounds are instantaneous unless round_loss_gamma > 0; ancilla otherwise ideal");
  const int dim = dim_for(config, rc.delta);
  try {
    RealisticPoint point = realistic_point(config, dim);
    std::string flags;
    if (config.truncation_check) {
      const RealisticPoint check = realistic_point(config, dim + 20);
      point.diagnostics.truncation_checked = true;
      const double f = point.curve.back().fidelity_sbs, f2 = check.curve.back().fidelity_sbs;
      point.diagnostics.truncation_difference = std::abs(f - f2);
      point.diagnostics.truncation_converged = truncation_agrees(config, f, f2);
      if (!point.diagnostics.truncation_converged) flags = "trunc_unconverged";
    }
    for (const auto& pt : point.curve) {
      if (config.decoder != "perfect_ed") {
        record.rows.push_back(
            make_row(rc.delta, rc.gamma, pt.n_rounds, "sbs", pt.fidelity_sbs, pt.success_prob, dim, flags));
      }
      if (config.decoder != "sbs") {
        record.rows.push_back(make_row(rc.delta, rc.gamma, pt.n_rounds, "perfect_ed", pt.fidelity_perfect_ed,
                                       pt.success_prob, dim, flags));
      }
    }
    record.diagnostics.push_back(point.diagnostics);
    record.sbs_records = std::move(point.records);
  } catch (const Error& e) {
    std::vector<TaskOutput> outputs{failed_point(rc.delta, rc.gamma, dim, "sbs", e)};
    merge(record, outputs);
  }
  record.wall_time_s = seconds_since(start);
  return record;
}

RunRecord run_sbs_steady(const SweepConfig& config) {
  config.validate();
  const auto start = Clock::now();
  RunRecord record;
  record.command = "sbs-steady";
  record.config = config;
  record.notes.push_back("steady state: trace distance between rounds r and r-2 below steady_tol");

  SweepConfig no_check = config;
  no_check.truncation_check = false;
  const auto contexts = build_contexts(no_check, true);
  const int ng = static_cast<int>(config.gammas.size());
  const int n = static_cast<int>(config.deltas.size()) * ng;
  std::vector<TaskOutput> outputs(n);
  parallel_for(n, config.threads, [&](int t) {
    const int i = t / ng;
    const double delta = config.deltas[i], gamma = config.gammas[t % ng];
    const int dim = dim_for(config, delta);
    try {
      if (!contexts[i].base) throw Error(*contexts[i].kind, contexts[i].error);
      const CodeContext& ctx = *contexts[i].base;
      const OscillatorState input = OscillatorState::from_ket(encode_in_cell(ctx.basis, plus_y()));
      const EvolutionResult ev = kerr_gate(input, gamma, config);
      const SteadyStateResult ss = steady_state_rounds(ev.state, ctx.channel, config.steady_tol,
                                                       config.steady_max_rounds);
      const double f = logical_fidelity(undo_frame(decode_sbs(ss.state, ctx.basis), ss.frame), magic_target());
      outputs[t].rows.push_back(make_row(delta, gamma, ss.rounds_used, "sbs", f, ss.success_prob, dim,
                                         ss.converged ? "" : "steady_unconverged"));
      PointDiagnostics d;
      d.delta = delta;
      d.gamma = gamma;
      d.dim = dim;
      fill_evolution(d, ev);
      outputs[t].diagnostics.push_back(d);
      for (std::size_t r = 0; r < ss.distances.size(); ++r) {
        SbsRecord rec;
        rec.point = point_label(delta, gamma);
        rec.round = static_cast<int>(r) + 2;
        rec.syndrome = "gg";
        rec.outcome_model = "postselect";
        rec.pre_weight = NAN;
        rec.post_weight = NAN;
        rec.round_prob = ss.distances[r];
        outputs[t].records.push_back(rec);
      }
    } catch (const Error& e) {
      outputs[t] = failed_point(delta, gamma, dim, "sbs", e);
    }
  });
  merge(record, outputs);
  record.wall_time_s = seconds_since(start);
  return record;
}

Fig1Result run_fig1(const SweepConfig& config) {
  config.validate();
  Fig1Result out;
  out.delta = config.wigner.delta;
  out.dim = dim_for(config, out.delta);
  const GkpCode code = GkpCode::build(out.delta, out.dim);
  out.codeword0 = code.codeword(0);
  out.codeword1 = code.codeword(1);
  const RealVector axis = linspace(config.wigner.lo, config.wigner.hi, config.wigner.points);

  const OscillatorState plus_y_state = logical_state(code, LogicalLabel::kPlusY);
  const OscillatorState plus_state = logical_state(code, LogicalLabel::kPlus);
  std::vector<std::pair<std::string, std::string>> names{
      {"a", "|+Y_delta>"}, {"b", "U_K |+Y_delta>"}, {"c", "|+_delta>"}, {"d", "cubic gate |+_delta>"}};
  std::vector<OscillatorState> states{plus_y_state, apply(kerr_unitary(out.dim), plus_y_state), plus_state,
                                      apply(cubic_gate(out.dim), plus_state)};
  std::vector<WignerGrid> grids(states.size());
  parallel_for(static_cast<int>(states.size()), config.threads,
               [&](int i) { grids[i] = wigner(states[i], axis, axis); });
  for (std::size_t i = 0; i < states.size(); ++i) {
    out.panels.push_back(Fig1Panel{names[i].first, names[i].second, states[i], std::move(grids[i])});
  }
  return out;
}

void write_fig1(const Fig1Result& result, const std::string& out_dir) {
  const std::string base = out_dir.empty() ? "" : out_dir + "/";
  write_text(base + "codeword_0.csv", codeword_csv(result.codeword0));
  write_text(base + "codeword_1.csv", codeword_csv(result.codeword1));
  const FockOperator q = position_op(result.dim), p = momentum_op(result.dim);
  for (const auto& panel : result.panels) {
    const std::string stem = base + "fig1_" + panel.name;
    write_text(stem + ".csv", wigner_csv(panel.grid));
    nlohmann::ordered_json meta;
    meta["panel"] = panel.name;
    meta["state"] = panel.description;
    meta["delta"] = result.delta;
    meta["dim"] = result.dim;
    meta["q_min"] = panel.grid.q(0);
    meta["q_max"] = panel.grid.q(panel.grid.q.size() - 1);
    meta["p_min"] = panel.grid.p(0);
    meta["p_max"] = panel.grid.p(panel.grid.p.size() - 1);
    meta["q_points"] = panel.grid.q.size();
    meta["p_points"] = panel.grid.p.size();
    meta["row_order"] = "p outer, q inner";
    meta["normalization"] = "integral of W over the plane equals the trace; vacuum W(0,0) = 1/pi";
    meta["grid_integral"] = panel.grid.integral();
    meta["mean_q"] = panel.state.expectation(q);
    meta["mean_p"] = panel.state.expectation(p);
    meta["resolution_warning"] = panel.grid.resolution_warning;
    write_text(stem + ".json", meta.dump(2) + "\n");
    write_text(stem + ".svg", wigner_svg(panel.grid, "W(q,p): " + panel.description));
  }
}

std::string run_record_json(const RunRecord& record) {
  nlohmann::ordered_json j;
  j["command"] = record.command;
  j["version"] = kVersion;
  j["config"] = nlohmann::ordered_json::parse(to_json(record.config));
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr); };
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : record.rows) {
    j["rows"].push_back({{"delta", r.delta},
                         {"gamma", r.gamma},
                         {"n_rounds", r.n_rounds},
                         {"decoder", r.decoder},
                         {"fidelity", num(r.fidelity)},
                         {"infidelity", num(r.infidelity)},
                         {"success_prob", num(r.success_prob)},
                         {"dim", r.dim},
                         {"flags", r.flags}});
  }
  j["diagnostics"] = nlohmann::ordered_json::array();
  for (const auto& d : record.diagnostics) {
    j["diagnostics"].push_back({{"delta", d.delta},
                                {"gamma", d.gamma},
                                {"dim", d.dim},
                                {"steps", d.steps},
                                {"step", d.step},
                                {"max_trace_drift", d.max_trace_drift},
                                {"min_eigenvalue", d.min_eigenvalue},
                                {"wall_time_s", d.wall_time_s},
                                {"span_weight", d.span_weight},
                                {"truncation_checked", d.truncation_checked},
                                {"truncation_converged", d.truncation_converged},
                                {"truncation_difference", d.truncation_difference},
                                {"error", d.error}});
  }
  j["notes"] = record.notes;
  j["worst_error"] = record.worst_error ? to_string(*record.worst_error) : "";
  j["wall_time_s"] = record.wall_time_s;
  return j.dump(2) + "\n";
}

void write_run(const RunRecord& record, const std::string& out_dir, const std::string& stem) {
  const std::string base = (out_dir.empty() ? "" : out_dir + "/") + stem;
  write_text(base + ".csv", results_csv(record.rows));
  write_text(base + ".json", run_record_json(record));
  if (!record.sbs_records.empty()) write_text(base + "_sbs.jsonl", sbs_records_jsonl(record.sbs_records));

  std::map<std::string, PlotSeries> series;
  for (const auto& r : record.rows) {
    const std::string label = "delta=" + format_double(r.delta) + " " + r.decoder +
                              (record.command == "fig2b" ? " N=" + std::to_string(r.n_rounds) : "");
    auto& s = series[label];
    s.label = label;
    s.x.push_back(r.gamma);
    s.y.push_back(r.infidelity);
  }
  std::vector<PlotSeries> plotted;
  for (auto& [label, s] : series) {
    if (s.x.size() >= 2) plotted.push_back(std::move(s));
  }
  if (!plotted.empty()) write_text(base + ".svg", loglog_svg(plotted, record.command, "gamma", "1 - F"));
}

namespace {

ValidationCheck check(const std::string& name, double value, double bound, bool upper = true) {
  return {name, upper ? value <= bound : value >= bound, value, bound};
}

}  // namespace

std::vector<ValidationCheck> run_validation(const SweepConfig& config) {
  config.validate();
  std::vector<ValidationCheck> out;
  {
    const LadderOps ops = ladder_ops(8);
    const Matrix comm = ops.a.matrix() * ops.adag.matrix() - ops.adag.matrix() * ops.a.matrix();
    out.push_back(check("ladder_commutator_interior", interior_max_abs(comm - Matrix::Identity(8, 8), 7), 1e-12));
  }
  {
    const FockOperator d1 = displacement(Complex(0.5, 0.3), 40), d2 = displacement(Complex(-0.5, -0.3), 40);
    out.push_back(check("displacement_inverse", interior_max_abs(d1.matrix() * d2.matrix() - Matrix::Identity(40, 40),
                                                                 30),
                        1e-9));
  }
  const int dim = 100;
  const GkpCode code = GkpCode::build(0.25, dim);
  {
    const FockOperator uk = kerr_unitary(dim);
    const LadderOps ops = ladder_ops(dim);
    // U_K a = e^{i pi/8} a e^{-i n pi/4} U_K.
    Vector phase(dim);
    for (int m = 0; m < dim; ++m) phase(m) = std::polar(1.0, kPi / 8 - kPi * m / 4);
    const Matrix lhs = uk.matrix() * ops.a.matrix();
    const Matrix rhs = ops.a.matrix() * phase.asDiagonal() * uk.matrix();
    out.push_back(check("kerr_conjugation", interior_max_abs(lhs - rhs, dim - kDefaultInteriorMargin), 1e-10));
    const FockOperator n2 = ops.n * ops.n;
    out.push_back(check("number_squared_envelope_commutator", envelope_commutator_norm(code, n2), 0.0));
    const OscillatorState plus_h = logical_state(code, LogicalLabel::kPlusH);
    const OscillatorState minus_h = logical_state(code, LogicalLabel::kMinusH);
    const double e_plus = (uk * plus_h.ket() - plus_h.ket()).cwiseAbs().maxCoeff();
    const double e_minus = (uk * minus_h.ket() - Complex(0.0, 1.0) * minus_h.ket()).cwiseAbs().maxCoeff();
    out.push_back(check("kerr_eigenphases", std::max(e_plus, e_minus), 1e-9));
    out.push_back(check("codeword_norm", std::abs(code.codeword(0).norm() - 1.0), 1e-10));
  }
  {
    const GkpCode small = GkpCode::build(0.36, 60);
    const SbsChannel ch = build_sbs_round(sbs_params(config, 0.36), 60);
    out.push_back(check("sbs_completeness", completeness_defect(ch), 1e-8));
    const SbsBasis basis = build_sbs_basis(small, ch);
    out.push_back(check("sbs_basis_orthonormality", basis.orthonormality_defect(), 1e-10));
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal;
    Matrix g(60, 60);
    for (int c = 0; c < 60; ++c) {
      for (int r = 0; r < 60; ++r) g(r, c) = Complex(normal(rng), normal(rng));
    }
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    const LogicalQubit rl = decode_sbs(OscillatorState::from_density(rho), basis);
    out.push_back(check("sbs_decoder_trace", std::abs(rl.trace().real() - 1.0), 1e-10));
    const OscillatorState input = logical_state(small, LogicalLabel::kPlusY);
    const EvolutionResult ev = kerr_gate(input, 1e-2, config);
    out.push_back(check("lindblad_trace_drift", ev.max_trace_drift, 1e-8));
    out.push_back(check("lindblad_min_eigenvalue", ev.min_eigenvalue, -1e-7, false));
  }
  {
    const RealVector origin = RealVector::Zero(1);
    const WignerGrid w = wigner(OscillatorState::fock(0, 20), origin, origin);
    out.push_back(check("wigner_vacuum_peak", std::abs(w.values(0, 0) - 1.0 / kPi), 1e-6));
  }
  return out;
}

std::string validation_csv(const std::vector<ValidationCheck>& checks) {
  std::string out = "check,passed,value,bound\n";
  for (const auto& c : checks) {
    out += c.name + "," + (c.passed ? "true" : "false") + "," + format_double(c.value) + "," + format_double(c.bound) +
           "\n";
  }
  return out;
}

}  // namespace gkpkerr
