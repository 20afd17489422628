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

#include "gkpkerr/sbs.hpp"

#include <cmath>
#include <sstream>

#include "gkpkerr/errors.hpp"
#include "gkpkerr/gates.hpp"

namespace gkpkerr {

std::string to_string(RotationAxis axis) {
  switch (axis) {
    case RotationAxis::kPlusX:
      return "+x";
    case RotationAxis::kMinusX:
      return "-x";
    case RotationAxis::kPlusY:
      return "+y";
    case RotationAxis::kMinusY:
      return "-y";
  }
  return "?";
}

RotationAxis parse_rotation_axis(const std::string& text) {
  for (auto axis : {RotationAxis::kPlusX, RotationAxis::kMinusX, RotationAxis::kPlusY, RotationAxis::kMinusY}) {
    if (to_string(axis) == text) return axis;
  }
  throw Error(ErrorKind::kConfig, "unknown rotation axis '" + text + "'");
}

Matrix2 rotation_matrix(RotationAxis axis) {
  Matrix2 sigma;
  switch (axis) {
    case RotationAxis::kPlusX:
      sigma = pauli_x();
      break;
    case RotationAxis::kMinusX:
      sigma = -pauli_x();
      break;
    case RotationAxis::kPlusY:
      sigma = pauli_y();
      break;
    case RotationAxis::kMinusY:
      sigma = -pauli_y();
      break;
  }
  const double c = std::cos(kPi / 4);
  return c * Matrix2::Identity() - Complex(0.0, c) * sigma;
}

SbsParams SbsParams::for_delta(double delta) {
  SbsParams p;
  p.delta = delta;
  p.trim = p.big_length * std::sinh(delta * delta);
  return p;
}

void SbsParams::validate() const {
  if (!(trim > 0.0) || !(big_length > 0.0)) throw Error(ErrorKind::kInvalidArgument, "sBs lengths must be positive");
  for (double prob : {p_eg, p_ge, ancilla_dephasing}) {
    if (!(prob >= 0.0 && prob < 1.0)) throw Error(ErrorKind::kInvalidArgument, "probabilities must lie in [0, 1)");
  }
  if (!(round_loss_gamma >= 0.0 && round_loss_gamma < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "round loss must lie in [0, 1)");
  }
}

const Matrix& SbsChannel::k_gg() const {
  if (kraus[0].size() != 1) {
    throw Error(ErrorKind::kInvalidArgument, "gg outcome has several Kraus operators (noisy ancilla or readout)");
  }
  return kraus[0].front();
}

HalfRoundKraus build_half_round(const SbsParams& params, Complex axis_phase, int dim) {
  params.validate();
  const double root2 = std::sqrt(2.0);
  const Complex c_big = axis_phase * Complex(0.0, params.big_length / root2);
  const Complex c_trim = axis_phase * (params.trim / (2.0 * root2));

  const HybridOperator trim = conditional_displacement(c_trim, dim);
  const HybridOperator big = conditional_displacement(c_big, dim);
  const HybridOperator r1 = HybridOperator::ancilla(rotation_matrix(params.rotations.first), dim);
  const HybridOperator r2 = HybridOperator::ancilla(rotation_matrix(params.rotations.second), dim);
  const HybridOperator head = big * r1 * trim;
  const HybridOperator tail = trim * r2;

  const Qubit plus = Qubit(1.0, 1.0) / root2;
  const Qubit minus = Qubit(1.0, -1.0) / root2;
  HalfRoundKraus out;
  const double keep = std::sqrt(1.0 - params.ancilla_dephasing);
  const HybridOperator clean = tail * head;
  out.by_outcome[kOutcomeG].push_back(keep * ancilla_matrix_element(clean, plus, plus));
  out.by_outcome[kOutcomeE].push_back(keep * ancilla_matrix_element(clean, minus, plus));
  if (params.ancilla_dephasing > 0.0) {
    const double flip = std::sqrt(params.ancilla_dephasing);
    const HybridOperator flipped = tail * HybridOperator::ancilla(pauli_z(), dim) * head;
    out.by_outcome[kOutcomeG].push_back(flip * ancilla_matrix_element(flipped, plus, plus));
    out.by_outcome[kOutcomeE].push_back(flip * ancilla_matrix_element(flipped, minus, plus));
  }
  return out;
}

SbsChannel build_sbs_round(const SbsParams& params, int dim) {
  params.validate();
  SbsChannel ch;
  ch.dim = dim;
  ch.params = params;
  ch.q_half = build_half_round(params, Complex(1.0, 0.0), dim);
  ch.p_half = build_half_round(params, Complex(0.0, -1.0), dim);
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      for (const auto& kq : ch.q_half.by_outcome[j]) {
        for (const auto& kp : ch.p_half.by_outcome[k]) ch.kraus[2 * j + k].push_back(kp * kq);
      }
    }
  }
  if (params.round_loss_gamma > 0.0) ch.round_loss = loss_channel(dim, params.round_loss_gamma);
  ch.logical_frame = pauli_x() * pauli_z();
  if (params.p_eg > 0.0 || params.p_ge > 0.0) {
    SbsChannel confused = apply_measurement_error(ch, params.p_eg, params.p_ge);
    return confused;
  }
  return ch;
}

SbsChannel apply_measurement_error(const SbsChannel& channel, double p_eg, double p_ge) {
  if (!(p_eg >= 0.0 && p_eg <= 1.0 && p_ge >= 0.0 && p_ge <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "confusion probabilities must lie in [0, 1]");
  }
  // report[r][t] = p(reported r | true t).
  const double report[2][2] = {{1.0 - p_eg, p_ge}, {p_eg, 1.0 - p_ge}};
  SbsChannel out = channel;
  out.params.p_eg = p_eg;
  out.params.p_ge = p_ge;
  for (auto& list : out.kraus) list.clear();
  for (int rj = 0; rj < 2; ++rj) {
    for (int rk = 0; rk < 2; ++rk) {
      for (int tj = 0; tj < 2; ++tj) {
        for (int tk = 0; tk < 2; ++tk) {
          const double w = report[rj][tj] * report[rk][tk];
          if (w == 0.0) continue;
          for (const auto& k : channel.kraus[2 * tj + tk]) out.kraus[2 * rj + rk].push_back(std::sqrt(w) * k);
        }
      }
    }
  }
  return out;
}

double completeness_defect(const SbsChannel& channel) {
  Matrix sum = Matrix::Zero(channel.dim, channel.dim);
  for (const auto& list : channel.kraus) {
    for (const auto& k : list) sum.noalias() += k.adjoint() * k;
  }
  const int interior = std::max(channel.dim - kDefaultInteriorMargin, 1);
  return interior_max_abs(sum - Matrix::Identity(channel.dim, channel.dim), interior);
}

double calibration_score(const GkpCode& code, const SbsChannel& channel) {
  const Vector v = channel.kraus[0].front() * code.codeword(0);
  const double weight = v.squaredNorm();
  if (!(weight > 0.0)) return 0.0;
  const Eigen::MatrixX2cd basis = code.lowdin_codewords();
  return (basis.adjoint() * v).squaredNorm();
}

CalibrationResult calibrate_rotations(const GkpCode& code, SbsParams params, double min_score) {
  const RotationAxis axes[] = {RotationAxis::kMinusX, RotationAxis::kPlusX, RotationAxis::kMinusY,
                               RotationAxis::kPlusY};
  params.p_eg = params.p_ge = params.ancilla_dephasing = params.round_loss_gamma = 0.0;
  CalibrationResult result;
  result.best_score = -1.0;
  for (auto first : axes) {
    for (auto second : axes) {
      params.rotations = {first, second};
      const double score = calibration_score(code, build_sbs_round(params, code.dim()));
      result.tried.emplace_back(params.rotations, score);
      if (score > result.best_score + 1e-12) {
        result.best_score = score;
        result.best = params.rotations;
      }
    }
  }
  if (result.best_score < min_score) {
    std::ostringstream msg;
    msg << "no rotation convention reached score " << min_score << "; tried";
    for (const auto& [conv, score] : result.tried) {
      msg << " (" << to_string(conv.first) << "," << to_string(conv.second) << ")=" << score;
    }
    throw Error(ErrorKind::kCalibrationFailed, msg.str());
  }
  return result;
}

Matrix apply_round(const Matrix& rho, const SbsChannel& channel, bool postselect) {
  const Matrix lossy = channel.round_loss.empty() ? rho : apply_kraus(channel.round_loss, rho);
  if (postselect) return apply_kraus(channel.kraus[0], lossy);
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& list : channel.kraus) out += apply_kraus(list, lossy);
  return out;
}

SbsRunResult apply_rounds(const OscillatorState& rho, const SbsChannel& channel, int n_rounds, bool postselect) {
  if (n_rounds < 0) throw Error(ErrorKind::kInvalidArgument, "n_rounds must be >= 0");
  if (rho.dim() != channel.dim) throw Error(ErrorKind::kInvalidDimension, "state does not match channel");
  SbsRunResult out;
  Matrix current = rho.density() / rho.trace();
  double weight = 1.0;
  for (int r = 1; r <= n_rounds; ++r) {
    Matrix next = apply_round(current, channel, postselect);
    next = 0.5 * (next + next.adjoint()).eval();
    const double p = next.trace().real();
    SbsRecord rec;
    rec.round = r;
    rec.syndrome = postselect ? "gg" : "all";
    rec.outcome_model = postselect ? "postselect" : "cptp";
    rec.pre_weight = weight;
    rec.round_prob = p;
    weight *= p;
    rec.post_weight = weight;
    out.records.push_back(rec);
    if (postselect && !(weight >= 1e-12)) {
      throw Error(ErrorKind::kPostSelectionStarved,
                  "success probability " + std::to_string(weight) + " after round " + std::to_string(r));
    }
    current = next / p;
    if (postselect) out.frame = channel.logical_frame * out.frame;
  }
  out.rounds = n_rounds;
  out.success_prob = postselect ? weight : current.trace().real();
  out.state = OscillatorState::from_density(std::move(current), 1.0, 1e-8);
  return out;
}

SteadyStateResult steady_state_rounds(const OscillatorState& rho, const SbsChannel& channel, double tol,
                                      int max_rounds) {
  if (!(tol > 0.0)) throw Error(ErrorKind::kInvalidArgument, "tolerance must be positive");
  SteadyStateResult out;
  std::vector<Matrix> history{rho.density() / rho.trace()};
  double weight = 1.0;
  for (int r = 1; r <= max_rounds; ++r) {
    Matrix next = apply_round(history.back(), channel, true);
    next = 0.5 * (next + next.adjoint()).eval();
    const double p = next.trace().real();
    weight *= p;
    if (!(weight >= 1e-12)) {
      throw Error(ErrorKind::kPostSelectionStarved, "steady-state iteration starved at round " + std::to_string(r));
    }
    history.push_back(next / p);
    out.frame = channel.logical_frame * out.frame;
    out.rounds_used = r;
    if (r >= 2) {
      const double dist = trace_distance(history[r], history[r - 2]);
      out.distances.push_back(dist);
      if (dist < tol) {
        out.converged = true;
        break;
      }
    }
  }
  out.success_prob = weight;
  out.state = OscillatorState::from_density(history.back(), 1.0, 1e-8);
  return out;
}

}  // namespace gkpkerr
