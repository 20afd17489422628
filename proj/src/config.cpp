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

#include "gkpkerr/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gkpkerr/errors.hpp"
#include "gkpkerr/sbs.hpp"

namespace gkpkerr {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RealisticConfig, delta, gamma_init, gamma, p_eg, p_ge, n_rounds,
                                                round_loss_gamma, dephasing)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(WignerConfig, delta, lo, hi, points)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SweepConfig, deltas, gammas, n_rounds, decoder, dim, allow_fine_delta,
                                                kerr_rate, dephasing, gamma_init, p_eg, p_ge, round_loss_gamma,
                                                ancilla_dephasing, rotation_first, rotation_second, truncation_check,
                                                truncation_abs_tol, truncation_rel_tol, min_steps, step_safety,
                                                steady_tol, steady_max_rounds, trajectories, realistic, wigner, seed,
                                                threads, out_dir)

std::vector<double> SweepConfig::default_gammas() {
  std::vector<double> out{0.0};
  const double lo = std::log10(1e-4), hi = std::log10(3e-2);
  for (int i = 0; i < 12; ++i) out.push_back(std::pow(10.0, lo + (hi - lo) * i / 11.0));
  out.back() = 3e-2;
  out[1] = 1e-4;
  return out;
}

SweepConfig::SweepConfig() : gammas(default_gammas()) {}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::kConfig, what);
}

bool probability(double p) { return p >= 0.0 && p < 1.0; }

void reject_unknown_keys(const nlohmann::json& given, const nlohmann::json& known, const std::string& where) {
  for (const auto& [key, value] : given.items()) {
    require(known.contains(key), "unknown key '" + where + key + "'");
    if (value.is_object() && known.at(key).is_object()) reject_unknown_keys(value, known.at(key), where + key + ".");
  }
}

}  // namespace

void SweepConfig::validate() const {
  require(!deltas.empty(), "deltas must not be empty");
  for (double d : deltas) {
    require(d > 0.0 && d <= 0.6, "delta must lie in (0, 0.6]");
    require(allow_fine_delta || d >= 0.2, "delta below 0.2 needs allow_fine_delta");
  }
  require(!gammas.empty(), "gammas must not be empty");
  for (double g : gammas) require(probability(g), "gamma must lie in [0, 1)");
  for (int n : n_rounds) require(n >= 0, "n_rounds entries must be >= 0");
  require(decoder == "perfect_ed" || decoder == "sbs" || decoder == "both", "decoder must be perfect_ed, sbs or both");
  require(dim == 0 || dim >= 2, "dim must be 0 (default) or >= 2");
  require(std::isfinite(kerr_rate) && kerr_rate != 0.0, "kerr_rate must be finite and non-zero");
  require(dephasing >= 0.0 && std::isfinite(dephasing), "dephasing must be >= 0");
  for (double p : {gamma_init, p_eg, p_ge, round_loss_gamma, ancilla_dephasing}) {
    require(probability(p), "probabilities must lie in [0, 1)");
  }
  try {
    parse_rotation_axis(rotation_first);
    parse_rotation_axis(rotation_second);
  } catch (const Error& e) {
    throw Error(ErrorKind::kConfig, e.what());
  }
  require(truncation_abs_tol > 0.0 && truncation_rel_tol > 0.0, "truncation tolerances must be positive");
  require(min_steps >= 1 && step_safety > 0.0, "integrator settings must be positive");
  require(steady_tol > 0.0 && steady_max_rounds >= 2, "steady-state settings out of range");
  require(trajectories >= 1, "trajectories must be >= 1");
  require(threads >= 0, "threads must be >= 0");
  require(realistic.delta > 0.0 && realistic.delta <= 0.6, "realistic.delta must lie in (0, 0.6]");
  for (double p : {realistic.gamma_init, realistic.gamma, realistic.p_eg, realistic.p_ge, realistic.round_loss_gamma}) {
    require(probability(p), "realistic probabilities must lie in [0, 1)");
  }
  require(realistic.n_rounds >= 0 && realistic.dephasing >= 0.0, "realistic settings out of range");
  require(wigner.delta > 0.0 && wigner.delta <= 0.6, "wigner.delta must lie in (0, 0.6]");
  require(wigner.points >= 2 && wigner.hi > wigner.lo, "wigner grid must have >= 2 points and hi > lo");
}

std::string to_json(const SweepConfig& config) {
  nlohmann::json j = config;
  return j.dump(2) + "\n";
}

SweepConfig config_from_json(const std::string& text) {
  SweepConfig config;
  try {
    const auto j = nlohmann::json::parse(text);
    require(j.is_object(), "config must be a JSON object");
    reject_unknown_keys(j, nlohmann::json(SweepConfig{}), "");
    config = j.get<SweepConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kConfig, e.what());
  }
  config.validate();
  return config;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

}  // namespace gkpkerr
