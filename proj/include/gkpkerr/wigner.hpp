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

#pragma once

#include <string>
#include <vector>

#include "gkpkerr/fock.hpp"

namespace gkpkerr {

/// Wigner function on a rectangular (q, p) grid, normalized so that the
/// integral over the plane is the trace of the state (vacuum peak 1/pi).
struct WignerGrid {
  RealVector q;
  RealVector p;
  /// values(ip, iq) = W(q[iq], p[ip]).
  RealMatrix values;
  /// Set when the grid reaches beyond the phase-space radius the truncation
  /// can represent.
  bool resolution_warning = false;

  double integral() const;
  double at(int iq, int ip) const { return values(ip, iq); }
};

RealVector linspace(double lo, double hi, int points);

/// W(q, p) via the displaced-parity expansion: Laguerre sums along each
/// diagonal of rho evaluated by Clenshaw recurrence, which stays stable at
/// large photon numbers.
WignerGrid wigner(const OscillatorState& state, const RealVector& q_grid, const RealVector& p_grid);

/// Direct displaced-parity evaluation at a single point:
/// (1/pi) Tr[rho D(alpha) Pi D(alpha)^dag] with alpha = (q + i p)/sqrt(2).
/// The state is zero-padded so the displacement is resolved; costs one matrix
/// exponential per call.
Complex wigner_displaced_parity(const OscillatorState& state, double q, double p);

/// Phase-space radius squared (q^2 + p^2) up to which a truncation of `dim`
/// levels resolves Wigner features.
double wigner_resolvable_radius2(int dim);

}  // namespace gkpkerr
