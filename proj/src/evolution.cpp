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

#include "gkpkerr/evolution.hpp"

#include <chrono>
#include <cmath>

#include "gkpkerr/errors.hpp"

namespace gkpkerr {

double NoiseSpec::gamma() const { return kappa_to_gamma(kappa, duration); }

NoiseSpec NoiseSpec::from_gamma(double gamma, double duration, double kappa_phi) {
  NoiseSpec spec;
  spec.kappa = gamma_to_kappa(gamma, duration);
  spec.kappa_phi = kappa_phi;
  spec.duration = duration;
  return spec;
}

void NoiseSpec::validate() const {
  if (!(kappa >= 0.0) || !(kappa_phi >= 0.0) || !(duration >= 0.0) || !std::isfinite(kappa) ||
      !std::isfinite(kappa_phi) || !std::isfinite(duration)) {
    throw Error(ErrorKind::kInvalidArgument, "noise rates and duration must be finite and non-negative");
  }
}

double gamma_to_kappa(double gamma, double duration) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "loss parameter gamma must lie in [0, 1), got " + std::to_string(gamma));
  }
  if (gamma == 0.0) return 0.0;
  if (!(duration > 0.0)) throw Error(ErrorKind::kInvalidArgument, "duration must be positive");
  return -std::log1p(-gamma) / duration;
}

double kappa_to_gamma(double kappa, double duration) { return -std::expm1(-kappa * duration); }

namespace {

struct DissipatorCoefficients {
  // jump(m, n) = kappa sqrt((m+1)(n+1)) multiplies rho(m+1, n+1).
  Eigen::ArrayXXd jump;
  // decay(m, n) = kappa (m + n)/2 + kappa_phi (m - n)^2 / 2.
  Eigen::ArrayXXd decay;
};

DissipatorCoefficients dissipator_coefficients(int dim, const NoiseSpec& noise) {
  DissipatorCoefficients c;
  c.jump = Eigen::ArrayXXd::Zero(dim - 1, dim - 1);
  c.decay = Eigen::ArrayXXd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    for (int m = 0; m < dim; ++m) {
      c.decay(m, n) = 0.5 * noise.kappa * (m + n) + 0.5 * noise.kappa_phi * double(m - n) * double(m - n);
      if (m < dim - 1 && n < dim - 1) c.jump(m, n) = noise.kappa * std::sqrt(double(m + 1) * double(n + 1));
    }
  }
  return c;
}

}  // namespace

EvolutionResult lindblad_evolve(const OscillatorState& rho0, const FockOperator& hamiltonian, const NoiseSpec& noise,
                                const IntegratorOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  noise.validate();
  const int dim = rho0.dim();
  if (hamiltonian.dim() != dim) throw Error(ErrorKind::kInvalidDimension, "Hamiltonian does not match state");
  if (hermiticity_defect(hamiltonian.matrix()) > 1e-12 * std::max(1.0, max_abs(hamiltonian.matrix()))) {
    throw Error(ErrorKind::kInvalidArgument, "Hamiltonian is not Hermitian");
  }

  Matrix rho = rho0.density();
  const double trace0 = rho.trace().real();
  EvolutionResult result;
  const double total = noise.duration;
  const auto coeffs = dissipator_coefficients(dim, noise);
  const bool diagonal = hamiltonian.is_diagonal();
  const RealVector energies = hamiltonian.matrix().diagonal().real();

  // Spectral bound of the integrated right-hand side.
  double oscillation = 0.0;
  RealVector gaps;
  if (diagonal) {
    gaps = energies.tail(dim - 1) - energies.head(dim - 1);
    oscillation = gaps.maxCoeff() - gaps.minCoeff();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hamiltonian.matrix(), Eigen::EigenvaluesOnly);
    oscillation = es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
  }
  const double bound = oscillation + noise.kappa * dim + noise.kappa_phi * double(dim) * dim;

  if (total > 0.0) {
    double h = total / options.min_steps;
    if (bound > 0.0) h = std::min(h, options.safety / bound);
    h *= options.step_scale;
    const long steps = static_cast<long>(std::ceil(total / h - 1e-9));
    h = total / steps;
    result.steps = steps;
    result.step = h;

    Matrix k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), tmp(dim, dim);
    const Eigen::Index inner = dim - 1;
    const Matrix& ham = hamiltonian.matrix();

    // Interaction-frame factor e^{-i (gap_m - gap_n) t} is a rank-one outer product.
    Vector phase(inner);
    auto rhs = [&](double t, const Matrix& x, Matrix& out) {
      out.array() = -coeffs.decay * x.array();
      if (diagonal) {
        for (Eigen::Index m = 0; m < inner; ++m) phase(m) = std::polar(1.0, -gaps(m) * t);
        out.topLeftCorner(inner, inner).array() +=
            coeffs.jump * (phase * phase.adjoint()).array() * x.bottomRightCorner(inner, inner).array();
      } else {
        out.topLeftCorner(inner, inner).array() += coeffs.jump * x.bottomRightCorner(inner, inner).array();
        out.noalias() += Complex(0.0, -1.0) * (ham * x);
        out.noalias() += Complex(0.0, 1.0) * (x * ham);
      }
    };

    for (long s = 0; s < steps; ++s) {
      const double t = s * h;
      rhs(t, rho, k1);
      tmp = rho + 0.5 * h * k1;
      rhs(t + 0.5 * h, tmp, k2);
      tmp = rho + 0.5 * h * k2;
      rhs(t + 0.5 * h, tmp, k3);
      tmp = rho + h * k3;
      rhs(t + h, tmp, k4);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      result.max_trace_drift = std::max(result.max_trace_drift, std::abs(rho.trace().real() - trace0));
    }
    if (diagonal) {
      Vector frame(dim);
      for (int m = 0; m < dim; ++m) frame(m) = std::polar(1.0, -energies(m) * total);
      rho = (frame * frame.adjoint()).cwiseProduct(rho);
    }
  }

  rho = 0.5 * (rho + rho.adjoint()).eval();
  if (!rho.allFinite()) throw Error(ErrorKind::kIntegratorFailure, "state became non-finite");
  result.min_eigenvalue = min_eigenvalue(rho);
  result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (result.max_trace_drift > options.trace_tol || result.min_eigenvalue < -options.negativity_tol) {
    throw Error(ErrorKind::kIntegratorFailure,
                "trace drift " + std::to_string(result.max_trace_drift) + ", min eigenvalue " +
                    std::to_string(result.min_eigenvalue) + " after " + std::to_string(result.steps) + " steps");
  }
  result.state = OscillatorState::from_density(std::move(rho), trace0, options.trace_tol);
  return result;
}

KrausSet loss_channel(int dim, double gamma) {
  if (dim < 2) throw Error(ErrorKind::kInvalidDimension, "Fock truncation must be >= 2");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error(ErrorKind::kInvalidArgument, "gamma must lie in [0, 1]");
  KrausSet kraus;
  const int max_k = gamma == 0.0 ? 0 : dim - 1;
  for (int k = 0; k <= max_k; ++k) {
    Matrix op = Matrix::Zero(dim, dim);
    for (int n = k; n < dim; ++n) {
      const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
      double amp = std::exp(0.5 * log_binom);
      amp *= std::pow(1.0 - gamma, 0.5 * (n - k)) * std::pow(gamma, 0.5 * k);
      op(n - k, n) = amp;
    }
    kraus.push_back(std::move(op));
  }
  return kraus;
}

Matrix apply_kraus(const KrausSet& kraus, const Matrix& rho) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus) out.noalias() += k * rho * k.adjoint();
  return out;
}

double kraus_completeness_defect(const KrausSet& kraus, int interior_dim) {
  if (kraus.empty()) return 1.0;
  Matrix sum = Matrix::Zero(kraus.front().cols(), kraus.front().cols());
  for (const auto& k : kraus) sum.noalias() += k.adjoint() * k;
  const int d = std::min<int>(interior_dim, static_cast<int>(sum.rows()));
  return max_abs(sum.topLeftCorner(d, d) - Matrix::Identity(d, d));
}

}  // namespace gkpkerr
