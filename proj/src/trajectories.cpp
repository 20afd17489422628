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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include <Eigen/Eigenvalues>

#include "gkpkerr/errors.hpp"
#include "gkpkerr/evolution.hpp"

namespace gkpkerr {

namespace {

// Propagator of the no-jump evolution exp(-i H_eff t) in the eigenbasis of
// H_eff = H - (i/2)(kappa n + kappa_phi n^2).
class NoJumpPropagator {
 public:
  NoJumpPropagator(const FockOperator& hamiltonian, const NoiseSpec& noise) {
    const int dim = hamiltonian.dim();
    Matrix heff = hamiltonian.matrix();
    for (int m = 0; m < dim; ++m) {
      heff(m, m) -= Complex(0.0, 0.5 * (noise.kappa * m + noise.kappa_phi * double(m) * m));
    }
    diagonal_ = hamiltonian.is_diagonal();
    if (diagonal_) {
      eigenvalues_ = heff.diagonal();
    } else {
      Eigen::ComplexEigenSolver<Matrix> es(heff);
      if (es.info() != Eigen::Success) throw Error(ErrorKind::kNumeric, "effective Hamiltonian diagonalization failed");
      eigenvalues_ = es.eigenvalues();
      vectors_ = es.eigenvectors();
      inverse_ = vectors_.inverse();
    }
  }

  /// Coefficients of psi in the eigenbasis.
  Vector to_eigenbasis(const Vector& psi) const { return diagonal_ ? psi : Vector(inverse_ * psi); }
  Vector from_eigenbasis(const Vector& c) const { return diagonal_ ? c : Vector(vectors_ * c); }

  Vector evolve_coefficients(const Vector& c, double t) const {
    return (c.array() * (Complex(0.0, -t) * eigenvalues_.array()).exp()).matrix();
  }
  double norm2_at(const Vector& c, double t) const { return from_eigenbasis(evolve_coefficients(c, t)).squaredNorm(); }

 private:
  bool diagonal_ = true;
  Vector eigenvalues_;
  Matrix vectors_;
  Matrix inverse_;
};

struct Trajectory {
  Vector final_ket;
  long jumps = 0;
};

Trajectory run_trajectory(const Vector& psi0, const NoJumpPropagator& prop, const NoiseSpec& noise, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const int dim = static_cast<int>(psi0.size());
  Trajectory out;
  Vector psi = psi0.normalized();
  double t = 0.0;
  const double total = noise.duration;
  while (true) {
    const double r = uniform(rng);
    const Vector c = prop.to_eigenbasis(psi);
    const double remaining = total - t;
    if (prop.norm2_at(c, remaining) > r) {
      psi = prop.from_eigenbasis(prop.evolve_coefficients(c, remaining)).normalized();
      break;
    }
    // The norm decreases monotonically; bisect for the jump time.
    double lo = 0.0, hi = remaining;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, total); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (prop.norm2_at(c, mid) > r) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double tau = 0.5 * (lo + hi);
    psi = prop.from_eigenbasis(prop.evolve_coefficients(c, tau));
    t += tau;

    Vector lowered = Vector::Zero(dim);
    for (int m = 1; m < dim; ++m) lowered(m - 1) = std::sqrt(double(m)) * psi(m);
    Vector counted(dim);
    for (int m = 0; m < dim; ++m) counted(m) = double(m) * psi(m);
    const double w_loss = noise.kappa * lowered.squaredNorm();
    const double w_deph = noise.kappa_phi * counted.squaredNorm();
    if (!(w_loss + w_deph > 0.0)) {
      psi.normalize();
      continue;
    }
    psi = uniform(rng) * (w_loss + w_deph) < w_loss ? lowered.normalized() : counted.normalized();
    ++out.jumps;
  }
  out.final_ket = std::move(psi);
  return out;
}

}  // namespace

TrajectoryResult trajectory_oracle(const OscillatorState& rho0, const FockOperator& hamiltonian,
                                   const NoiseSpec& noise, int n_traj, std::uint64_t seed, int threads) {
  const auto start = std::chrono::steady_clock::now();
  noise.validate();
  if (n_traj < 1) throw Error(ErrorKind::kInvalidArgument, "n_traj must be >= 1");
  const int dim = rho0.dim();
  if (hamiltonian.dim() != dim) throw Error(ErrorKind::kInvalidDimension, "Hamiltonian does not match state");

  // Mixed inputs are sampled from their eigen-decomposition.
  std::vector<Vector> components;
  std::vector<double> weights;
  if (rho0.is_pure()) {
    components.push_back(rho0.ket().normalized());
    weights.push_back(1.0);
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho0.density() / rho0.trace());
    for (int i = 0; i < dim; ++i) {
      if (es.eigenvalues()(i) > 1e-14) {
        components.push_back(es.eigenvectors().col(i));
        weights.push_back(es.eigenvalues()(i));
      }
    }
  }

  const NoJumpPropagator prop(hamiltonian, noise);
  std::vector<Trajectory> results(n_traj);
  auto worker = [&](int first, int stride) {
    for (int k = first; k < n_traj; k += stride) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(k)};
      std::mt19937_64 rng(seq);
      std::size_t pick = 0;
      if (components.size() > 1) {
        std::discrete_distribution<std::size_t> choose(weights.begin(), weights.end());
        pick = choose(rng);
      }
      results[k] = run_trajectory(components[pick], prop, noise, rng);
    }
  };
  int n_threads = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n_threads = std::min(n_threads, n_traj);
  if (n_threads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker, i, n_threads);
    for (auto& th : pool) th.join();
  }

  TrajectoryResult out;
  Matrix sum = Matrix::Zero(dim, dim);
  out.finals.reserve(n_traj);
  for (auto& tr : results) {
    sum += tr.final_ket * tr.final_ket.adjoint();
    out.total_jumps += tr.jumps;
    out.finals.push_back(std::move(tr.final_ket));
  }
  const double n = n_traj;
  const Matrix mean = sum / n;
  // Two passes: the one-pass variance cancels catastrophically near zero spread.
  RealMatrix sq = RealMatrix::Zero(dim, dim);
  for (const Vector& f : out.finals) sq += (f * f.adjoint() - mean).cwiseAbs2();
  out.standard_error = (sq / (n * std::max(1.0, n - 1.0))).cwiseSqrt();
  out.evolution.state = OscillatorState::from_density(0.5 * (mean + mean.adjoint()), 1.0, 1e-8);
  out.evolution.min_eigenvalue = min_eigenvalue(mean);
  out.evolution.max_trace_drift = std::abs(mean.trace().real() - 1.0);
  out.evolution.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

RatioEstimate ratio_estimate(const std::vector<double>& numerators, const std::vector<double>& denominators) {
  if (numerators.size() != denominators.size() || numerators.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "ratio estimate needs matching, non-empty samples");
  }
  const double n = static_cast<double>(numerators.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < numerators.size(); ++i) {
    sx += numerators[i];
    sy += denominators[i];
  }
  const double mx = sx / n, my = sy / n;
  if (!(my > 0.0)) throw Error(ErrorKind::kNumeric, "ratio estimate denominator vanishes");
  RatioEstimate est;
  est.mean = mx / my;
  double s = 0.0;
  for (std::size_t i = 0; i < numerators.size(); ++i) {
    const double r = numerators[i] - est.mean * denominators[i];
    s += r * r;
  }
  est.standard_error = numerators.size() > 1 ? std::sqrt(s / (n - 1.0) / n) / my : 0.0;
  return est;
}

}  // namespace gkpkerr
