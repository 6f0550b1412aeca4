// Copyright 2026 The syndeepc Authors
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

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace syndeepc {

// Discrete-time stochastic LTI system
//   x(k+1) = A x(k) + B u(k) + E v(k)
//   y(k)   = C x(k) + D u(k) + F v(k)
struct SystemRealization {
  Eigen::MatrixXd A, B, E, C, D, F;
  double Ts = 1.0;

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
  int l() const { return static_cast<int>(C.rows()); }
  int q() const { return static_cast<int>(E.cols()); }

  // Throws DimensionError when the blocks disagree on (n, m, l, q).
  void validate() const;
};

Eigen::MatrixXd controllability_matrix(const SystemRealization& sys);
// Numerical rank of [B, AB, ..., A^{n-1}B] equals n.
bool is_controllable(const SystemRealization& sys);

enum class NoiseKind { kNone, kGaussianIid };

struct NoiseModel {
  NoiseKind kind = NoiseKind::kNone;
  Eigen::VectorXd stddev;  // one entry per noise channel, or a single broadcast entry
  std::uint64_t seed = 0;

  static NoiseModel none() { return {}; }
  static NoiseModel gaussian(double sigma, std::uint64_t seed);
};

// Inputs/outputs stored one column per time step.
struct Trajectory {
  Eigen::MatrixXd inputs;   // m x T
  Eigen::MatrixXd outputs;  // l x T
  Eigen::MatrixXd states;   // n x T, state x(k) at the time of each sample
  int k0 = 0;

  Eigen::Index length() const { return inputs.cols(); }
};

struct StepResult {
  Eigen::VectorXd x_next;
  Eigen::VectorXd y;
};

StepResult step(const SystemRealization& sys, const Eigen::VectorXd& x,
                const Eigen::VectorXd& u, const Eigen::VectorXd& v);

Trajectory simulate(const SystemRealization& sys, const Eigen::VectorXd& x0,
                    const Eigen::MatrixXd& inputs, const NoiseModel& noise);

// Zero-order-hold discretization of (Ac, Bc) over Ts.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> zoh_discretize(const Eigen::MatrixXd& ac,
                                                           const Eigen::MatrixXd& bc,
                                                           double ts);

// 12-state, 4-rotor quadcopter linearized about hover.
//
// State  col(x, y, z, vx, vy, vz, phi, theta, psi, p, q, r), full state measured.
// Inputs are per-rotor thrust deviations in units of the maximum rotor thrust;
// hover sits at 0.7007, so the physical range [0, 1] maps to the box
// [-0.7007, 0.2993]. Rotors 0..3 are at +x, +y, -x, -y (plus configuration),
// rotors 0 and 2 spin opposite to 1 and 3.
//
// Constants: mass 0.5 kg, arm 0.17 m, inertia diag(2.3e-3, 2.3e-3, 4.0e-3)
// kg m^2, yaw torque 0.016 m per unit thrust, g = 9.81 m/s^2. Small-angle
// coupling: ddot x = g theta, ddot y = -g phi.
//
// Noise enters every measurement channel: E = 0 (12 x 12), F = I.
SystemRealization quadcopter_model(double ts);

// Position/velocity double integrator with position measured (SISO).
SystemRealization double_integrator_model(double ts);

// Plain-text model file: header `n m l q Ts`, then A, B, E, C, D, F row-major,
// one matrix row per line, blank line between matrices.
void write_model(std::ostream& os, const SystemRealization& sys);
SystemRealization read_model(std::istream& is);
SystemRealization load_model_file(const std::string& path);
void save_model_file(const std::string& path, const SystemRealization& sys);

}  // namespace syndeepc
