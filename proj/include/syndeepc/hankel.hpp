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

#include <iosfwd>
#include <string>

#include "syndeepc/lti.hpp"

namespace syndeepc {

// Block-Hankel matrix of depth `depth` over a w x N signal: block (i, j) is
// signal(i + j), i < depth, j <= N - depth.
struct HankelMatrix {
  Eigen::MatrixXd data;
  int w = 0;
  int depth = 0;
  Eigen::Index length = 0;

  Eigen::Index cols() const { return data.cols(); }
};

HankelMatrix build_hankel(const Eigen::MatrixXd& signal, int depth);

struct ExcitationReport {
  bool exciting = false;
  Eigen::Index rank = 0;
  Eigen::Index required_rank = 0;
  std::string reason;
};

// Numerical rank with tolerance max(rows, cols) * eps * sigma_max.
Eigen::Index numerical_rank(const Eigen::MatrixXd& mat);

ExcitationReport is_persistently_exciting(const Eigen::MatrixXd& signal, int order);

// Shortest experiment for which an m-input signal can be persistently
// exciting of order n + Ki + K.
long min_data_length(int m, int n, int Ki, int K);

// Stacked input/output data matrix col(U, Y): all `depth` input blocks first,
// then all `depth` output blocks. Every column is one (u, y) window.
Eigen::MatrixXd io_hankel(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& outputs,
                          int depth);

// Past (Ki block rows) and future (K block rows) parts of an io data matrix.
// Works for any matrix in the io_hankel row convention, including compressed
// atom sets.
struct HankelBlocks {
  Eigen::MatrixXd Ub, Yb, Uf, Yf;
  int m = 0, l = 0, Ki = 0, K = 0;

  Eigen::Index cols() const { return Uf.cols(); }
};

HankelBlocks split_blocks(const Eigen::MatrixXd& data, int m, int l, int Ki, int K);
Eigen::MatrixXd restack(const HankelBlocks& blocks);

// Most recent Ki samples, oldest first.
struct InitialWindow {
  Eigen::VectorXd u_ini;  // m * Ki
  Eigen::VectorXd y_ini;  // l * Ki
};

// Window built from columns [end - Ki, end) of a trajectory.
InitialWindow window_from(const Trajectory& traj, Eigen::Index end, int Ki);

// 2-norm of the least-squares residual of `trajectory` against the column
// space of `data`; zero certifies membership.
double span_residual(const Eigen::MatrixXd& data, const Eigen::VectorXd& trajectory);

// Trajectory CSV: header `u_1,...,u_m,y_1,...,y_l`, one row per time step.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& is);

}  // namespace syndeepc
