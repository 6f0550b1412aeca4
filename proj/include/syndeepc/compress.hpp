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
#include <string_view>
#include <vector>

#include "syndeepc/transport.hpp"

namespace syndeepc {

enum class InitKind { kRandomColumns, kKmeansPlusPlus, kProvided };

std::string_view to_string(InitKind kind);
// "random-columns", "kmeans++" (or "kmeans-plus-plus"), "provided".
InitKind parse_init_kind(std::string_view text);

struct CompressionConfig {
  int S = 1;
  GroundNorm ground_norm = GroundNorm::kOne;  // kOne or kTwo
  InitKind init = InitKind::kKmeansPlusPlus;
  Eigen::MatrixXd initial_atoms;  // r x S, used with InitKind::kProvided
  int max_outer_iters = 200;
  double outer_tol = 1e-6;  // relative decrease of the transport cost
  double gamma = 0.0;       // > 0 switches inner solves to Sinkhorn
  std::uint64_t seed = 0;
  // 1-norm only: a coordinate-wise median that falls outside conv(H) is
  // replaced by the furthest hull point on the segment from the
  // transport-weighted mean towards it.
  bool hull_guard = true;

  // Throws ConfigError for invalid settings against R data columns.
  void validate(Eigen::Index rows, Eigen::Index R) const;
};

struct SyntheticDataset {
  Eigen::MatrixXd atoms;  // r x S
  double eta = 0.0;       // <plan.T, D(H, atoms)>
  TransportPlan plan;     // R x S
  int iterations = 0;     // atom-update rounds
  std::vector<double> cost_history;
  std::vector<std::string> events;
  GroundNorm ground_norm = GroundNorm::kOne;
  std::uint64_t seed = 0;
  InitKind init = InitKind::kKmeansPlusPlus;
};

// Block-coordinate descent on the atom locations S (r x S) of
//   min_S min_{T in T(1/R, 1/S)} sum_ij t_ij ||h_i - s_j||.
// Only local optimality is promised.
SyntheticDataset compress(const Eigen::MatrixXd& H, const CompressionConfig& cfg);

struct EtaPoint {
  int S = 0;
  double eta = 0.0;
  double wall_time = 0.0;  // seconds
  int iterations = 0;
  bool ok = false;
  std::string error;
};

// Independent compress runs for every S (seed + index); a failing entry is
// reported in place without aborting the sweep. `jobs` > 1 runs entries on
// worker threads; results stay in input order.
std::vector<EtaPoint> eta_curve(const Eigen::MatrixXd& H, const std::vector<int>& S_list,
                                const CompressionConfig& cfg, int jobs = 1);

// LP feasibility: lambda >= 0, sum(lambda) = 1, ||columns lambda - point||_inf <= tol.
bool in_convex_hull(const Eigen::VectorXd& point, const Eigen::MatrixXd& columns,
                    double tol = 1e-6);

// Minimizer of sum_i w_i |v_i - x|; the midpoint of the median interval on ties.
double weighted_median(const Eigen::VectorXd& values, const Eigen::VectorXd& weights);
// Coordinate-wise weighted median of the columns of `points`.
Eigen::VectorXd coordinatewise_median(const Eigen::MatrixXd& points,
                                      const Eigen::VectorXd& weights);
// Weighted geometric median by Weiszfeld iteration with the Vardi-Zhang fix
// at data points.
Eigen::VectorXd weighted_geometric_median(const Eigen::MatrixXd& points,
                                          const Eigen::VectorXd& weights,
                                          const Eigen::VectorXd& start, double tol = 1e-9,
                                          int max_iter = 200);

// Atoms as a CSV matrix (r rows, S comma-separated values each) plus a
// `<path>.meta` key=value sidecar.
void save_synthetic(const std::string& path, const SyntheticDataset& data);
SyntheticDataset load_synthetic(const std::string& path);

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& mat);
Eigen::MatrixXd read_matrix_csv(std::istream& is);

}  // namespace syndeepc
