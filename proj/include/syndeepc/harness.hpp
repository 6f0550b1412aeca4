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
#include <optional>
#include <string>
#include <vector>

#include "syndeepc/compress.hpp"
#include "syndeepc/config.hpp"
#include "syndeepc/deepc.hpp"
#include "syndeepc/hankel.hpp"
#include "syndeepc/lti.hpp"

namespace syndeepc {

enum class RunMode { kRobust, kSoftened, kDeterministic };

struct ExperimentConfig {
  std::string system = "quadcopter";  // quadcopter | double-integrator | file
  std::string model_file;
  double Ts = 0.05;
  int Ki = 1;
  int K = 30;
  int N = 214;
  NoiseModel noise;  // seed is overwritten per use
  Eigen::VectorXd input_lower;  // m entries, or one broadcast to every input
  Eigen::VectorXd input_upper;
  double c = 200.0;
  double rho = 1e5;
  Eigen::VectorXd output_weights;  // l; empty selects the reference channels
  std::string reference_kind = "figure8";
  double period = 20.0;
  double amplitude = 1.0;
  double altitude = 1.0;
  Eigen::VectorXd reference_value;  // constant reference, l entries (or one, broadcast)
  double eps_beta = 1e-3;
  RunMode mode = RunMode::kRobust;
  std::optional<CompressionConfig> compression;
  int steps = 200;
  std::uint64_t seed = 1;
  std::vector<int> sweep_S;
  int jobs = 1;
  std::string output_dir = "out";
  std::string config_hash;

  // Reads and checks every key; throws ConfigError.
  static ExperimentConfig from(const Config& cfg);
  SystemRealization plant() const;
  InputBox box(int m) const;
  // Checks the data length against the plant; throws ConfigError.
  void validate(const SystemRealization& sys) const;
};

// l x length samples of x = A sin(2 pi t / T), y = A sin(4 pi t / T) / 2,
// z = altitude in channels 0..2 (those that exist), zero elsewhere; t = k Ts.
Eigen::MatrixXd figure8_reference(double Ts, double period, double amplitude, double altitude,
                                  int length, int l = 3);

// Reference samples for steps 0..length-1 as configured.
Eigen::MatrixXd reference_signal(const ExperimentConfig& cfg, int l, int length);

// Output weights with the default filled in: ones on the channels the
// reference drives (x, y, z for figure8, all for constant).
Eigen::VectorXd tracking_weights(const ExperimentConfig& cfg, int l);

struct TrainingData {
  Trajectory trajectory;
  Eigen::MatrixXd H;  // io Hankel matrix of depth Ki + K
  HankelBlocks blocks;
  ExcitationReport excitation;
};

// N steps from the zero state with i.i.d. uniform inputs over the box, noise
// seeded by cfg.seed. Throws SolverError when the inputs are not
// persistently exciting of order n + Ki + K.
TrainingData collect_training_data(const ExperimentConfig& cfg, const SystemRealization& sys);

struct StepRecord {
  int k = 0;
  Eigen::VectorXd u;          // applied input u1*(k)
  Eigen::VectorXd y;          // measured output y(k)
  Eigen::VectorXd reference;  // r(k), l entries
  double objective = 0.0;
  double solve_time = 0.0;
  long iterations = 0;
  InitialWindow window;  // window used to plan step k
};

struct Provenance {
  std::string config_hash;
  std::string dataset = "full";  // full | synthetic
  int columns = 0;               // R or S
  double eta = 0.0;
  double eps_beta = 0.0;
  double eps_bar = 0.0;
  std::uint64_t seed = 0;
  int compress_runs = 0;
  double offline_time = 0.0;
};

struct RunLog {
  std::vector<StepRecord> records;
  Eigen::VectorXd weights;  // per output channel, 0 = untracked
  double c = 1.0;
  Provenance provenance;
  Eigen::MatrixXd dataset;  // columns the controller used (training Hankel or atoms)

  std::vector<int> tracked() const;
  // |y - r| per tracked channel (rows) and step (columns).
  Eigen::MatrixXd errors() const;
  // sum_k ||u(k)||_1 + c sum_j w_j |y_j(k) - r_j(k)|
  double total_cost() const;
  double mean_solve_time() const;
};

// Training data, optional one-time compression, then the
// receding-horizon loop from the zero state with Ki warm-up steps at u = 0.
// Throws SolverError on a failed step after dumping the problem to
// <output_dir>/failed_step_<k>.lp when output_dir is nonempty.
RunLog run_receding_horizon(const ExperimentConfig& cfg);

void write_runlog_csv(std::ostream& os, const RunLog& log);
RunLog read_runlog_csv(std::istream& is);
void write_meta(std::ostream& os, const Provenance& p);
Provenance read_meta(std::istream& is);

struct RunSummary {
  std::string name;
  int steps = 0;
  std::vector<int> tracked;
  Eigen::VectorXd mean_abs_error;
  Eigen::VectorXd max_abs_error;
  double total_cost = 0.0;
  double mean_solve_time = 0.0;
  std::string dataset;
  int columns = 0;
  double eta = 0.0;
  double eps_bar = 0.0;
};

struct Comparison {
  std::vector<RunSummary> runs;
  std::vector<const RunLog*> logs;
};

// Throws ConfigError when the logs disagree on the reference over their
// common steps or on the tracked channels.
Comparison compare_runs(const std::vector<const RunLog*>& logs,
                        const std::vector<std::string>& names);
// One row per run, with differences to the first run.
void write_comparison_csv(std::ostream& os, const Comparison& cmp);
// Step-indexed error and solve-time series, one column group per run.
void write_series_csv(std::ostream& os, const Comparison& cmp);

void write_eta_curve_csv(std::ostream& os, const std::vector<EtaPoint>& curve);

}  // namespace syndeepc
