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

#include "syndeepc/hankel.hpp"

#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

#include "syndeepc/error.hpp"

namespace syndeepc {

HankelMatrix build_hankel(const Eigen::MatrixXd& signal, int depth) {
  const Eigen::Index w = signal.rows(), n = signal.cols();
  if (depth < 1) throw ConfigError("build_hankel: depth must be positive");
  if (n < depth) throw ConfigError("build_hankel: horizon exceeds data");
  const Eigen::Index cols = n - depth + 1;
  HankelMatrix h;
  h.w = static_cast<int>(w);
  h.depth = depth;
  h.length = n;
  h.data.resize(w * depth, cols);
  for (int i = 0; i < depth; ++i) {
    h.data.middleRows(i * w, w) = signal.middleCols(i, cols);
  }
  return h;
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& mat) {
  if (mat.size() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(mat);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  const double tol = static_cast<double>(std::max(mat.rows(), mat.cols())) *
                     std::numeric_limits<double>::epsilon() * sv[0];
  return (sv.array() > tol).count();
}

ExcitationReport is_persistently_exciting(const Eigen::MatrixXd& signal, int order) {
  ExcitationReport rep;
  const Eigen::Index w = signal.rows(), n = signal.cols();
  rep.required_rank = w * order;
  if (order < 1) {
    rep.reason = "order must be positive";
    return rep;
  }
  if (n >= order) rep.rank = numerical_rank(build_hankel(signal, order).data);
  if (n < (w + 1) * order - 1) {
    rep.reason = "N < (w+1)K-1 cannot hold";
    return rep;
  }
  rep.exciting = rep.rank == rep.required_rank;
  if (!rep.exciting) {
    rep.reason = "Hankel rank " + std::to_string(rep.rank) + " < " +
                 std::to_string(rep.required_rank);
  }
  return rep;
}

long min_data_length(int m, int n, int Ki, int K) {
  if (m < 1 || n < 1 || K < 1 || Ki < 0) {
    throw ConfigError("min_data_length: m, n, K must be positive and Ki nonnegative");
  }
  return static_cast<long>(m + 1) * (n + Ki + K) - 1;
}

Eigen::MatrixXd io_hankel(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& outputs,
                          int depth) {
  if (inputs.cols() != outputs.cols()) {
    throw DimensionError("io_hankel: input and output lengths differ");
  }
  const HankelMatrix hu = build_hankel(inputs, depth);
  const HankelMatrix hy = build_hankel(outputs, depth);
  Eigen::MatrixXd data(hu.data.rows() + hy.data.rows(), hu.cols());
  data << hu.data, hy.data;
  return data;
}

HankelBlocks split_blocks(const Eigen::MatrixXd& data, int m, int l, int Ki, int K) {
  if (m < 1 || l < 1 || K < 1 || Ki < 0) {
    throw ConfigError("split_blocks: invalid block sizes");
  }
  const Eigen::Index L = Ki + K;
  if (data.rows() != (m + l) * L) {
    throw DimensionError("split_blocks: data has " + std::to_string(data.rows()) +
                         " rows, expected (m+l)(Ki+K) = " + std::to_string((m + l) * L));
  }
  HankelBlocks b;
  b.m = m;
  b.l = l;
  b.Ki = Ki;
  b.K = K;
  b.Ub = data.topRows(m * Ki);
  b.Uf = data.middleRows(m * Ki, m * K);
  b.Yb = data.middleRows(m * L, l * Ki);
  b.Yf = data.bottomRows(l * K);
  return b;
}

Eigen::MatrixXd restack(const HankelBlocks& b) {
  Eigen::MatrixXd data((b.m + b.l) * (b.Ki + b.K), b.cols());
  data << b.Ub, b.Uf, b.Yb, b.Yf;
  return data;
}

InitialWindow window_from(const Trajectory& traj, Eigen::Index end, int Ki) {
  if (end < Ki || end > traj.length()) {
    throw ConfigError("window_from: window exceeds trajectory");
  }
  InitialWindow w;
  const Eigen::Index m = traj.inputs.rows(), l = traj.outputs.rows();
  w.u_ini.resize(m * Ki);
  w.y_ini.resize(l * Ki);
  for (int i = 0; i < Ki; ++i) {
    w.u_ini.segment(i * m, m) = traj.inputs.col(end - Ki + i);
    w.y_ini.segment(i * l, l) = traj.outputs.col(end - Ki + i);
  }
  return w;
}

double span_residual(const Eigen::MatrixXd& data, const Eigen::VectorXd& trajectory) {
  if (data.rows() != trajectory.size()) {
    throw DimensionError("span_residual: trajectory length does not match data rows");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(data, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  if (sv.size() > 0 && sv[0] > 0.0) {
    const double tol = static_cast<double>(std::max(data.rows(), data.cols())) *
                       std::numeric_limits<double>::epsilon() * sv[0];
    rank = (sv.array() > tol).count();
  }
  const auto basis = svd.matrixU().leftCols(rank);
  return (trajectory - basis * (basis.transpose() * trajectory)).norm();
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const Eigen::Index m = traj.inputs.rows(), l = traj.outputs.rows();
  for (Eigen::Index i = 0; i < m; ++i) os << (i ? "," : "") << "u_" << i + 1;
  for (Eigen::Index i = 0; i < l; ++i) os << (m + i ? "," : "") << "y_" << i + 1;
  os << '\n' << std::setprecision(17);
  for (Eigen::Index k = 0; k < traj.length(); ++k) {
    for (Eigen::Index i = 0; i < m; ++i) os << (i ? "," : "") << traj.inputs(i, k);
    for (Eigen::Index i = 0; i < l; ++i) os << (m + i ? "," : "") << traj.outputs(i, k);
    os << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("trajectory csv: missing header");
  int m = 0, l = 0;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell.rfind("u_", 0) == 0) {
        if (l > 0) throw ConfigError("trajectory csv: input columns must precede outputs");
        ++m;
      } else if (cell.rfind("y_", 0) == 0) {
        ++l;
      } else {
        throw ConfigError("trajectory csv: unexpected column '" + cell + "'");
      }
    }
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("trajectory csv: bad number '" + cell + "'");
      }
    }
    if (static_cast<int>(row.size()) != m + l) {
      throw ConfigError("trajectory csv: row has " + std::to_string(row.size()) +
                        " values, expected " + std::to_string(m + l));
    }
    rows.push_back(std::move(row));
  }
  Trajectory traj;
  const auto T = static_cast<Eigen::Index>(rows.size());
  traj.inputs.resize(m, T);
  traj.outputs.resize(l, T);
  for (Eigen::Index k = 0; k < T; ++k) {
    for (int i = 0; i < m; ++i) traj.inputs(i, k) = rows[k][i];
    for (int i = 0; i < l; ++i) traj.outputs(i, k) = rows[k][m + i];
  }
  return traj;
}

}  // namespace syndeepc
