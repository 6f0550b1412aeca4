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

#include "syndeepc/lti.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "syndeepc/error.hpp"

namespace syndeepc {

namespace {

void require_shape(const Eigen::MatrixXd& mat, Eigen::Index rows, Eigen::Index cols,
                   const char* name) {
  if (mat.rows() != rows || mat.cols() != cols) {
    std::ostringstream os;
    os << "SystemRealization: " << name << " is " << mat.rows() << "x" << mat.cols()
       << ", expected " << rows << "x" << cols;
    throw DimensionError(os.str());
  }
}

}  // namespace

void SystemRealization::validate() const {
  const Eigen::Index nn = A.rows(), mm = B.cols(), ll = C.rows(), qq = E.cols();
  require_shape(A, nn, nn, "A");
  require_shape(B, nn, mm, "B");
  require_shape(E, nn, qq, "E");
  require_shape(C, ll, nn, "C");
  require_shape(D, ll, mm, "D");
  require_shape(F, ll, qq, "F");
  if (nn == 0 || mm == 0 || ll == 0) {
    throw DimensionError("SystemRealization: n, m and l must be positive");
  }
  if (!(Ts > 0.0)) throw ConfigError("SystemRealization: sampling time must be positive");
}

Eigen::MatrixXd controllability_matrix(const SystemRealization& sys) {
  const int n = sys.n(), m = sys.m();
  Eigen::MatrixXd ctrb(n, n * m);
  Eigen::MatrixXd block = sys.B;
  for (int i = 0; i < n; ++i) {
    ctrb.middleCols(i * m, m) = block;
    block = sys.A * block;
  }
  return ctrb;
}

bool is_controllable(const SystemRealization& sys) {
  sys.validate();
  const Eigen::MatrixXd ctrb = controllability_matrix(sys);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(ctrb);
  const auto& sv = svd.singularValues();
  const double tol = static_cast<double>(std::max(ctrb.rows(), ctrb.cols())) *
                     std::numeric_limits<double>::epsilon() * sv[0];
  return (sv.array() > tol).count() == sys.n();
}

NoiseModel NoiseModel::gaussian(double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw ConfigError("NoiseModel: stddev must be nonnegative");
  NoiseModel nm;
  nm.kind = NoiseKind::kGaussianIid;
  nm.stddev = Eigen::VectorXd::Constant(1, sigma);
  nm.seed = seed;
  return nm;
}

StepResult step(const SystemRealization& sys, const Eigen::VectorXd& x,
                const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (x.size() != sys.n() || u.size() != sys.m() || v.size() != sys.q()) {
    throw DimensionError("step: state/input/noise size does not match the system");
  }
  return {sys.A * x + sys.B * u + sys.E * v, sys.C * x + sys.D * u + sys.F * v};
}

Trajectory simulate(const SystemRealization& sys, const Eigen::VectorXd& x0,
                    const Eigen::MatrixXd& inputs, const NoiseModel& noise) {
  sys.validate();
  if (inputs.cols() == 0) throw ConfigError("simulate: input sequence is empty");
  if (inputs.rows() != sys.m() || x0.size() != sys.n()) {
    throw DimensionError("simulate: x0 or input dimension does not match the system");
  }
  const int q = sys.q();
  Eigen::VectorXd sigma = Eigen::VectorXd::Zero(q);
  if (noise.kind == NoiseKind::kGaussianIid) {
    if (noise.stddev.size() == 1) {
      sigma.setConstant(noise.stddev[0]);
    } else if (noise.stddev.size() == q) {
      sigma = noise.stddev;
    } else {
      throw DimensionError("simulate: noise stddev must have 1 or q entries");
    }
    if ((sigma.array() < 0.0).any()) throw ConfigError("simulate: negative noise stddev");
  }

  const Eigen::Index T = inputs.cols();
  Trajectory traj;
  traj.inputs = inputs;
  traj.outputs.resize(sys.l(), T);
  traj.states.resize(sys.n(), T);

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd x = x0;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(q);
  for (Eigen::Index k = 0; k < T; ++k) {
    if (noise.kind == NoiseKind::kGaussianIid) {
      for (int i = 0; i < q; ++i) v[i] = sigma[i] * normal(rng);
    }
    traj.states.col(k) = x;
    StepResult r = step(sys, x, inputs.col(k), v);
    traj.outputs.col(k) = r.y;
    x = std::move(r.x_next);
  }
  return traj;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> zoh_discretize(const Eigen::MatrixXd& ac,
                                                           const Eigen::MatrixXd& bc,
                                                           double ts) {
  const Eigen::Index n = ac.rows(), m = bc.cols();
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + m, n + m);
  aug.topLeftCorner(n, n) = ac * ts;
  aug.topRightCorner(n, m) = bc * ts;
  const Eigen::MatrixXd phi = aug.exp();
  return {phi.topLeftCorner(n, n), phi.topRightCorner(n, m)};
}

SystemRealization quadcopter_model(double ts) {
  if (!(ts > 0.0)) throw ConfigError("quadcopter_model: Ts must be positive");
  constexpr double kGravity = 9.81;
  constexpr double kMass = 0.5;
  constexpr double kArm = 0.17;
  constexpr double kIxx = 2.3e-3, kIyy = 2.3e-3, kIzz = 4.0e-3;
  constexpr double kYaw = 0.016;
  constexpr double kHover = 0.7007;
  // Thrust of one rotor at full command, chosen so that four rotors at the
  // hover command balance gravity.
  const double fmax = kMass * kGravity / (4.0 * kHover);

  Eigen::MatrixXd ac = Eigen::MatrixXd::Zero(12, 12);
  ac.block<3, 3>(0, 3).setIdentity();   // position <- velocity
  ac.block<3, 3>(6, 9).setIdentity();   // angles <- body rates
  ac(3, 7) = kGravity;                  // vx' = g theta
  ac(4, 6) = -kGravity;                 // vy' = -g phi

  Eigen::MatrixXd bc = Eigen::MatrixXd::Zero(12, 4);
  for (int r = 0; r < 4; ++r) bc(5, r) = fmax / kMass;
  // roll from rotors on the y axis, pitch from rotors on the x axis
  bc(9, 1) = kArm * fmax / kIxx;
  bc(9, 3) = -kArm * fmax / kIxx;
  bc(10, 0) = -kArm * fmax / kIyy;
  bc(10, 2) = kArm * fmax / kIyy;
  for (int r = 0; r < 4; ++r) bc(11, r) = (r % 2 == 0 ? 1.0 : -1.0) * kYaw * fmax / kIzz;

  SystemRealization sys;
  std::tie(sys.A, sys.B) = zoh_discretize(ac, bc, ts);
  sys.C = Eigen::MatrixXd::Identity(12, 12);
  sys.D = Eigen::MatrixXd::Zero(12, 4);
  sys.E = Eigen::MatrixXd::Zero(12, 12);
  sys.F = Eigen::MatrixXd::Identity(12, 12);
  sys.Ts = ts;
  return sys;
}

SystemRealization double_integrator_model(double ts) {
  if (!(ts > 0.0)) throw ConfigError("double_integrator_model: Ts must be positive");
  Eigen::MatrixXd ac(2, 2), bc(2, 1);
  ac << 0.0, 1.0, 0.0, 0.0;
  bc << 0.0, 1.0;
  SystemRealization sys;
  std::tie(sys.A, sys.B) = zoh_discretize(ac, bc, ts);
  sys.C = Eigen::MatrixXd(1, 2);
  sys.C << 1.0, 0.0;
  sys.D = Eigen::MatrixXd::Zero(1, 1);
  sys.E = Eigen::MatrixXd::Zero(2, 1);
  sys.F = Eigen::MatrixXd::Identity(1, 1);
  sys.Ts = ts;
  return sys;
}

void write_model(std::ostream& os, const SystemRealization& sys) {
  sys.validate();
  os << sys.n() << ' ' << sys.m() << ' ' << sys.l() << ' ' << sys.q() << ' '
     << std::setprecision(17) << sys.Ts << '\n';
  for (const Eigen::MatrixXd* mat : {&sys.A, &sys.B, &sys.E, &sys.C, &sys.D, &sys.F}) {
    os << '\n';
    for (Eigen::Index i = 0; i < mat->rows(); ++i) {
      for (Eigen::Index j = 0; j < mat->cols(); ++j) {
        if (j) os << ' ';
        os << std::setprecision(17) << (*mat)(i, j);
      }
      os << '\n';
    }
  }
}

SystemRealization read_model(std::istream& is) {
  int n = 0, m = 0, l = 0, q = 0;
  SystemRealization sys;
  if (!(is >> n >> m >> l >> q >> sys.Ts) || n <= 0 || m <= 0 || l <= 0 || q < 0) {
    throw ConfigError("read_model: malformed header, expected `n m l q Ts`");
  }
  auto read = [&is](Eigen::Index rows, Eigen::Index cols, const char* name) {
    Eigen::MatrixXd mat(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (!(is >> mat(i, j))) {
          throw ConfigError(std::string("read_model: truncated matrix ") + name);
        }
      }
    }
    return mat;
  };
  sys.A = read(n, n, "A");
  sys.B = read(n, m, "B");
  sys.E = read(n, q, "E");
  sys.C = read(l, n, "C");
  sys.D = read(l, m, "D");
  sys.F = read(l, q, "F");
  sys.validate();
  return sys;
}

SystemRealization load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file " + path);
  return read_model(in);
}

void save_model_file(const std::string& path, const SystemRealization& sys) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write model file " + path);
  write_model(out, sys);
}

}  // namespace syndeepc
