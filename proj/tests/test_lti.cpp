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

#include <random>
#include <sstream>

#include "doctest.h"
#include "syndeepc/error.hpp"
#include "syndeepc/lti.hpp"
#include "support/random_system.hpp"

using namespace syndeepc;
using support::random_system;

namespace {

SystemRealization scalar_system() {
  SystemRealization sys;
  sys.A = Eigen::MatrixXd::Constant(1, 1, 0.5);
  sys.B = Eigen::MatrixXd::Constant(1, 1, 1.0);
  sys.C = Eigen::MatrixXd::Constant(1, 1, 1.0);
  sys.D = Eigen::MatrixXd::Zero(1, 1);
  sys.E = Eigen::MatrixXd::Zero(1, 1);
  sys.F = Eigen::MatrixXd::Zero(1, 1);
  return sys;
}

}  // namespace

TEST_CASE("step: identity dynamics keep the state") {
  SystemRealization sys;
  sys.A = Eigen::MatrixXd::Identity(2, 2);
  sys.B = Eigen::MatrixXd::Zero(2, 1);
  sys.E = Eigen::MatrixXd::Zero(2, 1);
  sys.C = Eigen::MatrixXd::Zero(1, 2);
  sys.D = Eigen::MatrixXd::Zero(1, 1);
  sys.F = Eigen::MatrixXd::Zero(1, 1);
  const auto r = step(sys, Eigen::Vector2d(1.0, 2.0), Eigen::VectorXd::Constant(1, 7.0),
                      Eigen::VectorXd::Zero(1));
  CHECK(r.x_next == Eigen::Vector2d(1.0, 2.0));
}

TEST_CASE("step: zero system maps everything to zero") {
  SystemRealization sys;
  sys.A = Eigen::MatrixXd::Zero(2, 2);
  sys.B = Eigen::MatrixXd::Zero(2, 1);
  sys.E = Eigen::MatrixXd::Zero(2, 1);
  sys.C = Eigen::MatrixXd::Zero(1, 2);
  sys.D = Eigen::MatrixXd::Zero(1, 1);
  sys.F = Eigen::MatrixXd::Zero(1, 1);
  const auto r = step(sys, Eigen::Vector2d(3.0, -4.0), Eigen::VectorXd::Constant(1, 2.0),
                      Eigen::VectorXd::Constant(1, 5.0));
  CHECK(r.x_next.isZero(0.0));
  CHECK(r.y.isZero(0.0));
}

TEST_CASE("step: scalar hand arithmetic") {
  const auto r = step(scalar_system(), Eigen::VectorXd::Constant(1, 2.0),
                      Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Zero(1));
  CHECK(r.x_next[0] == 2.0);  // 0.5 * 2 + 1
  CHECK(r.y[0] == 2.0);       // C x
}

TEST_CASE("step: dimension mismatch is a hard error") {
  CHECK_THROWS_AS(step(scalar_system(), Eigen::Vector2d(1.0, 1.0),
                       Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)),
                  DimensionError);
}

TEST_CASE("simulate examples") {
  SystemRealization zero = scalar_system();
  zero.A.setZero();
  zero.B.setZero();
  zero.C.setZero();
  const auto t0 = simulate(zero, Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Ones(1, 1),
                           NoiseModel::none());
  CHECK(t0.outputs.cols() == 1);
  CHECK(t0.outputs(0, 0) == 0.0);

  const auto t1 = simulate(scalar_system(), Eigen::VectorXd::Zero(1),
                           Eigen::MatrixXd::Ones(1, 2), NoiseModel::none());
  CHECK(t1.outputs(0, 0) == 0.0);
  CHECK(t1.outputs(0, 1) == 1.0);
  CHECK(t1.inputs.cols() == t1.outputs.cols());

  CHECK_THROWS_AS(simulate(scalar_system(), Eigen::VectorXd::Zero(1), Eigen::MatrixXd(1, 0),
                           NoiseModel::none()),
                  ConfigError);
}

TEST_CASE("simulate is repeatable given the seed") {
  std::mt19937_64 rng(11);
  const SystemRealization sys = random_system(rng, 3, 2, 2);
  const Eigen::MatrixXd u = Eigen::MatrixXd::Random(2, 50);
  const auto a = simulate(sys, Eigen::VectorXd::Ones(3), u, NoiseModel::gaussian(0.1, 42));
  const auto b = simulate(sys, Eigen::VectorXd::Ones(3), u, NoiseModel::gaussian(0.1, 42));
  const auto c = simulate(sys, Eigen::VectorXd::Ones(3), u, NoiseModel::gaussian(0.1, 43));
  CHECK((a.outputs.array() == b.outputs.array()).all());
  CHECK((a.outputs.array() != c.outputs.array()).any());
}

TEST_CASE("noise-free simulate equals repeated step exactly") {
  std::mt19937_64 rng(12);
  const SystemRealization sys = random_system(rng, 4, 2, 3);
  const Eigen::MatrixXd u = Eigen::MatrixXd::Random(2, 30);
  const auto traj = simulate(sys, Eigen::VectorXd::Ones(4), u, NoiseModel::none());
  Eigen::VectorXd x = Eigen::VectorXd::Ones(4);
  for (int k = 0; k < 30; ++k) {
    const auto r = step(sys, x, u.col(k), Eigen::VectorXd::Zero(1));
    CHECK((traj.outputs.col(k).array() == r.y.array()).all());
    x = r.x_next;
  }
}

TEST_CASE("superposition of noise-free responses") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const SystemRealization sys = random_system(rng, 1 + trial % 4, 1 + trial % 2, 2);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Random(sys.n());
    const Eigen::MatrixXd u1 = Eigen::MatrixXd::Random(sys.m(), 40);
    const Eigen::MatrixXd u2 = Eigen::MatrixXd::Random(sys.m(), 40);
    const auto y12 = simulate(sys, x0, u1 + u2, NoiseModel::none()).outputs;
    const auto y1 = simulate(sys, x0, u1, NoiseModel::none()).outputs;
    const auto y2 = simulate(sys, Eigen::VectorXd::Zero(sys.n()), u2, NoiseModel::none()).outputs;
    CHECK((y12 - y1 - y2).norm() <= 1e-10 * std::max(1.0, y12.norm()));
  }
}

TEST_CASE("zero-order hold of the double integrator") {
  const auto sys = double_integrator_model(0.2);
  CHECK(sys.A(0, 1) == doctest::Approx(0.2));
  CHECK(sys.A(0, 0) == doctest::Approx(1.0));
  CHECK(sys.B(0, 0) == doctest::Approx(0.02));
  CHECK(sys.B(1, 0) == doctest::Approx(0.2));
  CHECK(is_controllable(sys));
}

TEST_CASE("quadcopter model dimensions and controllability") {
  for (double ts : {0.01, 0.05, 0.1}) {
    const auto sys = quadcopter_model(ts);
    CHECK(sys.n() == 12);
    CHECK(sys.m() == 4);
    CHECK(sys.l() == 12);
    CHECK(sys.Ts == ts);
    CHECK(is_controllable(sys));
  }
  CHECK_THROWS_AS(quadcopter_model(0.0), ConfigError);
}

TEST_CASE("an uncontrollable pair is detected") {
  SystemRealization sys = scalar_system();
  sys.A = Eigen::MatrixXd::Identity(2, 2);
  sys.B = Eigen::MatrixXd(2, 1);
  sys.B << 1.0, 0.0;
  sys.C = Eigen::MatrixXd::Ones(1, 2);
  sys.E = Eigen::MatrixXd::Zero(2, 1);
  CHECK_FALSE(is_controllable(sys));
}

TEST_CASE("model file round trip") {
  const auto sys = quadcopter_model(0.05);
  std::stringstream ss;
  write_model(ss, sys);
  const auto back = read_model(ss);
  CHECK(back.Ts == sys.Ts);
  CHECK((back.A.array() == sys.A.array()).all());
  CHECK((back.F.array() == sys.F.array()).all());

  std::istringstream bad("2 1 1\n1 0\n");
  CHECK_THROWS_AS(read_model(bad), ConfigError);
  std::istringstream truncated("1 1 1 1 0.1\n\n0.5\n\n1\n");
  CHECK_THROWS_AS(read_model(truncated), ConfigError);
}
