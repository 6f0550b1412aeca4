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
#include "oracles/tableau_simplex.hpp"
#include "oracles/vertex_enumeration.hpp"
#include "syndeepc/error.hpp"
#include "syndeepc/lp.hpp"

using namespace syndeepc;

namespace {

// Dual objective from the reported multipliers; equals the primal optimum
// when the basis is optimal.
double dual_objective(const LinearProgram& lp, const LpSolution& sol) {
  const Eigen::VectorXd y_eq = sol.row_duals.head(lp.num_eq());
  const Eigen::VectorXd y_in = sol.row_duals.tail(lp.num_ineq());
  double v = lp.eq_rhs.dot(y_eq) + lp.ineq_rhs.dot(y_in);
  const Eigen::VectorXd d = lp.objective - lp.eq_matrix.transpose() * y_eq -
                            lp.ineq_matrix.transpose() * y_in;
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    // Reduced costs within round-off of zero carry no bound term.
    if (d[j] > 1e-10) v += d[j] * lp.lower[j];
    if (d[j] < -1e-10) v += d[j] * lp.upper[j];
  }
  return v;
}

struct RandomLp {
  Eigen::MatrixXd a;
  Eigen::VectorXd b, c;
};

// 6 variables, 8 rows; rows 0-1 have strictly positive coefficients so the
// region is bounded, b > 0 keeps the origin feasible.
RandomLp random_lp(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.1, 1.0), rhs(0.5, 2.0);
  RandomLp p{Eigen::MatrixXd(8, 6), Eigen::VectorXd(8), Eigen::VectorXd(6)};
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 6; ++j) p.a(i, j) = i < 2 ? pos(rng) : u(rng);
    p.b[i] = rhs(rng);
  }
  for (int j = 0; j < 6; ++j) p.c[j] = u(rng);
  return p;
}

LinearProgram as_lp(const RandomLp& p) {
  LinearProgram lp(6);
  lp.objective = p.c;
  lp.ineq_matrix = p.a.sparseView();
  lp.ineq_rhs = p.b;
  return lp;
}

}  // namespace

TEST_CASE("min x subject to x >= 1") {
  LinearProgram lp(1);
  lp.objective << 1.0;
  lp.lower << -kInf;
  lp.ineq_matrix = Eigen::MatrixXd::Constant(1, 1, -1.0).sparseView();
  lp.ineq_rhs = Eigen::VectorXd::Constant(1, -1.0);
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.objective_value == doctest::Approx(1.0));
}

TEST_CASE("min x subject to x <= 1 without lower bound is unbounded") {
  LinearProgram lp(1);
  lp.objective << 1.0;
  lp.lower << -kInf;
  lp.ineq_matrix = Eigen::MatrixXd::Constant(1, 1, 1.0).sparseView();
  lp.ineq_rhs = Eigen::VectorXd::Constant(1, 1.0);
  CHECK(solve_lp(lp).status == LpStatus::kUnbounded);
}

TEST_CASE("bounds only, no rows") {
  LinearProgram lp(3);
  lp.objective << 1.0, -2.0, 0.5;
  lp.lower << -1.0, 0.0, 2.0;
  lp.upper << 1.0, 3.0, 5.0;
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.objective_value == doctest::Approx(-1.0 - 6.0 + 1.0));
}

TEST_CASE("infeasible system is reported") {
  // x1 + x2 = 1, x1 + x2 >= 2
  LpBuilder b;
  b.add_variables(2, 1.0);
  b.add_equality({{0, 1.0}, {1, 1.0}}, 1.0);
  b.add_less_equal({{0, -1.0}, {1, -1.0}}, -2.0);
  CHECK(solve_lp(b.build()).status == LpStatus::kInfeasible);
}

TEST_CASE("empty bound interval is infeasible") {
  LinearProgram lp(1);
  lp.lower << 1.0;
  lp.upper << 0.0;
  CHECK(solve_lp(lp).status == LpStatus::kInfeasible);
}

TEST_CASE("malformed programs throw") {
  LinearProgram lp(2);
  lp.lower.resize(1);
  CHECK_THROWS_AS(solve_lp(lp), DimensionError);
  LinearProgram lp2(1);
  lp2.objective << std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(solve_lp(lp2), ConfigError);
}

TEST_CASE("equalities with free variables") {
  // min |x1 - 3| + |x2 + 1| written with split deviations, x1 + x2 = 1
  LpBuilder b;
  const auto x1 = b.add_variable(0.0, -kInf, kInf);
  const auto x2 = b.add_variable(0.0, -kInf, kInf);
  const auto dev = b.add_variables(4, 1.0);
  b.add_equality({{x1, 1.0}, {dev, -1.0}, {dev + 1, 1.0}}, 3.0);
  b.add_equality({{x2, 1.0}, {dev + 2, -1.0}, {dev + 3, 1.0}}, -1.0);
  b.add_equality({{x1, 1.0}, {x2, 1.0}}, 1.0);
  const auto sol = solve_lp(b.build());
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.objective_value == doctest::Approx(1.0));
  CHECK(sol.x[x1] + sol.x[x2] == doctest::Approx(1.0));
}

TEST_CASE("Beale's cycling example terminates at the optimum") {
  // Classic degenerate LP on which Dantzig pricing with naive ties cycles.
  LinearProgram lp(4);
  lp.objective << -0.75, 150.0, -0.02, 6.0;
  Eigen::MatrixXd a(3, 4);
  a << 0.25, -60.0, -0.04, 9.0,  //
      0.5, -90.0, -0.02, 3.0,    //
      0.0, 0.0, 1.0, 0.0;
  lp.ineq_matrix = a.sparseView();
  lp.ineq_rhs = Eigen::Vector3d(0.0, 0.0, 1.0);
  for (long bland_after : {-1L, 0L}) {
    LpOptions opts;
    opts.bland_after = bland_after;
    const auto sol = solve_lp(lp, opts);
    REQUIRE(sol.status == LpStatus::kOptimal);
    CHECK(sol.objective_value == doctest::Approx(-0.05).epsilon(1e-9));
  }
}

TEST_CASE("random 6x8 programs match vertex enumeration") {
  std::mt19937_64 rng(20260101);
  for (int trial = 0; trial < 40; ++trial) {
    const RandomLp p = random_lp(rng);
    const auto expect = oracle::enumerate_vertices(p.a, p.b, p.c);
    REQUIRE(expect.has_value());
    const LinearProgram lp = as_lp(p);
    const auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::kOptimal);
    CHECK(std::abs(sol.objective_value - *expect) <= 1e-7);
    CHECK(sol.primal_residual <= 1e-8);
    CHECK(std::abs(dual_objective(lp, sol) - sol.objective_value) <= 1e-7);
    CHECK(sol.dual_infeasibility <= 1e-7);
  }
}

TEST_CASE("agrees with the independent tableau solver on mixed programs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const RandomLp p = random_lp(rng);
    // Turn row 2 into an equality by adding the reverse inequality.
    Eigen::MatrixXd a2(9, 6);
    a2 << p.a, -p.a.row(2);
    Eigen::VectorXd b2(9);
    b2 << p.b, -p.b[2] + 0.25;
    oracle::TableauSimplex::Mat rows(9, std::vector<double>(6));
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 6; ++j) rows[i][j] = a2(i, j);
    std::vector<double> bb(b2.data(), b2.data() + 9), cc(6);
    for (int j = 0; j < 6; ++j) cc[j] = -p.c[j];
    const auto ref = oracle::TableauSimplex(rows, bb, cc).solve();

    const auto sol = solve_lp(
        [&] {
          LinearProgram lp(6);
          lp.objective = p.c;
          lp.ineq_matrix = a2.sparseView();
          lp.ineq_rhs = b2;
          return lp;
        }());
    if (ref.status == oracle::TableauResult::kInfeasible) {
      CHECK(sol.status == LpStatus::kInfeasible);
    } else {
      REQUIRE(sol.status == LpStatus::kOptimal);
      CHECK(sol.objective_value == doctest::Approx(-ref.value).epsilon(1e-9));
    }
  }
}

TEST_CASE("solves are deterministic") {
  std::mt19937_64 rng(99);
  const LinearProgram lp = as_lp(random_lp(rng));
  const auto a = solve_lp(lp);
  const auto b = solve_lp(lp);
  CHECK(a.iterations == b.iterations);
  CHECK((a.x.array() == b.x.array()).all());
}

TEST_CASE("forced Bland pricing reaches the same optimum") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const LinearProgram lp = as_lp(random_lp(rng));
    LpOptions opts;
    opts.bland_after = 0;
    const auto ref = solve_lp(lp);
    const auto bl = solve_lp(lp, opts);
    REQUIRE(bl.status == LpStatus::kOptimal);
    CHECK(bl.objective_value == doctest::Approx(ref.objective_value).epsilon(1e-10));
  }
}

TEST_CASE("iteration limit is surfaced") {
  std::mt19937_64 rng(5);
  LpOptions opts;
  opts.max_iterations = 1;
  CHECK(solve_lp(as_lp(random_lp(rng)), opts).status == LpStatus::kIterationLimit);
}

TEST_CASE("redundant equalities are tolerated") {
  LpBuilder b;
  b.add_variables(3, 1.0);
  b.add_equality({{0, 1.0}, {1, 1.0}, {2, 1.0}}, 1.0);
  b.add_equality({{0, 2.0}, {1, 2.0}, {2, 2.0}}, 2.0);
  b.add_equality({{0, 1.0}}, 0.25);
  const auto sol = solve_lp(b.build());
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.objective_value == doctest::Approx(1.0));
  CHECK(sol.x[0] == doctest::Approx(0.25));
}

TEST_CASE("text dump lists every row") {
  LpBuilder b;
  b.add_variables(2, 1.0);
  b.add_equality({{0, 1.0}, {1, -2.0}}, 1.0);
  b.add_less_equal({{1, 3.0}}, 4.0);
  std::ostringstream os;
  write_lp_text(os, b.build());
  const std::string text = os.str();
  INFO(text);
  CHECK(text.find("minimize") != std::string::npos);
  CHECK(text.find("e0: 1 x0 - 2 x1 = 1") != std::string::npos);
  CHECK(text.find("i0: 3 x1 <= 4") != std::string::npos);
}
