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
#include <Eigen/SparseCore>

#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace syndeepc {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string_view to_string(LpStatus status);

// minimize    objective' x
// subject to  eq_matrix x    =  eq_rhs
//             ineq_matrix x  <= ineq_rhs
//             lower <= x <= upper          (entries may be +-infinity)
struct LinearProgram {
  Eigen::VectorXd objective;
  SparseMatrix eq_matrix;
  Eigen::VectorXd eq_rhs;
  SparseMatrix ineq_matrix;
  Eigen::VectorXd ineq_rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  LinearProgram() = default;
  // Empty problem with `num_vars` nonnegative variables and zero objective.
  explicit LinearProgram(Eigen::Index num_vars);

  Eigen::Index num_vars() const { return objective.size(); }
  Eigen::Index num_eq() const { return eq_rhs.size(); }
  Eigen::Index num_ineq() const { return ineq_rhs.size(); }

  // Throws DimensionError / ConfigError when the fields are inconsistent.
  void validate() const;
};

// Incremental assembly of a LinearProgram from sparse rows.
class LpBuilder {
 public:
  using Term = std::pair<Eigen::Index, double>;

  Eigen::Index add_variable(double cost, double lower = 0.0, double upper = kInf);
  // Adds `count` variables sharing cost and bounds; returns the first index.
  Eigen::Index add_variables(Eigen::Index count, double cost, double lower = 0.0,
                             double upper = kInf);
  void set_cost(Eigen::Index var, double cost);

  void add_equality(const std::vector<Term>& terms, double rhs);
  void add_less_equal(const std::vector<Term>& terms, double rhs);

  Eigen::Index num_vars() const { return static_cast<Eigen::Index>(cost_.size()); }
  LinearProgram build() const;

 private:
  std::vector<double> cost_, lower_, upper_;
  std::vector<Eigen::Triplet<double>> eq_, ineq_;
  std::vector<double> eq_rhs_, ineq_rhs_;
};

struct LpOptions {
  double feas_tol = 1e-8;   // primal feasibility
  double opt_tol = 1e-7;    // optimality certificate (scaled by max |cost|)
  double pricing_tol = 1e-9;
  double pivot_tol = 1e-9;
  long max_iterations = 0;  // 0 selects 50 * (rows + columns) + 10000
  int refactor_interval = 100;
  long bland_after = -1;    // consecutive degenerate pivots; -1 selects 10 * num_vars
};

struct LpSolution {
  Eigen::VectorXd x;
  double objective_value = 0.0;
  LpStatus status = LpStatus::kIterationLimit;
  long iterations = 0;
  // Multipliers of the equality rows followed by the inequality rows.
  Eigen::VectorXd row_duals;
  Eigen::VectorXd reduced_costs;
  double primal_residual = 0.0;
  double dual_infeasibility = 0.0;
  bool used_bland = false;
};

// Two-phase bounded primal simplex. The basis inverse is kept dense and
// refactorized periodically; constraint columns are priced sparsely.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts = {});

// Largest violation of the equality, inequality and bound constraints at x.
double max_constraint_violation(const LinearProgram& lp, const Eigen::VectorXd& x);

// Human-readable dump, one constraint per line.
void write_lp_text(std::ostream& os, const LinearProgram& lp);

}  // namespace syndeepc
