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
#include <string_view>

#include "syndeepc/lp.hpp"

namespace syndeepc {

enum class GroundNorm { kOne, kTwo, kInf };

std::string_view to_string(GroundNorm norm);
// Accepts "one"/"1", "two"/"2", "inf". Throws ConfigError otherwise.
GroundNorm parse_ground_norm(std::string_view text);

double ground_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                       const Eigen::Ref<const Eigen::VectorXd>& b, GroundNorm norm);

// Atoms stored one per column with weights on the probability simplex.
struct DiscreteDistribution {
  Eigen::MatrixXd atoms;
  Eigen::VectorXd weights;

  static DiscreteDistribution uniform(const Eigen::MatrixXd& atoms);
  Eigen::Index size() const { return atoms.cols(); }
  // Throws ConfigError unless weights are nonnegative, sum to one within
  // 1e-12, and match the atom count.
  void validate() const;
};

struct CostMatrix {
  Eigen::MatrixXd D;
  GroundNorm ground_norm = GroundNorm::kOne;
  double p = 1.0;
};

// D(i, j) = ||x_i - y_j||^p.
CostMatrix cost_matrix(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                       GroundNorm norm = GroundNorm::kOne, double p = 1.0);

enum class PlanStatus { kOptimal, kIterationLimit, kInfeasible };

std::string_view to_string(PlanStatus status);

struct TransportPlan {
  Eigen::MatrixXd T;
  double cost = 0.0;  // <T, D>
  PlanStatus status = PlanStatus::kInfeasible;
  long iterations = 0;

  // Largest deviation of the row/column sums from the marginals.
  double marginal_violation(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta) const;
};

// Exact Kantorovich problem min <T, D> over the transportation polytope,
// solved as a linear program. Returns a basic optimal plan.
TransportPlan solve_exact_ot(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta,
                             const Eigen::MatrixXd& D, const LpOptions& lp_opts = {});

enum class SinkhornMode { kAuto, kStandard, kLog };

struct SinkhornOptions {
  double gamma = 1.0;
  double tol = 1e-9;  // max-abs marginal violation
  long max_iter = 100000;
  // kAuto switches to log-domain iterations when max(D) / gamma > 30.
  SinkhornMode mode = SinkhornMode::kAuto;
};

// Entropic transport by alternating diagonal scaling of exp(-D / gamma). The
// reported cost is the unregularized <T, D>. In standard mode an underflowing
// kernel raises SolverError.
TransportPlan sinkhorn(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta,
                       const Eigen::MatrixXd& D, const SinkhornOptions& opts);

// Exact 1-Wasserstein distance between two discrete distributions.
double wasserstein(const DiscreteDistribution& p, const DiscreteDistribution& q,
                   GroundNorm norm = GroundNorm::kOne);

// CSV with header `i,j,mass` listing the nonzero entries of T.
void write_plan_csv(std::ostream& os, const TransportPlan& plan);

}  // namespace syndeepc
