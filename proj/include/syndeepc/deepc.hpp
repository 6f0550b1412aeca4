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
#include <optional>
#include <string>
#include <vector>

#include "syndeepc/hankel.hpp"
#include "syndeepc/lp.hpp"

namespace syndeepc {

// Per-component input bounds, applied at every step of the horizon.
struct InputBox {
  Eigen::VectorXd lower;  // m
  Eigen::VectorXd upper;  // m

  static InputBox uniform(int m, double lo, double hi);
  void validate(int m) const;
};

enum class CostFamily {
  kL1Tracking,  // ||u||_1 + c ||W (y - r)||_1
  kExternal,    // anything else: conjugate bounds must be supplied by the caller
};

// J(u, y) = ||u||_1 + c sum_k w_k |y_k - r_k| over the prediction horizon,
// plus rho ||Yb g - y_ini||_1 when consistency is softened.
struct CostSpec {
  double c = 1.0;
  Eigen::VectorXd reference;       // l * K
  double rho = 1.0;
  Eigen::VectorXd output_weights;  // l, per output channel; empty means all ones
  CostFamily family = CostFamily::kL1Tracking;

  // Per-channel weights with the default filled in.
  Eigen::VectorXd weights(int l) const;
  void validate(int l, int K) const;
};

struct AmbiguitySpec {
  double eps_beta = 0.0;
  double eta_S = 0.0;
  double effective_radius = 0.0;  // eps_beta + eta_S

  static AmbiguitySpec make(double eps_beta, double eta_S);
};

// eps_beta + eta_S; throws ConfigError for negative inputs.
double ambiguity_radius(double eps_beta, double eta_S);

// Suprema of ||xi||_inf over the domains of the conjugates of the tracking
// term and of the consistency penalty.
struct ConjugateBounds {
  double xi_bound = 0.0;
  double xi_prime_bound = 0.0;
};

ConjugateBounds conjugate_bound(const CostSpec& cost);

struct ControlSolution {
  Eigen::VectorXd g_star;
  Eigen::VectorXd u_star;  // Uf g*
  Eigen::VectorXd y_pred;  // Yf g*
  double objective = 0.0;
  double in_sample_objective = 0.0;  // objective without the radius term
  double solve_time = 0.0;           // seconds
  LpStatus status = LpStatus::kInfeasible;
  long iterations = 0;

  bool ok() const { return status == LpStatus::kOptimal; }
};

enum class Consistency { kHard, kSoft };

// Assembled DeePC linear program with the bookkeeping needed to read the
// solution back and to move the window/reference between receding-horizon
// steps without re-assembly.
class DeepcProgram {
 public:
  DeepcProgram(const HankelBlocks& blocks, const InitialWindow& window, const CostSpec& cost,
               const InputBox& box, Consistency consistency,
               std::optional<double> radius = std::nullopt,
               std::optional<ConjugateBounds> bounds = std::nullopt);

  void set_window(const InitialWindow& window);
  void set_reference(const Eigen::VectorXd& reference);

  ControlSolution solve(const LpOptions& opts = {}) const;

  const LinearProgram& lp() const { return lp_; }
  const HankelBlocks& blocks() const { return blocks_; }
  bool robust() const { return robust_; }
  double radius() const { return radius_; }
  const ConjugateBounds& bounds() const { return bounds_; }

 private:
  HankelBlocks blocks_;
  CostSpec cost_;
  InputBox box_;
  Consistency consistency_;
  bool robust_ = false;
  double radius_ = 0.0;
  ConjugateBounds bounds_;
  LinearProgram lp_;
  std::vector<Eigen::Index> tracked_rows_;  // rows of Yf entering the cost
  Eigen::Index R_ = 0;
  Eigen::Index row_ub_ = 0, row_yb_ = 0, row_track_ = 0;
  Eigen::Index col_t_ = -1;
};

// Equality-constrained DeePC: [Ub; Yb] g = [u_ini; y_ini], Uf g in the box.
ControlSolution deterministic_deepc(const HankelBlocks& blocks, const InitialWindow& window,
                                    const CostSpec& cost, const InputBox& box);

// g -> J(Uf g, Yf g) + rho ||Yb g - y_ini||_1 on {Uf g in box, Ub g = u_ini}.
class SoftenedObjective {
 public:
  SoftenedObjective(const HankelBlocks& blocks, const InitialWindow& window,
                    const CostSpec& cost);

  double value(const Eigen::VectorXd& g) const;
  // J(Uf g, Yf g) alone.
  double tracking_cost(const Eigen::VectorXd& g) const;
  bool feasible(const Eigen::VectorXd& g, const InputBox& box, double tol = 1e-9) const;
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  HankelBlocks blocks_;
  InitialWindow window_;
  CostSpec cost_;
  std::vector<std::string> warnings_;
};

SoftenedObjective soften(const HankelBlocks& blocks, const InitialWindow& window,
                         const CostSpec& cost);
ControlSolution solve_softened(const HankelBlocks& blocks, const InitialWindow& window,
                               const CostSpec& cost, const InputBox& box);

// Distributionally robust DeePC over a Wasserstein ball of radius
// ambiguity.effective_radius with infinity-norm duals:
//   min f(kappa, v) + eps * t,  t >= xi_bound ||g||_inf,  t >= xi_prime_bound ||v||_inf,
// v = col(g, -1).
struct RobustProblem {
  HankelBlocks blocks;
  InitialWindow window;
  CostSpec cost;
  AmbiguitySpec ambiguity;
  InputBox input_box;
  ConjugateBounds bounds;
  DeepcProgram program;
};

RobustProblem build_robust(const HankelBlocks& blocks, const InitialWindow& window,
                           const CostSpec& cost, const AmbiguitySpec& ambiguity,
                           const InputBox& box,
                           std::optional<ConjugateBounds> bounds = std::nullopt);
ControlSolution solve_robust(const RobustProblem& problem, const LpOptions& opts = {});

// Value of the robust objective at g, evaluated directly from its definition.
double robust_objective_value(const RobustProblem& problem, const Eigen::VectorXd& g);

void write_problem_text(std::ostream& os, const RobustProblem& problem);

}  // namespace syndeepc
