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

#include "syndeepc/deepc.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "syndeepc/error.hpp"

namespace syndeepc {

namespace {

void check_window(const HankelBlocks& b, const InitialWindow& w) {
  if (w.u_ini.size() != b.Ub.rows() || w.y_ini.size() != b.Yb.rows()) {
    throw DimensionError("deepc: initial window has sizes (" + std::to_string(w.u_ini.size()) +
                         ", " + std::to_string(w.y_ini.size()) + "), blocks expect (" +
                         std::to_string(b.Ub.rows()) + ", " + std::to_string(b.Yb.rows()) + ")");
  }
}

void check_blocks(const HankelBlocks& b) {
  const Eigen::Index R = b.cols();
  if (R < 1) throw DimensionError("deepc: data blocks have no columns");
  if (b.Ub.cols() != R || b.Yb.cols() != R || b.Yf.cols() != R ||
      b.Ub.rows() != b.m * b.Ki || b.Yb.rows() != b.l * b.Ki || b.Uf.rows() != b.m * b.K ||
      b.Yf.rows() != b.l * b.K) {
    throw DimensionError("deepc: inconsistent Hankel blocks");
  }
}

}  // namespace

InputBox InputBox::uniform(int m, double lo, double hi) {
  return {Eigen::VectorXd::Constant(m, lo), Eigen::VectorXd::Constant(m, hi)};
}

void InputBox::validate(int m) const {
  if (lower.size() != m || upper.size() != m) {
    throw DimensionError("input box must have " + std::to_string(m) + " components");
  }
  if ((lower.array() > upper.array()).any() || lower.hasNaN() || upper.hasNaN()) {
    throw ConfigError("input box is empty");
  }
}

Eigen::VectorXd CostSpec::weights(int l) const {
  return output_weights.size() == 0 ? Eigen::VectorXd::Ones(l) : output_weights;
}

void CostSpec::validate(int l, int K) const {
  if (!(c > 0.0)) throw ConfigError("cost: c must be positive");
  if (!(rho >= 0.0)) throw ConfigError("cost: rho must be nonnegative");
  if (reference.size() != static_cast<Eigen::Index>(l) * K) {
    throw DimensionError("cost: reference must have l*K = " + std::to_string(l * K) +
                         " entries, got " + std::to_string(reference.size()));
  }
  if (output_weights.size() != 0 && output_weights.size() != l) {
    throw DimensionError("cost: output weights must have l entries");
  }
  if (output_weights.size() != 0 && (output_weights.array() < 0.0).any()) {
    throw ConfigError("cost: output weights must be nonnegative");
  }
}

double ambiguity_radius(double eps_beta, double eta_S) {
  if (!(eps_beta >= 0.0) || !(eta_S >= 0.0)) {
    throw ConfigError("ambiguity radius: eps_beta and eta_S must be nonnegative");
  }
  return eps_beta + eta_S;
}

AmbiguitySpec AmbiguitySpec::make(double eps_beta, double eta_S) {
  return {eps_beta, eta_S, ambiguity_radius(eps_beta, eta_S)};
}

ConjugateBounds conjugate_bound(const CostSpec& cost) {
  if (cost.family != CostFamily::kL1Tracking) {
    throw ConfigError(
        "conjugate_bound: only the ||u||_1 + c||W(y - r)||_1 family has built-in bounds; "
        "supply ConjugateBounds explicitly");
  }
  // The conjugate of xi -> c sum_k w_k |y_k - r_k| is finite iff |xi_k| <= c w_k;
  // that of rho ||.||_1 iff ||xi||_inf <= rho.
  const double wmax = cost.output_weights.size() ? cost.output_weights.maxCoeff() : 1.0;
  return {cost.c * wmax, cost.rho};
}

DeepcProgram::DeepcProgram(const HankelBlocks& blocks, const InitialWindow& window,
                           const CostSpec& cost, const InputBox& box, Consistency consistency,
                           std::optional<double> radius, std::optional<ConjugateBounds> bounds)
    : blocks_(blocks), cost_(cost), box_(box), consistency_(consistency) {
  check_blocks(blocks_);
  check_window(blocks_, window);
  cost_.validate(blocks_.l, blocks_.K);
  box_.validate(blocks_.m);
  robust_ = radius.has_value();
  if (robust_) {
    if (!(*radius >= 0.0)) throw ConfigError("deepc: radius must be nonnegative");
    radius_ = *radius;
    bounds_ = bounds ? *bounds : conjugate_bound(cost_);
    if (!(bounds_.xi_bound >= 0.0) || !(bounds_.xi_prime_bound >= 0.0)) {
      throw ConfigError("deepc: conjugate bounds must be nonnegative");
    }
  }

  const HankelBlocks& b = blocks_;
  R_ = b.cols();
  const int m = b.m, l = b.l, K = b.K, Ki = b.Ki;
  const Eigen::VectorXd w = cost_.weights(l);
  for (int k = 0; k < K; ++k)
    for (int c = 0; c < l; ++c)
      if (w[c] > 0.0) tracked_rows_.push_back(static_cast<Eigen::Index>(k) * l + c);

  LpBuilder lb;
  // g, split into gp - gm when the infinity norm of g is needed.
  const Eigen::Index gp = robust_ ? lb.add_variables(R_, 0.0) : lb.add_variables(R_, 0.0, -kInf);
  const Eigen::Index gm = robust_ ? lb.add_variables(R_, 0.0) : -1;
  auto g_terms = [&](const Eigen::MatrixXd& mat, Eigen::Index row,
                     std::vector<LpBuilder::Term>& terms) {
    for (Eigen::Index i = 0; i < R_; ++i) {
      const double a = mat(row, i);
      if (a == 0.0) continue;
      terms.emplace_back(gp + i, a);
      if (robust_) terms.emplace_back(gm + i, -a);
    }
  };

  // u = up - um with the box carried by the bounds of the two parts.
  const Eigen::Index nu = static_cast<Eigen::Index>(m) * K;
  Eigen::Index up = 0, um = 0;
  for (Eigen::Index k = 0; k < nu; ++k) {
    const double lo = box_.lower[k % m], hi = box_.upper[k % m];
    const Eigen::Index p = lb.add_variable(1.0, std::max(lo, 0.0), std::max(hi, 0.0));
    const Eigen::Index q = lb.add_variable(1.0, std::max(-hi, 0.0), std::max(-lo, 0.0));
    if (k == 0) {
      up = p;
      um = q;
    }
  }
  const Eigen::Index nt = static_cast<Eigen::Index>(tracked_rows_.size());
  Eigen::Index yp = lb.num_vars();
  for (Eigen::Index k = 0; k < nt; ++k) {
    const double wk = cost_.c * w[tracked_rows_[k] % l];
    lb.add_variable(wk);
    lb.add_variable(wk);
  }
  Eigen::Index sp = -1;
  if (consistency_ == Consistency::kSoft) {
    sp = lb.num_vars();
    lb.add_variables(2 * static_cast<Eigen::Index>(l) * Ki, cost_.rho);
  }
  if (robust_) {
    col_t_ = lb.add_variable(radius_, bounds_.xi_prime_bound, kInf);
  }

  row_ub_ = 0;
  for (Eigen::Index r = 0; r < b.Ub.rows(); ++r) {
    std::vector<LpBuilder::Term> terms;
    g_terms(b.Ub, r, terms);
    lb.add_equality(terms, window.u_ini[r]);
  }
  row_yb_ = b.Ub.rows();
  for (Eigen::Index r = 0; r < b.Yb.rows(); ++r) {
    std::vector<LpBuilder::Term> terms;
    g_terms(b.Yb, r, terms);
    if (sp >= 0) {
      terms.emplace_back(sp + 2 * r, -1.0);
      terms.emplace_back(sp + 2 * r + 1, 1.0);
    }
    lb.add_equality(terms, window.y_ini[r]);
  }
  for (Eigen::Index r = 0; r < nu; ++r) {
    std::vector<LpBuilder::Term> terms;
    g_terms(b.Uf, r, terms);
    terms.emplace_back(up + 2 * r, -1.0);
    terms.emplace_back(um + 2 * r, 1.0);
    lb.add_equality(terms, 0.0);
  }
  row_track_ = row_yb_ + b.Yb.rows() + nu;
  for (Eigen::Index k = 0; k < nt; ++k) {
    std::vector<LpBuilder::Term> terms;
    g_terms(b.Yf, tracked_rows_[k], terms);
    terms.emplace_back(yp + 2 * k, -1.0);
    terms.emplace_back(yp + 2 * k + 1, 1.0);
    lb.add_equality(terms, cost_.reference[tracked_rows_[k]]);
  }
  if (robust_) {
    // t >= max(xi_bound, xi_prime_bound) |g_i|; t >= xi_prime_bound is its lower bound.
    const double wt = std::max(bounds_.xi_bound, bounds_.xi_prime_bound);
    if (wt > 0.0) {
      for (Eigen::Index i = 0; i < R_; ++i) {
        lb.add_less_equal({{gp + i, wt}, {gm + i, wt}, {col_t_, -1.0}}, 0.0);
      }
    }
  }
  lp_ = lb.build();
}

void DeepcProgram::set_window(const InitialWindow& window) {
  check_window(blocks_, window);
  lp_.eq_rhs.segment(row_ub_, window.u_ini.size()) = window.u_ini;
  lp_.eq_rhs.segment(row_yb_, window.y_ini.size()) = window.y_ini;
}

void DeepcProgram::set_reference(const Eigen::VectorXd& reference) {
  if (reference.size() != cost_.reference.size()) {
    throw DimensionError("deepc: reference length changed");
  }
  cost_.reference = reference;
  for (std::size_t k = 0; k < tracked_rows_.size(); ++k) {
    lp_.eq_rhs[row_track_ + static_cast<Eigen::Index>(k)] = reference[tracked_rows_[k]];
  }
}

ControlSolution DeepcProgram::solve(const LpOptions& opts) const {
  const auto start = std::chrono::steady_clock::now();
  const LpSolution sol = solve_lp(lp_, opts);
  ControlSolution out;
  out.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.status = sol.status;
  out.iterations = sol.iterations;
  if (sol.status != LpStatus::kOptimal) return out;
  out.g_star = robust_ ? Eigen::VectorXd(sol.x.head(R_) - sol.x.segment(R_, R_))
                       : Eigen::VectorXd(sol.x.head(R_));
  out.u_star = blocks_.Uf * out.g_star;
  out.y_pred = blocks_.Yf * out.g_star;
  out.objective = sol.objective_value;
  out.in_sample_objective = robust_ ? sol.objective_value - radius_ * sol.x[col_t_]
                                    : sol.objective_value;
  return out;
}

ControlSolution deterministic_deepc(const HankelBlocks& blocks, const InitialWindow& window,
                                    const CostSpec& cost, const InputBox& box) {
  return DeepcProgram(blocks, window, cost, box, Consistency::kHard).solve();
}

SoftenedObjective::SoftenedObjective(const HankelBlocks& blocks, const InitialWindow& window,
                                     const CostSpec& cost)
    : blocks_(blocks), window_(window), cost_(cost) {
  check_blocks(blocks_);
  check_window(blocks_, window_);
  cost_.validate(blocks_.l, blocks_.K);
  if (cost_.rho == 0.0) {
    warnings_.push_back("rho = 0: the consistency term Yb g = y_ini is ignored");
  }
}

double SoftenedObjective::tracking_cost(const Eigen::VectorXd& g) const {
  const Eigen::VectorXd u = blocks_.Uf * g;
  const Eigen::VectorXd y = blocks_.Yf * g;
  const Eigen::VectorXd w = cost_.weights(blocks_.l);
  double track = 0.0;
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    track += w[k % blocks_.l] * std::abs(y[k] - cost_.reference[k]);
  }
  return u.lpNorm<1>() + cost_.c * track;
}

double SoftenedObjective::value(const Eigen::VectorXd& g) const {
  return tracking_cost(g) + cost_.rho * (blocks_.Yb * g - window_.y_ini).lpNorm<1>();
}

bool SoftenedObjective::feasible(const Eigen::VectorXd& g, const InputBox& box,
                                 double tol) const {
  if ((blocks_.Ub * g - window_.u_ini).lpNorm<Eigen::Infinity>() > tol) return false;
  const Eigen::VectorXd u = blocks_.Uf * g;
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    const int c = static_cast<int>(k % blocks_.m);
    if (u[k] < box.lower[c] - tol || u[k] > box.upper[c] + tol) return false;
  }
  return true;
}

SoftenedObjective soften(const HankelBlocks& blocks, const InitialWindow& window,
                         const CostSpec& cost) {
  return SoftenedObjective(blocks, window, cost);
}

ControlSolution solve_softened(const HankelBlocks& blocks, const InitialWindow& window,
                               const CostSpec& cost, const InputBox& box) {
  return DeepcProgram(blocks, window, cost, box, Consistency::kSoft).solve();
}

RobustProblem build_robust(const HankelBlocks& blocks, const InitialWindow& window,
                           const CostSpec& cost, const AmbiguitySpec& ambiguity,
                           const InputBox& box, std::optional<ConjugateBounds> bounds) {
  if (ambiguity.effective_radius != ambiguity.eps_beta + ambiguity.eta_S) {
    throw ConfigError("ambiguity: effective radius must equal eps_beta + eta_S");
  }
  const ConjugateBounds cb = bounds ? *bounds : conjugate_bound(cost);
  DeepcProgram program(blocks, window, cost, box, Consistency::kSoft,
                       ambiguity_radius(ambiguity.eps_beta, ambiguity.eta_S), cb);
  return {blocks, window, cost, ambiguity, box, cb, std::move(program)};
}

ControlSolution solve_robust(const RobustProblem& problem, const LpOptions& opts) {
  return problem.program.solve(opts);
}

double robust_objective_value(const RobustProblem& p, const Eigen::VectorXd& g) {
  const double f = SoftenedObjective(p.blocks, p.window, p.cost).value(g);
  const double ginf = g.lpNorm<Eigen::Infinity>();
  const double reg = std::max(p.bounds.xi_bound * ginf,
                              p.bounds.xi_prime_bound * std::max(ginf, 1.0));
  return f + p.ambiguity.effective_radius * reg;
}

void write_problem_text(std::ostream& os, const RobustProblem& problem) {
  const HankelBlocks& b = problem.blocks;
  os << "# robust DeePC: m=" << b.m << " l=" << b.l << " Ki=" << b.Ki << " K=" << b.K
     << " columns=" << b.cols() << " c=" << problem.cost.c << " rho=" << problem.cost.rho
     << " radius=" << problem.ambiguity.effective_radius << '\n';
  write_lp_text(os, problem.program.lp());
}

}  // namespace syndeepc
