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

#include "syndeepc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "syndeepc/error.hpp"

namespace syndeepc {

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration-limit";
  }
  return "unknown";
}

LinearProgram::LinearProgram(Eigen::Index num_vars)
    : objective(Eigen::VectorXd::Zero(num_vars)),
      eq_matrix(0, num_vars),
      eq_rhs(0),
      ineq_matrix(0, num_vars),
      ineq_rhs(0),
      lower(Eigen::VectorXd::Zero(num_vars)),
      upper(Eigen::VectorXd::Constant(num_vars, kInf)) {}

void LinearProgram::validate() const {
  const Eigen::Index n = objective.size();
  if (lower.size() != n || upper.size() != n) {
    throw DimensionError("LinearProgram: bound vectors must match the objective length");
  }
  if (eq_matrix.cols() != n || eq_matrix.rows() != eq_rhs.size()) {
    throw DimensionError("LinearProgram: equality block has inconsistent dimensions");
  }
  if (ineq_matrix.cols() != n || ineq_matrix.rows() != ineq_rhs.size()) {
    throw DimensionError("LinearProgram: inequality block has inconsistent dimensions");
  }
  if (!objective.allFinite()) {
    throw ConfigError("LinearProgram: objective coefficients must be finite");
  }
  if (!eq_rhs.allFinite() || !ineq_rhs.allFinite()) {
    throw ConfigError("LinearProgram: right-hand sides must be finite");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] == kInf || upper[j] == -kInf) {
      throw ConfigError("LinearProgram: invalid bound on variable " + std::to_string(j));
    }
  }
}

Eigen::Index LpBuilder::add_variable(double cost, double lower, double upper) {
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  return num_vars() - 1;
}

Eigen::Index LpBuilder::add_variables(Eigen::Index count, double cost, double lower,
                                      double upper) {
  const Eigen::Index first = num_vars();
  for (Eigen::Index i = 0; i < count; ++i) add_variable(cost, lower, upper);
  return first;
}

void LpBuilder::set_cost(Eigen::Index var, double cost) { cost_.at(var) = cost; }

void LpBuilder::add_equality(const std::vector<Term>& terms, double rhs) {
  const auto row = static_cast<Eigen::Index>(eq_rhs_.size());
  for (const auto& [var, val] : terms) {
    if (val != 0.0) eq_.emplace_back(row, var, val);
  }
  eq_rhs_.push_back(rhs);
}

void LpBuilder::add_less_equal(const std::vector<Term>& terms, double rhs) {
  const auto row = static_cast<Eigen::Index>(ineq_rhs_.size());
  for (const auto& [var, val] : terms) {
    if (val != 0.0) ineq_.emplace_back(row, var, val);
  }
  ineq_rhs_.push_back(rhs);
}

LinearProgram LpBuilder::build() const {
  const Eigen::Index n = num_vars();
  LinearProgram lp(n);
  lp.objective = Eigen::Map<const Eigen::VectorXd>(cost_.data(), n);
  lp.lower = Eigen::Map<const Eigen::VectorXd>(lower_.data(), n);
  lp.upper = Eigen::Map<const Eigen::VectorXd>(upper_.data(), n);
  lp.eq_matrix.resize(static_cast<Eigen::Index>(eq_rhs_.size()), n);
  lp.eq_matrix.setFromTriplets(eq_.begin(), eq_.end());
  lp.eq_rhs = Eigen::Map<const Eigen::VectorXd>(eq_rhs_.data(),
                                                static_cast<Eigen::Index>(eq_rhs_.size()));
  lp.ineq_matrix.resize(static_cast<Eigen::Index>(ineq_rhs_.size()), n);
  lp.ineq_matrix.setFromTriplets(ineq_.begin(), ineq_.end());
  lp.ineq_rhs = Eigen::Map<const Eigen::VectorXd>(
      ineq_rhs_.data(), static_cast<Eigen::Index>(ineq_rhs_.size()));
  return lp;
}

double max_constraint_violation(const LinearProgram& lp, const Eigen::VectorXd& x) {
  double worst = 0.0;
  if (lp.num_eq() > 0) {
    worst = std::max(worst, (lp.eq_matrix * x - lp.eq_rhs).cwiseAbs().maxCoeff());
  }
  if (lp.num_ineq() > 0) {
    worst = std::max(worst, (lp.ineq_matrix * x - lp.ineq_rhs).maxCoeff());
  }
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    worst = std::max({worst, lp.lower[j] - x[j], x[j] - lp.upper[j]});
  }
  return worst;
}

namespace {

enum class VarState : unsigned char { kBasic, kAtLower, kAtUpper, kFreeZero };

enum class Phase { kOne, kTwo };

// Columns are laid out as [structural | inequality slacks | artificials].
class BoundedSimplex {
 public:
  BoundedSimplex(const LinearProgram& lp, const LpOptions& opts) : lp_(lp), opts_(opts) {
    n_struct_ = static_cast<int>(lp.num_vars());
    m_eq_ = static_cast<int>(lp.num_eq());
    m_ = m_eq_ + static_cast<int>(lp.num_ineq());
    n_slack_ = static_cast<int>(lp.num_ineq());
    art0_ = n_struct_ + n_slack_;
    ncols_ = art0_ + m_;
    build_columns();
    max_iter_ = opts.max_iterations > 0 ? opts.max_iterations
                                        : 50L * (m_ + ncols_) + 10000L;
    bland_after_ = opts.bland_after >= 0 ? opts.bland_after : 10L * std::max(1, n_struct_);
  }

  LpSolution solve() {
    LpSolution sol;
    for (int j = 0; j < n_struct_; ++j) {
      if (lp_.lower[j] > lp_.upper[j]) {
        sol.status = LpStatus::kInfeasible;
        sol.x = Eigen::VectorXd::Zero(n_struct_);
        return sol;
      }
    }
    start_phase_one();
    LpStatus st = run(Phase::kOne);
    if (st == LpStatus::kIterationLimit) return finish(st);
    double infeas = 0.0;
    for (int i = 0; i < m_; ++i) infeas = std::max(infeas, x_[art0_ + i]);
    const double bscale = 1.0 + (b_.size() > 0 ? b_.cwiseAbs().maxCoeff() : 0.0);
    if (infeas > opts_.feas_tol * bscale) return finish(LpStatus::kInfeasible);

    drive_out_artificials();
    for (int i = 0; i < m_; ++i) hi_[art0_ + i] = 0.0;
    cost_.setZero();
    cost_.head(n_struct_) = lp_.objective;
    st = run(Phase::kTwo);
    return finish(st);
  }

 private:
  void build_columns() {
    cstart_.reserve(ncols_ + 1);
    cstart_.push_back(0);
    for (int j = 0; j < n_struct_; ++j) {
      for (SparseMatrix::InnerIterator it(lp_.eq_matrix, j); it; ++it) {
        if (it.value() != 0.0) push_entry(static_cast<int>(it.row()), it.value());
      }
      for (SparseMatrix::InnerIterator it(lp_.ineq_matrix, j); it; ++it) {
        if (it.value() != 0.0) push_entry(m_eq_ + static_cast<int>(it.row()), it.value());
      }
      cstart_.push_back(static_cast<int>(ridx_.size()));
    }
    for (int k = 0; k < n_slack_; ++k) {
      push_entry(m_eq_ + k, 1.0);
      cstart_.push_back(static_cast<int>(ridx_.size()));
    }
    // Artificial signs are fixed in start_phase_one.
    for (int i = 0; i < m_; ++i) {
      push_entry(i, 1.0);
      cstart_.push_back(static_cast<int>(ridx_.size()));
    }
    b_.resize(m_);
    b_.head(m_eq_) = lp_.eq_rhs;
    b_.tail(n_slack_) = lp_.ineq_rhs;
    lo_.resize(ncols_);
    hi_.resize(ncols_);
    lo_.head(n_struct_) = lp_.lower;
    hi_.head(n_struct_) = lp_.upper;
    lo_.segment(n_struct_, n_slack_).setZero();
    hi_.segment(n_struct_, n_slack_).setConstant(kInf);
    lo_.tail(m_).setZero();
    hi_.tail(m_).setConstant(kInf);
  }

  void push_entry(int row, double val) {
    ridx_.push_back(row);
    cval_.push_back(val);
  }

  double col_dot(int j, const Eigen::VectorXd& y) const {
    double s = 0.0;
    for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) s += y[ridx_[k]] * cval_[k];
    return s;
  }

  template <typename Row>
  double col_dot_row(int j, const Row& y) const {
    double s = 0.0;
    for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) s += y(ridx_[k]) * cval_[k];
    return s;
  }

  // alpha = Binv * A_j
  void ftran(int j, Eigen::VectorXd& alpha) const {
    alpha.setZero(m_);
    for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) {
      alpha.noalias() += cval_[k] * binv_.col(ridx_[k]);
    }
  }

  void start_phase_one() {
    x_.setZero(ncols_);
    state_.assign(ncols_, VarState::kAtLower);
    for (int j = 0; j < art0_; ++j) {
      if (std::isfinite(lo_[j])) {
        x_[j] = lo_[j];
        state_[j] = VarState::kAtLower;
      } else if (std::isfinite(hi_[j])) {
        x_[j] = hi_[j];
        state_[j] = VarState::kAtUpper;
      } else {
        x_[j] = 0.0;
        state_[j] = VarState::kFreeZero;
      }
    }
    Eigen::VectorXd res = b_;
    for (int j = 0; j < art0_; ++j) {
      if (x_[j] == 0.0) continue;
      for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) res[ridx_[k]] -= cval_[k] * x_[j];
    }
    head_.resize(m_);
    binv_.setZero(m_, m_);
    for (int i = 0; i < m_; ++i) {
      const double sign = res[i] >= 0.0 ? 1.0 : -1.0;
      const int a = art0_ + i;
      cval_[cstart_[a]] = sign;
      binv_(i, i) = sign;
      x_[a] = std::abs(res[i]);
      state_[a] = VarState::kBasic;
      head_[i] = a;
    }
    cost_.setZero(ncols_);
    cost_.tail(m_).setOnes();
    since_refactor_ = 0;
  }

  void refactor() {
    if (m_ > 0) {
      Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(m_, m_);
      for (int i = 0; i < m_; ++i) {
        const int j = head_[i];
        for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) basis(ridx_[k], i) = cval_[k];
      }
      binv_ = basis.partialPivLu().inverse();
    }
    recompute_basic_values();
    since_refactor_ = 0;
  }

  void recompute_basic_values() {
    Eigen::VectorXd rhs = b_;
    for (int j = 0; j < ncols_; ++j) {
      if (state_[j] == VarState::kBasic || x_[j] == 0.0) continue;
      for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) rhs[ridx_[k]] -= cval_[k] * x_[j];
    }
    const Eigen::VectorXd xb = binv_ * rhs;
    for (int i = 0; i < m_; ++i) x_[head_[i]] = xb[i];
  }

  Eigen::VectorXd duals() const {
    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = cost_[head_[i]];
    return binv_.transpose() * cb;
  }

  bool eligible(int j, double d) const {
    switch (state_[j]) {
      case VarState::kAtLower:
        return d < -opts_.pricing_tol;
      case VarState::kAtUpper:
        return d > opts_.pricing_tol;
      case VarState::kFreeZero:
        return std::abs(d) > opts_.pricing_tol;
      case VarState::kBasic:
        return false;
    }
    return false;
  }

  void pivot(int r, int q, const Eigen::VectorXd& alpha) {
    const double piv = alpha[r];
    Eigen::RowVectorXd row = binv_.row(r) / piv;
    Eigen::VectorXd a = alpha;
    a[r] = 0.0;
    binv_.noalias() -= a * row;
    binv_.row(r) = row;
    head_[r] = q;
    state_[q] = VarState::kBasic;
    ++since_refactor_;
  }

  LpStatus run(Phase phase) {
    refactor();
    Eigen::VectorXd alpha(m_);
    long degenerate_run = 0;
    bool bland = false;
    const double tol = opts_.feas_tol;
    while (true) {
      if (iterations_ >= max_iter_) return LpStatus::kIterationLimit;
      if (since_refactor_ >= opts_.refactor_interval) refactor();

      // Pricing.
      const Eigen::VectorXd y = duals();
      int q = -1;
      double best = 0.0, dq = 0.0;
      for (int j = 0; j < ncols_; ++j) {
        if (state_[j] == VarState::kBasic || lo_[j] == hi_[j]) continue;
        if (phase == Phase::kTwo && j >= art0_) continue;
        const double d = cost_[j] - col_dot(j, y);
        if (!eligible(j, d)) continue;
        if (bland) {
          q = j;
          dq = d;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          q = j;
          dq = d;
        }
      }
      if (q < 0) return LpStatus::kOptimal;

      const double dir = dq < 0.0 ? 1.0 : -1.0;
      ftran(q, alpha);

      // Ratio test. Basic variable i moves at rate -dir*alpha_i per unit step.
      const double span = hi_[q] - lo_[q];
      int r = -1;
      double theta = kInf;
      bool leave_to_upper = false;
      if (bland) {
        for (int i = 0; i < m_; ++i) {
          const double rate = -dir * alpha[i];
          if (std::abs(alpha[i]) <= opts_.pivot_tol) continue;
          const int j = head_[i];
          double ratio;
          if (rate < 0.0) {
            if (!std::isfinite(lo_[j])) continue;
            ratio = std::max(0.0, (x_[j] - lo_[j]) / -rate);
          } else {
            if (!std::isfinite(hi_[j])) continue;
            ratio = std::max(0.0, (hi_[j] - x_[j]) / rate);
          }
          if (ratio < theta - 1e-12 || (ratio <= theta + 1e-12 && r >= 0 && j < head_[r])) {
            theta = std::min(theta, ratio);
            r = i;
            leave_to_upper = rate > 0.0;
          }
        }
      } else {
        // Harris two-pass: bound the step with relaxed bounds, then pick the
        // largest pivot among rows that block before that bound.
        double theta_max = kInf;
        for (int i = 0; i < m_; ++i) {
          if (std::abs(alpha[i]) <= opts_.pivot_tol) continue;
          const double rate = -dir * alpha[i];
          const int j = head_[i];
          if (rate < 0.0 && std::isfinite(lo_[j])) {
            theta_max = std::min(theta_max, (x_[j] - lo_[j] + tol) / -rate);
          } else if (rate > 0.0 && std::isfinite(hi_[j])) {
            theta_max = std::min(theta_max, (hi_[j] - x_[j] + tol) / rate);
          }
        }
        double best_piv = 0.0;
        for (int i = 0; i < m_; ++i) {
          if (std::abs(alpha[i]) <= opts_.pivot_tol) continue;
          const double rate = -dir * alpha[i];
          const int j = head_[i];
          double ratio;
          if (rate < 0.0) {
            if (!std::isfinite(lo_[j])) continue;
            ratio = (x_[j] - lo_[j]) / -rate;
          } else {
            if (!std::isfinite(hi_[j])) continue;
            ratio = (hi_[j] - x_[j]) / rate;
          }
          if (ratio <= theta_max && std::abs(alpha[i]) > best_piv) {
            best_piv = std::abs(alpha[i]);
            r = i;
            theta = std::max(0.0, ratio);
            leave_to_upper = rate > 0.0;
          }
        }
      }

      if (std::isfinite(span) && span <= theta) {
        // Bound flip: the entering variable reaches its opposite bound first.
        theta = span;
        r = -1;
      }
      if (r < 0 && !std::isfinite(theta)) return LpStatus::kUnbounded;

      ++iterations_;
      for (int i = 0; i < m_; ++i) x_[head_[i]] -= dir * theta * alpha[i];
      if (r < 0) {
        x_[q] = dir > 0.0 ? hi_[q] : lo_[q];
        state_[q] = dir > 0.0 ? VarState::kAtUpper : VarState::kAtLower;
      } else {
        const int leaving = head_[r];
        x_[q] += dir * theta;
        pivot(r, q, alpha);
        x_[leaving] = leave_to_upper ? hi_[leaving] : lo_[leaving];
        state_[leaving] = leave_to_upper ? VarState::kAtUpper : VarState::kAtLower;
      }

      if (theta <= 1e-12) {
        if (++degenerate_run > bland_after_ && !bland) {
          bland = true;
          used_bland_ = true;
        }
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  // Pivot basic artificials out of the basis wherever a structural or slack
  // column has a usable entry in their row; rows left behind are redundant.
  void drive_out_artificials() {
    refactor();
    Eigen::VectorXd alpha(m_);
    for (int r = 0; r < m_; ++r) {
      if (head_[r] < art0_) continue;
      int best_j = -1;
      double best = 1e-7;
      const auto row = binv_.row(r);
      for (int j = 0; j < art0_; ++j) {
        if (state_[j] == VarState::kBasic) continue;
        const double v = std::abs(col_dot_row(j, row));
        if (v > best) {
          best = v;
          best_j = j;
        }
      }
      if (best_j < 0) continue;
      const int leaving = head_[r];
      ftran(best_j, alpha);
      pivot(r, best_j, alpha);
      x_[leaving] = 0.0;
      state_[leaving] = VarState::kAtLower;
    }
    refactor();
  }

  LpSolution finish(LpStatus st) {
    LpSolution sol;
    sol.status = st;
    sol.iterations = iterations_;
    sol.used_bland = used_bland_;
    sol.x = x_.head(n_struct_);
    // Snap nonbasic values to their bounds exactly.
    for (int j = 0; j < n_struct_; ++j) {
      if (state_[j] == VarState::kAtLower) sol.x[j] = lo_[j];
      if (state_[j] == VarState::kAtUpper) sol.x[j] = hi_[j];
    }
    sol.objective_value = lp_.objective.dot(sol.x);
    sol.primal_residual = max_constraint_violation(lp_, sol.x);
    const Eigen::VectorXd y = m_ > 0 ? duals() : Eigen::VectorXd();
    sol.row_duals = y;
    sol.reduced_costs.resize(n_struct_);
    double dinf = 0.0;
    for (int j = 0; j < art0_; ++j) {
      const double d = cost_[j] - col_dot(j, y);
      if (j < n_struct_) sol.reduced_costs[j] = d;
      if (st != LpStatus::kOptimal || lo_[j] == hi_[j]) continue;
      switch (state_[j]) {
        case VarState::kBasic:
          dinf = std::max(dinf, std::abs(d));
          break;
        case VarState::kAtLower:
          dinf = std::max(dinf, -d);
          break;
        case VarState::kAtUpper:
          dinf = std::max(dinf, d);
          break;
        case VarState::kFreeZero:
          dinf = std::max(dinf, std::abs(d));
          break;
      }
    }
    sol.dual_infeasibility = dinf;
    return sol;
  }

  const LinearProgram& lp_;
  const LpOptions& opts_;
  int n_struct_ = 0, n_slack_ = 0, m_eq_ = 0, m_ = 0, art0_ = 0, ncols_ = 0;
  std::vector<int> cstart_, ridx_;
  std::vector<double> cval_;
  Eigen::VectorXd b_, lo_, hi_, cost_, x_;
  std::vector<VarState> state_;
  std::vector<int> head_;
  Eigen::MatrixXd binv_;
  long iterations_ = 0, max_iter_ = 0, bland_after_ = 0;
  int since_refactor_ = 0;
  bool used_bland_ = false;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts) {
  lp.validate();
  BoundedSimplex simplex(lp, opts);
  return simplex.solve();
}

void write_lp_text(std::ostream& os, const LinearProgram& lp) {
  auto term = [&os](double v, Eigen::Index j, bool first) {
    if (!first) os << (v < 0 ? "- " : "+ ");
    else if (v < 0) os << "-";
    os << std::abs(v) << " x" << j;
  };
  os << "minimize\n  obj:";
  bool first = true;
  for (Eigen::Index j = 0; j < lp.num_vars(); ++j) {
    if (lp.objective[j] == 0.0) continue;
    os << ' ';
    term(lp.objective[j], j, first);
    first = false;
  }
  if (first) os << " 0";
  os << "\nsubject to\n";
  auto dump_rows = [&](const SparseMatrix& a, const Eigen::VectorXd& rhs, const char* tag,
                       const char* rel) {
    const Eigen::SparseMatrix<double, Eigen::RowMajor> rows = a;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      os << "  " << tag << i << ':';
      bool f = true;
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rows, i); it; ++it) {
        os << ' ';
        term(it.value(), it.col(), f);
        f = false;
      }
      if (f) os << " 0";
      os << ' ' << rel << ' ' << rhs[i] << '\n';
    }
  };
  dump_rows(lp.eq_matrix, lp.eq_rhs, "e", "=");
  dump_rows(lp.ineq_matrix, lp.ineq_rhs, "i", "<=");
  os << "bounds\n";
  for (Eigen::Index j = 0; j < lp.num_vars(); ++j) {
    os << "  " << lp.lower[j] << " <= x" << j << " <= " << lp.upper[j] << '\n';
  }
  os << "end\n";
}

}  // namespace syndeepc
