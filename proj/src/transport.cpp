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

#include "syndeepc/transport.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <vector>

#include "syndeepc/error.hpp"

namespace syndeepc {

namespace {

constexpr double kSimplexTol = 1e-12;

void check_simplex(const Eigen::VectorXd& w, const char* what) {
  if (w.size() == 0) throw ConfigError(std::string(what) + ": empty weight vector");
  if ((w.array() < 0.0).any() || !w.allFinite()) {
    throw ConfigError(std::string(what) + ": weights must be finite and nonnegative");
  }
  if (std::abs(w.sum() - 1.0) > kSimplexTol * std::max<double>(1.0, w.size())) {
    throw ConfigError(std::string(what) + ": weights must sum to one");
  }
}

void check_problem(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta,
                   const Eigen::MatrixXd& D) {
  check_simplex(alpha, "alpha");
  check_simplex(beta, "beta");
  if (D.rows() != alpha.size() || D.cols() != beta.size()) {
    throw DimensionError("transport: cost matrix is " + std::to_string(D.rows()) + "x" +
                         std::to_string(D.cols()) + ", marginals are " +
                         std::to_string(alpha.size()) + " and " + std::to_string(beta.size()));
  }
}

double log_sum_exp(const Eigen::Ref<const Eigen::ArrayXd>& v) {
  const double mx = v.maxCoeff();
  if (!std::isfinite(mx)) return mx;
  return mx + std::log((v - mx).exp().sum());
}

}  // namespace

std::string_view to_string(GroundNorm norm) {
  switch (norm) {
    case GroundNorm::kOne: return "one";
    case GroundNorm::kTwo: return "two";
    case GroundNorm::kInf: return "inf";
  }
  return "?";
}

GroundNorm parse_ground_norm(std::string_view text) {
  if (text == "one" || text == "1") return GroundNorm::kOne;
  if (text == "two" || text == "2") return GroundNorm::kTwo;
  if (text == "inf") return GroundNorm::kInf;
  throw ConfigError("unknown ground norm '" + std::string(text) + "'");
}

double ground_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                       const Eigen::Ref<const Eigen::VectorXd>& b, GroundNorm norm) {
  switch (norm) {
    case GroundNorm::kOne: return (a - b).lpNorm<1>();
    case GroundNorm::kTwo: return (a - b).norm();
    case GroundNorm::kInf: return (a - b).lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

DiscreteDistribution DiscreteDistribution::uniform(const Eigen::MatrixXd& atoms) {
  if (atoms.cols() == 0) throw ConfigError("uniform distribution needs at least one atom");
  return {atoms, Eigen::VectorXd::Constant(atoms.cols(), 1.0 / atoms.cols())};
}

void DiscreteDistribution::validate() const {
  if (atoms.cols() != weights.size()) {
    throw ConfigError("distribution: atom count does not match weight count");
  }
  check_simplex(weights, "distribution");
}

CostMatrix cost_matrix(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, GroundNorm norm,
                       double p) {
  if (x.rows() != y.rows()) {
    throw DimensionError("cost_matrix: atoms of dimension " + std::to_string(x.rows()) +
                         " and " + std::to_string(y.rows()));
  }
  if (!(p >= 1.0)) throw ConfigError("cost_matrix: order p must be at least 1");
  CostMatrix c;
  c.ground_norm = norm;
  c.p = p;
  c.D.resize(x.cols(), y.cols());
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
      const double d = ground_distance(x.col(i), y.col(j), norm);
      c.D(i, j) = p == 1.0 ? d : std::pow(d, p);
    }
  }
  return c;
}

std::string_view to_string(PlanStatus status) {
  switch (status) {
    case PlanStatus::kOptimal: return "optimal";
    case PlanStatus::kIterationLimit: return "iteration-limit";
    case PlanStatus::kInfeasible: return "infeasible";
  }
  return "?";
}

double TransportPlan::marginal_violation(const Eigen::VectorXd& alpha,
                                         const Eigen::VectorXd& beta) const {
  const double rows = (T.rowwise().sum() - alpha).lpNorm<Eigen::Infinity>();
  const double cols = (T.colwise().sum().transpose() - beta).lpNorm<Eigen::Infinity>();
  return std::max(rows, cols);
}

TransportPlan solve_exact_ot(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta,
                             const Eigen::MatrixXd& D, const LpOptions& lp_opts) {
  check_problem(alpha, beta, D);
  const Eigen::Index n = alpha.size(), m = beta.size();

  // Variable t(i, j) sits at index i + j * n (column-major, matching Eigen).
  LinearProgram lp(n * m);
  lp.objective = D.reshaped();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * n * m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      trips.emplace_back(i, i + j * n, 1.0);
      trips.emplace_back(n + j, i + j * n, 1.0);
    }
  }
  lp.eq_matrix.resize(n + m, n * m);
  lp.eq_matrix.setFromTriplets(trips.begin(), trips.end());
  lp.eq_rhs.resize(n + m);
  lp.eq_rhs << alpha, beta;
  lp.ineq_matrix.resize(0, n * m);

  const LpSolution sol = solve_lp(lp, lp_opts);
  TransportPlan plan;
  plan.iterations = sol.iterations;
  switch (sol.status) {
    case LpStatus::kOptimal: plan.status = PlanStatus::kOptimal; break;
    case LpStatus::kIterationLimit: plan.status = PlanStatus::kIterationLimit; break;
    default:
      throw SolverError("solve_exact_ot: linear program reported " +
                        std::string(to_string(sol.status)));
  }
  // Basic values carry round-off; entries below 1e-13 are numerically zero.
  plan.T = sol.x.reshaped(n, m).unaryExpr([](double t) { return t < 1e-13 ? 0.0 : t; });
  plan.cost = (plan.T.array() * D.array()).sum();
  return plan;
}

TransportPlan sinkhorn(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta,
                       const Eigen::MatrixXd& D, const SinkhornOptions& opts) {
  check_problem(alpha, beta, D);
  if (!(opts.gamma > 0.0) || !std::isfinite(opts.gamma)) {
    throw ConfigError("sinkhorn: gamma must be positive");
  }
  if (!(opts.tol > 0.0) || opts.max_iter < 1) {
    throw ConfigError("sinkhorn: tol must be positive and max_iter at least one");
  }
  const Eigen::Index n = alpha.size(), m = beta.size();
  const double gamma = opts.gamma;
  const bool log_domain =
      opts.mode == SinkhornMode::kLog ||
      (opts.mode == SinkhornMode::kAuto && D.maxCoeff() / gamma > 30.0);

  TransportPlan plan;
  plan.status = PlanStatus::kIterationLimit;

  if (!log_domain) {
    // Scalar exp: Eigen's packet exp saturates instead of underflowing to zero.
    const Eigen::MatrixXd K = D.unaryExpr([gamma](double d) { return std::exp(-d / gamma); });
    for (Eigen::Index i = 0; i < n; ++i) {
      if (alpha[i] > 0.0 && !(K.row(i).array() > 0.0).any()) {
        throw SolverError("sinkhorn: kernel underflow; increase gamma or use log-domain mode");
      }
    }
    Eigen::VectorXd u = Eigen::VectorXd::Ones(n), v = Eigen::VectorXd::Ones(m);
    for (long it = 1; it <= opts.max_iter; ++it) {
      const Eigen::VectorXd kv = K * v;
      for (Eigen::Index i = 0; i < n; ++i) u[i] = alpha[i] > 0.0 ? alpha[i] / kv[i] : 0.0;
      const Eigen::VectorXd ktu = K.transpose() * u;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (beta[j] > 0.0 && !(ktu[j] > 0.0)) {
          throw SolverError("sinkhorn: kernel underflow; increase gamma or use log-domain mode");
        }
        v[j] = beta[j] > 0.0 ? beta[j] / ktu[j] : 0.0;
      }
      if (!u.allFinite() || !v.allFinite()) {
        throw SolverError("sinkhorn: scaling overflow; increase gamma or use log-domain mode");
      }
      plan.iterations = it;
      // Columns are exact after the v update; rows carry the violation.
      const double viol = (u.cwiseProduct(K * v) - alpha).lpNorm<Eigen::Infinity>();
      if (viol < opts.tol) {
        plan.status = PlanStatus::kOptimal;
        break;
      }
    }
    plan.T = u.asDiagonal() * K * v.asDiagonal();
  } else {
    const Eigen::ArrayXd log_a = alpha.array().log(), log_b = beta.array().log();
    Eigen::ArrayXd f = Eigen::ArrayXd::Zero(n), g = Eigen::ArrayXd::Zero(m);
    const Eigen::ArrayXXd md = -D.array() / gamma;
    auto row_lse = [&](Eigen::Index i) {
      return log_sum_exp(md.row(i).transpose() + g / gamma);
    };
    for (long it = 1; it <= opts.max_iter; ++it) {
      for (Eigen::Index i = 0; i < n; ++i) f[i] = gamma * (log_a[i] - row_lse(i));
      for (Eigen::Index j = 0; j < m; ++j) {
        g[j] = gamma * (log_b[j] - log_sum_exp(md.col(j) + f / gamma));
      }
      plan.iterations = it;
      double viol = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double lse = row_lse(i);
        const double row = std::isfinite(f[i]) ? std::exp(f[i] / gamma + lse) : 0.0;
        viol = std::max(viol, std::abs(row - alpha[i]));
      }
      if (viol < opts.tol) {
        plan.status = PlanStatus::kOptimal;
        break;
      }
    }
    plan.T.resize(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double e = (f[i] + g[j]) / gamma + md(i, j);
        plan.T(i, j) = std::isfinite(e) ? std::exp(e) : 0.0;
      }
    }
  }
  plan.cost = (plan.T.array() * D.array()).sum();
  return plan;
}

double wasserstein(const DiscreteDistribution& p, const DiscreteDistribution& q,
                   GroundNorm norm) {
  p.validate();
  q.validate();
  const CostMatrix c = cost_matrix(p.atoms, q.atoms, norm, 1.0);
  const TransportPlan plan = solve_exact_ot(p.weights, q.weights, c.D);
  if (plan.status != PlanStatus::kOptimal) {
    throw SolverError("wasserstein: transport problem did not reach optimality");
  }
  return plan.cost;
}

void write_plan_csv(std::ostream& os, const TransportPlan& plan) {
  os << "i,j,mass\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < plan.T.rows(); ++i) {
    for (Eigen::Index j = 0; j < plan.T.cols(); ++j) {
      if (plan.T(i, j) != 0.0) os << i << ',' << j << ',' << plan.T(i, j) << '\n';
    }
  }
}

}  // namespace syndeepc
