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

#include "syndeepc/compress.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "syndeepc/error.hpp"

namespace syndeepc {

namespace {

constexpr double kMassTol = 1e-14;

// Orthonormal basis of the direction space of aff(columns of H).
Eigen::MatrixXd affine_directions(const Eigen::MatrixXd& H) {
  if (H.cols() < 2) return Eigen::MatrixXd(H.rows(), 0);
  const Eigen::MatrixXd diffs = H.rightCols(H.cols() - 1).colwise() - H.col(0);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(diffs);
  const Eigen::Index rank = qr.rank();
  const Eigen::MatrixXd q = qr.householderQ();
  return q.leftCols(rank);
}

double atom_cost(const Eigen::MatrixXd& pts, const Eigen::VectorXd& w, const Eigen::VectorXd& s,
                 GroundNorm norm) {
  double c = 0.0;
  for (Eigen::Index i = 0; i < pts.cols(); ++i) c += w[i] * ground_distance(pts.col(i), s, norm);
  return c;
}

// Largest t in [0, 1] with mean + t d in conv(H), posed in the coordinates of
// the affine direction space. Returns the convex weights of the hull point, or
// an empty vector when the LP fails.
Eigen::VectorXd segment_hull_weights(const Eigen::MatrixXd& H, const Eigen::MatrixXd& Q,
                                     const Eigen::VectorXd& mean, const Eigen::VectorXd& d) {
  const Eigen::Index R = H.cols(), k = Q.cols();
  const Eigen::MatrixXd coords = Q.transpose() * (H.colwise() - mean);
  const Eigen::VectorXd dir = Q.transpose() * d;
  LpBuilder b;
  const Eigen::Index lam = b.add_variables(R, 0.0);
  const Eigen::Index t = b.add_variable(-1.0, 0.0, 1.0);
  for (Eigen::Index row = 0; row < k; ++row) {
    std::vector<LpBuilder::Term> terms;
    for (Eigen::Index i = 0; i < R; ++i) {
      if (coords(row, i) != 0.0) terms.emplace_back(lam + i, coords(row, i));
    }
    if (dir[row] != 0.0) terms.emplace_back(t, -dir[row]);
    b.add_equality(terms, 0.0);
  }
  std::vector<LpBuilder::Term> sum;
  for (Eigen::Index i = 0; i < R; ++i) sum.emplace_back(lam + i, 1.0);
  b.add_equality(sum, 1.0);
  const LpSolution sol = solve_lp(b.build());
  if (sol.status != LpStatus::kOptimal) return {};
  Eigen::VectorXd w = sol.x.head(R).cwiseMax(0.0);
  const double total = w.sum();
  if (!(total > 0.0)) return {};
  w /= total;
  // Tag the achieved step length in an extra slot.
  Eigen::VectorXd out(R + 1);
  out << w, sol.x[t];
  return out;
}

class Compressor {
 public:
  Compressor(const Eigen::MatrixXd& H, const CompressionConfig& cfg) : H_(H), cfg_(cfg) {}

  SyntheticDataset run();

 private:
  Eigen::MatrixXd initial_atoms(std::mt19937_64& rng) const;
  TransportPlan inner(const Eigen::MatrixXd& D, SyntheticDataset& out) const;
  Eigen::VectorXd update_atom(Eigen::Index j, const Eigen::MatrixXd& T,
                              const Eigen::VectorXd& old, SyntheticDataset& out);
  Eigen::VectorXd median_in_hull(const Eigen::MatrixXd& pts, const Eigen::VectorXd& w,
                                 const Eigen::VectorXd& median, SyntheticDataset& out);

  const Eigen::MatrixXd& H_;
  const CompressionConfig& cfg_;
  Eigen::MatrixXd directions_;
  bool have_directions_ = false;
  long hull_moves_ = 0;
};

Eigen::MatrixXd Compressor::initial_atoms(std::mt19937_64& rng) const {
  const Eigen::Index R = H_.cols();
  const int S = cfg_.S;
  Eigen::MatrixXd atoms(H_.rows(), S);
  switch (cfg_.init) {
    case InitKind::kProvided:
      return cfg_.initial_atoms;
    case InitKind::kRandomColumns: {
      std::vector<Eigen::Index> idx(R);
      std::iota(idx.begin(), idx.end(), 0);
      for (int j = 0; j < S; ++j) {
        std::uniform_int_distribution<Eigen::Index> pick(j, R - 1);
        std::swap(idx[j], idx[pick(rng)]);
        atoms.col(j) = H_.col(idx[j]);
      }
      return atoms;
    }
    case InitKind::kKmeansPlusPlus: {
      std::uniform_int_distribution<Eigen::Index> first(0, R - 1);
      std::vector<char> used(R, 0);
      Eigen::Index c = first(rng);
      used[c] = 1;
      atoms.col(0) = H_.col(c);
      Eigen::VectorXd dist(R);
      for (Eigen::Index i = 0; i < R; ++i) {
        dist[i] = ground_distance(H_.col(i), atoms.col(0), cfg_.ground_norm);
      }
      for (int j = 1; j < S; ++j) {
        double total = 0.0;
        for (Eigen::Index i = 0; i < R; ++i) total += used[i] ? 0.0 : dist[i];
        if (total > 0.0) {
          std::uniform_real_distribution<double> u(0.0, total);
          double target = u(rng);
          c = -1;
          for (Eigen::Index i = 0; i < R; ++i) {
            if (used[i] || dist[i] <= 0.0) continue;
            c = i;
            target -= dist[i];
            if (target <= 0.0) break;
          }
        } else {
          // Remaining columns duplicate chosen atoms: take any unused one.
          std::vector<Eigen::Index> free;
          for (Eigen::Index i = 0; i < R; ++i)
            if (!used[i]) free.push_back(i);
          std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
          c = free[pick(rng)];
        }
        used[c] = 1;
        atoms.col(j) = H_.col(c);
        for (Eigen::Index i = 0; i < R; ++i) {
          dist[i] = std::min(dist[i], ground_distance(H_.col(i), atoms.col(j), cfg_.ground_norm));
        }
      }
      return atoms;
    }
  }
  return atoms;
}

TransportPlan Compressor::inner(const Eigen::MatrixXd& D, SyntheticDataset& out) const {
  const Eigen::Index R = D.rows(), S = D.cols();
  const Eigen::VectorXd alpha = Eigen::VectorXd::Constant(R, 1.0 / static_cast<double>(R));
  const Eigen::VectorXd beta = Eigen::VectorXd::Constant(S, 1.0 / static_cast<double>(S));
  TransportPlan plan;
  if (cfg_.gamma > 0.0) {
    SinkhornOptions o;
    o.gamma = cfg_.gamma;
    plan = sinkhorn(alpha, beta, D, o);
    if (plan.status != PlanStatus::kOptimal) {
      out.events.push_back("sinkhorn stopped at its iteration limit");
    }
  } else {
    plan = solve_exact_ot(alpha, beta, D);
    if (plan.status != PlanStatus::kOptimal) {
      throw SolverError("compress: inner transport LP hit its iteration limit");
    }
  }
  return plan;
}

Eigen::VectorXd Compressor::median_in_hull(const Eigen::MatrixXd& pts, const Eigen::VectorXd& w,
                                           const Eigen::VectorXd& median,
                                           SyntheticDataset& out) {
  // With at most two support points the median is one of them or their
  // midpoint (equal weights), hence already a convex combination.
  if (pts.cols() <= 2) return median;
  const Eigen::VectorXd mean = pts * w / w.sum();
  const Eigen::VectorXd d = median - mean;
  const double dn = d.norm();
  if (dn == 0.0) return median;
  if (!have_directions_) {
    directions_ = affine_directions(H_);
    have_directions_ = true;
  }
  const Eigen::VectorXd off = d - directions_ * (directions_.transpose() * d);
  if (off.norm() > 1e-10 * (1.0 + dn)) {
    ++hull_moves_;
    return mean;
  }
  const Eigen::VectorXd sol = segment_hull_weights(H_, directions_, mean, d);
  if (sol.size() == 0) {
    out.events.push_back("hull step LP failed; using the transport-weighted mean");
    ++hull_moves_;
    return mean;
  }
  const double t = sol[sol.size() - 1];
  if (t >= 1.0 - 1e-12) return median;
  ++hull_moves_;
  return H_ * sol.head(sol.size() - 1);
}

Eigen::VectorXd Compressor::update_atom(Eigen::Index j, const Eigen::MatrixXd& T,
                                        const Eigen::VectorXd& old, SyntheticDataset& out) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < T.rows(); ++i)
    if (T(i, j) > kMassTol) idx.push_back(i);
  Eigen::MatrixXd pts(H_.rows(), static_cast<Eigen::Index>(idx.size()));
  Eigen::VectorXd w(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    pts.col(static_cast<Eigen::Index>(k)) = H_.col(idx[k]);
    w[static_cast<Eigen::Index>(k)] = T(idx[k], j);
  }
  Eigen::VectorXd candidate;
  if (cfg_.ground_norm == GroundNorm::kOne) {
    const Eigen::VectorXd median = coordinatewise_median(pts, w);
    candidate = cfg_.hull_guard ? median_in_hull(pts, w, median, out) : median;
  } else {
    candidate = weighted_geometric_median(pts, w, old);
  }
  const double c_new = atom_cost(pts, w, candidate, cfg_.ground_norm);
  const double c_old = atom_cost(pts, w, old, cfg_.ground_norm);
  return c_new <= c_old ? candidate : old;
}

SyntheticDataset Compressor::run() {
  SyntheticDataset out;
  out.ground_norm = cfg_.ground_norm;
  out.seed = cfg_.seed;
  out.init = cfg_.init;
  std::mt19937_64 rng(cfg_.seed);
  Eigen::MatrixXd atoms = initial_atoms(rng);

  TransportPlan plan = inner(cost_matrix(H_, atoms, cfg_.ground_norm).D, out);
  out.cost_history.push_back(plan.cost);
  while (out.iterations < cfg_.max_outer_iters && out.cost_history.back() > 0.0) {
    // Re-seed atoms that carry no mass at the column with the largest
    // transport-weighted residual.
    for (Eigen::Index j = 0; j < atoms.cols(); ++j) {
      if (plan.T.col(j).sum() > kMassTol) continue;
      Eigen::VectorXd resid = Eigen::VectorXd::Zero(H_.cols());
      for (Eigen::Index i = 0; i < H_.cols(); ++i) {
        for (Eigen::Index s = 0; s < atoms.cols(); ++s) {
          if (plan.T(i, s) > 0.0) {
            resid[i] += plan.T(i, s) * ground_distance(H_.col(i), atoms.col(s), cfg_.ground_norm);
          }
        }
      }
      Eigen::Index far = 0;
      resid.maxCoeff(&far);
      atoms.col(j) = H_.col(far);
      out.events.push_back("iteration " + std::to_string(out.iterations) +
                           ": empty atom " + std::to_string(j) + " re-seeded at column " +
                           std::to_string(far));
    }

    Eigen::MatrixXd next(atoms.rows(), atoms.cols());
    for (Eigen::Index j = 0; j < atoms.cols(); ++j) {
      next.col(j) = plan.T.col(j).sum() > kMassTol ? update_atom(j, plan.T, atoms.col(j), out)
                                                   : Eigen::VectorXd(atoms.col(j));
    }
    const Eigen::MatrixXd D = cost_matrix(H_, next, cfg_.ground_norm).D;
    TransportPlan fresh = inner(D, out);
    if (cfg_.gamma <= 0.0) {
      // Keep the previous plan if the LP stopped at a marginally worse vertex.
      const double carried = (plan.T.array() * D.array()).sum();
      if (fresh.cost > carried) {
        fresh.T = plan.T;
        fresh.cost = carried;
      }
    }
    atoms = next;
    plan = std::move(fresh);
    ++out.iterations;
    const double prev = out.cost_history.back();
    out.cost_history.push_back(plan.cost);
    if (prev <= 0.0 || (prev - plan.cost) / prev < cfg_.outer_tol) break;
  }
  if (hull_moves_ > 0) {
    out.events.push_back(std::to_string(hull_moves_) +
                         " median update(s) left conv(H) and were pulled back");
  }
  out.atoms = atoms;
  out.eta = plan.cost;
  out.plan = std::move(plan);
  return out;
}

}  // namespace

std::string_view to_string(InitKind kind) {
  switch (kind) {
    case InitKind::kRandomColumns: return "random-columns";
    case InitKind::kKmeansPlusPlus: return "kmeans++";
    case InitKind::kProvided: return "provided";
  }
  return "?";
}

InitKind parse_init_kind(std::string_view text) {
  if (text == "random-columns") return InitKind::kRandomColumns;
  if (text == "kmeans++" || text == "kmeans-plus-plus") return InitKind::kKmeansPlusPlus;
  if (text == "provided") return InitKind::kProvided;
  throw ConfigError("unknown compression init '" + std::string(text) + "'");
}

void CompressionConfig::validate(Eigen::Index rows, Eigen::Index R) const {
  if (R < 1) throw ConfigError("compress: data matrix has no columns");
  if (S < 1) throw ConfigError("compress: S must be at least 1");
  if (S > R) {
    throw ConfigError("compress: S = " + std::to_string(S) + " exceeds R = " + std::to_string(R));
  }
  if (max_outer_iters < 1) throw ConfigError("compress: max_outer_iters must be at least 1");
  if (!(outer_tol > 0.0)) throw ConfigError("compress: outer_tol must be positive");
  if (!(gamma >= 0.0)) throw ConfigError("compress: gamma must be nonnegative");
  if (ground_norm == GroundNorm::kInf) {
    throw ConfigError("compress: ground norm must be one or two");
  }
  if (init == InitKind::kProvided &&
      (initial_atoms.rows() != rows || initial_atoms.cols() != S)) {
    throw ConfigError("compress: provided atoms must be " + std::to_string(rows) + "x" +
                      std::to_string(S));
  }
}

SyntheticDataset compress(const Eigen::MatrixXd& H, const CompressionConfig& cfg) {
  cfg.validate(H.rows(), H.cols());
  return Compressor(H, cfg).run();
}

std::vector<EtaPoint> eta_curve(const Eigen::MatrixXd& H, const std::vector<int>& S_list,
                                const CompressionConfig& cfg, int jobs) {
  if (S_list.empty()) throw ConfigError("eta_curve: empty S list");
  auto one = [&H, &cfg](std::size_t index, int S) {
    EtaPoint pt;
    pt.S = S;
    const auto start = std::chrono::steady_clock::now();
    try {
      CompressionConfig c = cfg;
      c.S = S;
      c.seed = cfg.seed + index;
      const SyntheticDataset d = compress(H, c);
      pt.eta = d.eta;
      pt.iterations = d.iterations;
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
    pt.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return pt;
  };
  std::vector<EtaPoint> out(S_list.size());
  if (jobs <= 1) {
    for (std::size_t k = 0; k < S_list.size(); ++k) out[k] = one(k, S_list[k]);
    return out;
  }
  for (std::size_t begin = 0; begin < S_list.size(); begin += static_cast<std::size_t>(jobs)) {
    std::vector<std::future<EtaPoint>> batch;
    const std::size_t end = std::min(S_list.size(), begin + static_cast<std::size_t>(jobs));
    for (std::size_t k = begin; k < end; ++k) {
      batch.push_back(std::async(std::launch::async, one, k, S_list[k]));
    }
    for (std::size_t k = begin; k < end; ++k) out[k] = batch[k - begin].get();
  }
  return out;
}

bool in_convex_hull(const Eigen::VectorXd& point, const Eigen::MatrixXd& columns, double tol) {
  if (point.size() != columns.rows()) {
    throw DimensionError("in_convex_hull: point and columns differ in dimension");
  }
  const Eigen::Index r = columns.rows(), R = columns.cols();
  if (R == 0) return false;
  LpBuilder b;
  const Eigen::Index lam = b.add_variables(R, 0.0);
  const Eigen::Index err = b.add_variables(r, 0.0, -tol, tol);
  for (Eigen::Index k = 0; k < r; ++k) {
    std::vector<LpBuilder::Term> terms;
    for (Eigen::Index i = 0; i < R; ++i) {
      if (columns(k, i) != 0.0) terms.emplace_back(lam + i, columns(k, i));
    }
    terms.emplace_back(err + k, 1.0);
    b.add_equality(terms, point[k]);
  }
  std::vector<LpBuilder::Term> sum;
  for (Eigen::Index i = 0; i < R; ++i) sum.emplace_back(lam + i, 1.0);
  b.add_equality(sum, 1.0);
  const LpSolution sol = solve_lp(b.build());
  if (sol.status == LpStatus::kOptimal) return true;
  if (sol.status != LpStatus::kInfeasible) {
    std::clog << "in_convex_hull: LP returned " << to_string(sol.status) << '\n';
  }
  return false;
}

double weighted_median(const Eigen::VectorXd& values, const Eigen::VectorXd& weights) {
  if (values.size() != weights.size()) {
    throw DimensionError("weighted_median: values and weights differ in length");
  }
  std::vector<Eigen::Index> idx;
  double total = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (weights[i] < 0.0) throw ConfigError("weighted_median: negative weight");
    if (weights[i] > 0.0) {
      idx.push_back(i);
      total += weights[i];
    }
  }
  if (idx.empty()) throw ConfigError("weighted_median: no positive weight");
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return values[a] < values[b] || (values[a] == values[b] && a < b);
  });
  const double half = 0.5 * total;
  double cum = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    cum += weights[idx[k]];
    if (std::abs(cum - half) <= 1e-12 * total && k + 1 < idx.size()) {
      return 0.5 * (values[idx[k]] + values[idx[k + 1]]);
    }
    if (cum > half) return values[idx[k]];
  }
  return values[idx.back()];
}

Eigen::VectorXd coordinatewise_median(const Eigen::MatrixXd& points,
                                      const Eigen::VectorXd& weights) {
  Eigen::VectorXd out(points.rows());
  for (Eigen::Index k = 0; k < points.rows(); ++k) {
    out[k] = weighted_median(points.row(k).transpose(), weights);
  }
  return out;
}

Eigen::VectorXd weighted_geometric_median(const Eigen::MatrixXd& points,
                                          const Eigen::VectorXd& weights,
                                          const Eigen::VectorXd& start, double tol,
                                          int max_iter) {
  if (points.cols() != weights.size() || points.rows() != start.size()) {
    throw DimensionError("weighted_geometric_median: inconsistent sizes");
  }
  if (points.cols() == 0 || !(weights.sum() > 0.0)) {
    throw ConfigError("weighted_geometric_median: no positive weight");
  }
  Eigen::VectorXd s = start;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd num = Eigen::VectorXd::Zero(s.size());
    double den = 0.0, coincident = 0.0;
    const double scale = 1.0 + s.norm();
    for (Eigen::Index i = 0; i < points.cols(); ++i) {
      if (weights[i] <= 0.0) continue;
      const double d = (points.col(i) - s).norm();
      if (d <= 1e-12 * scale) {
        coincident += weights[i];
        continue;
      }
      num += weights[i] / d * points.col(i);
      den += weights[i] / d;
    }
    if (den == 0.0) return s;  // every point sits on s
    const Eigen::VectorXd t = num / den;
    Eigen::VectorXd next = t;
    if (coincident > 0.0) {
      // Vardi-Zhang: s is optimal when the pull of the other points is weak.
      const double pull = den * (t - s).norm();
      if (pull <= coincident) return s;
      const double b = coincident / pull;
      next = (1.0 - b) * t + b * s;
    }
    const double step = (next - s).norm();
    s = next;
    if (step <= tol * scale) break;
  }
  return s;
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& mat) {
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < mat.rows(); ++i) {
    for (Eigen::Index j = 0; j < mat.cols(); ++j) os << (j ? "," : "") << mat(i, j);
    os << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("matrix csv: bad number '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ConfigError("matrix csv: ragged rows");
    }
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

void save_synthetic(const std::string& path, const SyntheticDataset& data) {
  std::ofstream csv(path);
  if (!csv) throw ConfigError("cannot write " + path);
  write_matrix_csv(csv, data.atoms);
  std::ofstream meta(path + ".meta");
  if (!meta) throw ConfigError("cannot write " + path + ".meta");
  meta << std::setprecision(17) << "S=" << data.atoms.cols() << "\nrows=" << data.atoms.rows()
       << "\neta=" << data.eta << "\nseed=" << data.seed
       << "\nnorm=" << to_string(data.ground_norm) << "\ninit=" << to_string(data.init)
       << "\niterations=" << data.iterations << '\n';
}

SyntheticDataset load_synthetic(const std::string& path) {
  std::ifstream csv(path);
  if (!csv) throw ConfigError("cannot read " + path);
  SyntheticDataset d;
  d.atoms = read_matrix_csv(csv);
  std::ifstream meta(path + ".meta");
  if (!meta) throw ConfigError("cannot read " + path + ".meta");
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(meta, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  try {
    if (std::stol(kv.at("S")) != d.atoms.cols()) {
      throw ConfigError("synthetic dataset: S in metadata does not match the CSV");
    }
    d.eta = std::stod(kv.at("eta"));
    d.seed = std::stoull(kv.at("seed"));
    d.ground_norm = parse_ground_norm(kv.at("norm"));
    d.init = parse_init_kind(kv.at("init"));
    d.iterations = std::stoi(kv.at("iterations"));
  } catch (const std::out_of_range&) {
    throw ConfigError("synthetic dataset: metadata is missing a key");
  } catch (const std::invalid_argument&) {
    throw ConfigError("synthetic dataset: malformed metadata value");
  }
  return d;
}

}  // namespace syndeepc
