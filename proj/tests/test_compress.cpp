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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "doctest.h"
#include "support/random_system.hpp"
#include "syndeepc/compress.hpp"
#include "syndeepc/error.hpp"
#include "syndeepc/hankel.hpp"

using namespace syndeepc;

namespace {

// Unweighted coordinate-wise median: middle order statistic, or the mean of
// the two middle ones for an even count.
Eigen::VectorXd plain_median(const Eigen::MatrixXd& pts) {
  Eigen::VectorXd out(pts.rows());
  for (Eigen::Index k = 0; k < pts.rows(); ++k) {
    std::vector<double> v(pts.cols());
    for (Eigen::Index i = 0; i < pts.cols(); ++i) v[i] = pts(k, i);
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    out[k] = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  }
  return out;
}

double weighted_l1(const Eigen::VectorXd& v, const Eigen::VectorXd& w, double x) {
  return (w.array() * (v.array() - x).abs()).sum();
}

double weighted_l2(const Eigen::MatrixXd& pts, const Eigen::VectorXd& w,
                   const Eigen::VectorXd& s) {
  double c = 0.0;
  for (Eigen::Index i = 0; i < pts.cols(); ++i) c += w[i] * (pts.col(i) - s).norm();
  return c;
}

}  // namespace

TEST_CASE("weighted_median: examples") {
  CHECK(weighted_median(Eigen::Vector3d(3, 1, 2), Eigen::Vector3d::Ones()) == 2.0);
  CHECK(weighted_median(Eigen::Vector4d(4, 1, 3, 2), Eigen::Vector4d::Ones()) == 2.5);
  CHECK(weighted_median(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(1, 1, 2)) == 2.5);
  CHECK(weighted_median(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(1, 0, 3)) == 3.0);
  CHECK(weighted_median(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(5, 1, 1)) == 1.0);
  CHECK_THROWS_AS(weighted_median(Eigen::Vector2d(1, 2), Eigen::Vector2d::Zero()), ConfigError);
  CHECK_THROWS_AS(weighted_median(Eigen::Vector2d(1, 2), Eigen::Vector2d(1, -1)), ConfigError);
}

TEST_CASE("weighted_median: minimizes the weighted absolute deviation (property)") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> size(1, 9);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng);
    const Eigen::VectorXd v = support::uniform_matrix(rng, n, 1, -5.0, 5.0);
    Eigen::VectorXd w = support::uniform_matrix(rng, n, 1, 0.0, 1.0);
    if (trial % 4 == 0) w.setConstant(1.0 / n);  // ties on even n
    // The objective is piecewise linear, so its minimum sits on a data value.
    double best = kInf;
    for (int i = 0; i < n; ++i) best = std::min(best, weighted_l1(v, w, v[i]));
    CHECK(weighted_l1(v, w, weighted_median(v, w)) <= best + 1e-12);
  }
}

TEST_CASE("coordinatewise median can leave the convex hull under the 1-norm") {
  // e1, e2, e3 have coordinate-wise median 0, which is not in their hull.
  const Eigen::MatrixXd pts = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::VectorXd med = coordinatewise_median(pts, Eigen::Vector3d::Ones());
  CHECK(med.isZero(0.0));
  CHECK_FALSE(in_convex_hull(med, pts));

  // Compressing the same three points to one atom keeps the atom in the hull
  // when the guard is on, and reproduces the raw median when it is off.
  CompressionConfig cfg;
  cfg.S = 1;
  cfg.init = InitKind::kProvided;
  cfg.initial_atoms = pts.col(0);
  const SyntheticDataset guarded = compress(pts, cfg);
  CHECK(in_convex_hull(guarded.atoms.col(0), pts));
  cfg.hull_guard = false;
  const SyntheticDataset raw = compress(pts, cfg);
  CHECK(raw.atoms.col(0).isZero(0.0));
  CHECK(raw.eta <= guarded.eta);
}

TEST_CASE("weighted_geometric_median") {
  SUBCASE("equilateral triangle gives the centroid") {
    Eigen::MatrixXd pts(2, 3);
    pts << 0, 1, 0.5, 0, 0, std::sqrt(3.0) / 2;
    const Eigen::VectorXd gm =
        weighted_geometric_median(pts, Eigen::Vector3d::Ones(), Eigen::Vector2d(0, 0));
    CHECK((gm - pts.rowwise().mean()).norm() <= 1e-7);
  }
  SUBCASE("a dominant point is the median") {
    Eigen::MatrixXd pts(2, 3);
    pts << 0, 1, 0, 0, 0, 1;
    const Eigen::VectorXd gm =
        weighted_geometric_median(pts, Eigen::Vector3d(5, 1, 1), Eigen::Vector2d(0.3, 0.3));
    CHECK(gm.norm() <= 1e-9);
  }
  SUBCASE("local optimality on random clouds (property)") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::MatrixXd pts = support::gaussian_matrix(rng, 3, 7);
      const Eigen::VectorXd w = support::uniform_matrix(rng, 7, 1, 0.1, 1.0);
      const Eigen::VectorXd gm = weighted_geometric_median(pts, w, pts.col(0), 1e-12, 5000);
      const double f = weighted_l2(pts, w, gm);
      for (int k = 0; k < 20; ++k) {
        const Eigen::VectorXd step = 1e-4 * support::gaussian_matrix(rng, 3, 1);
        CHECK(f <= weighted_l2(pts, w, gm + step) + 1e-10);
      }
      CHECK(in_convex_hull(gm, pts));
    }
  }
}

TEST_CASE("in_convex_hull: examples") {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd cols = support::gaussian_matrix(rng, 6, 10);
  for (Eigen::Index j = 0; j < cols.cols(); ++j) CHECK(in_convex_hull(cols.col(j), cols));
  CHECK(in_convex_hull(cols.rowwise().mean(), cols));
  Eigen::VectorXd outside = cols.rowwise().maxCoeff();
  outside[0] += 1.0;
  CHECK_FALSE(in_convex_hull(outside, cols));
  // The tolerance is an infinity-norm slack.
  Eigen::Index top = 0;
  cols.row(0).maxCoeff(&top);
  Eigen::VectorXd near = cols.col(top);
  near[0] += 5e-7;
  CHECK(in_convex_hull(near, cols, 1e-6));
  CHECK_FALSE(in_convex_hull(near, cols, 1e-7));
  CHECK_THROWS_AS(in_convex_hull(Eigen::VectorXd::Zero(2), cols), DimensionError);
}

TEST_CASE("compress: S = R with column atoms gives eta = 0 without iterating") {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd H = support::gaussian_matrix(rng, 8, 12);
  CompressionConfig cfg;
  cfg.S = 12;
  cfg.init = InitKind::kProvided;
  cfg.initial_atoms = H;
  const SyntheticDataset d = compress(H, cfg);
  CHECK(d.eta == 0.0);
  CHECK(d.iterations == 0);
  CHECK(d.cost_history.size() == 1);
  for (InitKind k : {InitKind::kRandomColumns, InitKind::kKmeansPlusPlus}) {
    cfg.init = k;
    CHECK(compress(H, cfg).eta == 0.0);
  }
}

TEST_CASE("compress: S = 1 under the 1-norm is the coordinate-wise median") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    const Eigen::MatrixXd H = support::gaussian_matrix(rng, 6, 9 + trial);
    CompressionConfig cfg;
    cfg.S = 1;
    cfg.hull_guard = false;
    cfg.seed = trial;
    const SyntheticDataset d = compress(H, cfg);
    const Eigen::VectorXd med = plain_median(H);
    CHECK((d.atoms.col(0) - med).cwiseAbs().maxCoeff() <= 1e-9);
    double mean_dist = 0.0;
    for (Eigen::Index i = 0; i < H.cols(); ++i) mean_dist += (H.col(i) - med).lpNorm<1>();
    mean_dist /= static_cast<double>(H.cols());
    CHECK(d.eta == doctest::Approx(mean_dist).epsilon(1e-12));
  }
}

TEST_CASE("compress: invariants on random data (property)") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 8; ++trial) {
    const int r = 4 + trial % 3, R = 15 + 3 * trial, S = 2 + trial % 5;
    const Eigen::MatrixXd H = support::gaussian_matrix(rng, r, R);
    CompressionConfig cfg;
    cfg.S = S;
    cfg.seed = 100 + trial;
    cfg.ground_norm = trial % 2 ? GroundNorm::kTwo : GroundNorm::kOne;
    cfg.init = trial % 3 ? InitKind::kKmeansPlusPlus : InitKind::kRandomColumns;
    const SyntheticDataset d = compress(H, cfg);
    REQUIRE(d.atoms.cols() == S);
    for (std::size_t k = 1; k < d.cost_history.size(); ++k) {
      CHECK(d.cost_history[k] <= d.cost_history[k - 1] + 1e-10);
    }
    for (Eigen::Index j = 0; j < S; ++j) CHECK(in_convex_hull(d.atoms.col(j), H, 1e-6));
    const Eigen::MatrixXd D = cost_matrix(H, d.atoms, cfg.ground_norm).D;
    CHECK(std::abs(d.eta - (d.plan.T.array() * D.array()).sum()) <= 1e-8);
    const double recomputed = wasserstein(DiscreteDistribution::uniform(H),
                                          DiscreteDistribution::uniform(d.atoms),
                                          cfg.ground_norm);
    CHECK(std::abs(recomputed - d.eta) <= 1e-8);
    CHECK(d.cost_history.back() == d.eta);
    CHECK(d.eta <= d.cost_history.front());
  }
}

TEST_CASE("compress: reproducible bit for bit") {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd H = support::gaussian_matrix(rng, 5, 30);
  CompressionConfig cfg;
  cfg.S = 6;
  cfg.seed = 42;
  const SyntheticDataset a = compress(H, cfg), b = compress(H, cfg);
  CHECK(a.atoms == b.atoms);
  CHECK(a.eta == b.eta);
  CHECK(a.cost_history == b.cost_history);
  cfg.seed = 43;
  CHECK(compress(H, cfg).atoms != a.atoms);
}

TEST_CASE("compress: entropic inner solves") {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd H = support::gaussian_matrix(rng, 4, 20);
  CompressionConfig cfg;
  cfg.S = 4;
  cfg.gamma = 0.2;
  const SyntheticDataset d = compress(H, cfg);
  for (const auto& e : d.events) CHECK(e.find("sinkhorn") == std::string::npos);
  CHECK(d.plan.status == PlanStatus::kOptimal);
  CHECK(d.plan.marginal_violation(Eigen::VectorXd::Constant(20, 1.0 / 20),
                                  Eigen::VectorXd::Constant(4, 0.25)) <= 1e-8);
  const Eigen::MatrixXd D = cost_matrix(H, d.atoms).D;
  CHECK(std::abs(d.eta - (d.plan.T.array() * D.array()).sum()) <= 1e-8);
  for (Eigen::Index j = 0; j < 4; ++j) CHECK(in_convex_hull(d.atoms.col(j), H));
}

TEST_CASE("compress: Hankel data keeps atoms in the data span") {
  std::mt19937_64 rng(9);
  const SystemRealization sys = support::random_system(rng, 2, 1, 1);
  const Eigen::MatrixXd u = support::uniform_matrix(rng, 1, 60);
  const Trajectory t = simulate(sys, Eigen::VectorXd::Zero(2), u, NoiseModel::none());
  const Eigen::MatrixXd H = io_hankel(t.inputs, t.outputs, 6);
  CompressionConfig cfg;
  cfg.S = 8;
  const SyntheticDataset d = compress(H, cfg);
  for (Eigen::Index j = 0; j < cfg.S; ++j) {
    CHECK(span_residual(H, d.atoms.col(j).normalized()) <= 1e-8);
  }
}

TEST_CASE("compress: configuration errors") {
  const Eigen::MatrixXd H = Eigen::MatrixXd::Random(3, 5);
  CompressionConfig cfg;
  cfg.S = 6;
  CHECK_THROWS_AS(compress(H, cfg), ConfigError);
  cfg.S = 0;
  CHECK_THROWS_AS(compress(H, cfg), ConfigError);
  cfg.S = 2;
  cfg.outer_tol = 0.0;
  CHECK_THROWS_AS(compress(H, cfg), ConfigError);
  cfg.outer_tol = 1e-6;
  cfg.max_outer_iters = 0;
  CHECK_THROWS_AS(compress(H, cfg), ConfigError);
  cfg.max_outer_iters = 10;
  cfg.ground_norm = GroundNorm::kInf;
  CHECK_THROWS_AS(compress(H, cfg), ConfigError);
  cfg.ground_norm = GroundNorm::kOne;
  cfg.init = InitKind::kProvided;
  cfg.initial_atoms = Eigen::MatrixXd::Zero(3, 3);
  CHECK_THROWS_AS(compress(H, cfg), ConfigError);
  CHECK(parse_init_kind("kmeans-plus-plus") == InitKind::kKmeansPlusPlus);
  CHECK_THROWS_AS(parse_init_kind("nope"), ConfigError);
}

TEST_CASE("eta_curve: ordering, seeds and per-entry errors") {
  std::mt19937_64 rng(10);
  const Eigen::MatrixXd H = support::gaussian_matrix(rng, 4, 16);
  CompressionConfig cfg;
  cfg.seed = 5;
  const std::vector<int> list{16, 1, 4, 99};
  const auto serial = eta_curve(H, list, cfg);
  REQUIRE(serial.size() == 4);
  CHECK(serial[0].ok);
  CHECK(serial[0].eta == 0.0);
  CHECK(serial[1].eta >= serial[0].eta);
  CHECK_FALSE(serial[3].ok);
  CHECK_FALSE(serial[3].error.empty());
  CHECK(serial[3].S == 99);

  CompressionConfig c4 = cfg;
  c4.S = 4;
  c4.seed = cfg.seed + 2;
  CHECK(serial[2].eta == compress(H, c4).eta);

  const auto parallel = eta_curve(H, list, cfg, 3);
  for (std::size_t k = 0; k < list.size(); ++k) {
    CHECK(parallel[k].S == serial[k].S);
    CHECK(parallel[k].eta == serial[k].eta);
    CHECK(parallel[k].ok == serial[k].ok);
  }
  CHECK_THROWS_AS(eta_curve(H, {}, cfg), ConfigError);
}

TEST_CASE("synthetic dataset persistence") {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXd H = support::gaussian_matrix(rng, 4, 12);
  CompressionConfig cfg;
  cfg.S = 3;
  cfg.seed = 9;
  const SyntheticDataset d = compress(H, cfg);
  const auto dir = std::filesystem::temp_directory_path() / "syndeepc_test_compress";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "atoms.csv").string();
  save_synthetic(path, d);
  const SyntheticDataset back = load_synthetic(path);
  CHECK(back.atoms == d.atoms);
  CHECK(back.eta == d.eta);
  CHECK(back.seed == 9);
  CHECK(back.iterations == d.iterations);
  CHECK(back.ground_norm == GroundNorm::kOne);
  CHECK(back.init == InitKind::kKmeansPlusPlus);
  std::filesystem::remove(path + ".meta");
  CHECK_THROWS_AS(load_synthetic(path), ConfigError);
  std::filesystem::remove_all(dir);

  std::stringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(read_matrix_csv(ragged), ConfigError);
}
