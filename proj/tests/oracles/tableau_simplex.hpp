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

// Test-only dense tableau simplex (most-negative pricing, index tie-break,
// lexicographic ratio test). Shares no code
// with the library solver so it can serve as an independent oracle.
//
//   maximize c'x  subject to  A x <= b,  x >= 0

#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

struct TableauResult {
  enum Status { kOptimal, kInfeasible, kUnbounded } status = kInfeasible;
  double value = 0.0;
  std::vector<double> x;
};

class TableauSimplex {
 public:
  using Mat = std::vector<std::vector<double>>;

  TableauSimplex(const Mat& a, const std::vector<double>& b, const std::vector<double>& c)
      : m_(static_cast<int>(b.size())),
        n_(static_cast<int>(c.size())),
        nonbasic_(n_ + 1),
        basic_(m_),
        t_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) t_[i][j] = a[i][j];
    for (int i = 0; i < m_; ++i) {
      basic_[i] = n_ + i;
      t_[i][n_] = -1.0;
      t_[i][n_ + 1] = b[i];
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      t_[m_][j] = -c[j];
    }
    nonbasic_[n_] = -1;
    t_[m_ + 1][n_] = 1.0;
  }

  TableauResult solve() {
    TableauResult res;
    int r = 0;
    for (int i = 1; i < m_; ++i)
      if (t_[i][n_ + 1] < t_[r][n_ + 1]) r = i;
    if (m_ > 0 && t_[r][n_ + 1] < -kEps) {
      pivot(r, n_);
      if (!simplex(2) || t_[m_ + 1][n_ + 1] < -kEps) {
        res.status = TableauResult::kInfeasible;
        return res;
      }
      for (int i = 0; i < m_; ++i) {
        if (basic_[i] == -1) {
          int s = 0;
          for (int j = 1; j <= n_; ++j)
            if (s == -1 || better(t_[i][j], nonbasic_[j], t_[i][s], nonbasic_[s])) s = j;
          pivot(i, s);
        }
      }
    }
    const bool ok = simplex(1);
    res.x.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (basic_[i] >= 0 && basic_[i] < n_) res.x[basic_[i]] = t_[i][n_ + 1];
    if (!ok) {
      res.status = TableauResult::kUnbounded;
      return res;
    }
    res.status = TableauResult::kOptimal;
    res.value = t_[m_][n_ + 1];
    return res;
  }

 private:
  static constexpr double kEps = 1e-11;

  static bool better(double v1, int i1, double v2, int i2) {
    return v1 < v2 || (v1 == v2 && i1 < i2);
  }

  void pivot(int r, int s) {
    const double inv = 1.0 / t_[r][s];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r || std::abs(t_[i][s]) <= kEps) continue;
      const double f = t_[i][s] * inv;
      for (int j = 0; j < n_ + 2; ++j) t_[i][j] -= t_[r][j] * f;
      t_[i][s] = t_[r][s] * f;
    }
    for (int j = 0; j < n_ + 2; ++j)
      if (j != s) t_[r][j] *= inv;
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r) t_[i][s] *= -inv;
    t_[r][s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  bool simplex(int phase) {
    const int x = m_ + phase - 1;
    while (true) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (nonbasic_[j] == -phase) continue;
        if (s == -1 || better(t_[x][j], nonbasic_[j], t_[x][s], nonbasic_[s])) s = j;
      }
      if (t_[x][s] >= -kEps) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (t_[i][s] <= kEps) continue;
        if (r == -1) {
          r = i;
          continue;
        }
        const double lhs = t_[i][n_ + 1] / t_[i][s];
        const double rhs = t_[r][n_ + 1] / t_[r][s];
        if (lhs < rhs - kEps || (std::abs(lhs - rhs) <= kEps && basic_[i] < basic_[r])) r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  int m_, n_;
  std::vector<int> nonbasic_, basic_;
  Mat t_;
};

}  // namespace oracle
