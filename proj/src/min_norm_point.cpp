/*
Copyright 2026 The coursealloc Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coursealloc/numeric.hpp"

namespace coursealloc::numeric {

namespace {

// Minimizer of |sum a_k p_k| over the affine hull (sum a_k = 1) of the
// corral, from the bordered system [G 1; 1' 0] [a; -m] = [0; 1].
// Returns false when the system is numerically singular.
bool AffineMinimizer(const std::vector<std::vector<double>>& gram,
                     const std::vector<int>& corral, std::vector<double>& a) {
  const int k = static_cast<int>(corral.size());
  const int n = k + 1;
  std::vector<double> m(static_cast<std::size_t>(n) * (n + 1), 0.0);
  auto at = [&](int r, int c) -> double& { return m[r * (n + 1) + c]; };
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) at(r, c) = gram[corral[r]][corral[c]];
    at(r, k) = 1.0;
    at(k, r) = 1.0;
  }
  at(k, n) = 1.0;
  double scale = 1.0;
  for (int r = 0; r < k; ++r) scale = std::max(scale, std::fabs(at(r, r)));
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::fabs(at(r, col)) > std::fabs(at(piv, col))) piv = r;
    }
    if (std::fabs(at(piv, col)) < 1e-14 * scale) return false;
    if (piv != col) {
      for (int c = 0; c <= n; ++c) std::swap(at(piv, c), at(col, c));
    }
    for (int r = col + 1; r < n; ++r) {
      double f = at(r, col) / at(col, col);
      if (f == 0.0) continue;
      for (int c = col; c <= n; ++c) at(r, c) -= f * at(col, c);
    }
  }
  std::vector<double> sol(n);
  for (int r = n - 1; r >= 0; --r) {
    double v = at(r, n);
    for (int c = r + 1; c < n; ++c) v -= at(r, c) * sol[c];
    sol[r] = v / at(r, r);
  }
  a.assign(sol.begin(), sol.begin() + k);
  return true;
}

}  // namespace

MinNormResult MinNormPointGram(const std::vector<std::vector<double>>& gram,
                               double tol, const std::vector<double>& initial) {
  const int n = static_cast<int>(gram.size());
  if (n == 0) throw std::invalid_argument("MinNormPoint: empty point set");
  MinNormResult result;
  result.lambda.assign(n, 0.0);

  int start = 0;
  for (int j = 1; j < n; ++j) {
    if (gram[j][j] < gram[start][start]) start = j;
  }
  std::vector<int> corral = {start};
  std::vector<double> weight = {1.0};  // parallel to corral
  if (!initial.empty()) {
    if (static_cast<int>(initial.size()) != n) {
      throw std::invalid_argument("MinNormPoint: initial weights have the wrong size");
    }
    corral.clear();
    weight.clear();
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      if (initial[j] <= 0.0) continue;
      corral.push_back(j);
      weight.push_back(initial[j]);
      total += initial[j];
    }
    if (corral.empty()) throw std::invalid_argument("MinNormPoint: initial weights are zero");
    for (double& w : weight) w /= total;
  }

  auto x_dot = [&](int j) {
    double s = 0.0;
    for (std::size_t c = 0; c < corral.size(); ++c) s += weight[c] * gram[corral[c]][j];
    return s;
  };
  auto x_norm2 = [&]() {
    double s = 0.0;
    for (std::size_t c = 0; c < corral.size(); ++c) s += weight[c] * x_dot(corral[c]);
    return s;
  };

  const int max_major = 10 * n + 100;
  std::vector<double> affine;
  for (int major = 0;; ++major) {
    result.iterations = major;
    if (major >= max_major) {
      result.converged = false;
      break;
    }
    const double xx = x_norm2();
    int best = -1;
    double best_dot = 0.0;
    for (int j = 0; j < n; ++j) {
      double d = x_dot(j);
      if (best < 0 || d < best_dot) {
        best = j;
        best_dot = d;
      }
    }
    if (xx - best_dot <= tol) break;
    if (std::find(corral.begin(), corral.end(), best) != corral.end()) break;
    corral.push_back(best);
    weight.push_back(0.0);

    // Minor cycles: move towards the affine minimizer, dropping corral
    // points whose weight hits zero.
    while (true) {
      if (!AffineMinimizer(gram, corral, affine)) {
        // Affinely dependent corral; drop the newest point and stop.
        corral.pop_back();
        weight.pop_back();
        result.converged = false;
        break;
      }
      bool interior = true;
      for (double a : affine) {
        if (a <= 1e-12) {
          interior = false;
          break;
        }
      }
      if (interior) {
        weight = affine;
        break;
      }
      double theta = 1.0;
      for (std::size_t c = 0; c < corral.size(); ++c) {
        if (affine[c] <= 1e-12) {
          double denom = weight[c] - affine[c];
          if (denom > 0) theta = std::min(theta, weight[c] / denom);
        }
      }
      for (std::size_t c = 0; c < corral.size(); ++c) {
        weight[c] = (1.0 - theta) * weight[c] + theta * affine[c];
      }
      // Remove at least the weakest point.
      std::size_t weakest = 0;
      for (std::size_t c = 1; c < corral.size(); ++c) {
        if (weight[c] < weight[weakest]) weakest = c;
      }
      std::vector<int> next_corral;
      std::vector<double> next_weight;
      for (std::size_t c = 0; c < corral.size(); ++c) {
        if (c == weakest || weight[c] <= 1e-12) continue;
        next_corral.push_back(corral[c]);
        next_weight.push_back(weight[c]);
      }
      corral.swap(next_corral);
      weight.swap(next_weight);
      double total = 0.0;
      for (double w : weight) total += w;
      for (double& w : weight) w /= total;
      if (corral.size() == 1) {
        weight = {1.0};
        break;
      }
    }
    if (!result.converged) break;
  }

  double total = 0.0;
  for (double w : weight) total += std::max(0.0, w);
  for (std::size_t c = 0; c < corral.size(); ++c) {
    result.lambda[corral[c]] = std::max(0.0, weight[c]) / total;
  }
  double xx = 0.0;
  for (int a = 0; a < n; ++a) {
    if (result.lambda[a] == 0.0) continue;
    for (int b = 0; b < n; ++b) xx += result.lambda[a] * result.lambda[b] * gram[a][b];
  }
  result.squared_distance = std::max(0.0, xx);
  return result;
}

Projection MinNormPoint(std::span<const double> target,
                        std::span<const std::vector<double>> points, double tol) {
  const std::size_t n = points.size();
  if (n == 0) throw std::invalid_argument("MinNormPoint: empty point set");
  const std::size_t d = target.size();
  std::vector<std::vector<double>> shifted(n, std::vector<double>(d));
  for (std::size_t k = 0; k < n; ++k) {
    if (points[k].size() != d) throw std::invalid_argument("MinNormPoint: dimension mismatch");
    for (std::size_t i = 0; i < d; ++i) shifted[k][i] = points[k][i] - target[i];
  }
  std::vector<std::vector<double>> gram(n, std::vector<double>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) s += shifted[a][i] * shifted[b][i];
      gram[a][b] = gram[b][a] = s;
    }
  }
  MinNormResult r = MinNormPointGram(gram, tol);
  Projection p;
  p.lambda = r.lambda;
  p.converged = r.converged;
  p.y.assign(d, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (r.lambda[k] == 0.0) continue;
    for (std::size_t i = 0; i < d; ++i) p.y[i] += r.lambda[k] * points[k][i];
  }
  double dist2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) dist2 += (p.y[i] - target[i]) * (p.y[i] - target[i]);
  p.distance = std::sqrt(dist2);
  return p;
}

}  // namespace coursealloc::numeric
