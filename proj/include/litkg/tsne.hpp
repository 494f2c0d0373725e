// Copyright 2026 The litkg Authors. All Rights Reserved.
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

#ifndef LITKG_TSNE_HPP
#define LITKG_TSNE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "litkg/common.hpp"
#include "litkg/error.hpp"
#include "litkg/parallel.hpp"
#include "litkg/random.hpp"

namespace litkg {

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

inline constexpr double kAffinityFloor = 1e-12;

struct TsneParams {
  double perplexity = 30.0;
  std::size_t max_iter = 1000;
  double learning_rate = 200.0;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  std::size_t momentum_switch_iter = 250;
  double early_exaggeration = 12.0;
  std::size_t exaggeration_iters = 250;
  double init_stddev = 1e-4;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const {
    if (!(perplexity > 0.0)) throw InvalidArgument("perplexity must be > 0");
    if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
    if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be > 0");
  }

  /// Perplexity actually used for n points: the requested value, capped at
  /// (n - 1) / 3 (but never below 1) so the bandwidth search stays solvable.
  double effective_perplexity(std::size_t n) const {
    const double cap = std::max(1.0, (static_cast<double>(n) - 1.0) / 3.0);
    return std::min(perplexity, cap);
  }
};

struct ConditionalAffinities {
  Matrix p;                       // row i holds p_{j|i}
  std::vector<double> beta;       // Gaussian precision per row, in units of the row's scale
  std::size_t fallback_rows = 0;  // rows where the search was infeasible (uniform row used)
};

/// p_{j|i} from a Gaussian kernel on squared Euclidean distances, with each
/// row's bandwidth bisected (in log space, at most 64 steps) until the
/// row's perplexity 2^H matches the target.
inline ConditionalAffinities conditional_affinities(const Matrix& x, double perplexity,
                                                    unsigned threads = 1) {
  const std::size_t n = x.rows;
  if (n < 2) throw InvalidArgument("need at least two points");
  if (!(perplexity > 0.0)) throw InvalidArgument("perplexity must be > 0");
  for (double v : x.data)
    if (!std::isfinite(v)) throw InvalidArgument("input matrix has non-finite entries");

  ConditionalAffinities out{Matrix(n, n), std::vector<double>(n, 0.0), 0};
  std::vector<unsigned char> fell_back(n, 0);
  const double target = std::log(perplexity);

  parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
    std::vector<double> dist(n);
    for (std::size_t i = b; i < e; ++i) {
      double dmin = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        double s = 0.0;
        for (std::size_t k = 0; k < x.cols; ++k) {
          const double diff = x(i, k) - x(j, k);
          s += diff * diff;
        }
        dist[j] = s;
        dmin = std::min(dmin, s);
      }
      double mean = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) mean += (dist[j] -= dmin);
      mean /= static_cast<double>(n - 1);
      auto row = out.p.row(i);

      // Fills row for precision beta, returns its entropy in nats.
      auto evaluate = [&](double beta) {
        double z = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          row[j] = j == i ? 0.0 : std::exp(-beta * dist[j] / mean);
          z += row[j];
        }
        double h = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          row[j] /= z;
          if (row[j] > 0.0) h -= row[j] * std::log(row[j]);
        }
        return h;
      };
      auto uniform = [&] {
        for (std::size_t j = 0; j < n; ++j) row[j] = j == i ? 0.0 : 1.0 / static_cast<double>(n - 1);
      };

      bool converged = false;
      if (mean > 0.0) {
        double lo = -50.0, hi = 50.0;
        for (int step = 0; step < 64; ++step) {
          const double mid = 0.5 * (lo + hi);
          const double h = evaluate(std::exp(mid));
          out.beta[i] = std::exp(mid);
          if (std::abs(std::exp(h) - perplexity) < 1e-6) {
            converged = true;
            break;
          }
          (h > target ? lo : hi) = mid;
        }
        if (!converged) converged = std::abs(std::exp(evaluate(out.beta[i])) - perplexity) < 1e-3;
      } else {
        // Equidistant neighbors: the row is uniform for every beta.
        uniform();
        converged = std::abs(static_cast<double>(n - 1) - perplexity) < 1e-3;
      }
      if (!converged) {
        uniform();
        fell_back[i] = 1;
      }
    }
  });
  for (auto f : fell_back) out.fallback_rows += f;
  return out;
}

/// P_ij = (p_{j|i} + p_{i|j}) / 2n, off-diagonal entries floored at 1e-12.
inline Matrix symmetrize(const Matrix& cond) {
  const std::size_t n = cond.rows;
  Matrix p(n, n);
  const double denom = 2.0 * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) p(i, j) = std::max((cond(i, j) + cond(j, i)) / denom, kAffinityFloor);
  return p;
}

/// Student-t (one degree of freedom) affinities q_ij over all ordered pairs.
inline Matrix low_dim_affinities(const Matrix& y) {
  const std::size_t n = y.rows;
  Matrix q(n, n);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double d2 = 0.0;
      for (std::size_t k = 0; k < y.cols; ++k) {
        const double diff = y(i, k) - y(j, k);
        d2 += diff * diff;
      }
      q(i, j) = 1.0 / (1.0 + d2);
      z += q(i, j);
    }
  for (auto& v : q.data) v /= z;
  return q;
}

/// sum_{i != j} P_ij ln(P_ij / max(Q_ij, 1e-12)); zero P terms contribute 0.
inline double kl_divergence(const Matrix& p, const Matrix& q) {
  if (p.rows != q.rows || p.cols != q.cols) throw InvalidArgument("P and Q shapes differ");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.rows; ++i)
    for (std::size_t j = 0; j < p.cols; ++j) {
      if (i == j) continue;
      const double pij = p(i, j);
      if (pij > 0.0) kl += pij * std::log(pij / std::max(q(i, j), kAffinityFloor));
    }
  return kl;
}

/// dKL/dY_i = 4 sum_j (P_ij - q_ij)(1 + |y_i - y_j|^2)^-1 (y_i - y_j).
inline Matrix kl_gradient(const Matrix& p, const Matrix& y) {
  const std::size_t n = y.rows;
  const Matrix q = low_dim_affinities(y);
  Matrix g(n, y.cols);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double d2 = 0.0;
      for (std::size_t k = 0; k < y.cols; ++k) d2 += (y(i, k) - y(j, k)) * (y(i, k) - y(j, k));
      const double mult = 4.0 * (p(i, j) - q(i, j)) / (1.0 + d2);
      for (std::size_t k = 0; k < y.cols; ++k) g(i, k) += mult * (y(i, k) - y(j, k));
    }
  return g;
}

struct ScatterLayout {
  std::vector<std::string> ids;
  Matrix y;                       // n x 2
  double kl = 0.0;                // KL of the final layout
  std::size_t iterations = 0;
  std::vector<double> kl_trace;   // kl_trace[t] = KL after t + 1 updates
  double perplexity = 0.0;        // effective perplexity
  std::size_t fallback_rows = 0;

  std::span<const double> row(std::size_t i) const { return y.row(i); }
};

/// Exact O(n^2) t-SNE with momentum, per-coordinate gains and early
/// exaggeration. Rows are processed in parallel but every reduction runs
/// in row order, so the result does not depend on `threads`.
inline ScatterLayout run_tsne(const Matrix& x, std::vector<std::string> ids, const TsneParams& params) {
  params.validate();
  const std::size_t n = x.rows;
  if (n < 2) throw InvalidArgument("t-SNE needs at least two points");
  if (ids.size() != n) throw InvalidArgument("id count does not match row count");
  constexpr std::size_t dims = 2;

  ScatterLayout out;
  out.ids = std::move(ids);
  out.perplexity = params.effective_perplexity(n);
  auto cond = conditional_affinities(x, out.perplexity, params.threads);
  out.fallback_rows = cond.fallback_rows;
  const Matrix p = symmetrize(cond.p);
  cond.p = Matrix();

  Matrix y(n, dims);
  Xoshiro256 rng(derive_seed(params.seed, 0x75e));
  for (auto& v : y.data) v = rng.normal() * params.init_stddev;
  Matrix update(n, dims), gains(n, dims, 1.0), grad(n, dims);
  std::vector<double> row_z(n), row_kl(n);

  // One pass over the current layout: fills grad (with exaggerated P) and
  // returns the unexaggerated KL of the layout.
  auto evaluate = [&](double exaggeration) {
    parallel_for(n, params.threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        double z = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          const double dx = y(i, 0) - y(j, 0), dy = y(i, 1) - y(j, 1);
          z += 1.0 / (1.0 + dx * dx + dy * dy);
        }
        row_z[i] = z;
      }
    });
    double z = 0.0;
    for (double v : row_z) z += v;
    parallel_for(n, params.threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        double gx = 0.0, gy = 0.0, kl = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          const double dx = y(i, 0) - y(j, 0), dy = y(i, 1) - y(j, 1);
          const double num = 1.0 / (1.0 + dx * dx + dy * dy);
          const double q = num / z;
          const double pij = p(i, j);
          const double mult = 4.0 * (exaggeration * pij - q) * num;
          gx += mult * dx;
          gy += mult * dy;
          if (pij > 0.0) kl += pij * std::log(pij / std::max(q, kAffinityFloor));
        }
        grad(i, 0) = gx;
        grad(i, 1) = gy;
        row_kl[i] = kl;
      }
    });
    double kl = 0.0;
    for (double v : row_kl) kl += v;
    return kl;
  };

  auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
  out.kl_trace.reserve(params.max_iter);
  for (std::size_t iter = 0; iter < params.max_iter; ++iter) {
    const double exaggeration = iter < params.exaggeration_iters ? params.early_exaggeration : 1.0;
    const double momentum = iter < params.momentum_switch_iter ? params.initial_momentum
                                                               : params.final_momentum;
    const double kl = evaluate(exaggeration);
    if (iter > 0) out.kl_trace.push_back(kl);
    for (std::size_t k = 0; k < y.data.size(); ++k) {
      const double g = grad.data[k];
      auto& gain = gains.data[k];
      gain = sign(g) != sign(update.data[k]) ? gain + 0.2 : gain * 0.8;
      gain = std::max(gain, 0.01);
      update.data[k] = momentum * update.data[k] - params.learning_rate * gain * g;
      y.data[k] += update.data[k];
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mx += y(i, 0);
      my += y(i, 1);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      y(i, 0) -= mx;
      y(i, 1) -= my;
      finite = finite && std::isfinite(y(i, 0)) && std::isfinite(y(i, 1));
    }
    if (!finite)
      throw DataError("t-SNE produced a non-finite coordinate at iteration " + std::to_string(iter + 1));
  }
  out.kl = evaluate(1.0);
  out.kl_trace.push_back(out.kl);
  out.iterations = params.max_iter;
  out.y = std::move(y);
  return out;
}

}  // namespace litkg

#endif  // LITKG_TSNE_HPP
