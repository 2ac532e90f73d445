// Copyright 2026 The qfmap Authors
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

/**
 * @file svm.hpp
 * @brief Soft-margin kernel SVM trained on the Lagrange dual by SMO.
 *
 * Maximizes  sum(a) - 1/2 sum_ij a_i a_j y_i y_j K_ij
 * subject to sum(a_i y_i) = 0 and 0 <= a_i <= C, using Platt's sequential
 * minimal optimization with the max |E1 - E2| second-choice heuristic.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfm/errors.hpp"
#include "qfm/kernels.hpp"
#include "qfm/random.hpp"

namespace qfm::svm {

struct SvmConfig {
  double C = 1000.0;
  double tol = 1e-3;
  /// Cap on full sweeps over the training set.
  int max_passes = 50;
  /// Cap on successful pair updates; guards degenerate (e.g. rank-1) kernels.
  long max_updates = 200000;
  double support_threshold = 1e-8;
  std::uint64_t seed = 0;
};

struct SvmModel {
  std::vector<double> alphas;
  double bias = 0.0;
  std::vector<int> support_indices;
  std::vector<int> train_labels;
  double C = 0.0;
  bool converged = false;
  int full_sweeps = 0;
  long updates = 0;
};

/// Dual objective at `alphas`.
inline double dual_objective(const KernelMatrix& K, std::span<const int> y, std::span<const double> alphas) {
  const auto n = static_cast<Eigen::Index>(y.size());
  Eigen::VectorXd ay(n);
  for (Eigen::Index i = 0; i < n; ++i) ay(i) = alphas[i] * y[i];
  return std::accumulate(alphas.begin(), alphas.end(), 0.0) - 0.5 * ay.dot(K * ay);
}

namespace detail {

inline void check_inputs(const KernelMatrix& K, std::span<const int> y) {
  if (K.rows() != K.cols()) throw InvalidKernelError("training kernel must be square");
  if (static_cast<std::size_t>(K.rows()) != y.size())
    throw DimensionError("kernel size " + std::to_string(K.rows()) + " does not match " +
                         std::to_string(y.size()) + " labels");
  const double scale = std::max(1.0, K.cwiseAbs().maxCoeff());
  if ((K - K.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw InvalidKernelError("training kernel is not symmetric");
  bool pos = false, neg = false;
  for (int v : y) {
    if (v == 1) pos = true;
    else if (v == -1) neg = true;
    else throw ValidationError("labels must be +1 or -1");
  }
  if (!pos || !neg) throw DegenerateLabelsError("training labels contain a single class");
}

class Smo {
 public:
  Smo(const KernelMatrix& K, std::span<const int> y, const SvmConfig& cfg)
      : K_(K), y_(y.begin(), y.end()), cfg_(cfg), n_(y.size()), alpha_(n_, 0.0), g_(n_, 0.0),
        rng_(make_rng(cfg.seed, {0x5e0})) {}

  SvmModel solve() {
    SvmModel m;
    bool examine_all = true;
    while (updates_ < cfg_.max_updates) {
      long changed = 0;
      if (examine_all) {
        if (m.full_sweeps >= cfg_.max_passes) break;
        ++m.full_sweeps;
        for (std::size_t i = 0; i < n_; ++i) changed += examine(i);
        if (changed == 0) {
          m.converged = true;
          break;
        }
        examine_all = false;
      } else {
        for (std::size_t i = 0; i < n_; ++i)
          if (is_free(i)) changed += examine(i);
        if (changed == 0) examine_all = true;
      }
    }
    m.updates = updates_;
    finish(m);
    return m;
  }

 private:
  const KernelMatrix& K_;
  std::vector<int> y_;
  SvmConfig cfg_;
  std::size_t n_;
  std::vector<double> alpha_;
  std::vector<double> g_;  // g_i = sum_j a_j y_j K_ij
  double b_ = 0.0;
  long updates_ = 0;
  Rng rng_;

  double k(std::size_t i, std::size_t j) const {
    return K_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  double error(std::size_t i) const { return g_[i] + b_ - y_[i]; }
  bool is_free(std::size_t i) const { return alpha_[i] > 0.0 && alpha_[i] < cfg_.C; }

  int examine(std::size_t i2) {
    const double e2 = error(i2);
    const double r2 = e2 * y_[i2];
    const double a2 = alpha_[i2];
    if (!((r2 < -cfg_.tol && a2 < cfg_.C) || (r2 > cfg_.tol && a2 > 0.0))) return 0;

    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n_; ++i)
      if (is_free(i)) free.push_back(i);

    if (free.size() > 1) {
      std::size_t best = n_;
      double gap = -1.0;
      for (auto i : free) {
        const double d = std::abs(error(i) - e2);
        if (d > gap) gap = d, best = i;
      }
      if (best < n_ && step(best, i2)) return 1;
    }
    if (!free.empty()) {
      const std::size_t start = std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng_);
      for (std::size_t t = 0; t < free.size(); ++t)
        if (step(free[(start + t) % free.size()], i2)) return 1;
    }
    const std::size_t start = std::uniform_int_distribution<std::size_t>(0, n_ - 1)(rng_);
    for (std::size_t t = 0; t < n_; ++t)
      if (step((start + t) % n_, i2)) return 1;
    return 0;
  }

  bool step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double C = cfg_.C;
    const double a1 = alpha_[i1], a2 = alpha_[i2];
    const int y1 = y_[i1], y2 = y_[i2];
    const double e1 = error(i1), e2 = error(i2);
    const int s = y1 * y2;
    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(C, C + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - C);
      hi = std::min(C, a1 + a2);
    }
    if (hi - lo <= 1e-14 * std::max(1.0, C)) return false;

    const double eta = k(i1, i1) + k(i2, i2) - 2.0 * k(i1, i2);
    double a2new;
    if (eta > 1e-12) {
      a2new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
    } else {
      // Objective is linear (or convex) along the constraint line: take the better end.
      const double slope = y2 * (e1 - e2);
      auto gain = [&](double t) { return slope * t - 0.5 * eta * t * t; };
      const double gl = gain(lo - a2), gh = gain(hi - a2);
      if (std::abs(gl - gh) <= 1e-12 * std::max(1.0, std::abs(gl) + std::abs(gh))) return false;
      a2new = gl > gh ? lo : hi;
    }
    if (std::abs(a2new - a2) < 1e-12 * (a2new + a2 + 1e-12)) return false;
    double a1new = a1 + s * (a2 - a2new);
    a1new = snap(a1new);
    a2new = snap(a2new);

    const double d1 = (a1new - a1) * y1, d2 = (a2new - a2) * y2;
    for (std::size_t i = 0; i < n_; ++i) g_[i] += d1 * k(i, i1) + d2 * k(i, i2);
    alpha_[i1] = a1new;
    alpha_[i2] = a2new;

    const double b1 = y1 - g_[i1], b2 = y2 - g_[i2];
    if (is_free(i1)) b_ = b1;
    else if (is_free(i2)) b_ = b2;
    else b_ = 0.5 * (b1 + b2);
    ++updates_;
    return true;
  }

  double snap(double a) const {
    const double C = cfg_.C;
    const double eps = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, C);
    if (a < eps) return 0.0;
    if (a > C - eps) return C;
    return a;
  }

  void finish(SvmModel& m) {
    // Recompute g from scratch so the bias is not polluted by incremental drift.
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n_; ++j) s += alpha_[j] * y_[j] * k(i, j);
      g_[i] = s;
    }
    double sum = 0.0;
    int nfree = 0;
    for (std::size_t i = 0; i < n_; ++i)
      if (is_free(i)) sum += y_[i] - g_[i], ++nfree;
    if (nfree > 0) {
      b_ = sum / nfree;
    } else {
      // No free vectors: midpoint of the interval of biases allowed by KKT.
      double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n_; ++i) {
        const double edge = y_[i] - g_[i];
        const bool at_zero = alpha_[i] <= 0.0;
        if ((y_[i] > 0) == at_zero) lo = std::max(lo, edge);
        else hi = std::min(hi, edge);
      }
      if (std::isfinite(lo) && std::isfinite(hi)) b_ = 0.5 * (lo + hi);
      else if (std::isfinite(lo)) b_ = lo;
      else if (std::isfinite(hi)) b_ = hi;
      else b_ = 0.0;
    }
    m.alphas = alpha_;
    m.bias = b_;
    m.train_labels = y_;
    m.C = cfg_.C;
    for (std::size_t i = 0; i < n_; ++i)
      if (alpha_[i] > cfg_.support_threshold) m.support_indices.push_back(static_cast<int>(i));
  }

};

}  // namespace detail

/// Trains on a precomputed train x train kernel.
inline SvmModel train_smo(const KernelMatrix& K, std::span<const int> y, const SvmConfig& cfg = {}) {
  detail::check_inputs(K, y);
  if (!(cfg.C > 0.0)) throw ValidationError("C must be positive");
  return detail::Smo(K, y, cfg).solve();
}

/// f_i = sum_j a_j y_j K_cross(i, j) + b for each test row.
inline std::vector<double> decision_values(const SvmModel& m, const KernelMatrix& K_cross) {
  if (K_cross.rows() > 0 && static_cast<std::size_t>(K_cross.cols()) != m.alphas.size())
    throw DimensionError("cross kernel has " + std::to_string(K_cross.cols()) + " columns, model has " +
                         std::to_string(m.alphas.size()) + " training samples");
  std::vector<double> f(static_cast<std::size_t>(K_cross.rows()), m.bias);
  for (Eigen::Index i = 0; i < K_cross.rows(); ++i)
    for (std::size_t j = 0; j < m.alphas.size(); ++j)
      if (m.alphas[j] != 0.0) f[i] += m.alphas[j] * m.train_labels[j] * K_cross(i, static_cast<Eigen::Index>(j));
  return f;
}

/// sign(f) with sign(0) = +1.
inline std::vector<int> predict_labels(std::span<const double> f) {
  std::vector<int> out(f.size());
  std::transform(f.begin(), f.end(), out.begin(), [](double v) { return v >= 0.0 ? 1 : -1; });
  return out;
}

inline double accuracy(std::span<const int> predictions, std::span<const int> truth) {
  if (predictions.size() != truth.size()) throw DimensionError("accuracy: length mismatch");
  if (predictions.empty()) throw ValidationError("accuracy: empty input");
  std::size_t hit = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hit += predictions[i] == truth[i];
  return static_cast<double>(hit) / static_cast<double>(truth.size());
}

/// Largest KKT residual of a trained model on its own training kernel:
/// a=0 needs y f >= 1, 0<a<C needs y f = 1, a=C needs y f <= 1.
inline double kkt_residual(const SvmModel& m, const KernelMatrix& K) {
  const auto f = decision_values(m, K);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double yf = m.train_labels[i] * f[i];
    const double a = m.alphas[i];
    double r;
    if (a <= 0.0) r = std::max(0.0, 1.0 - yf);
    else if (a >= m.C) r = std::max(0.0, yf - 1.0);
    else r = std::abs(1.0 - yf);
    worst = std::max(worst, r);
  }
  return worst;
}

inline nlohmann::json to_json(const SvmModel& m) {
  return {{"alphas", m.alphas},       {"bias", m.bias},     {"support_indices", m.support_indices},
          {"labels", m.train_labels}, {"C", m.C},           {"converged", m.converged},
          {"full_sweeps", m.full_sweeps}, {"updates", m.updates}};
}

}  // namespace qfm::svm
