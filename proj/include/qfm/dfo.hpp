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
 * @file dfo.hpp
 * @brief Derivative-free minimization by linear interpolation on a simplex.
 *
 * Unconstrained variant of Powell's COBYLA. The method keeps n + 1
 * interpolation points, fits the linear model through them and either
 *  - takes a trust-region step of length rho along the negative model
 *    gradient, or
 *  - replaces a badly placed vertex to restore the simplex geometry.
 * rho is halved (snapping to rho_end near the end) whenever a trust-region
 * step fails to make sufficient progress on an acceptable simplex.
 *
 * Every iteration performs exactly one objective evaluation.
 */

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "qfm/errors.hpp"

namespace qfm::dfo {

struct DfoConfig {
  double rho_start = 0.5;
  double rho_end = 1e-3;
  int max_evals = 500;
};

struct Evaluation {
  Eigen::VectorXd x;
  double f = 0.0;
};

struct DfoResult {
  Eigen::VectorXd x;
  double f = std::numeric_limits<double>::infinity();
  int evals = 0;
  int iterations = 0;
  bool capped = false;  ///< stopped by max_evals rather than rho_end
  double final_rho = 0.0;
  std::vector<Evaluation> trace;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

namespace detail {

// Simplex acceptability constants from COBYLA.
inline constexpr double kAlpha = 0.25;
inline constexpr double kBeta = 2.1;
inline constexpr double kGamma = 0.5;
inline constexpr double kRatioAccept = 0.1;

class Cobyla {
 public:
  Cobyla(Objective f, Eigen::VectorXd x0, const DfoConfig& cfg)
      : f_(std::move(f)), n_(x0.size()), cfg_(cfg), rho_(cfg.rho_start) {
    pivot_ = std::move(x0);
    disp_ = Eigen::MatrixXd::Zero(n_, n_);
    fv_ = Eigen::VectorXd::Zero(n_);
  }

  DfoResult run() {
    if (cfg_.rho_start <= 0.0 || cfg_.rho_end <= 0.0 || cfg_.rho_end > cfg_.rho_start)
      throw ValidationError("need 0 < rho_end <= rho_start");
    if (cfg_.max_evals < 1) throw ValidationError("max_evals must be >= 1");

    fpivot_ = eval(pivot_);
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (capped()) return finish(true);
      Eigen::VectorXd x = pivot_;
      x(j) += rho_;
      const double fx = eval(x);
      disp_.col(j).setZero();
      disp_(j, j) = rho_;
      fv_(j) = fx;
      if (fx < fpivot_) swap_pivot(j);
    }

    while (true) {
      if (capped()) return finish(true);
      if (!invert_simplex()) {
        // Degenerate simplex: rebuild it around the pivot.
        if (!reset_simplex()) return finish(true);
        continue;
      }
      const Eigen::VectorXd grad = model_gradient();

      // Geometry check.
      Eigen::Index bad = -1;
      double worst_dist = kBeta * rho_;
      for (Eigen::Index j = 0; j < n_; ++j) {
        const double dist = disp_.col(j).norm();
        if (dist > worst_dist) worst_dist = dist, bad = j;
      }
      if (bad < 0) {
        double worst_sigma = kAlpha * rho_;
        for (Eigen::Index j = 0; j < n_; ++j) {
          const double sigma = 1.0 / inv_.row(j).norm();
          if (sigma < worst_sigma) worst_sigma = sigma, bad = j;
        }
      }
      const bool acceptable = bad < 0;

      if (!acceptable && !last_was_geometry_) {
        geometry_step(bad, grad);
        last_was_geometry_ = true;
        continue;
      }
      last_was_geometry_ = false;

      const double gnorm = grad.norm();
      if (gnorm <= 0.0 || !std::isfinite(gnorm)) {
        if (!reduce_rho()) return finish(false);
        continue;
      }
      const Eigen::VectorXd step = -rho_ * grad / gnorm;
      const Eigen::VectorXd trial = pivot_ + step;
      const double ftrial = eval(trial);
      const double predicted = rho_ * gnorm;
      const double actual = fpivot_ - ftrial;

      // Replace the vertex whose removal best preserves the simplex volume,
      // weighted by its distance from the trial point.
      const Eigen::VectorXd weights = inv_ * step;
      Eigen::Index replace = 0;
      double best_w = -1.0;
      for (Eigen::Index j = 0; j < n_; ++j) {
        const double far = std::max(1.0, (disp_.col(j) - step).norm() / rho_);
        const double w = std::abs(weights(j)) * far * far;
        if (w > best_w) best_w = w, replace = j;
      }
      disp_.col(replace) = step;
      fv_(replace) = ftrial;
      if (ftrial < fpivot_) swap_pivot(replace);

      if (actual < kRatioAccept * predicted && acceptable) {
        if (!reduce_rho()) return finish(false);
      }
    }
  }

 private:
  Objective f_;
  Eigen::Index n_;
  DfoConfig cfg_;
  double rho_;
  Eigen::VectorXd pivot_;
  double fpivot_ = 0.0;
  Eigen::MatrixXd disp_;  // column j: vertex j - pivot
  Eigen::VectorXd fv_;    // f at vertex j
  Eigen::MatrixXd inv_;   // inverse of disp_
  bool last_was_geometry_ = false;
  DfoResult out_;

  bool capped() const { return out_.evals >= cfg_.max_evals; }

  double eval(const Eigen::VectorXd& x) {
    double v = f_(x);
    if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
    ++out_.evals;
    ++out_.iterations;
    out_.trace.push_back({x, v});
    return v;
  }

  // Makes vertex j the new pivot; all displacements are re-expressed.
  void swap_pivot(Eigen::Index j) {
    const Eigen::VectorXd shift = disp_.col(j);
    pivot_ += shift;
    std::swap(fpivot_, fv_(j));
    for (Eigen::Index k = 0; k < n_; ++k)
      if (k != j) disp_.col(k) -= shift;
    disp_.col(j) = -shift;
  }

  bool invert_simplex() {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(disp_);
    if (!lu.isInvertible()) return false;
    inv_ = lu.inverse();
    return inv_.allFinite();
  }

  // Gradient of the linear interpolant: disp^T g = fv - fpivot.
  Eigen::VectorXd model_gradient() const {
    const Eigen::VectorXd df = fv_.array() - fpivot_;
    return inv_.transpose() * df;
  }

  void geometry_step(Eigen::Index j, const Eigen::VectorXd& grad) {
    // Move vertex j perpendicular to the opposite face, towards lower model values.
    Eigen::VectorXd dir = inv_.row(j).transpose();
    dir *= kGamma * rho_ / dir.norm();
    if (grad.dot(dir) > 0.0) dir = -dir;
    const double fx = eval(pivot_ + dir);
    disp_.col(j) = dir;
    fv_(j) = fx;
    if (fx < fpivot_) swap_pivot(j);
  }

  bool reset_simplex() {
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (capped()) return false;
      Eigen::VectorXd x = pivot_;
      x(j) += rho_;
      disp_.col(j).setZero();
      disp_(j, j) = rho_;
      fv_(j) = eval(x);
    }
    for (Eigen::Index j = 0; j < n_; ++j)
      if (fv_(j) < fpivot_) swap_pivot(j);
    return true;
  }

  bool reduce_rho() {
    if (rho_ <= cfg_.rho_end) return false;
    rho_ *= 0.5;
    if (rho_ <= 1.5 * cfg_.rho_end) rho_ = cfg_.rho_end;
    return true;
  }

  DfoResult finish(bool capped_flag) {
    out_.capped = capped_flag;
    out_.final_rho = rho_;
    // Best evaluated point; earlier evaluations win ties.
    std::size_t best = 0;
    for (std::size_t i = 1; i < out_.trace.size(); ++i)
      if (out_.trace[i].f < out_.trace[best].f) best = i;
    if (!out_.trace.empty()) {
      out_.x = out_.trace[best].x;
      out_.f = out_.trace[best].f;
    }
    return std::move(out_);
  }
};

}  // namespace detail

/// Minimizes `f` from `x0`. Returns the best evaluated point.
inline DfoResult minimize(const Objective& f, const Eigen::VectorXd& x0, const DfoConfig& cfg = {}) {
  if (x0.size() == 0) {
    DfoResult r;
    r.x = x0;
    r.f = f(x0);
    r.evals = r.iterations = 1;
    r.trace.push_back({x0, r.f});
    return r;
  }
  return detail::Cobyla(f, x0, cfg).run();
}

}  // namespace qfm::dfo
