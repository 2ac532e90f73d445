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
 * @file vqc.hpp
 * @brief Trainable feature-map ansatze and their training loop.
 *
 * Every rotation angle is phi_j = a_j x_0 + b_j x_1. An ansatz factor
 * written as exp(i phi Z) is RotZ(-2 phi) in qcore's convention, so each
 * angle is stored as the expression -2 a_j x_0 - 2 b_j x_1.
 */

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qfm/data.hpp"
#include "qfm/dfo.hpp"
#include "qfm/errors.hpp"
#include "qfm/parallel.hpp"
#include "qfm/pipeline.hpp"
#include "qfm/qcore.hpp"
#include "qfm/random.hpp"
#include "qfm/svm.hpp"
#include "qfm/udecomp.hpp"

namespace qfm::vqc {

enum class AnsatzKind { HardwareEfficient, UnitaryDecomposition };

inline std::string_view to_string(AnsatzKind k) {
  return k == AnsatzKind::HardwareEfficient ? "he" : "ud";
}

inline AnsatzKind ansatz_kind_from_string(std::string_view s) {
  if (s == "he") return AnsatzKind::HardwareEfficient;
  if (s == "ud") return AnsatzKind::UnitaryDecomposition;
  throw ValidationError("unknown ansatz kind '" + std::string(s) + "' (expected he or ud)");
}

struct AnsatzSpec {
  AnsatzKind kind = AnsatzKind::HardwareEfficient;
  int depth = 1;  ///< HE only
  int n_features = 2;

  static AnsatzSpec he(int depth) { return {AnsatzKind::HardwareEfficient, depth, 2}; }
  static AnsatzSpec ud() { return {AnsatzKind::UnitaryDecomposition, 1, 2}; }
};

using ParamVector = std::vector<double>;

/// Number of angle expressions in the UD ansatz (four ZYZ blocks and three
/// two-angle multiplexors).
inline constexpr int kUdAngles = 18;

inline int parameter_count(const AnsatzSpec& spec) {
  if (spec.n_features != 2) throw ValidationError("ansatze are defined for 2 features");
  if (spec.kind == AnsatzKind::UnitaryDecomposition) return 2 * kUdAngles;
  if (spec.depth < 1) throw ValidationError("HE depth must be >= 1");
  return 8 * spec.depth;
}

/// Angle expression for phi_j (1-based), phase factor included.
inline AngleExpr phi(const ParamVector& p, int j) {
  const auto i = static_cast<std::size_t>(2 * (j - 1));
  return AngleExpr{0.0, {{0, -2.0 * p[i]}, {1, -2.0 * p[i + 1]}}};
}

namespace detail {
inline void check_length(const ParamVector& p, int expected) {
  if (static_cast<int>(p.size()) != expected)
    throw DimensionError("expected " + std::to_string(expected) + " parameters, got " + std::to_string(p.size()));
}
}  // namespace detail

/// Hardware-efficient ansatz: `depth` rotation blocks RY, RY, RZ, RZ on
/// qubits 0 and 1 with one CNOT(0, 1) between consecutive blocks.
inline Circuit build_he(int depth, const ParamVector& params) {
  detail::check_length(params, parameter_count(AnsatzSpec::he(depth)));
  Circuit c(2);
  int j = 1;
  for (int d = 0; d < depth; ++d) {
    if (d > 0) c.add(Gate::cnot(0, 1));
    c.add(Gate::ry(0, phi(params, j++)));
    c.add(Gate::ry(1, phi(params, j++)));
    c.add(Gate::rz(0, phi(params, j++)));
    c.add(Gate::rz(1, phi(params, j++)));
  }
  return c;
}

/// Unitary-decomposition ansatz, the operator product
///   U(1,2,3) M_RZ(4,5) U(6,7,8) M_RY(9,10) U(11,12,13) M_RZ(14,15) U(16,17,18)
/// where U(j, j+1, j+2) = RZ(phi_j) RY(phi_j+1) RZ(phi_j+2) acts on qubit 0
/// and each multiplexor rotates qubit 1 selected by qubit 0. Gates are
/// emitted right to left.
inline Circuit build_ud(const ParamVector& params) {
  detail::check_length(params, parameter_count(AnsatzSpec::ud()));
  Circuit c(2);
  auto zyz_block = [&](int j) {
    c.add(Gate::rz(0, phi(params, j + 2)));
    c.add(Gate::ry(0, phi(params, j + 1)));
    c.add(Gate::rz(0, phi(params, j)));
  };
  auto mux = [&](GateKind axis, int j) {
    for (auto& g : udecomp::compile_multiplexed_rotation(axis, phi(params, j), phi(params, j + 1), 0, 1))
      c.add(std::move(g));
  };
  zyz_block(16);
  mux(GateKind::RotZ, 14);
  zyz_block(11);
  mux(GateKind::RotY, 9);
  zyz_block(6);
  mux(GateKind::RotZ, 4);
  zyz_block(1);
  return c;
}

inline Circuit build(const AnsatzSpec& spec, const ParamVector& params) {
  parameter_count(spec);
  return spec.kind == AnsatzKind::HardwareEfficient ? build_he(spec.depth, params) : build_ud(params);
}

struct TrainConfig {
  dfo::DfoConfig optimizer{};
  std::uint64_t seed = 0;
  long long shots = 0;  ///< 0 = exact kernels
  svm::SvmConfig svm{};
  unsigned threads = 1;
};

struct HistoryEntry {
  int iteration = 0;
  double theta_norm = 0.0;
  double objective = 0.0;
};

struct TrainResult {
  ParamVector params;
  Circuit circuit{2};
  double accuracy = 0.0;
  int evals = 0;
  bool capped = false;
  std::uint64_t seed = 0;
  std::vector<HistoryEntry> history;
};

inline ParamVector initial_params(const AnsatzSpec& spec, std::uint64_t seed) {
  auto rng = make_rng(seed, {0x7e7a});
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ParamVector p(static_cast<std::size_t>(parameter_count(spec)));
  for (auto& v : p) v = u(rng);
  return p;
}

/// Minimizes 1 - test accuracy of the QSVM built from the ansatz.
inline TrainResult train(const AnsatzSpec& spec, const data::Dataset& d, const TrainConfig& cfg = {}) {
  if (!d.has_split()) throw ValidationError("training needs a dataset with a train/test split");
  if (d.dimension() != static_cast<std::size_t>(spec.n_features))
    throw DimensionError("ansatz expects " + std::to_string(spec.n_features) + " features");
  const ParamVector p0 = initial_params(spec, cfg.seed);
  int calls = 0;
  auto objective = [&](const Eigen::VectorXd& theta) {
    const ParamVector p(theta.data(), theta.data() + theta.size());
    const auto stream = static_cast<std::uint64_t>(calls++);
    const FeatureMap fm{build(spec, p), FeatureTransform::None};
    return 1.0 - quantum_accuracy(fm, d, cfg.svm, cfg.shots, derive_seed(cfg.seed, {0xe7a1, stream}), cfg.threads);
  };
  const Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(p0.data(), static_cast<Eigen::Index>(p0.size()));
  const auto opt = dfo::minimize(objective, x0, cfg.optimizer);

  TrainResult r;
  r.params.assign(opt.x.data(), opt.x.data() + opt.x.size());
  r.circuit = build(spec, r.params);
  r.accuracy = 1.0 - opt.f;
  r.evals = opt.evals;
  r.capped = opt.capped;
  r.seed = cfg.seed;
  r.history.reserve(opt.trace.size());
  for (std::size_t i = 0; i < opt.trace.size(); ++i)
    r.history.push_back({static_cast<int>(i) + 1, opt.trace[i].x.norm(), opt.trace[i].f});
  return r;
}

/// Trains once per seed (concurrently) and returns the most accurate run;
/// the earlier seed wins ties.
inline TrainResult train_best_of(const AnsatzSpec& spec, const data::Dataset& d, TrainConfig cfg,
                                 const std::vector<std::uint64_t>& seeds, unsigned threads = 0) {
  if (seeds.empty()) throw ValidationError("need at least one seed");
  std::vector<TrainResult> runs(seeds.size());
  cfg.threads = 1;
  parallel_for(seeds.size(), threads == 0 ? default_threads() : threads, [&](std::size_t i) {
    TrainConfig c = cfg;
    c.seed = seeds[i];
    runs[i] = train(spec, d, c);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].accuracy > runs[best].accuracy) best = i;
  return runs[best];
}

}  // namespace qfm::vqc
