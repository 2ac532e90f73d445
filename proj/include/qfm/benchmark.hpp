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
 * @file benchmark.hpp
 * @brief Side-by-side comparison of classical and quantum kernel methods on
 *        the moons and ad hoc datasets.
 */

#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qfm/data.hpp"
#include "qfm/dfo.hpp"
#include "qfm/gasearch.hpp"
#include "qfm/kernels.hpp"
#include "qfm/log.hpp"
#include "qfm/pipeline.hpp"
#include "qfm/simplify.hpp"
#include "qfm/svm.hpp"
#include "qfm/vqc.hpp"

namespace qfm::bench {

struct BenchmarkRow {
  std::string method;
  std::string dataset;
  double accuracy = 0.0;
  std::optional<int> gate_cost;             ///< absent for classical kernels
  std::optional<int> gate_cost_simplified;  ///< after peephole, when it differs
  double wall_time_seconds = 0.0;
  bool failed = false;
  std::string error;
};

struct BenchmarkConfig {
  std::uint64_t data_seed = 1;
  std::uint64_t seed = 0;
  int samples = data::kDefaultSamples;
  double moons_noise = data::kDefaultMoonsNoise;
  double adhoc_gap = data::kDefaultAdhocGap;
  double rbf_gamma_moons = 0.5;
  double rbf_gamma_adhoc = 8.0;
  ga::GaConfig ga{};
  double ga_weight_moons = 20.0;
  double ga_weight_adhoc = 80.0;
  int he_depth_moons = 1;
  int he_depth_adhoc = 4;
  dfo::DfoConfig optimizer{};
  long long shots = 0;
  svm::SvmConfig svm{};
  unsigned threads = 1;
};

inline const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names{"SVM-linear", "SVM-RBF", "QSVM-ZZ", "QSVM-GA", "QSVM-HE", "QSVM-UD"};
  return names;
}

namespace detail {

struct Outcome {
  double accuracy = 0.0;
  std::optional<int> cost;
  std::optional<int> simplified;
};

inline BenchmarkRow timed_row(const std::string& method, const std::string& dataset,
                              const std::function<Outcome()>& body) {
  BenchmarkRow row;
  row.method = method;
  row.dataset = dataset;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Outcome o = body();
    row.accuracy = o.accuracy;
    row.gate_cost = o.cost;
    if (o.simplified && o.cost && *o.simplified != *o.cost) row.gate_cost_simplified = o.simplified;
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
    log::warn(method + " on " + dataset + " failed: " + e.what());
  }
  row.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

inline std::vector<BenchmarkRow> run_dataset(const std::string& name, const data::Dataset& d, double gamma,
                                             double ga_weight, int he_depth, const BenchmarkConfig& cfg) {
  std::vector<BenchmarkRow> rows;
  auto classical = [&](const Kernel& k) {
    return [&, k] { return Outcome{fit_and_score(k, d, cfg.svm, cfg.threads).accuracy, {}, {}}; };
  };
  rows.push_back(timed_row("SVM-linear", name, classical(LinearKernel{})));
  rows.push_back(timed_row("SVM-RBF", name, classical(RbfKernel{gamma})));
  rows.push_back(timed_row("QSVM-ZZ", name, [&] {
    const auto fm = zz_feature_map_with_transform();
    const double acc = fit_and_score(QuantumKernel{fm, cfg.shots, cfg.seed}, d, cfg.svm, cfg.threads).accuracy;
    return Outcome{acc, gate_cost(fm.circuit), {}};
  }));
  rows.push_back(timed_row("QSVM-GA", name, [&] {
    ga::GaConfig g = cfg.ga;
    g.weight = ga_weight;
    g.seed = cfg.seed;
    g.shots = cfg.shots;
    g.svm = cfg.svm;
    g.threads = cfg.threads;
    const auto r = ga::evolve(g, d);
    return Outcome{r.best.score.accuracy, r.best.score.cost, gate_cost(simplify::peephole(r.best.circuit))};
  }));
  auto ansatz = [&](const vqc::AnsatzSpec& spec) {
    return [&, spec] {
      vqc::TrainConfig t;
      t.optimizer = cfg.optimizer;
      t.seed = cfg.seed;
      t.shots = cfg.shots;
      t.svm = cfg.svm;
      t.threads = cfg.threads;
      const auto r = vqc::train(spec, d, t);
      return Outcome{r.accuracy, gate_cost(r.circuit), gate_cost(simplify::peephole(r.circuit))};
    };
  };
  rows.push_back(timed_row("QSVM-HE", name, ansatz(vqc::AnsatzSpec::he(he_depth))));
  rows.push_back(timed_row("QSVM-UD", name, ansatz(vqc::AnsatzSpec::ud())));
  return rows;
}

}  // namespace detail

/// Runs every method on both datasets. A failing method yields a row marked
/// failed and the run continues.
inline std::vector<BenchmarkRow> run_benchmark(const BenchmarkConfig& cfg = {}) {
  std::vector<BenchmarkRow> rows;
  auto append = [&](std::vector<BenchmarkRow> more) { rows.insert(rows.end(), more.begin(), more.end()); };
  try {
    const auto moons = data::moons_split(cfg.data_seed, cfg.samples, cfg.moons_noise);
    append(detail::run_dataset("moons", moons, cfg.rbf_gamma_moons, cfg.ga_weight_moons, cfg.he_depth_moons, cfg));
  } catch (const Error& e) {
    for (const auto& m : method_names()) rows.push_back({m, "moons", 0.0, {}, {}, 0.0, true, e.what()});
  }
  try {
    const auto adhoc = data::adhoc_split(cfg.data_seed, cfg.samples, cfg.adhoc_gap);
    append(detail::run_dataset("adhoc", adhoc, cfg.rbf_gamma_adhoc, cfg.ga_weight_adhoc, cfg.he_depth_adhoc, cfg));
  } catch (const Error& e) {
    for (const auto& m : method_names()) rows.push_back({m, "adhoc", 0.0, {}, {}, 0.0, true, e.what()});
  }
  return rows;
}

inline nlohmann::json to_json(const BenchmarkRow& r) {
  nlohmann::json j{{"method", r.method},
                   {"dataset", r.dataset},
                   {"accuracy", r.accuracy},
                   {"gate_cost", r.gate_cost ? nlohmann::json(*r.gate_cost) : nlohmann::json(nullptr)},
                   {"wall_time_seconds", r.wall_time_seconds},
                   {"failed", r.failed}};
  if (r.gate_cost_simplified) j["gate_cost_simplified"] = *r.gate_cost_simplified;
  if (r.failed) j["error"] = r.error;
  return j;
}

inline nlohmann::json to_json(const std::vector<BenchmarkRow>& rows) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  return arr;
}

/// Fixed-width table with one line per method and an acc/gate/time column
/// group per dataset.
inline std::string render_table(const std::vector<BenchmarkRow>& rows) {
  std::vector<std::string> datasets;
  for (const auto& r : rows)
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) datasets.push_back(r.dataset);
  std::ostringstream os;
  os << std::left << std::setw(12) << "method";
  for (const auto& d : datasets) os << " | " << std::setw(26) << (d + " acc/gate/time");
  os << '\n' << std::string(12 + datasets.size() * 29, '-') << '\n';
  for (const auto& m : method_names()) {
    bool any = false;
    std::ostringstream line;
    line << std::left << std::setw(12) << m;
    for (const auto& d : datasets) {
      std::ostringstream cell;
      const auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& r) { return r.method == m && r.dataset == d; });
      if (it == rows.end()) {
        cell << "";
      } else if (it->failed) {
        any = true;
        cell << "failed";
      } else {
        any = true;
        cell << std::fixed << std::setprecision(1) << std::setw(6) << 100.0 * it->accuracy << "% ";
        std::string gate = it->gate_cost ? std::to_string(*it->gate_cost) : "-";
        if (it->gate_cost_simplified) gate += "(" + std::to_string(*it->gate_cost_simplified) + ")";
        cell << std::setw(7) << gate << ' ' << std::setprecision(2) << std::setw(8) << it->wall_time_seconds << 's';
      }
      line << " | " << std::setw(26) << cell.str();
    }
    if (any) os << line.str() << '\n';
  }
  return os.str();
}

}  // namespace qfm::bench
