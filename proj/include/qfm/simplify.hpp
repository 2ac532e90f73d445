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
 * @file simplify.hpp
 * @brief Circuit reduction passes: peephole rewriting, qubit pruning and
 *        accuracy-guarded rotation ablation.
 */

#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qfm/data.hpp"
#include "qfm/errors.hpp"
#include "qfm/feature_map.hpp"
#include "qfm/log.hpp"
#include "qfm/pipeline.hpp"
#include "qfm/qcore.hpp"
#include "qfm/svm.hpp"

namespace qfm::simplify {

struct PassRecord {
  std::string name;
  int gates_removed = 0;
};

struct SimplifyReport {
  std::vector<PassRecord> passes_applied;
  int cost_before = 0;
  int cost_after = 0;
  std::optional<double> accuracy_before;
  std::optional<double> accuracy_after;
  std::vector<std::size_t> ablated_positions;  ///< indices into the input circuit
};

namespace detail {

inline bool shares_wire(const Gate& a, const Gate& b) {
  return a.acts_on(b.qubit) || (b.is_two_qubit() && a.acts_on(b.target));
}

inline bool droppable(const Gate& g) {
  return g.kind == GateKind::Identity || (g.is_rotation() && g.angle.is_zero());
}

// One sweep over the gate list. Returns true if anything changed.
inline bool peephole_sweep(std::vector<Gate>& gates) {
  const auto before = gates.size();
  std::erase_if(gates, droppable);
  bool changed = gates.size() != before;

  std::vector<bool> dead(gates.size(), false);
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (dead[i]) continue;
    std::size_t j = i + 1;
    while (j < gates.size() && (dead[j] || !shares_wire(gates[i], gates[j]))) ++j;
    if (j == gates.size()) continue;
    Gate& a = gates[i];
    const Gate& b = gates[j];
    if (a.is_rotation() && b.kind == a.kind && b.qubit == a.qubit) {
      a.angle = a.angle + b.angle;
      dead[j] = true;
      changed = true;
    } else if (a.kind == GateKind::Hadamard && b.kind == GateKind::Hadamard && a.qubit == b.qubit) {
      dead[i] = dead[j] = true;
      changed = true;
    } else if (a.kind == GateKind::CNOT && b.kind == GateKind::CNOT && a.qubit == b.qubit && a.target == b.target) {
      dead[i] = dead[j] = true;
      changed = true;
    }
  }
  std::vector<Gate> kept;
  kept.reserve(gates.size());
  for (std::size_t i = 0; i < gates.size(); ++i)
    if (!dead[i]) kept.push_back(std::move(gates[i]));
  gates = std::move(kept);
  return changed;
}

}  // namespace detail

/// Local rewriting to a fixpoint. Drops identities and zero rotations,
/// merges neighbouring same-axis rotations on one qubit, and cancels
/// neighbouring H-H and identical CNOT-CNOT pairs. Neighbouring means no
/// gate in between touches any wire of either gate.
inline Circuit peephole(const Circuit& c) {
  Circuit out = c;
  while (detail::peephole_sweep(out.gates)) {
  }
  return out;
}

/// Removes qubits that carry no data-dependent rotation and are not linked
/// through CNOT/CZ chains to a qubit that does. The remaining qubits are
/// renumbered in order; at least one qubit is always kept.
inline Circuit prune_qubits(const Circuit& c) {
  const auto n = static_cast<std::size_t>(c.n_qubits);
  std::vector<bool> keep(n, false);
  for (const auto& g : c.gates)
    if (!g.is_data_independent()) keep[static_cast<std::size_t>(g.qubit)] = true;
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& g : c.gates) {
      if (!g.is_two_qubit()) continue;
      const auto a = static_cast<std::size_t>(g.qubit), b = static_cast<std::size_t>(g.target);
      if (keep[a] != keep[b]) {
        keep[a] = keep[b] = true;
        grew = true;
      }
    }
  }
  std::vector<int> index(n, -1);
  int next = 0;
  for (std::size_t q = 0; q < n; ++q)
    if (keep[q]) index[q] = next++;
  Circuit out(std::max(next, 1));
  for (const auto& g : c.gates) {
    if (!keep[static_cast<std::size_t>(g.qubit)]) continue;
    Gate h = g;
    h.qubit = index[static_cast<std::size_t>(g.qubit)];
    if (g.is_two_qubit()) h.target = index[static_cast<std::size_t>(g.target)];
    out.add(std::move(h));
  }
  return out;
}

/// Peephole followed by pruning, recording both in `report`.
inline Circuit reduce(const Circuit& c, SimplifyReport* report = nullptr) {
  const Circuit p = peephole(c);
  const Circuit q = prune_qubits(p);
  if (report) {
    report->passes_applied.push_back({"peephole", static_cast<int>(c.gates.size() - p.gates.size())});
    report->passes_applied.push_back({"prune_qubits", static_cast<int>(p.gates.size() - q.gates.size())});
  }
  return q;
}

/// Structural simplification without data.
inline std::pair<Circuit, SimplifyReport> simplify(const Circuit& c) {
  SimplifyReport r;
  r.cost_before = gate_cost(c);
  Circuit out = reduce(c, &r);
  r.cost_after = gate_cost(out);
  return {std::move(out), std::move(r)};
}

namespace detail {
inline Circuit without(const Circuit& c, const std::vector<bool>& removed) {
  Circuit out(c.n_qubits);
  for (std::size_t i = 0; i < c.gates.size(); ++i)
    if (!removed[i]) out.gates.push_back(c.gates[i]);
  return out;
}
}  // namespace detail

/// Greedy rotation ablation. Candidates are visited by decreasing cost
/// saved (the cost drop after reduce() when that rotation alone is
/// removed), then by position. A removal is kept when test accuracy does
/// not decrease. Candidates whose retraining fails are skipped.
inline std::pair<FeatureMap, SimplifyReport> ablate(const FeatureMap& fm, const data::Dataset& d,
                                                    const svm::SvmConfig& cfg = {}, unsigned threads = 1) {
  if (!d.has_split()) throw ValidationError("ablation needs a dataset with a train/test split");
  const Circuit& c = fm.circuit;
  SimplifyReport r;
  r.cost_before = gate_cost(c);

  auto score = [&](const Circuit& circ) {
    return quantum_accuracy(FeatureMap{circ, fm.transform}, d, cfg, 0, 0, threads);
  };

  std::vector<std::size_t> order;
  std::vector<int> saved(c.gates.size(), 0);
  const int base_cost = gate_cost(reduce(c));
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    if (!c.gates[i].is_rotation()) continue;
    std::vector<bool> mask(c.gates.size(), false);
    mask[i] = true;
    saved[i] = base_cost - gate_cost(reduce(detail::without(c, mask)));
    order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return saved[a] > saved[b]; });

  double current = score(c);
  r.accuracy_before = current;
  std::vector<bool> removed(c.gates.size(), false);
  for (const auto i : order) {
    removed[i] = true;
    try {
      const double acc = score(detail::without(c, removed));
      if (acc >= current) {
        current = acc;
        r.ablated_positions.push_back(i);
        log::debug("ablate: removed gate " + std::to_string(i) + ", accuracy " + std::to_string(acc));
        continue;
      }
    } catch (const Error& e) {
      log::warn(std::string("ablate: skipping gate ") + std::to_string(i) + ": " + e.what());
    }
    removed[i] = false;
  }
  const Circuit ablated = detail::without(c, removed);
  r.passes_applied.push_back({"ablate", static_cast<int>(r.ablated_positions.size())});
  FeatureMap out{reduce(ablated, &r), fm.transform};
  r.cost_after = gate_cost(out.circuit);
  r.accuracy_after = current;
  std::sort(r.ablated_positions.begin(), r.ablated_positions.end());
  return {std::move(out), std::move(r)};
}

inline std::pair<Circuit, SimplifyReport> ablate(const Circuit& c, const data::Dataset& d,
                                                 const svm::SvmConfig& cfg = {}, unsigned threads = 1) {
  auto [fm, r] = ablate(FeatureMap{c, FeatureTransform::None}, d, cfg, threads);
  return {std::move(fm.circuit), std::move(r)};
}

inline nlohmann::json to_json(const SimplifyReport& r) {
  nlohmann::json j;
  j["passes_applied"] = nlohmann::json::array();
  for (const auto& p : r.passes_applied) j["passes_applied"].push_back({{"pass", p.name}, {"gates_removed", p.gates_removed}});
  j["cost_before"] = r.cost_before;
  j["cost_after"] = r.cost_after;
  if (r.accuracy_before) j["accuracy_before"] = *r.accuracy_before;
  if (r.accuracy_after) j["accuracy_after"] = *r.accuracy_after;
  j["ablated_positions"] = r.ablated_positions;
  return j;
}

}  // namespace qfm::simplify
