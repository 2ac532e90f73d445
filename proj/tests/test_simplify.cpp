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

#include <gtest/gtest.h>

#include <numbers>

#include "qfm/circuit_io.hpp"
#include "qfm/data.hpp"
#include "qfm/kernels.hpp"
#include "qfm/simplify.hpp"
#include "qfm/vqc.hpp"
#include "test_support.hpp"

using namespace qfm;
using namespace qfm::simplify;

namespace {

double max_kernel_gap(const Circuit& a, const Circuit& b, Rng& rng, int pairs, int dim) {
  double worst = 0.0;
  for (int p = 0; p < pairs; ++p) {
    const auto x = qfm::testing::random_point(rng, dim), y = qfm::testing::random_point(rng, dim);
    worst = std::max(worst, std::abs(quantum_kernel_exact(a, x, y) - quantum_kernel_exact(b, x, y)));
  }
  return worst;
}

}  // namespace

TEST(Peephole, MergesSameAxisRotations) {
  const Circuit c(1, {Gate::rz(0, AngleExpr::feature(0, 0.5)), Gate::rz(0, AngleExpr::feature(0, 1.25))});
  const Circuit p = peephole(c);
  ASSERT_EQ(p.gates.size(), 1u);
  EXPECT_EQ(p.gates[0].kind, GateKind::RotZ);
  EXPECT_EQ(p.gates[0].angle, AngleExpr::feature(0, 1.75));
}

TEST(Peephole, CancelsPairsAndDropsTrivia) {
  EXPECT_TRUE(peephole(Circuit(1, {Gate::h(0), Gate::h(0)})).gates.empty());
  EXPECT_TRUE(peephole(Circuit(2, {Gate::cnot(0, 1), Gate::identity(1), Gate::cnot(0, 1)})).gates.empty());
  EXPECT_TRUE(peephole(Circuit(1, {Gate::rx(0, AngleExpr{}), Gate::identity(0)})).gates.empty());
  // Nested cancellation needs several sweeps.
  const Circuit nested(2, {Gate::h(0), Gate::cnot(0, 1), Gate::rz(1, AngleExpr::feature(0)),
                           Gate::rz(1, AngleExpr::feature(0, -1.0)), Gate::cnot(0, 1), Gate::h(0)});
  EXPECT_TRUE(peephole(nested).gates.empty());
}

TEST(Peephole, RespectsBlockingGates) {
  const Circuit keep_cnot(2, {Gate::cnot(0, 1), Gate::h(1), Gate::cnot(0, 1)});
  EXPECT_EQ(peephole(keep_cnot).gates.size(), 3u);
  const Circuit reversed(2, {Gate::cnot(0, 1), Gate::cnot(1, 0)});
  EXPECT_EQ(peephole(reversed).gates.size(), 2u);
  const Circuit other_axis(1, {Gate::rz(0, AngleExpr::feature(0)), Gate::ry(0, AngleExpr::feature(0))});
  EXPECT_EQ(peephole(other_axis).gates.size(), 2u);
  // A gate on an unrelated wire does not block.
  const Circuit unrelated(2, {Gate::h(0), Gate::h(1), Gate::h(0)});
  EXPECT_EQ(peephole(unrelated).gates.size(), 1u);
}

TEST(Peephole, PreservesUnitariesAndIsIdempotent) {
  auto rng = make_rng(71, {});
  for (int t = 0; t < 50; ++t) {
    const Circuit c = qfm::testing::random_reducible_circuit(rng, 1 + t % 4, 25);
    const Circuit p = peephole(c);
    EXPECT_EQ(peephole(p), p);
    EXPECT_LE(gate_cost(p), gate_cost(c));
    for (int k = 0; k < 3; ++k) {
      const auto x = qfm::testing::random_point(rng, 2);
      EXPECT_LE((unitary_of(p, x) - unitary_of(c, x)).norm(), 1e-12);
    }
    EXPECT_LE(max_kernel_gap(c, p, rng, 10, 2), 1e-12);
  }
}

TEST(Peephole, UnitaryDecompositionAnsatz) {
  auto rng = make_rng(72, {});
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  vqc::ParamVector params(36);
  for (auto& v : params) v = u(rng);
  const Circuit c = vqc::build_ud(params);
  const Circuit p = peephole(c);
  EXPECT_LE(gate_cost(p), 48);
  for (int k = 0; k < 5; ++k) {
    const auto x = qfm::testing::random_point(rng, 2);
    EXPECT_LE((unitary_of(p, x) - unitary_of(c, x)).norm(), 1e-12);
  }
}

TEST(Prune, RemovesIdleAndIsolatedQubits) {
  const Circuit c(4, {Gate::rz(0, AngleExpr::feature(0)), Gate::h(1), Gate::h(2), Gate::cnot(2, 3)});
  const Circuit p = prune_qubits(c);
  EXPECT_EQ(p.n_qubits, 1);
  ASSERT_EQ(p.gates.size(), 1u);
  EXPECT_EQ(p.gates[0].qubit, 0);
}

TEST(Prune, KeepsEntangledHelpersAndReindexes) {
  const Circuit c(4, {Gate::h(0), Gate::h(1), Gate::cnot(1, 2), Gate::ry(3, AngleExpr::feature(1)),
                      Gate::cnot(3, 2)});
  const Circuit p = prune_qubits(c);
  EXPECT_EQ(p.n_qubits, 3);
  EXPECT_EQ(p.gates.size(), 4u);
  EXPECT_EQ(p.gates[1], Gate::cnot(0, 1));
  EXPECT_EQ(p.gates[3], Gate::cnot(2, 1));
}

TEST(Prune, DataFreeCircuitKeepsOneQubit) {
  const Circuit p = prune_qubits(Circuit(3, {Gate::h(0), Gate::cnot(0, 1)}));
  EXPECT_EQ(p.n_qubits, 1);
  EXPECT_TRUE(p.gates.empty());
}

TEST(Prune, PreservesKernelsAndIsIdempotent) {
  auto rng = make_rng(73, {});
  for (int t = 0; t < 50; ++t) {
    const Circuit c = qfm::testing::random_reducible_circuit(rng, 2 + t % 4, 14, 3);
    const Circuit p = prune_qubits(c);
    EXPECT_EQ(prune_qubits(p), p);
    EXPECT_LE(max_kernel_gap(c, p, rng, 10, 3), 1e-12);
  }
}

TEST(Simplify, BundledCircuit) {
  const FeatureMap fm = load_feature_map(QFM_DATA_DIR "/covariant_style_circuit.json");
  EXPECT_EQ(gate_cost(fm.circuit), 41);
  const Circuit p = peephole(fm.circuit);
  EXPECT_EQ(gate_cost(p), 33);
  const auto [s, report] = simplify::simplify(fm.circuit);
  EXPECT_LE(report.cost_after, 33);
  EXPECT_EQ(report.cost_before, 41);
  EXPECT_EQ(report.passes_applied.size(), 2u);
  auto rng = make_rng(74, {});
  EXPECT_LE(max_kernel_gap(fm.circuit, s, rng, 10, 14), 1e-12);
}

TEST(Ablate, DropsUselessRotationsAndNeverLosesAccuracy) {
  const auto d = data::moons_split(1);
  const Circuit c(2, {Gate::ry(0, AngleExpr::feature(0, std::numbers::pi / 2)),
                      Gate::rz(1, AngleExpr::fixed(0.0)), Gate::rx(1, AngleExpr::feature(1, std::numbers::pi / 2)),
                      Gate::h(1), Gate::h(1)});
  const auto [out, report] = ablate(c, d);
  ASSERT_TRUE(report.accuracy_before && report.accuracy_after);
  EXPECT_GE(*report.accuracy_after, *report.accuracy_before);
  EXPECT_LE(report.cost_after, report.cost_before);
  EXPECT_TRUE(std::find(report.ablated_positions.begin(), report.ablated_positions.end(), 1u) !=
              report.ablated_positions.end());
  const auto j = to_json(report);
  EXPECT_EQ(j["cost_before"], report.cost_before);
}

TEST(Ablate, MinimalCircuitIsAFixpoint) {
  const auto d = data::adhoc_split(1);
  const FeatureMap zz = zz_feature_map_with_transform();
  const auto [out, report] = ablate(zz, d);
  EXPECT_DOUBLE_EQ(*report.accuracy_before, 1.0);
  EXPECT_DOUBLE_EQ(*report.accuracy_after, 1.0);
}
