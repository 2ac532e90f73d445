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

#include <cmath>
#include <numbers>

#include "qfm/circuit_io.hpp"
#include "qfm/kernels.hpp"
#include "qfm/linalg.hpp"
#include "qfm/qcore.hpp"
#include "qfm/udecomp.hpp"
#include "test_support.hpp"

using namespace qfm;
using qfm::testing::dense_unitary;
using std::numbers::pi;

TEST(AngleExpr, EvaluatesAffineForms) {
  const std::vector<double> x{0.7, 0.3};
  EXPECT_DOUBLE_EQ(AngleExpr::feature(0).evaluate(x), 0.7);
  EXPECT_DOUBLE_EQ(AngleExpr{}.evaluate(x), 0.0);
  EXPECT_DOUBLE_EQ(AngleExpr::feature(0, pi / 8).evaluate(std::vector<double>{2.0, 0.0}), pi / 4);
  EXPECT_DOUBLE_EQ((AngleExpr{0.5, {{0, 2.0}, {1, -1.0}}}).evaluate(x), 0.5 + 1.4 - 0.3);
}

TEST(AngleExpr, RejectsOutOfRangeFeature) {
  const std::vector<double> x{1.0};
  EXPECT_THROW(AngleExpr::feature(1).evaluate(x), DimensionError);
}

TEST(AngleExpr, AdditionMergesCoefficients) {
  const auto s = AngleExpr::feature(0, 1.5) + AngleExpr{0.25, {{0, 0.5}, {1, 1.0}}};
  EXPECT_DOUBLE_EQ(s.constant, 0.25);
  ASSERT_EQ(s.coeffs.size(), 2u);
  EXPECT_DOUBLE_EQ(s.coeffs[0].second, 2.0);
  EXPECT_TRUE((AngleExpr::feature(1, 2.0) - AngleExpr::feature(1, 2.0)).is_zero());
}

TEST(Circuit, RejectsBadQubits) {
  Circuit c(2);
  EXPECT_THROW(c.add(Gate::h(2)), ValidationError);
  EXPECT_THROW(c.add(Gate::cnot(1, 1)), ValidationError);
  EXPECT_THROW(c.add(Gate::cnot(0, 5)), ValidationError);
  EXPECT_THROW(Circuit(0), ValidationError);
}

TEST(Statevector, CapacityLimits) {
  EXPECT_THROW(Statevector(0), CapacityError);
  EXPECT_THROW(Statevector(kMaxQubits + 1), CapacityError);
  EXPECT_NO_THROW(Statevector{kMaxQubits});
}

TEST(Statevector, HadamardUsesLeastSignificantQubitZero) {
  const Circuit c(2, {Gate::h(0)});
  const auto s = run(c, {});
  EXPECT_NEAR(std::abs(s[0]), 1 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(std::abs(s[1]), 1 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(std::abs(s[2]), 0.0, 1e-15);
}

TEST(Statevector, BellState) {
  const Circuit c(2, {Gate::h(0), Gate::cnot(0, 1)});
  const auto s = run(c, {});
  EXPECT_NEAR(std::abs(s[0]), 1 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(std::abs(s[3]), 1 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(std::abs(s[1]) + std::abs(s[2]), 0.0, 1e-15);
}

TEST(Statevector, RotZOnZeroIsPhaseOnly) {
  const double theta = 1.234;
  const Circuit c(1, {Gate::rz(0, AngleExpr::fixed(theta))});
  const auto s = run(c, {});
  EXPECT_NEAR(std::abs(s[0] - std::exp(Complex(0, -theta / 2))), 0.0, 1e-15);
  EXPECT_NEAR(std::norm(s[0]), 1.0, 1e-15);
}

TEST(Statevector, EmptyCircuitIsGroundState) {
  const auto s = run(Circuit(3), {});
  EXPECT_EQ(s[0], Complex(1.0, 0.0));
  EXPECT_NEAR(s.norm(), 1.0, 1e-15);
}

TEST(Statevector, UniformSuperposition) {
  const auto s = run(Circuit(2, {Gate::h(0), Gate::h(1)}), {});
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::norm(s[i]), 0.25, 1e-15);
}

TEST(Statevector, ZzMapAtOriginMatchesDenseProduct) {
  const auto fm = zz_feature_map_with_transform();
  const auto x = fm.prepare(std::vector<double>{0.0, 0.0});
  const auto s = run(fm.circuit, x);
  const CMatrix u = dense_unitary(fm.circuit, x);
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(s[static_cast<std::size_t>(i)] - u(i, 0)), 0.0, 1e-12);
}

TEST(Unitary, EmptyAndHadamard) {
  EXPECT_NEAR((unitary_of(Circuit(2), {}) - CMatrix::Identity(4, 4)).norm(), 0.0, 1e-15);
  const CMatrix h = unitary_of(Circuit(1, {Gate::h(0)}), {});
  const double r = 1 / std::numbers::sqrt2;
  EXPECT_NEAR(h(0, 0).real(), r, 1e-15);
  EXPECT_NEAR(h(1, 1).real(), -r, 1e-15);
}

TEST(Unitary, ZyzSequenceMatchesEulerAngles) {
  auto rng = make_rng(3, {});
  for (int t = 0; t < 20; ++t) {
    const Eigen::Matrix2cd u = haar_unitary(2, rng);
    const auto a = udecomp::zyz(u);
    const Circuit c(1, {Gate::rz(0, AngleExpr::fixed(a.gamma)), Gate::ry(0, AngleExpr::fixed(a.beta)),
                        Gate::rz(0, AngleExpr::fixed(a.alpha))});
    EXPECT_LE(phase_aligned_distance(unitary_of(c, {}), u), 1e-10);
  }
}

TEST(Unitary, MatchesDenseOracleOnRandomCircuits) {
  auto rng = make_rng(11, {});
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + t % 4;
    const Circuit c = qfm::testing::random_circuit(rng, n, 12);
    const auto x = qfm::testing::random_point(rng, 2);
    const CMatrix u = unitary_of(c, x);
    EXPECT_LE(unitarity_error(u), 1e-10);
    EXPECT_LE((u - dense_unitary(c, x)).norm(), 1e-10);
  }
}

TEST(Unitary, NormPreservedAfterEveryGate) {
  auto rng = make_rng(12, {});
  const Circuit c = qfm::testing::random_circuit(rng, 4, 60);
  const auto x = qfm::testing::random_point(rng, 2);
  Statevector s(4);
  for (const auto& g : c.gates) {
    s.apply(g, x);
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
  }
}

TEST(Unitary, CompositionIsMatrixProduct) {
  auto rng = make_rng(13, {});
  for (int t = 0; t < 30; ++t) {
    const Circuit a = qfm::testing::random_circuit(rng, 3, 8), b = qfm::testing::random_circuit(rng, 3, 8);
    const auto x = qfm::testing::random_point(rng, 2);
    EXPECT_LE((unitary_of(a.then(b), x) - unitary_of(b, x) * unitary_of(a, x)).norm(), 1e-10);
    EXPECT_EQ(gate_cost(a.then(b)), gate_cost(a) + gate_cost(b));
  }
}

TEST(Unitary, AdjointInverts) {
  auto rng = make_rng(14, {});
  const Circuit c = qfm::testing::random_circuit(rng, 3, 20);
  const auto x = qfm::testing::random_point(rng, 2);
  EXPECT_LE((unitary_of(c.then(c.adjoint()), x) - CMatrix::Identity(8, 8)).norm(), 1e-10);
}

TEST(GateCost, Formula) {
  EXPECT_EQ(gate_cost(Circuit(1, {Gate::rx(0, AngleExpr::feature(0))})), 1);
  EXPECT_EQ(gate_cost(zz_feature_map()), 34);
  const Circuit ga_winner(2, {Gate::ry(0, AngleExpr::feature(0)), Gate::rz(1, AngleExpr::feature(1)),
                              Gate::rx(0, AngleExpr::feature(0))});
  EXPECT_EQ(gate_cost(ga_winner), 3);
  EXPECT_EQ(gate_cost(Circuit(2, {Gate::identity(0), Gate::h(1), Gate::cz(0, 1)})), 7);
}

TEST(CircuitIo, JsonRoundTrip) {
  auto rng = make_rng(15, {});
  for (int t = 0; t < 20; ++t) {
    const Circuit c = qfm::testing::random_circuit(rng, 3, 15);
    EXPECT_EQ(circuit_from_json(to_json(c)), c);
  }
  const FeatureMap fm = zz_feature_map_with_transform();
  EXPECT_EQ(feature_map_from_json(to_json(fm)), fm);
}

TEST(CircuitIo, RejectsMalformedGates) {
  EXPECT_THROW(circuit_from_json(nlohmann::json::parse(R"({"n_qubits":2,"gates":[{"kind":"cnot","qubits":[0]}]})")),
               ParseError);
  EXPECT_ANY_THROW(circuit_from_json(nlohmann::json::parse(R"({"n_qubits":2,"gates":[{"kind":"xx","qubits":[0]}]})")));
  EXPECT_ANY_THROW(circuit_from_json(nlohmann::json::parse(R"({"n_qubits":1,"gates":[{"kind":"h","qubits":[3]}]})")));
}
