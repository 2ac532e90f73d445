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
 * @file qcore.hpp
 * @brief Parameterized circuits and dense statevector simulation.
 *
 * Conventions used throughout the library:
 *  - Qubit 0 is the least significant bit of a basis-state index.
 *  - RotA(theta) = exp(-i theta A / 2) for A in {X, Y, Z}.
 *  - A phase written as exp(i phi Z) equals RotZ(-2 phi) up to a global
 *    phase; builders that encode such phases multiply by -2.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qfm/errors.hpp"

namespace qfm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using Sample = std::vector<double>;
using SampleList = std::vector<Sample>;

/// Largest register handled by the dense simulator.
inline constexpr int kMaxQubits = 10;

/// Affine data-dependent angle: constant + sum(coef * x[index]).
struct AngleExpr {
  double constant = 0.0;
  std::vector<std::pair<int, double>> coeffs;

  static AngleExpr fixed(double c) { return AngleExpr{c, {}}; }
  static AngleExpr feature(int index, double coef = 1.0) { return AngleExpr{0.0, {{index, coef}}}; }

  double evaluate(std::span<const double> x) const {
    double v = constant;
    for (const auto& [idx, c] : coeffs) {
      if (idx < 0 || static_cast<std::size_t>(idx) >= x.size())
        throw DimensionError("angle expression references feature " + std::to_string(idx) +
                             " but input has dimension " + std::to_string(x.size()));
      v += c * x[static_cast<std::size_t>(idx)];
    }
    return v;
  }

  bool is_data_independent() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const auto& p) { return p.second == 0.0; });
  }

  /// True when the expression is identically zero for every input.
  bool is_zero() const { return constant == 0.0 && is_data_independent(); }

  /// One past the largest referenced feature index (0 if none).
  int feature_dimension() const {
    int d = 0;
    for (const auto& [idx, c] : coeffs) d = std::max(d, idx + 1);
    return d;
  }

  /// Merges duplicate indices, drops exact-zero coefficients, sorts by index.
  AngleExpr normalized() const {
    AngleExpr out{constant, {}};
    auto sorted = coeffs;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [idx, c] : sorted) {
      if (!out.coeffs.empty() && out.coeffs.back().first == idx)
        out.coeffs.back().second += c;
      else
        out.coeffs.emplace_back(idx, c);
    }
    std::erase_if(out.coeffs, [](const auto& p) { return p.second == 0.0; });
    return out;
  }

  AngleExpr scaled(double s) const {
    AngleExpr out{constant * s, coeffs};
    for (auto& p : out.coeffs) p.second *= s;
    return out;
  }

  friend AngleExpr operator+(const AngleExpr& a, const AngleExpr& b) {
    AngleExpr out{a.constant + b.constant, a.coeffs};
    out.coeffs.insert(out.coeffs.end(), b.coeffs.begin(), b.coeffs.end());
    return out.normalized();
  }
  friend AngleExpr operator-(const AngleExpr& a, const AngleExpr& b) { return a + b.scaled(-1.0); }
  friend AngleExpr operator-(const AngleExpr& a) { return a.scaled(-1.0); }

  friend bool operator==(const AngleExpr&, const AngleExpr&) = default;
};

enum class GateKind { Identity, Hadamard, RotX, RotY, RotZ, CNOT, CZ };

inline std::string_view to_string(GateKind k) {
  switch (k) {
    case GateKind::Identity: return "id";
    case GateKind::Hadamard: return "h";
    case GateKind::RotX: return "rx";
    case GateKind::RotY: return "ry";
    case GateKind::RotZ: return "rz";
    case GateKind::CNOT: return "cnot";
    case GateKind::CZ: return "cz";
  }
  return "?";
}

inline GateKind gate_kind_from_string(std::string_view s) {
  for (auto k : {GateKind::Identity, GateKind::Hadamard, GateKind::RotX, GateKind::RotY,
                 GateKind::RotZ, GateKind::CNOT, GateKind::CZ})
    if (to_string(k) == s) return k;
  throw ValidationError("unknown gate kind '" + std::string(s) + "'");
}

/// A gate on one or two wires. For CNOT/CZ, `qubit` is the control and
/// `target` the target; single-qubit gates leave `target` at -1.
struct Gate {
  GateKind kind = GateKind::Identity;
  int qubit = 0;
  int target = -1;
  AngleExpr angle;

  static Gate identity(int q) { return {GateKind::Identity, q, -1, {}}; }
  static Gate h(int q) { return {GateKind::Hadamard, q, -1, {}}; }
  static Gate rx(int q, AngleExpr a) { return {GateKind::RotX, q, -1, std::move(a)}; }
  static Gate ry(int q, AngleExpr a) { return {GateKind::RotY, q, -1, std::move(a)}; }
  static Gate rz(int q, AngleExpr a) { return {GateKind::RotZ, q, -1, std::move(a)}; }
  static Gate rotation(GateKind axis, int q, AngleExpr a) { return {axis, q, -1, std::move(a)}; }
  static Gate cnot(int control, int tgt) { return {GateKind::CNOT, control, tgt, {}}; }
  static Gate cz(int control, int tgt) { return {GateKind::CZ, control, tgt, {}}; }

  bool is_rotation() const {
    return kind == GateKind::RotX || kind == GateKind::RotY || kind == GateKind::RotZ;
  }
  bool is_two_qubit() const { return kind == GateKind::CNOT || kind == GateKind::CZ; }
  bool acts_on(int q) const { return qubit == q || (is_two_qubit() && target == q); }
  bool is_data_independent() const { return !is_rotation() || angle.is_data_independent(); }

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Weighted physical cost of one gate: rotations 1, Hadamard 2, CNOT/CZ 5.
inline int gate_cost(const Gate& g) {
  switch (g.kind) {
    case GateKind::Identity: return 0;
    case GateKind::Hadamard: return 2;
    case GateKind::RotX:
    case GateKind::RotY:
    case GateKind::RotZ: return 1;
    case GateKind::CNOT:
    case GateKind::CZ: return 5;
  }
  return 0;
}

struct Circuit {
  int n_qubits = 1;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(int n) : n_qubits(n) {
    if (n < 1) throw ValidationError("circuit needs at least one qubit");
  }
  Circuit(int n, std::vector<Gate> gs) : Circuit(n) {
    for (auto& g : gs) add(std::move(g));
  }

  Circuit& add(Gate g) {
    check_gate(g);
    gates.push_back(std::move(g));
    return *this;
  }

  void check_gate(const Gate& g) const {
    auto in_range = [&](int q) { return q >= 0 && q < n_qubits; };
    if (!in_range(g.qubit))
      throw ValidationError("gate qubit " + std::to_string(g.qubit) + " outside register of " +
                            std::to_string(n_qubits));
    if (g.is_two_qubit()) {
      if (!in_range(g.target))
        throw ValidationError("gate target " + std::to_string(g.target) + " outside register");
      if (g.target == g.qubit) throw ValidationError("two-qubit gate with control == target");
    }
  }

  void validate() const {
    if (n_qubits < 1) throw ValidationError("circuit needs at least one qubit");
    for (const auto& g : gates) check_gate(g);
  }

  /// Features the circuit reads: one past the largest referenced index.
  int feature_dimension() const {
    int d = 0;
    for (const auto& g : gates)
      if (g.is_rotation()) d = std::max(d, g.angle.feature_dimension());
    return d;
  }

  /// U(x)^dagger: reversed order, negated angles. H, CNOT, CZ are self-adjoint.
  Circuit adjoint() const {
    Circuit out(n_qubits);
    out.gates.reserve(gates.size());
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
      Gate g = *it;
      if (g.is_rotation()) g.angle = -g.angle;
      out.gates.push_back(std::move(g));
    }
    return out;
  }

  /// This circuit followed by `next` (on the wider of the two registers).
  Circuit then(const Circuit& next) const {
    Circuit out(std::max(n_qubits, next.n_qubits));
    out.gates = gates;
    out.gates.insert(out.gates.end(), next.gates.begin(), next.gates.end());
    return out;
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

inline int gate_cost(const Circuit& c) {
  int total = 0;
  for (const auto& g : c.gates) total += gate_cost(g);
  return total;
}

/// 2x2 matrix of a single-qubit gate at a concrete angle.
inline Eigen::Matrix2cd single_qubit_matrix(GateKind kind, double theta = 0.0) {
  using std::numbers::sqrt2;
  const Complex i{0.0, 1.0};
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Eigen::Matrix2cd m;
  switch (kind) {
    case GateKind::Identity: m << 1, 0, 0, 1; break;
    case GateKind::Hadamard: m << 1 / sqrt2, 1 / sqrt2, 1 / sqrt2, -1 / sqrt2; break;
    case GateKind::RotX: m << c, -i * s, -i * s, c; break;
    case GateKind::RotY: m << c, -s, s, c; break;
    case GateKind::RotZ: m << std::exp(-i * (theta / 2)), 0, 0, std::exp(i * (theta / 2)); break;
    default: throw ValidationError("not a single-qubit gate");
  }
  return m;
}

class Statevector {
 public:
  explicit Statevector(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
      throw CapacityError("statevector supports 1.." + std::to_string(kMaxQubits) + " qubits, got " +
                          std::to_string(n_qubits));
    amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps_[0] = 1.0;
  }

  static Statevector basis(int n_qubits, std::size_t index) {
    Statevector s(n_qubits);
    if (index >= s.amps_.size()) throw ValidationError("basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
  }

  int n_qubits() const noexcept { return n_; }
  std::size_t size() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

  /// <this|other>
  Complex inner(const Statevector& other) const {
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
    return s;
  }

  void apply(const Gate& g, std::span<const double> x) {
    if (g.qubit < 0 || g.qubit >= n_ || (g.is_two_qubit() && (g.target < 0 || g.target >= n_)))
      throw ValidationError("gate acts outside the register");
    switch (g.kind) {
      case GateKind::Identity: return;
      case GateKind::CNOT: {
        const std::size_t cm = std::size_t{1} << g.qubit, tm = std::size_t{1} << g.target;
        for (std::size_t i = 0; i < amps_.size(); ++i)
          if ((i & cm) && !(i & tm)) std::swap(amps_[i], amps_[i | tm]);
        return;
      }
      case GateKind::CZ: {
        const std::size_t cm = std::size_t{1} << g.qubit, tm = std::size_t{1} << g.target;
        for (std::size_t i = 0; i < amps_.size(); ++i)
          if ((i & cm) && (i & tm)) amps_[i] = -amps_[i];
        return;
      }
      default: break;
    }
    const double theta = g.is_rotation() ? g.angle.evaluate(x) : 0.0;
    apply_1q(single_qubit_matrix(g.kind, theta), g.qubit);
  }

  void apply_1q(const Eigen::Matrix2cd& m, int q) {
    const std::size_t mask = std::size_t{1} << q;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & mask) continue;
      const Complex a0 = amps_[i], a1 = amps_[i | mask];
      amps_[i] = m(0, 0) * a0 + m(0, 1) * a1;
      amps_[i | mask] = m(1, 0) * a0 + m(1, 1) * a1;
    }
  }

 private:
  int n_;
  std::vector<Complex> amps_;
};

inline Statevector apply_gate(Statevector state, const Gate& g, std::span<const double> x) {
  state.apply(g, x);
  return state;
}

/// Applies every gate of `c` to `state` in order.
inline void evolve(Statevector& state, const Circuit& c, std::span<const double> x) {
  if (state.n_qubits() != c.n_qubits) throw ValidationError("statevector/circuit width mismatch");
  for (const auto& g : c.gates) state.apply(g, x);
}

/// U(x)|0^n>
inline Statevector run(const Circuit& c, std::span<const double> x) {
  Statevector s(c.n_qubits);
  evolve(s, c, x);
  return s;
}

/// Dense 2^n x 2^n matrix of U(x); column j is U(x)|j>.
inline CMatrix unitary_of(const Circuit& c, std::span<const double> x) {
  if (c.n_qubits > kMaxQubits)
    throw CapacityError("unitary extraction limited to " + std::to_string(kMaxQubits) + " qubits");
  const std::size_t dim = std::size_t{1} << c.n_qubits;
  CMatrix u(dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    auto s = Statevector::basis(c.n_qubits, j);
    evolve(s, c, x);
    for (std::size_t i = 0; i < dim; ++i) u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s[i];
  }
  return u;
}

}  // namespace qfm
