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

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <random>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "qfm/errors.hpp"
#include "qfm/feature_map.hpp"
#include "qfm/parallel.hpp"
#include "qfm/qcore.hpp"
#include "qfm/random.hpp"

namespace qfm {

/// Rows index left samples, columns index right samples.
using KernelMatrix = Eigen::MatrixXd;

namespace detail {
inline void require_same_dimension(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw DimensionError("sample dimensions differ: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
}
}  // namespace detail

/// |<0^n| U^dagger(xi) U(xj) |0^n>|^2, computed by running U(xj) and then the
/// adjoint circuit at xi on the same register.
inline double quantum_kernel_exact(const Circuit& c, std::span<const double> xi, std::span<const double> xj) {
  detail::require_same_dimension(xi, xj);
  auto state = run(c, xj);
  evolve(state, c.adjoint(), xi);
  return std::norm(state[0]);
}

/// Frequency of the all-zero outcome over `shots` measurements of
/// U^dagger(xi) U(xj)|0^n>. Counting zeros among draws from the exact
/// output distribution is a Binomial(shots, p0) draw, which is what is sampled.
inline double quantum_kernel_sampled(const Circuit& c, std::span<const double> xi, std::span<const double> xj,
                                     long long shots, Rng& rng) {
  if (shots < 1) throw ValidationError("shots must be >= 1");
  const double p = std::clamp(quantum_kernel_exact(c, xi, xj), 0.0, 1.0);
  std::binomial_distribution<long long> draw(shots, p);
  return static_cast<double>(draw(rng)) / static_cast<double>(shots);
}

/// exp(-gamma * |xi - xj|^2)
inline double rbf_kernel(std::span<const double> xi, std::span<const double> xj, double gamma) {
  detail::require_same_dimension(xi, xj);
  if (!(gamma > 0.0)) throw ValidationError("rbf gamma must be positive");
  double d2 = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) d2 += (xi[k] - xj[k]) * (xi[k] - xj[k]);
  return std::exp(-gamma * d2);
}

inline double linear_kernel(std::span<const double> xi, std::span<const double> xj) {
  detail::require_same_dimension(xi, xj);
  double s = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) s += xi[k] * xj[k];
  return s;
}

/// entries(i, j) = kernel(A[i], B[j]). When A and B are the same object only
/// the upper triangle is evaluated and mirrored.
template <class KernelFn>
KernelMatrix kernel_matrix(KernelFn&& kernel, const SampleList& A, const SampleList& B, unsigned threads = 1) {
  const std::size_t dim = !A.empty() ? A.front().size() : (!B.empty() ? B.front().size() : 0);
  for (const auto& a : A) detail::require_same_dimension(a, A.front());
  for (const auto& b : B)
    if (b.size() != dim) throw DimensionError("kernel_matrix: samples do not share a dimension");
  const bool symmetric = (&A == &B);
  KernelMatrix k(static_cast<Eigen::Index>(A.size()), static_cast<Eigen::Index>(B.size()));
  parallel_for(A.size(), threads, [&](std::size_t i) {
    for (std::size_t j = symmetric ? i : 0; j < B.size(); ++j)
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = kernel(A[i], B[j]);
  });
  if (symmetric)
    for (Eigen::Index i = 0; i < k.rows(); ++i)
      for (Eigen::Index j = 0; j < i; ++j) k(i, j) = k(j, i);
  return k;
}

// Reference circuit -----------------------------------------------------------

/// Two repetitions of [H, H, RZ(2 x0), RZ(2 x1), CNOT, RZ(2 x2), CNOT] on 2
/// qubits. Expects samples prepared with FeatureTransform::ZzProduct, which
/// appends x2 = (pi - x0)(pi - x1).
inline Circuit zz_feature_map() {
  Circuit c(2);
  for (int rep = 0; rep < 2; ++rep) {
    c.add(Gate::h(0)).add(Gate::h(1));
    c.add(Gate::rz(0, AngleExpr::feature(0, 2.0)));
    c.add(Gate::rz(1, AngleExpr::feature(1, 2.0)));
    c.add(Gate::cnot(0, 1));
    c.add(Gate::rz(1, AngleExpr::feature(2, 2.0)));
    c.add(Gate::cnot(0, 1));
  }
  return c;
}

inline FeatureMap zz_feature_map_with_transform() { return {zz_feature_map(), FeatureTransform::ZzProduct}; }

// Kernel bindings used by the SVM pipelines -----------------------------------

struct LinearKernel {};
struct RbfKernel {
  double gamma = 1.0;
};
struct QuantumKernel {
  FeatureMap map;
  long long shots = 0;  ///< 0 selects exact evaluation
  std::uint64_t seed = 0;
};

using Kernel = std::variant<LinearKernel, RbfKernel, QuantumKernel>;

inline std::string kernel_name(const Kernel& k) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LinearKernel>) return "linear";
        else if constexpr (std::is_same_v<T, RbfKernel>) return "rbf";
        else return v.shots > 0 ? "quantum-sampled" : "quantum-exact";
      },
      k);
}

namespace detail {

inline std::vector<Statevector> feature_states(const FeatureMap& fm, const SampleList& xs, unsigned threads) {
  std::vector<Statevector> states(xs.size(), Statevector(fm.circuit.n_qubits));
  parallel_for(xs.size(), threads, [&](std::size_t i) {
    const auto x = fm.prepare(xs[i]);
    states[i] = run(fm.circuit, x);
  });
  return states;
}

// `stream` separates the train-train and test-train sampling streams.
inline KernelMatrix quantum_gram(const QuantumKernel& qk, const SampleList& A, const SampleList& B, bool symmetric,
                                 std::uint64_t stream, unsigned threads) {
  const auto sa = feature_states(qk.map, A, threads);
  const auto sb = symmetric ? std::vector<Statevector>{} : feature_states(qk.map, B, threads);
  const auto& right = symmetric ? sa : sb;
  KernelMatrix k(static_cast<Eigen::Index>(A.size()), static_cast<Eigen::Index>(B.size()));
  parallel_for(A.size(), threads, [&](std::size_t i) {
    for (std::size_t j = symmetric ? i : 0; j < B.size(); ++j) {
      double p = std::clamp(std::norm(sa[i].inner(right[j])), 0.0, 1.0);
      if (qk.shots > 0) {
        auto rng = make_rng(qk.seed, {stream, i, j});
        std::binomial_distribution<long long> draw(qk.shots, p);
        p = static_cast<double>(draw(rng)) / static_cast<double>(qk.shots);
      }
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p;
    }
  });
  if (symmetric)
    for (Eigen::Index i = 0; i < k.rows(); ++i)
      for (Eigen::Index j = 0; j < i; ++j) k(i, j) = k(j, i);
  return k;
}

}  // namespace detail

/// Symmetric Gram matrix of `train` under `kernel`.
inline KernelMatrix gram(const Kernel& kernel, const SampleList& train, unsigned threads = 1) {
  return std::visit(
      [&](const auto& k) -> KernelMatrix {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LinearKernel>)
          return kernel_matrix([](const Sample& a, const Sample& b) { return linear_kernel(a, b); }, train, train,
                               threads);
        else if constexpr (std::is_same_v<T, RbfKernel>)
          return kernel_matrix([&](const Sample& a, const Sample& b) { return rbf_kernel(a, b, k.gamma); }, train,
                               train, threads);
        else
          return detail::quantum_gram(k, train, train, true, 0, threads);
      },
      kernel);
}

/// Cross matrix with rows = `test`, columns = `train`.
inline KernelMatrix cross_gram(const Kernel& kernel, const SampleList& test, const SampleList& train,
                               unsigned threads = 1) {
  return std::visit(
      [&](const auto& k) -> KernelMatrix {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LinearKernel>)
          return kernel_matrix([](const Sample& a, const Sample& b) { return linear_kernel(a, b); }, test, train,
                               threads);
        else if constexpr (std::is_same_v<T, RbfKernel>)
          return kernel_matrix([&](const Sample& a, const Sample& b) { return rbf_kernel(a, b, k.gamma); }, test,
                               train, threads);
        else
          return detail::quantum_gram(k, test, train, false, 1, threads);
      },
      kernel);
}

/// Row-major, header-free CSV.
inline void write_kernel_csv(const std::string& path, const KernelMatrix& k) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    for (Eigen::Index j = 0; j < k.cols(); ++j) out << (j ? "," : "") << k(i, j);
    out << '\n';
  }
}

}  // namespace qfm
