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
 * @file gasearch.hpp
 * @brief Genetic search over bitstring-encoded feature-map circuits.
 *
 * Each gene is 6 bits. The first 3 bits (MSB first) select the gate from
 * kGeneTable; for rotations the last 3 bits k select the data coefficient
 * (k + 1) * pi / 8, i.e. pi/8 .. pi. Gene i acts on qubit i mod n_qubits; a
 * CNOT gene couples qubit i mod n to (i + 1) mod n. A rotation on qubit q
 * encodes feature q mod n_features.
 *
 * Individuals are scored with the penalty fitness
 *     gate_cost + w / accuracy^2     (lower is better)
 * where accuracy is the test accuracy of a QSVM using the decoded circuit.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "qfm/data.hpp"
#include "qfm/errors.hpp"
#include "qfm/log.hpp"
#include "qfm/parallel.hpp"
#include "qfm/pipeline.hpp"
#include "qfm/qcore.hpp"
#include "qfm/random.hpp"

namespace qfm::ga {

inline constexpr int kGeneBits = 6;

/// Gate selected by the first three bits of a gene. Codes 6 and 7 repeat
/// the cheap gates.
inline constexpr std::array<GateKind, 8> kGeneTable = {
    GateKind::Identity, GateKind::Hadamard, GateKind::CNOT, GateKind::RotX,
    GateKind::RotY,     GateKind::RotZ,     GateKind::Identity, GateKind::Hadamard};

inline constexpr double kCoefficientStep = std::numbers::pi / 8.0;

struct Chromosome {
  std::vector<std::uint8_t> bits;

  std::size_t genes() const { return bits.size() / kGeneBits; }
  friend bool operator==(const Chromosome&, const Chromosome&) = default;
  friend auto operator<=>(const Chromosome&, const Chromosome&) = default;
};

inline std::string to_string(const Chromosome& c) {
  std::string s;
  for (std::size_t i = 0; i < c.bits.size(); ++i) {
    if (i && i % kGeneBits == 0) s += '|';
    s += c.bits[i] ? '1' : '0';
  }
  return s;
}

inline Chromosome random_chromosome(std::size_t genes, Rng& rng) {
  Chromosome c;
  c.bits.resize(genes * kGeneBits);
  std::bernoulli_distribution coin(0.5);
  for (auto& b : c.bits) b = coin(rng) ? 1 : 0;
  return c;
}

inline Circuit decode(const Chromosome& c, int n_qubits, int n_features = 2) {
  if (c.bits.size() % kGeneBits != 0)
    throw ValidationError("chromosome length " + std::to_string(c.bits.size()) + " is not a multiple of 6");
  if (n_features < 1) throw ValidationError("n_features must be >= 1");
  Circuit out(n_qubits);
  for (std::size_t i = 0; i < c.genes(); ++i) {
    const auto* g = &c.bits[i * kGeneBits];
    const int code = (g[0] << 2) | (g[1] << 1) | g[2];
    const int k = (g[3] << 2) | (g[4] << 1) | g[5];
    const int q = static_cast<int>(i % static_cast<std::size_t>(n_qubits));
    const GateKind kind = kGeneTable[static_cast<std::size_t>(code)];
    switch (kind) {
      case GateKind::Identity: out.add(Gate::identity(q)); break;
      case GateKind::Hadamard: out.add(Gate::h(q)); break;
      case GateKind::CNOT:
        // A single wire has nothing to couple to.
        if (n_qubits == 1) out.add(Gate::identity(q));
        else out.add(Gate::cnot(q, (q + 1) % n_qubits));
        break;
      default:
        out.add(Gate::rotation(kind, q, AngleExpr::feature(q % n_features, (k + 1) * kCoefficientStep)));
    }
  }
  return out;
}

/// Canonical 6-bit gene for a decoded gate (inverse of the decode table on
/// its image). Non-rotations get zero coefficient bits.
inline std::array<std::uint8_t, kGeneBits> encode_gene(const Gate& g) {
  int code = 0, k = 0;
  switch (g.kind) {
    case GateKind::Identity: code = 0; break;
    case GateKind::Hadamard: code = 1; break;
    case GateKind::CNOT: code = 2; break;
    case GateKind::RotX:
    case GateKind::RotY:
    case GateKind::RotZ: {
      code = g.kind == GateKind::RotX ? 3 : g.kind == GateKind::RotY ? 4 : 5;
      const double coef = g.angle.coeffs.empty() ? kCoefficientStep : g.angle.coeffs.front().second;
      k = std::clamp(static_cast<int>(std::lround(coef / kCoefficientStep)) - 1, 0, 7);
      break;
    }
    case GateKind::CZ: throw ValidationError("CZ has no gene encoding");
  }
  return {static_cast<std::uint8_t>((code >> 2) & 1), static_cast<std::uint8_t>((code >> 1) & 1),
          static_cast<std::uint8_t>(code & 1),        static_cast<std::uint8_t>((k >> 2) & 1),
          static_cast<std::uint8_t>((k >> 1) & 1),    static_cast<std::uint8_t>(k & 1)};
}

inline Chromosome encode(const Circuit& c) {
  Chromosome out;
  for (const auto& g : c.gates) {
    const auto gene = encode_gene(g);
    out.bits.insert(out.bits.end(), gene.begin(), gene.end());
  }
  return out;
}

enum class MutationMode {
  FlipOneBit,  ///< flip one uniformly chosen bit
  Randomize,   ///< redraw every bit
};

/// With probability `prob`, applies the mutation; otherwise returns the input.
inline Chromosome mutate(Chromosome c, Rng& rng, double prob = 0.8, MutationMode mode = MutationMode::FlipOneBit) {
  if (c.bits.empty()) return c;
  if (!std::bernoulli_distribution(prob)(rng)) return c;
  if (mode == MutationMode::FlipOneBit) {
    const auto pos = std::uniform_int_distribution<std::size_t>(0, c.bits.size() - 1)(rng);
    c.bits[pos] ^= 1;
  } else {
    std::bernoulli_distribution coin(0.5);
    for (auto& b : c.bits) b = coin(rng) ? 1 : 0;
  }
  return c;
}

/// Single-point crossover at gene boundary `cut` in [0, genes].
inline std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b, std::size_t cut) {
  if (a.bits.size() != b.bits.size()) throw ValidationError("crossover parents differ in length");
  if (cut > a.genes()) throw ValidationError("crossover cut beyond chromosome");
  const auto pos = static_cast<std::ptrdiff_t>(cut * kGeneBits);
  Chromosome c1, c2;
  c1.bits.assign(a.bits.begin(), a.bits.begin() + pos);
  c1.bits.insert(c1.bits.end(), b.bits.begin() + pos, b.bits.end());
  c2.bits.assign(b.bits.begin(), b.bits.begin() + pos);
  c2.bits.insert(c2.bits.end(), a.bits.begin() + pos, a.bits.end());
  return {std::move(c1), std::move(c2)};
}

inline std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, Rng& rng) {
  const auto cut = std::uniform_int_distribution<std::size_t>(0, a.genes())(rng);
  return crossover_at(a, b, cut);
}

/// How QSVM accuracy is measured inside the fitness.
struct EvalMode {
  long long shots = 0;  ///< 0 = exact kernel
  std::uint64_t seed = 0;
};

struct FitnessResult {
  double fitness = std::numeric_limits<double>::infinity();
  double accuracy = 0.0;
  int cost = 0;
  bool failed = false;
};

/// gate_cost + w / a^2, or +inf when a == 0.
inline double penalty_fitness(int cost, double accuracy, double w) {
  if (accuracy <= 0.0) return std::numeric_limits<double>::infinity();
  return cost + w / (accuracy * accuracy);
}

inline FitnessResult fitness(const Circuit& circuit, const data::Dataset& d, double w,
                             const svm::SvmConfig& svm_cfg = {}, const EvalMode& mode = {}) {
  FitnessResult r;
  r.cost = gate_cost(circuit);
  try {
    r.accuracy = quantum_accuracy(FeatureMap{circuit, FeatureTransform::None}, d, svm_cfg, mode.shots, mode.seed);
  } catch (const Error& e) {
    log::warn(std::string("fitness evaluation failed, scoring as worst: ") + e.what());
    r.failed = true;
    r.accuracy = 0.0;
  }
  r.fitness = penalty_fitness(r.cost, r.accuracy, w);
  return r;
}

struct GaConfig {
  int population = 30;
  int genes = 8;
  double weight = 20.0;
  int pool_size = 10;
  double mutation_prob = 0.8;
  MutationMode mutation_mode = MutationMode::FlipOneBit;
  int generations = 30;
  int n_qubits = 2;
  long long shots = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  svm::SvmConfig svm;

  void validate() const {
    if (population < 1 || genes < 1) throw ValidationError("population and genes must be >= 1");
    if (pool_size < 2) throw ValidationError("pool_size must be >= 2");
    if (population < pool_size) throw ValidationError("population must be >= pool_size");
    if (!(weight > 0.0)) throw ValidationError("penalty weight must be positive");
    if (mutation_prob < 0.0 || mutation_prob > 1.0) throw ValidationError("mutation_prob must be in [0, 1]");
    if (generations < 0) throw ValidationError("generations must be >= 0");
    if (n_qubits < 1 || n_qubits > kMaxQubits) throw ValidationError("n_qubits out of range");
    if (shots < 0) throw ValidationError("shots must be >= 0");
  }
};

struct GenerationStats {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;  ///< over finite fitness values
  double best_accuracy = 0.0;
  int best_cost = 0;
};

struct Individual {
  Chromosome chromosome;
  Circuit circuit;
  FitnessResult score;
};

struct GaResult {
  Individual best;
  std::vector<GenerationStats> history;
};

/// Elitist truncation GA: every generation all individuals are re-scored,
/// the `pool_size` best survive unchanged, and the rest of the population is
/// bred from uniformly paired pool parents (crossover, then mutation).
inline GaResult evolve(const GaConfig& cfg, const data::Dataset& d) {
  cfg.validate();
  if (!d.has_split()) throw ValidationError("GA needs a dataset with a train/test split");
  const int n_features = static_cast<int>(d.dimension());
  const auto M = static_cast<std::size_t>(cfg.population);

  auto init_rng = make_rng(cfg.seed, {0x1417});
  std::vector<Chromosome> pop;
  pop.reserve(M);
  for (std::size_t i = 0; i < M; ++i) pop.push_back(random_chromosome(static_cast<std::size_t>(cfg.genes), init_rng));

  GaResult result;
  bool have_best = false;

  for (int gen = 0;; ++gen) {
    std::vector<FitnessResult> scores(M);
    std::vector<Circuit> circuits(M);
    for (std::size_t i = 0; i < M; ++i) circuits[i] = decode(pop[i], cfg.n_qubits, n_features);

    if (cfg.shots == 0) {
      // Deterministic fitness: score each distinct chromosome once per generation.
      std::map<Chromosome, std::size_t> first;
      std::vector<std::size_t> unique;
      for (std::size_t i = 0; i < M; ++i)
        if (first.emplace(pop[i], i).second) unique.push_back(i);
      parallel_for(unique.size(), cfg.threads, [&](std::size_t u) {
        const auto i = unique[u];
        scores[i] = fitness(circuits[i], d, cfg.weight, cfg.svm, EvalMode{});
      });
      for (std::size_t i = 0; i < M; ++i) scores[i] = scores[first.at(pop[i])];
    } else {
      parallel_for(M, cfg.threads, [&](std::size_t i) {
        const EvalMode mode{cfg.shots, derive_seed(cfg.seed, {0xf17, static_cast<std::uint64_t>(gen), i})};
        scores[i] = fitness(circuits[i], d, cfg.weight, cfg.svm, mode);
      });
    }

    std::vector<std::size_t> order(M);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a].fitness < scores[b].fitness; });

    GenerationStats st;
    st.generation = gen;
    st.best_fitness = scores[order[0]].fitness;
    st.best_accuracy = scores[order[0]].accuracy;
    st.best_cost = scores[order[0]].cost;
    double sum = 0.0;
    int finite = 0;
    for (const auto& s : scores)
      if (std::isfinite(s.fitness)) sum += s.fitness, ++finite;
    st.mean_fitness = finite ? sum / finite : std::numeric_limits<double>::infinity();
    result.history.push_back(st);
    log::debug("generation " + std::to_string(gen) + " best " + std::to_string(st.best_fitness));

    const auto champion = order[0];
    if (!have_best || scores[champion].fitness < result.best.score.fitness) {
      result.best = Individual{pop[champion], circuits[champion], scores[champion]};
      have_best = true;
    }

    if (gen == cfg.generations) break;

    const auto pool_n = static_cast<std::size_t>(cfg.pool_size);
    std::vector<Chromosome> next;
    next.reserve(M);
    for (std::size_t k = 0; k < pool_n; ++k) next.push_back(pop[order[k]]);
    while (next.size() < M) {
      auto rng = make_rng(cfg.seed, {0xb4ee, static_cast<std::uint64_t>(gen), next.size()});
      std::uniform_int_distribution<std::size_t> pick(0, pool_n - 1);
      const auto pa = pick(rng);
      auto pb = pick(rng);
      if (pb == pa) pb = (pb + 1) % pool_n;
      auto [c1, c2] = crossover(pop[order[pa]], pop[order[pb]], rng);
      next.push_back(mutate(std::move(c1), rng, cfg.mutation_prob, cfg.mutation_mode));
      if (next.size() < M) next.push_back(mutate(std::move(c2), rng, cfg.mutation_prob, cfg.mutation_mode));
    }
    pop = std::move(next);
  }
  return result;
}

}  // namespace qfm::ga
