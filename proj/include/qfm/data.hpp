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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qfm/errors.hpp"
#include "qfm/kernels.hpp"
#include "qfm/linalg.hpp"
#include "qfm/qcore.hpp"
#include "qfm/random.hpp"

namespace qfm::data {

/// Labelled samples plus an optional train/test partition (row indices).
struct Dataset {
  SampleList features;
  std::vector<int> labels;
  std::vector<int> train;
  std::vector<int> test;

  std::size_t size() const { return features.size(); }
  std::size_t dimension() const { return features.empty() ? 0 : features.front().size(); }
  bool has_split() const { return !train.empty() && !test.empty(); }

  SampleList rows(const std::vector<int>& idx) const {
    SampleList out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(features[static_cast<std::size_t>(i)]);
    return out;
  }
  std::vector<int> labels_of(const std::vector<int>& idx) const {
    std::vector<int> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(labels[static_cast<std::size_t>(i)]);
    return out;
  }
  SampleList train_features() const { return rows(train); }
  SampleList test_features() const { return rows(test); }
  std::vector<int> train_labels() const { return labels_of(train); }
  std::vector<int> test_labels() const { return labels_of(test); }

  void validate() const {
    if (labels.size() != features.size()) throw ValidationError("label count does not match sample count");
    for (const auto& f : features)
      if (f.size() != dimension()) throw DimensionError("samples do not share a dimension");
    for (int y : labels)
      if (y != 1 && y != -1) throw ValidationError("labels must be +1 or -1");
    if (train.empty() && test.empty()) return;
    std::vector<int> all(train);
    all.insert(all.end(), test.begin(), test.end());
    std::sort(all.begin(), all.end());
    std::vector<int> want(size());
    std::iota(want.begin(), want.end(), 0);
    if (all != want) throw ValidationError("split must partition the rows");
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Shuffles rows in place with a seeded permutation.
inline void shuffle_rows(Dataset& d, Rng& rng) {
  std::vector<std::size_t> perm(d.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Dataset out;
  for (auto p : perm) {
    out.features.push_back(d.features[p]);
    out.labels.push_back(d.labels[p]);
  }
  d.features = std::move(out.features);
  d.labels = std::move(out.labels);
}

/// Two interleaving half circles: class +1 on (cos t, sin t), class -1 on
/// (1 - cos t, 0.5 - sin t), t evenly spaced over [0, pi], then isotropic
/// Gaussian noise and a seeded shuffle.
inline Dataset make_moons(int n, double noise_sd, std::uint64_t seed) {
  if (n < 4) throw ValidationError("make_moons needs n >= 4");
  if (n % 2) throw ValidationError("make_moons needs an even sample count");
  if (noise_sd < 0.0) throw ValidationError("noise must be non-negative");
  const int half = n / 2;
  Dataset d;
  for (int cls = 0; cls < 2; ++cls)
    for (int k = 0; k < half; ++k) {
      const double t = std::numbers::pi * k / (half - 1);
      if (cls == 0) d.features.push_back({std::cos(t), std::sin(t)});
      else d.features.push_back({1.0 - std::cos(t), 0.5 - std::sin(t)});
      d.labels.push_back(cls == 0 ? 1 : -1);
    }
  auto rng = make_rng(seed, {0x6d6f6f6e});
  if (noise_sd > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_sd);
    for (auto& f : d.features)
      for (auto& v : f) v += noise(rng);
  }
  shuffle_rows(d, rng);
  return d;
}

/// Parity observable V^dagger (Z x Z) V whose sign labels the ad hoc data.
inline CMatrix adhoc_observable(std::uint64_t seed) {
  auto rng = make_rng(seed, {0xad0c});
  const CMatrix v = haar_unitary(4, rng);
  CMatrix zz = CMatrix::Zero(4, 4);
  zz.diagonal() << 1.0, -1.0, -1.0, 1.0;
  return v.adjoint() * zz * v;
}

/// <Phi(x)| O |Phi(x)> for the ZZ feature-map state of x.
inline double adhoc_margin(std::span<const double> x, const CMatrix& observable) {
  const auto state = run(zz_feature_map(), zz_augment(x));
  Eigen::VectorXcd psi(4);
  for (Eigen::Index i = 0; i < 4; ++i) psi(i) = state[static_cast<std::size_t>(i)];
  return (psi.adjoint() * observable * psi)(0, 0).real();
}

/// Rejection-samples x uniform over [0, 2pi]^2 and keeps points whose
/// parity margin satisfies |m(x)| >= gap, labelled by sign(m). Classes are
/// balanced (ceil(n/2) positive, floor(n/2) negative).
inline Dataset make_adhoc(int n, double gap, std::uint64_t seed, long max_rejections = 1000000) {
  if (n < 4) throw ValidationError("make_adhoc needs n >= 4");
  if (!(gap > 0.0)) throw ValidationError("gap must be positive");
  const CMatrix obs = adhoc_observable(seed);
  auto rng = make_rng(seed, {0x5a3e});
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const int want_pos = (n + 1) / 2, want_neg = n / 2;
  int pos = 0, neg = 0;
  long rejected = 0;
  Dataset d;
  while (pos < want_pos || neg < want_neg) {
    Sample x{angle(rng), angle(rng)};
    const double m = adhoc_margin(x, obs);
    const bool accept = std::abs(m) >= gap && (m > 0 ? pos < want_pos : neg < want_neg);
    if (!accept) {
      if (++rejected > max_rejections)
        throw ValidationError("make_adhoc: acceptance stalled after " + std::to_string(max_rejections) +
                              " rejections; lower the gap");
      continue;
    }
    (m > 0 ? pos : neg)++;
    d.features.push_back(std::move(x));
    d.labels.push_back(m > 0 ? 1 : -1);
  }
  return d;
}

/// Stratified split: each class contributes round(train_fraction * count)
/// rows to train. Both splits must contain both classes.
inline Dataset split(Dataset d, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ValidationError("train_fraction must be in (0, 1)");
  auto rng = make_rng(seed, {0x5b1});
  d.train.clear();
  d.test.clear();
  for (int cls : {1, -1}) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d.labels[i] == cls) idx.push_back(static_cast<int>(i));
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto n_train = static_cast<std::size_t>(std::lround(train_fraction * static_cast<double>(idx.size())));
    if (n_train == 0 || n_train >= idx.size())
      throw DegenerateLabelsError("split leaves a partition without class " + std::to_string(cls));
    d.train.insert(d.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    d.test.insert(d.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  }
  std::sort(d.train.begin(), d.train.end());
  std::sort(d.test.begin(), d.test.end());
  return d;
}

/// Joins separately stored train and test sets into one split dataset.
inline Dataset join(const Dataset& train, const Dataset& test) {
  if (train.dimension() != test.dimension()) throw DimensionError("train/test dimensions differ");
  Dataset d;
  for (std::size_t i = 0; i < train.size(); ++i) {
    d.features.push_back(train.features[i]);
    d.labels.push_back(train.labels[i]);
    d.train.push_back(static_cast<int>(i));
  }
  for (std::size_t i = 0; i < test.size(); ++i) {
    d.features.push_back(test.features[i]);
    d.labels.push_back(test.labels[i]);
    d.test.push_back(static_cast<int>(train.size() + i));
  }
  return d;
}

/// Writes `x1,...,xd,label` with labels as +1/-1.
inline void write_csv(std::ostream& out, const Dataset& d, const std::vector<int>& rows) {
  for (std::size_t k = 0; k < d.dimension(); ++k) out << 'x' << (k + 1) << ',';
  out << "label\n" << std::setprecision(17);
  for (int r : rows) {
    for (double v : d.features[static_cast<std::size_t>(r)]) out << v << ',';
    out << (d.labels[static_cast<std::size_t>(r)] > 0 ? "+1" : "-1") << '\n';
  }
}

inline std::vector<int> all_rows(const Dataset& d) {
  std::vector<int> rows(d.size());
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

inline void save_csv(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_csv(out, d, all_rows(d));
}

inline Dataset read_csv(std::istream& in) {
  std::string line;
  long line_no = 0;
  std::size_t columns = 0;
  Dataset d;
  auto fields_of = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = fields_of(line);
    if (columns == 0) {
      if (fields.size() < 2 || fields.back() != "label")
        throw ParseError("header must be x1,...,xd,label", line_no);
      columns = fields.size();
      continue;
    }
    if (fields.size() != columns)
      throw ParseError("expected " + std::to_string(columns) + " fields, got " + std::to_string(fields.size()),
                       line_no);
    Sample x;
    for (std::size_t k = 0; k + 1 < columns; ++k) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(fields[k], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != fields[k].size()) throw ParseError("bad number '" + fields[k] + "'", line_no);
      x.push_back(v);
    }
    const auto& lab = fields.back();
    int y;
    if (lab == "+1" || lab == "1") y = 1;
    else if (lab == "-1") y = -1;
    else throw ParseError("label must be +1 or -1, got '" + lab + "'", line_no);
    d.features.push_back(std::move(x));
    d.labels.push_back(y);
  }
  if (columns == 0) throw ParseError("empty CSV", 0);
  return d;
}

inline Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_csv(in);
}

// Reproduction defaults: 140 samples split 100 train / 40 test.
inline constexpr int kDefaultSamples = 140;
inline constexpr double kDefaultTrainFraction = 100.0 / 140.0;
inline constexpr double kDefaultMoonsNoise = 0.1;
inline constexpr double kDefaultAdhocGap = 0.3;

inline Dataset moons_split(std::uint64_t seed, int n = kDefaultSamples, double noise = kDefaultMoonsNoise) {
  return split(make_moons(n, noise, seed), kDefaultTrainFraction, seed);
}

inline Dataset adhoc_split(std::uint64_t seed, int n = kDefaultSamples, double gap = kDefaultAdhocGap) {
  return split(make_adhoc(n, gap, seed), kDefaultTrainFraction, seed);
}

}  // namespace qfm::data
