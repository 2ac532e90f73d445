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

#include <vector>

#include "qfm/data.hpp"
#include "qfm/kernels.hpp"
#include "qfm/svm.hpp"

namespace qfm {

/// Outcome of training an SVM on a dataset's train split and scoring it on
/// the test split.
struct Evaluation {
  double accuracy = 0.0;
  svm::SvmModel model;
  std::vector<double> test_decisions;
};

inline Evaluation fit_and_score(const Kernel& kernel, const data::Dataset& d, const svm::SvmConfig& cfg = {},
                                unsigned threads = 1) {
  if (!d.has_split()) throw ValidationError("dataset has no train/test split");
  const auto xtr = d.train_features();
  const auto xte = d.test_features();
  const auto ytr = d.train_labels();
  const auto yte = d.test_labels();
  Evaluation ev;
  ev.model = svm::train_smo(gram(kernel, xtr, threads), ytr, cfg);
  ev.test_decisions = svm::decision_values(ev.model, cross_gram(kernel, xte, xtr, threads));
  ev.accuracy = svm::accuracy(svm::predict_labels(ev.test_decisions), yte);
  return ev;
}

inline double quantum_accuracy(const FeatureMap& fm, const data::Dataset& d, const svm::SvmConfig& cfg = {},
                               long long shots = 0, std::uint64_t seed = 0, unsigned threads = 1) {
  return fit_and_score(QuantumKernel{fm, shots, seed}, d, cfg, threads).accuracy;
}

}  // namespace qfm
