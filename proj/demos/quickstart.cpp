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

// Trains a quantum-kernel SVM with the ZZ feature map on ad hoc data, then
// a one-block hardware-efficient ansatz on moons data.

#include <iostream>

#include "qfm/qfm.hpp"

int main() {
  using namespace qfm;

  const auto adhoc = data::adhoc_split(/*seed=*/1);
  const auto zz = zz_feature_map_with_transform();
  const double acc = quantum_accuracy(zz, adhoc);
  std::cout << "ZZ feature map on ad hoc data: accuracy " << acc << ", gate cost " << gate_cost(zz.circuit) << '\n';

  const auto moons = data::moons_split(/*seed=*/1);
  const auto he = vqc::train(vqc::AnsatzSpec::he(1), moons);
  std::cout << "HE depth 1 on moons: accuracy " << he.accuracy << " after " << he.evals << " evaluations\n";
  std::cout << to_json(FeatureMap{he.circuit, FeatureTransform::None}).dump(2) << '\n';
}
