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

#include <numbers>
#include <span>
#include <string>
#include <string_view>

#include "qfm/qcore.hpp"

namespace qfm {

/// Classical preprocessing applied to a sample before it reaches a circuit.
/// The ZZ feature map needs the non-affine product (pi - x0)(pi - x1); it is
/// appended as an extra feature so rotation angles stay affine.
enum class FeatureTransform { None, ZzProduct };

inline std::string_view to_string(FeatureTransform t) {
  return t == FeatureTransform::ZzProduct ? "zz_product" : "none";
}

inline FeatureTransform feature_transform_from_string(std::string_view s) {
  if (s == "none" || s.empty()) return FeatureTransform::None;
  if (s == "zz_product") return FeatureTransform::ZzProduct;
  throw ValidationError("unknown feature transform '" + std::string(s) + "'");
}

/// x -> (x0, ..., x_{d-1}, (pi - x0)(pi - x1))
inline Sample zz_augment(std::span<const double> x) {
  if (x.size() < 2) throw DimensionError("zz_product transform needs at least 2 features");
  using std::numbers::pi;
  Sample out(x.begin(), x.end());
  out.push_back((pi - x[0]) * (pi - x[1]));
  return out;
}

/// A circuit together with the preprocessing its angles expect.
struct FeatureMap {
  Circuit circuit;
  FeatureTransform transform = FeatureTransform::None;

  Sample prepare(std::span<const double> x) const {
    if (transform == FeatureTransform::ZzProduct) return zz_augment(x);
    return Sample(x.begin(), x.end());
  }

  SampleList prepare_all(const SampleList& xs) const {
    SampleList out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(prepare(x));
    return out;
  }

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;
};

}  // namespace qfm
