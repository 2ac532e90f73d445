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

#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qfm/errors.hpp"
#include "qfm/feature_map.hpp"
#include "qfm/qcore.hpp"

namespace qfm {

using json = nlohmann::json;

inline json to_json(const AngleExpr& a) {
  json coeffs = json::array();
  for (const auto& [idx, c] : a.coeffs) coeffs.push_back({idx, c});
  return {{"constant", a.constant}, {"coeffs", coeffs}};
}

inline AngleExpr angle_from_json(const json& j) {
  AngleExpr a;
  a.constant = j.value("constant", 0.0);
  if (j.contains("coeffs"))
    for (const auto& p : j.at("coeffs")) {
      if (!p.is_array() || p.size() != 2) throw ParseError("angle coefficient must be [index, coef]", 0);
      a.coeffs.emplace_back(p[0].get<int>(), p[1].get<double>());
    }
  return a;
}

inline json to_json(const Gate& g) {
  json j{{"kind", std::string(to_string(g.kind))}};
  j["qubits"] = g.is_two_qubit() ? json::array({g.qubit, g.target}) : json::array({g.qubit});
  if (g.is_rotation()) j["angle"] = to_json(g.angle);
  return j;
}

inline Gate gate_from_json(const json& j) {
  Gate g;
  g.kind = gate_kind_from_string(j.at("kind").get<std::string>());
  const auto& qs = j.at("qubits");
  const std::size_t want = g.is_two_qubit() ? 2 : 1;
  if (!qs.is_array() || qs.size() != want)
    throw ParseError("gate '" + std::string(to_string(g.kind)) + "' expects " + std::to_string(want) +
                         " qubit(s)",
                     0);
  g.qubit = qs[0].get<int>();
  if (want == 2) g.target = qs[1].get<int>();
  if (g.is_rotation()) g.angle = j.contains("angle") ? angle_from_json(j.at("angle")) : AngleExpr{};
  return g;
}

inline json to_json(const Circuit& c) {
  json gates = json::array();
  for (const auto& g : c.gates) gates.push_back(to_json(g));
  return {{"n_qubits", c.n_qubits}, {"gates", gates}};
}

inline Circuit circuit_from_json(const json& j) {
  try {
    Circuit c(j.at("n_qubits").get<int>());
    for (const auto& g : j.at("gates")) c.add(gate_from_json(g));
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed circuit JSON: ") + e.what(), 0);
  }
}

/// Circuit JSON plus an optional "feature_transform" key.
inline json to_json(const FeatureMap& fm) {
  json j = to_json(fm.circuit);
  if (fm.transform != FeatureTransform::None) j["feature_transform"] = std::string(to_string(fm.transform));
  return j;
}

inline FeatureMap feature_map_from_json(const json& j) {
  FeatureMap fm{circuit_from_json(j), FeatureTransform::None};
  if (j.contains("feature_transform"))
    fm.transform = feature_transform_from_string(j.at("feature_transform").get<std::string>());
  return fm;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what(), 0);
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
}

inline FeatureMap load_feature_map(const std::string& path) { return feature_map_from_json(read_json_file(path)); }
inline void save_feature_map(const std::string& path, const FeatureMap& fm) { write_json_file(path, to_json(fm)); }

}  // namespace qfm
