// Copyright 2026 The snnv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Model files: a JSON document
//
//   {
//     "format_version": 1,
//     "config": {"T": 4, "tau": 1, "theta": 1.0, "gamma": 1.0,
//                "layer_sizes": [2, 1]},
//     "weights": [ [[0.6], [0.6]] ],        // weights[l][m][n], row-major
//     "provenance": "optional free text"
//   }
//
// Weights are written in shortest round-trip decimal form, so
// load(save(m)) reproduces every binary64 weight bit for bit.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "snnv/errors.hpp"
#include "snnv/snn.hpp"

namespace snnv::io {

inline constexpr int kModelFormatVersion = 1;

inline std::string model_to_json(const SnnModel& model, const std::string& provenance = {}) {
  validate(model);
  nlohmann::ordered_json doc;
  doc["format_version"] = kModelFormatVersion;
  const ModelConfig& c = model.config;
  doc["config"] = {{"T", c.time_steps},
                   {"tau", c.tau},
                   {"theta", c.theta},
                   {"gamma", c.gamma},
                   {"layer_sizes", c.layer_sizes}};
  nlohmann::ordered_json weights = nlohmann::ordered_json::array();
  for (const WeightMatrix& w : model.weights) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int m = 0; m < w.rows; ++m) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (int n = 0; n < w.cols; ++n) row.push_back(w(m, n));
      rows.push_back(std::move(row));
    }
    weights.push_back(std::move(rows));
  }
  doc["weights"] = std::move(weights);
  if (!provenance.empty()) doc["provenance"] = provenance;
  return doc.dump(2) + "\n";
}

inline SnnModel model_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw SchemaError("model file must be a JSON object");
    if (!doc.contains("format_version") || !doc["format_version"].is_number_integer())
      throw SchemaError("missing integer format_version");
    if (doc["format_version"].get<int>() != kModelFormatVersion)
      throw SchemaError("unsupported format_version " + doc["format_version"].dump());
    const auto& c = doc.at("config");
    SnnModel m;
    m.config.time_steps = c.at("T").get<int>();
    m.config.tau = c.at("tau").get<int>();
    m.config.theta = c.at("theta").get<double>();
    m.config.gamma = c.value("gamma", 1.0);
    m.config.layer_sizes = c.at("layer_sizes").get<std::vector<int>>();
    for (const auto& layer : doc.at("weights")) {
      if (!layer.is_array() || layer.empty() || !layer[0].is_array())
        throw SchemaError("each weight layer must be a non-empty array of rows");
      WeightMatrix w(static_cast<int>(layer.size()), static_cast<int>(layer[0].size()));
      for (int r = 0; r < w.rows; ++r) {
        const auto& row = layer[r];
        if (!row.is_array() || static_cast<int>(row.size()) != w.cols)
          throw SchemaError("ragged weight matrix");
        for (int n = 0; n < w.cols; ++n) {
          if (!row[n].is_number()) throw SchemaError("weights must be numbers");
          w(r, n) = row[n].get<double>();
        }
      }
      m.weights.push_back(std::move(w));
    }
    try {
      validate(m);
    } catch (const DomainError& e) {
      throw SchemaError(e.what());
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("model file: ") + e.what());
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path);
  f << text;
  if (!f) throw Error("write failed: " + path);
}

inline SnnModel load_model(const std::string& path) { return model_from_json(read_text_file(path)); }

inline void save_model(const SnnModel& model, const std::string& path,
                       const std::string& provenance = {}) {
  write_text_file(path, model_to_json(model, provenance));
}

}  // namespace snnv::io
