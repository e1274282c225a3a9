// Copyright 2026 The stripdet Authors
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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "stripdet/model.hpp"

namespace stripdet {

/// Validated run description. Construction from JSON rejects unknown keys,
/// missing required keys and out-of-range values with ConfigError, so a
/// RunConfig that exists can be dispatched.
///
/// Common keys: command, kind, disorder (alias spec), geometry {W, d, N}, E,
/// n_samples, seed, workers, tolerances, plot. Every other key is specific
/// to the command or experiment kind and kept in `params`.
struct RunConfig {
  std::string command;  // sample | lyapunov | dets | verify | experiment
  std::string kind;     // suite, experiment kind or route
  DisorderSpec disorder;
  StripGeometry geometry;
  double energy = 0.0;
  int n_samples = 10000;
  std::uint64_t seed = 1;
  int workers = 1;
  bool plot = false;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json tolerances = nlohmann::json::object();
  /// The input document, unchanged.
  nlohmann::json raw;

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_text(const std::string& text);
};

struct OutputFile {
  std::string name;
  std::string content;
};

struct RunResult {
  std::vector<OutputFile> files;
  nlohmann::json summary;
  /// False when a verification suite or built-in invariant failed.
  bool invariants_ok = true;
};

/// Runs the configured command in memory. Output content depends only on
/// the config minus `workers`.
RunResult execute(const RunConfig& config);

struct RunManifest {
  nlohmann::json document;
  bool invariants_ok = true;
};

/// execute(), then writes every output, config.json and manifest.json into
/// `out_dir` (created when missing). Nothing is written when execute throws.
RunManifest dispatch(const RunConfig& config, const std::filesystem::path& out_dir);

/// Lower-case hex SHA-256.
std::string sha256_hex(const std::string& data);
/// SHA-256 of the canonical (sorted-key, compact) serialization.
std::string config_hash(const nlohmann::json& config);

std::string artifact_version();

}  // namespace stripdet
