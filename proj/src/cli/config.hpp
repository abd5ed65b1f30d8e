//
// Copyright 2026 The synaudit Authors
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
//

// Run configuration: TOML file, then command-line overrides.

#ifndef SYNAUDIT_CLI_CONFIG_HPP_
#define SYNAUDIT_CLI_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "synaudit/classifier.hpp"

namespace synaudit::cli {

struct DataPaths {
  std::filesystem::path dir = "data";
  // Per-split stems; "<stem>.npy" and "<stem>.csv". Empty means dir/<split>.
  std::map<std::string, std::filesystem::path> stems;

  std::filesystem::path stem(const std::string& split) const;
};

struct EmbeddingSettings {
  std::size_t dim = 64;
  // Split name -> sample count; counts above the split size take the split.
  std::map<std::string, std::size_t> fit_subset{
      {"train", 3000}, {"val", 1000}, {"test", 1000}};
  std::filesystem::path model;  // optional stem of a saved model
};

struct AttackSettings {
  double pixel_percentile = 1.0;
  double embedding_percentile = 0.1;
  std::vector<std::size_t> cutoffs{50, 333};
  std::size_t per_origin = 333;
  std::string anomaly_reference = "test";
  double anomaly_percentile = 5.0;
};

struct BootstrapSettings {
  std::size_t n_resamples = 2000;
  double alpha = 0.05;
};

struct AuditConfig {
  std::uint64_t seed = 0;
  bool strict_shape = false;
  // Execution only; never changes results, so it is not echoed.
  unsigned workers = 1;
  DataPaths data;
  EmbeddingSettings embedding;
  AttackSettings attack;
  BootstrapSettings bootstrap;
  TrainConfig classifier;  // seed is derived from `seed`

  /// Throws InvalidConfig when a value is out of range.
  void validate() const;
};

/// Reads a TOML file. Relative data paths are resolved against the file's
/// directory. Throws InvalidConfig on parse errors or unknown keys.
AuditConfig load_config(const std::filesystem::path& path);
AuditConfig parse_config(std::string_view toml_text,
                         const std::filesystem::path& base_dir = {});

/// The resolved configuration as echoed in every report.
nlohmann::json to_json(const AuditConfig& config);

/// Parses "50,333" style lists.
std::vector<std::size_t> parse_cutoffs(std::string_view text);

}  // namespace synaudit::cli

#endif  // SYNAUDIT_CLI_CONFIG_HPP_
