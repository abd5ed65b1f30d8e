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

// CSV and JSON writers shared by the subcommands. Numbers are written in
// shortest round-trip form so reruns are byte-identical.

#ifndef SYNAUDIT_CLI_REPORT_HPP_
#define SYNAUDIT_CLI_REPORT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "synaudit/attack.hpp"
#include "synaudit/classifier.hpp"
#include "synaudit/stats.hpp"

namespace synaudit::cli {

using Row = std::vector<std::string>;

std::string num(double value);
std::string num(std::size_t value);

void write_csv(const std::filesystem::path& path, const Row& header,
               const std::vector<Row>& rows);
/// Pretty-printed with two-space indent, sorted keys, trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& value);

void write_cutoff_csv(const std::filesystem::path& path, const CutoffTable& table);
void write_roc_csv(const std::filesystem::path& path, const RocCurve& curve);

nlohmann::json to_json(const BootstrapCI& ci);
nlohmann::json to_json(const ConfusionMatrix& cm);
nlohmann::json to_json(const CutoffTable& table);
nlohmann::json to_json(const ClassifierEvaluation& eval);

}  // namespace synaudit::cli

#endif  // SYNAUDIT_CLI_REPORT_HPP_
