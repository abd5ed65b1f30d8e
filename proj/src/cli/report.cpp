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

#include "cli/report.hpp"

#include <fstream>

#include <fmt/format.h>

#include "synaudit/error.hpp"

namespace synaudit::cli {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

}  // namespace

std::string num(double value) { return fmt::format("{}", value); }
std::string num(std::size_t value) { return fmt::format("{}", value); }

void write_csv(const std::filesystem::path& path, const Row& header,
               const std::vector<Row>& rows) {
  auto out = open_out(path);
  auto write_row = [&out](const Row& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << row[i];
    }
    out << '\n';
  };
  write_row(header);
  for (const auto& row : rows) write_row(row);
  finish(out, path);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  auto out = open_out(path);
  out << value.dump(2) << '\n';
  finish(out, path);
}

void write_cutoff_csv(const std::filesystem::path& path, const CutoffTable& table) {
  std::vector<Row> rows;
  rows.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    rows.push_back({num(r.cutoff), num(r.train), num(r.val), num(r.test)});
  }
  write_csv(path, {"cutoff", "train", "val", "test"}, rows);
}

void write_roc_csv(const std::filesystem::path& path, const RocCurve& curve) {
  std::vector<Row> rows;
  rows.reserve(curve.points.size());
  for (const auto& p : curve.points) rows.push_back({num(p.fpr), num(p.tpr)});
  write_csv(path, {"fpr", "tpr"}, rows);
}

nlohmann::json to_json(const BootstrapCI& ci) {
  return {{"estimate", ci.estimate},
          {"lower", ci.lower},
          {"upper", ci.upper},
          {"alpha", ci.alpha},
          {"n_resamples", ci.n_resamples},
          {"seed", ci.seed},
          {"method", ci.method},
          {"bias_correction", ci.bias_correction},
          {"acceleration", ci.acceleration}};
}

nlohmann::json to_json(const ConfusionMatrix& cm) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < cm.num_classes(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < cm.num_classes(); ++j) row.push_back(cm.at(i, j));
    rows.push_back(row);
  }
  nlohmann::json classes = nlohmann::json::array();
  for (std::size_t k = 0; k < cm.num_classes(); ++k) {
    classes.push_back(std::string(to_string(label_from_index(k))));
  }
  return {{"classes", classes}, {"counts", rows}, {"total", cm.total()}};
}

nlohmann::json to_json(const CutoffTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"cutoff", r.cutoff}, {"train", r.train}, {"val", r.val}, {"test", r.test}});
  }
  return rows;
}

nlohmann::json to_json(const ClassifierEvaluation& eval) {
  nlohmann::json per_class = nlohmann::json::object();
  for (std::size_t k = 0; k < eval.per_class_auc.size(); ++k) {
    per_class[std::string(to_string(label_from_index(k)))] = eval.per_class_auc[k];
  }
  return {{"auc_macro", eval.auc_macro},
          {"ci", to_json(eval.ci)},
          {"per_class_auc", per_class},
          {"confusion", to_json(eval.confusion)},
          {"loss_history", eval.loss_history}};
}

}  // namespace synaudit::cli
