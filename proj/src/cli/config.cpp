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

#include "cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "synaudit/error.hpp"
#include "synaudit/tensor_io.hpp"

namespace synaudit::cli {
namespace {

[[noreturn]] void bad(const std::string& message) {
  throw Error(ErrorCode::kInvalidConfig, message);
}

void check_keys(const toml::table& table, const std::string& where,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : table) {
    if (!allowed.contains(std::string(key.str()))) {
      bad("unknown key '" + std::string(key.str()) + "' in " + where);
    }
  }
}

const toml::table* subtable(const toml::table& parent, const char* name) {
  const toml::node* node = parent.get(name);
  if (node == nullptr) return nullptr;
  if (!node->is_table()) bad(std::string(name) + " must be a table");
  return node->as_table();
}

double get_real(const toml::table& t, const char* key, double fallback) {
  const toml::node* node = t.get(key);
  if (node == nullptr) return fallback;
  if (auto v = node->value<double>()) return *v;
  bad(std::string(key) + " must be a number");
}

std::size_t get_count(const toml::table& t, const char* key, std::size_t fallback) {
  const toml::node* node = t.get(key);
  if (node == nullptr) return fallback;
  const auto* v = node->as_integer();
  if (v == nullptr || v->get() < 0) bad(std::string(key) + " must be a non-negative integer");
  return static_cast<std::size_t>(v->get());
}

std::string get_string(const toml::table& t, const char* key, std::string fallback) {
  const toml::node* node = t.get(key);
  if (node == nullptr) return fallback;
  const auto* v = node->as_string();
  if (v == nullptr) bad(std::string(key) + " must be a string");
  return v->get();
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& value) {
  std::filesystem::path p(value);
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

bool in_open_percent(double p) { return p > 0.0 && p < 100.0; }

}  // namespace

std::filesystem::path DataPaths::stem(const std::string& split) const {
  auto it = stems.find(split);
  if (it != stems.end()) return it->second;
  return dir / split;
}

void AuditConfig::validate() const {
  if (!in_open_percent(attack.pixel_percentile) ||
      !in_open_percent(attack.embedding_percentile)) {
    bad("attack percentiles must lie in (0, 100)");
  }
  if (!(attack.anomaly_percentile >= 0.0 && attack.anomaly_percentile <= 100.0)) {
    bad("anomaly_percentile must lie in [0, 100]");
  }
  if (attack.cutoffs.empty()) bad("cutoffs must not be empty");
  for (std::size_t k : attack.cutoffs) {
    if (k == 0) bad("cutoffs must be >= 1");
  }
  if (attack.per_origin == 0) bad("per_origin must be >= 1");
  const Origin reference = [&] {
    try {
      return parse_origin(attack.anomaly_reference);
    } catch (const Error&) {
      bad("anomaly_reference must be train, val or test");
    }
  }();
  if (reference == Origin::kSynthetic) bad("anomaly_reference cannot be synthetic");
  if (embedding.dim == 0) bad("embedding dim must be >= 1");
  if (bootstrap.n_resamples == 0) bad("n_resamples must be >= 1");
  if (!(bootstrap.alpha > 0.0 && bootstrap.alpha < 1.0)) bad("alpha must lie in (0, 1)");
  if (workers == 0) bad("workers must be >= 1");
  classifier.validate();
}

AuditConfig parse_config(std::string_view toml_text,
                         const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML parse error: " << e.description() << " at " << e.source().begin;
    bad(msg.str());
  }
  check_keys(root, "config",
             {"seed", "strict_shape", "workers", "data", "embedding", "attack",
              "bootstrap", "classifier"});

  AuditConfig c;
  if (const toml::node* n = root.get("seed")) {
    const auto* v = n->as_integer();
    if (v == nullptr || v->get() < 0) bad("seed must be a non-negative integer");
    c.seed = static_cast<std::uint64_t>(v->get());
  }
  if (const toml::node* n = root.get("strict_shape")) {
    const auto* v = n->as_boolean();
    if (v == nullptr) bad("strict_shape must be a boolean");
    c.strict_shape = v->get();
  }
  c.workers = static_cast<unsigned>(get_count(root, "workers", c.workers));

  if (const auto* t = subtable(root, "data")) {
    check_keys(*t, "[data]", {"dir", "train", "val", "test", "synthetic"});
    c.data.dir = resolve(base_dir, get_string(*t, "dir", "data"));
    for (const char* split : {"train", "val", "test", "synthetic"}) {
      if (t->contains(split)) c.data.stems[split] = resolve(base_dir, get_string(*t, split, ""));
    }
  } else {
    c.data.dir = resolve(base_dir, "data");
  }

  if (const auto* t = subtable(root, "embedding")) {
    check_keys(*t, "[embedding]", {"dim", "fit_subset", "model"});
    c.embedding.dim = get_count(*t, "dim", c.embedding.dim);
    if (t->contains("model")) c.embedding.model = resolve(base_dir, get_string(*t, "model", ""));
    if (const auto* fs = subtable(*t, "fit_subset")) {
      c.embedding.fit_subset.clear();
      for (const auto& [key, value] : *fs) {
        const std::string split(key.str());
        c.embedding.fit_subset[split] = get_count(*fs, split.c_str(), 0);
      }
    }
  }

  if (const auto* t = subtable(root, "attack")) {
    check_keys(*t, "[attack]",
               {"pixel_percentile", "embedding_percentile", "cutoffs", "per_origin",
                "anomaly_reference", "anomaly_percentile"});
    c.attack.pixel_percentile = get_real(*t, "pixel_percentile", c.attack.pixel_percentile);
    c.attack.embedding_percentile =
        get_real(*t, "embedding_percentile", c.attack.embedding_percentile);
    c.attack.per_origin = get_count(*t, "per_origin", c.attack.per_origin);
    c.attack.anomaly_reference =
        get_string(*t, "anomaly_reference", c.attack.anomaly_reference);
    c.attack.anomaly_percentile =
        get_real(*t, "anomaly_percentile", c.attack.anomaly_percentile);
    if (const toml::node* n = t->get("cutoffs")) {
      const auto* arr = n->as_array();
      if (arr == nullptr) bad("cutoffs must be an array of integers");
      c.attack.cutoffs.clear();
      for (const auto& item : *arr) {
        const auto* v = item.as_integer();
        if (v == nullptr || v->get() < 0) bad("cutoffs must be an array of integers");
        c.attack.cutoffs.push_back(static_cast<std::size_t>(v->get()));
      }
    }
  }

  if (const auto* t = subtable(root, "bootstrap")) {
    check_keys(*t, "[bootstrap]", {"n_resamples", "alpha"});
    c.bootstrap.n_resamples = get_count(*t, "n_resamples", c.bootstrap.n_resamples);
    c.bootstrap.alpha = get_real(*t, "alpha", c.bootstrap.alpha);
  }

  if (const auto* t = subtable(root, "classifier")) {
    check_keys(*t, "[classifier]", {"learning_rate", "momentum", "epochs", "batch_size"});
    c.classifier.learning_rate = get_real(*t, "learning_rate", c.classifier.learning_rate);
    c.classifier.momentum = get_real(*t, "momentum", c.classifier.momentum);
    c.classifier.epochs = get_count(*t, "epochs", c.classifier.epochs);
    c.classifier.batch_size = get_count(*t, "batch_size", c.classifier.batch_size);
  }
  return c;
}

AuditConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

nlohmann::json to_json(const AuditConfig& c) {
  nlohmann::json j;
  j["seed"] = c.seed;
  j["strict_shape"] = c.strict_shape;
  nlohmann::json data;
  data["dir"] = c.data.dir.generic_string();
  for (const auto& [split, stem] : c.data.stems) data[split] = stem.generic_string();
  j["data"] = data;
  nlohmann::json fit = nlohmann::json::object();
  for (const auto& [split, n] : c.embedding.fit_subset) fit[split] = n;
  j["embedding"] = {{"dim", c.embedding.dim},
                    {"fit_subset", fit},
                    {"model", c.embedding.model.generic_string()}};
  j["attack"] = {{"pixel_percentile", c.attack.pixel_percentile},
                 {"embedding_percentile", c.attack.embedding_percentile},
                 {"cutoffs", c.attack.cutoffs},
                 {"per_origin", c.attack.per_origin},
                 {"anomaly_reference", c.attack.anomaly_reference},
                 {"anomaly_percentile", c.attack.anomaly_percentile}};
  j["bootstrap"] = {{"n_resamples", c.bootstrap.n_resamples},
                    {"alpha", c.bootstrap.alpha}};
  j["classifier"] = {{"learning_rate", c.classifier.learning_rate},
                     {"momentum", c.classifier.momentum},
                     {"epochs", c.classifier.epochs},
                     {"batch_size", c.classifier.batch_size}};
  return j;
}

std::vector<std::size_t> parse_cutoffs(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t stop = text.find(',', start);
    if (stop == std::string_view::npos) stop = text.size();
    std::string_view token = text.substr(start, stop - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
      bad("cutoffs must be comma-separated integers, got '" + std::string(text) + "'");
    }
    out.push_back(value);
    start = stop + 1;
  }
  return out;
}

}  // namespace synaudit::cli
