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

/**
 * @file fixture.hpp
 *
 * @brief Toy worlds with known ground truth for calibrating the audit.
 *
 * Real splits are drawn from a ToyPrivateGenerator. The synthetic split is
 * either drawn independently from the same generator (private) or made of
 * noisy copies of training samples, cycling through the training set in
 * order (leaky).
 */

#ifndef SYNAUDIT_FIXTURE_HPP_
#define SYNAUDIT_FIXTURE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synaudit/conditioning.hpp"
#include "synaudit/tensor_io.hpp"

namespace synaudit {

enum class FixtureKind { kPrivate, kLeaky };

std::string_view to_string(FixtureKind kind);
FixtureKind parse_fixture_kind(std::string_view token);

inline constexpr double kSyntheticPerReal = 1.2;

struct FixtureSpec {
  FixtureKind kind = FixtureKind::kPrivate;
  std::size_t train = 1000;
  std::size_t val = 400;
  std::size_t test = 400;
  std::optional<std::size_t> synthetic;  // default round(1.2 * train)
  double epsilon = 0.05;
  ImageShape shape{9, 16, 16};
  std::size_t world_rank = 8;  // intrinsic dimension of the real data
  std::uint64_t seed = 0;
  bool shuffle_labels = false;  // permute synthetic labels after generation
};

std::size_t synthetic_size(const FixtureSpec& spec);

struct Fixture {
  LabeledDataset train;
  LabeledDataset val;
  LabeledDataset test;
  LabeledDataset synthetic;
  std::vector<std::string> synthetic_provenance;
};

/// Throws InvalidArgument when any size is zero.
Fixture make_fixture(const FixtureSpec& spec);

/// Writes `<split>.npy` and `<split>.csv` for the four splits into `dir`.
void save_fixture(const Fixture& fixture, const std::filesystem::path& dir);
Fixture load_fixture(const std::filesystem::path& dir);

}  // namespace synaudit

#endif  // SYNAUDIT_FIXTURE_HPP_
