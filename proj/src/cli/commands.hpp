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

// Subcommands of the synaudit tool. Each writes its files under `out` and
// echoes the resolved configuration and tool version in its JSON report.
//
// Exit codes: 0 success, 2 usage, 3 configuration or validation, 4 I/O,
// 5 internal invariant breach.

#ifndef SYNAUDIT_CLI_COMMANDS_HPP_
#define SYNAUDIT_CLI_COMMANDS_HPP_

#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "cli/config.hpp"
#include "synaudit/attack.hpp"
#include "synaudit/embedding.hpp"
#include "synaudit/fixture.hpp"

namespace synaudit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitIo = 4;
inline constexpr int kExitInternal = 5;

enum class AttackKind { kPairwise, kDistribution };
std::string_view to_string(AttackKind kind);
AttackKind parse_attack_kind(std::string_view token);

/// Maps an in-flight exception to the exit-code contract.
int exit_code_for(const std::exception& e);

struct RealAndSynthetic {
  LabeledDataset train;
  LabeledDataset val;
  LabeledDataset test;
  LabeledDataset synthetic;
};

/// Loads the four splits and checks pixel range and finiteness (and the
/// 9x64x64 shape under strict_shape). Throws on any violation.
RealAndSynthetic load_inputs(const AuditConfig& config);

/// Fits on the configured real subset. Throws SyntheticContamination if the
/// subset names the synthetic split.
EmbeddingModel fit_configured_embedding(const AuditConfig& config,
                                        const RealAndSynthetic& data);

void cmd_fixture(const FixtureSpec& spec, const std::filesystem::path& out);

void cmd_embed(const AuditConfig& config, const std::filesystem::path& out);

void cmd_attack(const AuditConfig& config, AttackKind kind, Space space,
                std::optional<double> percentile, const std::filesystem::path& out);

void cmd_diversity(const AuditConfig& config, const std::filesystem::path& out);

struct MorphOptions {
  Label from = Label::kCervical;
  Label to = Label::kLumbar;
  std::size_t steps = 1;
  std::string generator = "private";  // "private" or "leaky"
  ImageShape shape{9, 16, 16};        // private generator output
  std::size_t rank = 8;               // private generator rank
  double epsilon = 0.05;              // leaky generator noise
};

void cmd_morph(const AuditConfig& config, const MorphOptions& options,
               const std::filesystem::path& out);

/// embed, then both attacks in both spaces, then the diversity audit.
void cmd_audit(const AuditConfig& config, const std::filesystem::path& out);

/// Parses arguments and dispatches. Never throws; returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace synaudit::cli

#endif  // SYNAUDIT_CLI_COMMANDS_HPP_
