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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "gtest/gtest.h"
#include "synaudit/error.hpp"

namespace synaudit::cli {
namespace {

namespace fs = std::filesystem;

fs::path Scratch(const std::string& name) {
  fs::path dir = fs::path(testing::TempDir()) / ("synaudit_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int RunTool(std::vector<std::string> args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
  args.insert(args.begin(), "synaudit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteFile(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

// A leaky toy dataset plus a config sized for it.
fs::path SmallProject(const std::string& name, const std::string& extra = "") {
  const fs::path dir = Scratch(name);
  EXPECT_EQ(RunTool({"fixture", "--kind", "leaky", "--train", "40", "--val", "40", "--test",
                 "40", "--epsilon", "0", "--shape", "1x4x4", "--seed", "3", "--out",
                 (dir / "data").string()}),
            kExitOk);
  WriteFile(dir / "audit.toml",
            "seed = 9\n"
            "[data]\ndir = \"data\"\n"
            "[embedding]\ndim = 4\n" +
                extra +
                "[attack]\ncutoffs = [5, 20]\nper_origin = 20\n"
                "[bootstrap]\nn_resamples = 50\n"
                "[classifier]\nlearning_rate = 0.01\nepochs = 3\n");
  return dir;
}

TEST(ConfigTest, DefaultsAndOverrides) {
  auto c = parse_config("seed = 4\n[attack]\ncutoffs = [10]\n", "/base");
  EXPECT_EQ(c.seed, 4u);
  EXPECT_EQ(c.attack.cutoffs, std::vector<std::size_t>{10});
  EXPECT_EQ(c.attack.per_origin, 333u);
  EXPECT_EQ(c.embedding.dim, 64u);
  EXPECT_DOUBLE_EQ(c.attack.pixel_percentile, 1.0);
  EXPECT_DOUBLE_EQ(c.attack.embedding_percentile, 0.1);
  EXPECT_EQ(c.bootstrap.n_resamples, 2000u);
  EXPECT_DOUBLE_EQ(c.classifier.learning_rate, 1e-4);
  EXPECT_EQ(c.data.dir, fs::path("/base/data"));
}

TEST(ConfigTest, RelativePathsResolveAgainstConfigDir) {
  auto c = parse_config("[data]\ndir = \"splits\"\ntrain = \"/abs/train\"\n", "/cfg");
  EXPECT_EQ(c.data.dir, fs::path("/cfg/splits"));
  EXPECT_EQ(c.data.stem("train"), fs::path("/abs/train"));
  EXPECT_EQ(c.data.stem("val"), fs::path("/cfg/splits/val"));
}

TEST(ConfigTest, RejectsUnknownKeysAndBadValues) {
  auto code = [](const std::string& text) {
    try {
      parse_config(text).validate();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInternal;
  };
  EXPECT_EQ(code("sede = 1\n"), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code("[attack]\ncutof = [1]\n"), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code("[bootstrap]\nalpha = 1.5\n"), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code("seed = \"x\"\n"), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code("[embedding\n"), ErrorCode::kInvalidConfig);
}

TEST(ConfigTest, EchoOmitsWorkers) {
  auto c = parse_config("workers = 6\n");
  EXPECT_EQ(c.workers, 6u);
  auto j = to_json(c);
  EXPECT_FALSE(j.contains("workers"));
  EXPECT_EQ(j["embedding"]["dim"], 64);
}

TEST(ConfigTest, CutoffList) {
  EXPECT_EQ(parse_cutoffs("50,333"), (std::vector<std::size_t>{50, 333}));
  EXPECT_THROW(parse_cutoffs("50,,3"), Error);
  try {
    parse_config("[attack]\ncutoffs = [0, 5]\n").validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
  }
}

TEST(ExitCodeTest, Categories) {
  EXPECT_EQ(exit_code_for(Error(ErrorCode::kSyntheticContamination, "")), kExitValidation);
  EXPECT_EQ(exit_code_for(Error(ErrorCode::kTruncatedPayload, "")), kExitIo);
  EXPECT_EQ(exit_code_for(Error(ErrorCode::kDivergenceDetected, "")), kExitInternal);
  EXPECT_EQ(exit_code_for(std::runtime_error("x")), kExitInternal);
}

TEST(CliTest, UsageErrors) {
  std::string err;
  EXPECT_EQ(RunTool({}, nullptr, &err), kExitUsage);
  EXPECT_EQ(RunTool({"frobnicate"}), kExitUsage);
  EXPECT_EQ(RunTool({"attack", "--kind", "sideways"}), kExitUsage);
  EXPECT_EQ(RunTool({"embed", "--no-such-flag"}), kExitUsage);
  EXPECT_EQ(RunTool({"morph", "--from", "sacral"}), kExitUsage);
  EXPECT_EQ(RunTool({"--help"}), kExitOk);
}

TEST(CliTest, SyntheticInFitSubsetIsAValidationError) {
  auto dir = SmallProject("contamination",
                          "[embedding.fit_subset]\ntrain = 40\nsynthetic = 10\n");
  std::string err;
  EXPECT_EQ(RunTool({"embed", "--config", (dir / "audit.toml").string(), "--out",
                 (dir / "out").string()},
                nullptr, &err),
            kExitValidation);
  EXPECT_NE(err.find("SyntheticContamination"), std::string::npos);
}

TEST(CliTest, MissingDataIsAnIoError) {
  auto dir = Scratch("missing");
  EXPECT_EQ(RunTool({"embed", "--data", (dir / "nope").string(), "--out", (dir / "out").string()}),
            kExitIo);
}

TEST(CliTest, AttackWritesTablesAndFindsCopies) {
  auto dir = SmallProject("attack");
  const auto out = dir / "pw";
  ASSERT_EQ(RunTool({"attack", "--config", (dir / "audit.toml").string(), "--kind", "pairwise",
                 "--space", "pixel", "--out", out.string()}),
            kExitOk);
  for (const char* f : {"candidates.csv", "cutoff_table.csv", "cutoff_curve.csv",
                        "attack.json", "anomaly_flags.csv"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  auto j = nlohmann::json::parse(Slurp(out / "attack.json"));
  EXPECT_DOUBLE_EQ(j["auc"]["train_vs_val"].get<double>(), 1.0);
  const std::string table = Slurp(out / "cutoff_table.csv");
  EXPECT_EQ(table.rfind("cutoff,train,val,test\n5,1,0,0\n", 0), 0u) << table;
}

TEST(CliTest, FlagsOverrideConfig) {
  auto dir = SmallProject("override");
  const auto out = dir / "pw";
  ASSERT_EQ(RunTool({"attack", "--config", (dir / "audit.toml").string(), "--kind", "pairwise",
                 "--cutoffs", "7", "--out", out.string()}),
            kExitOk);
  EXPECT_EQ(Slurp(out / "cutoff_table.csv").find("5,"), std::string::npos);
  EXPECT_NE(Slurp(out / "cutoff_table.csv").find("7,"), std::string::npos);
  EXPECT_EQ(RunTool({"attack", "--config", (dir / "audit.toml").string(), "--cutoffs", "61",
                 "--out", out.string()}),
            kExitValidation);
}

TEST(CliTest, MorphWritesSchedule) {
  auto dir = Scratch("morph");
  ASSERT_EQ(RunTool({"morph", "--from", "cervical", "--to", "lumbar", "--steps", "4", "--shape",
                 "1x4x4", "--out", dir.string()}),
            kExitOk);
  const std::string schedule = Slurp(dir / "schedule.csv");
  EXPECT_NE(schedule.find("0,1,0,0\n"), std::string::npos) << schedule;
  EXPECT_NE(schedule.find("2,0.5,0,0.5\n"), std::string::npos) << schedule;
  EXPECT_NE(schedule.find("4,0,0,1\n"), std::string::npos) << schedule;
  EXPECT_EQ(RunTool({"morph", "--from", "lumbar", "--to", "lumbar", "--out", dir.string()}),
            kExitValidation);
}

TEST(CliTest, AuditIsIndependentOfWorkers) {
  auto dir = SmallProject("audit");
  const auto cfg = (dir / "audit.toml").string();
  ASSERT_EQ(RunTool({"audit", "--config", cfg, "--workers", "1", "--out", (dir / "a").string()}),
            kExitOk);
  ASSERT_EQ(RunTool({"audit", "--config", cfg, "--workers", "3", "--out", (dir / "b").string()}),
            kExitOk);
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), dir / "a");
    EXPECT_EQ(Slurp(entry.path()), Slurp(dir / "b" / rel)) << rel;
    ++files;
  }
  EXPECT_GT(files, 20u);
  auto j = nlohmann::json::parse(Slurp(dir / "a" / "diversity" / "report.json"));
  EXPECT_EQ(j["backbone"], "linear");
}

TEST(ToolTest, ProcessExitCodes) {
  auto status = [](const std::string& args) {
    const std::string cmd =
        std::string("\"") + SYNAUDIT_TOOL_PATH + "\" " + args + " >/dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("--help"), 0);
  EXPECT_EQ(status(""), 2);
  EXPECT_EQ(status("morph --from cervical --to cervical --out /tmp/synaudit_tool_morph"), 3);
  EXPECT_EQ(status("embed --data /nonexistent/synaudit --out /tmp/synaudit_tool_embed"), 4);
}

TEST(CliTest, PrivateFixtureAttackIsChance) {
  const fs::path dir = Scratch("private");
  ASSERT_EQ(RunTool({"fixture", "--kind", "private", "--train", "400", "--val", "400", "--test",
                     "400", "--shape", "1x8x8", "--seed", "4", "--out", (dir / "data").string()}),
            kExitOk);
  ASSERT_EQ(RunTool({"attack", "--data", (dir / "data").string(), "--kind", "pairwise",
                     "--cutoffs", "50", "--out", (dir / "pw").string()}),
            kExitOk);
  auto j = nlohmann::json::parse(Slurp(dir / "pw" / "attack.json"));
  const double auc = j["auc"]["train_vs_val"].get<double>();
  EXPECT_GE(auc, 0.4);
  EXPECT_LE(auc, 0.6);
}

TEST(CliTest, ShuffledSyntheticLabelsLoseToRealLabels) {
  const fs::path dir = Scratch("shuffled");
  double synth_sum = 0.0, gap_sum = 0.0;
  const int runs = 12;
  for (int r = 0; r < runs; ++r) {
    const auto data = (dir / ("data" + std::to_string(r))).string();
    const auto out = (dir / ("div" + std::to_string(r))).string();
    ASSERT_EQ(RunTool({"fixture", "--kind", "private", "--train", "300", "--val", "50", "--test",
                       "300", "--shape", "1x8x8", "--seed", std::to_string(r),
                       "--shuffle-labels", "--out", data}),
              kExitOk);
    ASSERT_EQ(RunTool({"diversity", "--data", data, "--dim", "16", "--resamples", "20",
                       "--seed", std::to_string(r), "--out", out}),
              kExitOk);
    auto j = nlohmann::json::parse(Slurp(fs::path(out) / "report.json"));
    synth_sum += j["f_synth"]["auc_macro"].get<double>();
    gap_sum += j["auc_gap"].get<double>();
  }
  EXPECT_NEAR(synth_sum / runs, 0.5, 0.15);
  EXPECT_GT(gap_sum / runs, 0.1);
}

}  // namespace
}  // namespace synaudit::cli
