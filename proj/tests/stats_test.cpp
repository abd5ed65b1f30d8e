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

#include "synaudit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "synaudit/error.hpp"
#include "synaudit/random.hpp"

namespace synaudit {
namespace {

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

// Pair counting, written out independently of both library routes.
double PairCountAuc(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] != 0) continue;
      pairs += 1.0;
      if (s[i] > s[j]) wins += 1.0;
      if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

TEST(RocTest, WorkedExample) {
  std::vector<double> s = {0.1, 0.4, 0.35, 0.8};
  std::vector<int> y = {0, 0, 1, 1};
  auto roc = roc_curve(s, y);
  EXPECT_DOUBLE_EQ(roc.auc, 0.75);
  EXPECT_DOUBLE_EQ(auc_rank(s, y), 0.75);
  ASSERT_EQ(roc.points.size(), 5u);
  EXPECT_EQ(roc.points.front(), (RocPoint{0.0, 0.0}));
  EXPECT_EQ(roc.points[1], (RocPoint{0.0, 0.5}));
  EXPECT_EQ(roc.points[2], (RocPoint{0.5, 0.5}));
  EXPECT_EQ(roc.points[3], (RocPoint{0.5, 1.0}));
  EXPECT_EQ(roc.points.back(), (RocPoint{1.0, 1.0}));
}

TEST(RocTest, TiedScoresMoveDiagonally) {
  std::vector<double> s = {0.5, 0.5, 0.5, 0.5};
  std::vector<int> y = {0, 1, 0, 1};
  auto roc = roc_curve(s, y);
  ASSERT_EQ(roc.points.size(), 2u);
  EXPECT_DOUBLE_EQ(roc.auc, 0.5);
}

TEST(RocTest, AgreesWithPairCountingOnRandomTies) {
  Rng rng(20);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.index(60);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse grid forces ties.
      s[i] = static_cast<double>(rng.index(8)) / 4.0;
      y[i] = static_cast<int>(rng.index(2));
    }
    y[0] = 0;
    y[1] = 1;
    const double oracle = PairCountAuc(s, y);
    EXPECT_NEAR(roc_curve(s, y).auc, oracle, 1e-9);
    EXPECT_NEAR(auc_rank(s, y), oracle, 1e-9);
  }
}

TEST(RocTest, CurveIsMonotone) {
  Rng rng(21);
  std::vector<double> s(300);
  std::vector<int> y(300);
  for (std::size_t i = 0; i < s.size(); ++i) {
    y[i] = static_cast<int>(rng.index(2));
    s[i] = rng.normal() + y[i];
  }
  auto roc = roc_curve(s, y);
  for (std::size_t i = 1; i < roc.points.size(); ++i) {
    EXPECT_GE(roc.points[i].fpr, roc.points[i - 1].fpr);
    EXPECT_GE(roc.points[i].tpr, roc.points[i - 1].tpr);
  }
  EXPECT_GT(roc.auc, 0.5);
}

TEST(RocTest, Errors) {
  std::vector<double> s = {0.1, 0.2};
  EXPECT_EQ(CodeOf([&] { roc_curve(s, std::vector<int>{1, 1}); }),
            ErrorCode::kSingleClass);
  EXPECT_EQ(CodeOf([&] { roc_curve(s, std::vector<int>{1}); }),
            ErrorCode::kShapeMismatch);
  EXPECT_EQ(CodeOf([&] { roc_curve(s, std::vector<int>{0, 2}); }),
            ErrorCode::kInvalidArgument);
  std::vector<double> bad = {0.1, NAN};
  EXPECT_EQ(CodeOf([&] { auc_rank(bad, std::vector<int>{0, 1}); }),
            ErrorCode::kInvalidArgument);
}

TEST(MacroAverageTest, AreaIsMeanOfAreas) {
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RocCurve> curves;
    const std::size_t k = 1 + rng.index(4);
    for (std::size_t c = 0; c < k; ++c) {
      const std::size_t n = 4 + rng.index(30);
      std::vector<double> s(n);
      std::vector<int> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = static_cast<double>(rng.index(6));
        y[i] = static_cast<int>(rng.index(2));
      }
      y[0] = 0;
      y[1] = 1;
      curves.push_back(roc_curve(s, y));
    }
    double mean = 0.0;
    for (const auto& c : curves) mean += c.auc;
    mean /= static_cast<double>(k);
    auto avg = macro_average(curves);
    EXPECT_NEAR(avg.auc, mean, 1e-12);
    EXPECT_EQ(avg.points.front(), (RocPoint{0.0, 0.0}));
    EXPECT_EQ(avg.points.back(), (RocPoint{1.0, 1.0}));
  }
}

TEST(MacroAverageTest, VerticalStepsAverageLimits) {
  RocCurve a{{{0, 0}, {0, 1}, {1, 1}}, 1.0};
  RocCurve b{{{0, 0}, {1, 1}}, 0.5};
  std::vector<RocCurve> curves = {a, b};
  auto avg = macro_average(curves);
  ASSERT_EQ(avg.points.size(), 3u);
  EXPECT_EQ(avg.points[0], (RocPoint{0.0, 0.0}));
  EXPECT_EQ(avg.points[1], (RocPoint{0.0, 0.5}));
  EXPECT_EQ(avg.points[2], (RocPoint{1.0, 1.0}));
  EXPECT_DOUBLE_EQ(avg.auc, 0.75);
}

TEST(ConfusionTest, ArgmaxWithLowestIndexTieBreak) {
  Eigen::MatrixXd p(4, 3);
  p << 0.2, 0.5, 0.3,
       0.4, 0.4, 0.2,
       0.1, 0.1, 0.8,
       0.6, 0.2, 0.2;
  std::vector<int> y = {1, 1, 2, 2};
  auto cm = confusion(p, y);
  EXPECT_EQ(cm.at(1, 1), 1u);
  EXPECT_EQ(cm.at(1, 0), 1u);
  EXPECT_EQ(cm.at(2, 2), 1u);
  EXPECT_EQ(cm.at(2, 0), 1u);
  EXPECT_EQ(cm.total(), 4u);
}

TEST(QuantileTest, MatchesLinearInterpolation) {
  std::vector<double> v = {3, 1, 4, 1, 5, 9, 2, 6};
  EXPECT_DOUBLE_EQ(empirical_quantile(v, 0), 1.0);
  EXPECT_NEAR(empirical_quantile(v, 30), 2.1, 1e-12);
  EXPECT_DOUBLE_EQ(empirical_quantile(v, 50), 3.5);
  EXPECT_NEAR(empirical_quantile(v, 95), 7.95, 1e-12);
  EXPECT_DOUBLE_EQ(empirical_quantile(v, 100), 9.0);
  std::vector<double> one = {4.0};
  EXPECT_DOUBLE_EQ(empirical_quantile(one, 37), 4.0);
}

TEST(QuantileTest, MonotoneInPercentile) {
  Rng rng(23);
  std::vector<double> v(57);
  for (auto& x : v) x = rng.normal();
  double prev = -INFINITY;
  for (int p = 0; p <= 100; ++p) {
    const double q = empirical_quantile(v, p);
    EXPECT_GE(q, prev);
    prev = q;
  }
}

TEST(QuantileTest, Errors) {
  std::vector<double> v = {1, 2};
  EXPECT_EQ(CodeOf([&] { empirical_quantile(std::vector<double>{}, 5); }),
            ErrorCode::kEmptyInput);
  EXPECT_EQ(CodeOf([&] { empirical_quantile(v, 101); }), ErrorCode::kOutOfDomain);
  EXPECT_EQ(CodeOf([&] { empirical_quantile(v, -1); }), ErrorCode::kOutOfDomain);
}

TEST(NormalTest, QuantileMatchesHighPrecisionValues) {
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-9);
  EXPECT_NEAR(normal_quantile(0.3), -0.5244005127080407, 1e-9);
  EXPECT_NEAR(normal_quantile(1e-10), -6.361340902404056, 1e-8);
  EXPECT_DOUBLE_EQ(normal_quantile(0.5), 0.0);
  EXPECT_EQ(CodeOf([] { normal_quantile(1.0); }), ErrorCode::kOutOfDomain);
}

TEST(NormalTest, QuantileInvertsCdf) {
  for (double p = 0.001; p < 1.0; p += 0.001) {
    EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-12);
    EXPECT_NEAR(normal_quantile(p), -normal_quantile(1.0 - p), 1e-9);
  }
}

double Mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

TEST(BcaTest, MeanIntervalIsCloseToNormalTheory) {
  Rng rng(24);
  std::vector<double> data(400);
  for (auto& x : data) x = 2.0 + rng.normal();
  auto ci = bca_interval(data, Mean, 2000, 0.05, 5);
  EXPECT_EQ(ci.method, "bca");
  EXPECT_DOUBLE_EQ(ci.estimate, Mean(data));
  double sd = 0.0;
  for (double x : data) sd += (x - ci.estimate) * (x - ci.estimate);
  sd = std::sqrt(sd / (data.size() - 1)) / std::sqrt(400.0);
  EXPECT_NEAR(ci.lower, ci.estimate - 1.96 * sd, 0.25 * sd);
  EXPECT_NEAR(ci.upper, ci.estimate + 1.96 * sd, 0.25 * sd);
  EXPECT_LT(std::abs(ci.acceleration), 0.05);
}

TEST(BcaTest, SkewedStatisticShiftsInterval) {
  Rng rng(25);
  std::vector<double> data(60);
  for (auto& x : data) x = std::exp(rng.normal());
  auto ci = bca_interval(data, Mean, 2000, 0.1, 6);
  // Right-skewed data: the upper arm is longer.
  EXPECT_GT(ci.upper - ci.estimate, ci.estimate - ci.lower);
  EXPECT_GT(ci.acceleration, 0.0);
}

TEST(BcaTest, IndependentOfWorkerCount) {
  Rng rng(26);
  std::vector<double> data(80);
  for (auto& x : data) x = rng.normal();
  auto a = bca_interval(data, Mean, 500, 0.05, 7, 1);
  auto b = bca_interval(data, Mean, 500, 0.05, 7, 4);
  EXPECT_EQ(a.lower, b.lower);
  EXPECT_EQ(a.upper, b.upper);
  auto c = bca_interval(data, Mean, 500, 0.05, 8, 1);
  EXPECT_NE(a.lower, c.lower);
}

TEST(BcaTest, ConstantStatisticCollapsesToPoint) {
  std::vector<double> data = {1, 2, 3, 4, 5};
  auto ci = bca_interval(
      data, [](std::span<const double>) { return 0.7; }, 200, 0.05, 1);
  EXPECT_EQ(ci.method, "percentile");
  EXPECT_EQ(ci.lower, 0.7);
  EXPECT_EQ(ci.upper, 0.7);
  EXPECT_EQ(ci.estimate, 0.7);
}

TEST(BcaTest, UndefinedResamplesAreRedrawn) {
  // Defined only when both index parities appear.
  std::vector<int> seen;
  IndexStatistic stat = [](std::span<const std::size_t> idx) {
    bool even = false, odd = false;
    for (auto i : idx) (i % 2 ? odd : even) = true;
    return even && odd ? static_cast<double>(idx.size()) : NAN;
  };
  auto ci = bca_interval(3, stat, 300, 0.05, 2);
  EXPECT_EQ(ci.lower, 3.0);
  EXPECT_EQ(ci.upper, 3.0);
}

TEST(BcaTest, Errors) {
  std::vector<double> data = {1, 2, 3};
  EXPECT_EQ(CodeOf([&] { bca_interval(data, Mean, 0, 0.05, 1); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { bca_interval(data, Mean, 10, 1.5, 1); }),
            ErrorCode::kOutOfDomain);
  EXPECT_EQ(CodeOf([&] { bca_interval(std::vector<double>{1}, Mean, 10, 0.05, 1); }),
            ErrorCode::kInvalidArgument);
}

TEST(BcaTest, SymmetricCaseMatchesPercentileBootstrap) {
  Rng rng(27);
  std::vector<double> data(200);
  for (std::size_t i = 0; i < data.size(); i += 2) {
    data[i] = rng.normal();
    data[i + 1] = -data[i];
  }
  auto ci = bca_interval(data, Mean, 4000, 0.05, 9);
  EXPECT_NEAR(ci.acceleration, 0.0, 1e-12);
  EXPECT_NEAR(ci.bias_correction, 0.0, 0.1);

  // Plain percentile bootstrap on an unrelated stream.
  Rng boot(28);
  std::vector<double> means(4000);
  std::vector<double> sample(data.size());
  for (auto& m : means) {
    for (auto& v : sample) v = data[boot.index(data.size())];
    m = Mean(sample);
  }
  std::sort(means.begin(), means.end());
  const double lo = means[static_cast<std::size_t>(0.025 * 3999)];
  const double hi = means[static_cast<std::size_t>(0.975 * 3999)];
  const double se = (hi - lo) / (2 * 1.96);
  // Two independent 4000-resample runs differ by about 0.06 se at the tails.
  EXPECT_NEAR(ci.lower, lo, 0.25 * se);
  EXPECT_NEAR(ci.upper, hi, 0.25 * se);
}

}  // namespace
}  // namespace synaudit
