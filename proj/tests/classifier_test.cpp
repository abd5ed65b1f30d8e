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

#include "synaudit/classifier.hpp"

#include <cmath>
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

struct Blobs {
  Eigen::MatrixXd x;
  std::vector<int> y;
};

Blobs MakeBlobs(std::uint64_t seed, int per_class, double spread, int dim = 2) {
  Rng rng(seed);
  Blobs b;
  b.x.resize(3 * per_class, dim);
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < per_class; ++i) {
      const int r = k * per_class + i;
      for (int j = 0; j < dim; ++j) {
        const double center = j == k % dim ? 3.0 : 0.0;
        b.x(r, j) = center + (k == 2 && dim == 2 ? -3.0 : 0.0) + spread * rng.normal();
      }
      b.y.push_back(k);
    }
  }
  return b;
}

TEST(ClassifierTest, InitialLossIsLogK) {
  auto b = MakeBlobs(1, 10, 1.0);
  LinearClassifier zero(3, 2);
  EXPECT_NEAR(loss_and_grad(zero, b.x, b.y).loss, std::log(3.0), 1e-12);
  auto p = zero.predict_proba(b.x);
  EXPECT_NEAR(p(0, 0), 1.0 / 3.0, 1e-15);
}

TEST(ClassifierTest, GradientMatchesFiniteDifferences) {
  Rng rng(2);
  auto b = MakeBlobs(2, 8, 1.0, 4);
  Eigen::MatrixXd w(3, 4);
  Eigen::VectorXd c(3);
  for (int i = 0; i < w.size(); ++i) w.data()[i] = 0.3 * rng.normal();
  for (int i = 0; i < 3; ++i) c(i) = 0.3 * rng.normal();
  LinearClassifier model(w, c);
  auto lg = loss_and_grad(model, b.x, b.y);
  const double h = 1e-4;
  auto loss_at = [&](const Eigen::MatrixXd& ww, const Eigen::VectorXd& cc) {
    return loss_and_grad(LinearClassifier(ww, cc), b.x, b.y).loss;
  };
  for (int i = 0; i < w.size(); ++i) {
    Eigen::MatrixXd plus = w, minus = w;
    plus.data()[i] += h;
    minus.data()[i] -= h;
    const double fd = (loss_at(plus, c) - loss_at(minus, c)) / (2 * h);
    const double an = lg.grad_weights.data()[i];
    EXPECT_LT(std::abs(fd - an) / std::max(1e-8, std::abs(fd) + std::abs(an)), 1e-5);
  }
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd plus = c, minus = c;
    plus(i) += h;
    minus(i) -= h;
    const double fd = (loss_at(w, plus) - loss_at(w, minus)) / (2 * h);
    EXPECT_LT(std::abs(fd - lg.grad_bias(i)) /
                  std::max(1e-8, std::abs(fd) + std::abs(lg.grad_bias(i))),
              1e-5);
  }
}

TEST(ClassifierTest, SoftmaxIsStableForLargeLogits) {
  Eigen::MatrixXd logits(1, 3);
  logits << 1000.0, 1000.0, -1000.0;
  auto p = softmax_rows(logits);
  EXPECT_NEAR(p(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(p(0, 2), 0.0, 1e-15);
}

TEST(ClassifierTest, LearnsSeparableBlobs) {
  auto b = MakeBlobs(3, 40, 0.5);
  TrainConfig config;
  config.learning_rate = 0.1;
  config.seed = 4;
  auto model = train(b.x, b.y, config);
  ASSERT_EQ(model.loss_history.size(), config.epochs + 1);
  EXPECT_NEAR(model.loss_history.front(), std::log(3.0), 1e-12);
  EXPECT_LT(model.loss_history.back(), 0.2);
  auto cm = confusion(model.predict_proba(b.x), b.y);
  std::size_t correct = 0;
  for (std::size_t k = 0; k < 3; ++k) correct += cm.at(k, k);
  EXPECT_GE(correct, 114u);
}

TEST(ClassifierTest, DeterministicInSeed) {
  auto b = MakeBlobs(5, 20, 1.0);
  TrainConfig config;
  config.learning_rate = 0.05;
  config.seed = 6;
  auto a = train(b.x, b.y, config);
  auto again = train(b.x, b.y, config);
  EXPECT_EQ(a.weights(), again.weights());
  EXPECT_EQ(a.loss_history, again.loss_history);
  config.seed = 7;
  EXPECT_NE(train(b.x, b.y, config).weights(), a.weights());
}

TEST(ClassifierTest, TrainingErrors) {
  auto b = MakeBlobs(8, 5, 1.0);
  std::vector<int> one_class(b.y.size(), 1);
  TrainConfig config;
  EXPECT_EQ(CodeOf([&] { train(b.x, one_class, config); }), ErrorCode::kSingleClass);
  TrainConfig bad = config;
  bad.batch_size = 0;
  EXPECT_EQ(CodeOf([&] { bad.validate(); }), ErrorCode::kInvalidConfig);
  TrainConfig huge = config;
  huge.learning_rate = 1e200;
  Eigen::MatrixXd big = b.x * 1e150;
  EXPECT_EQ(CodeOf([&] { train(big, b.y, huge); }), ErrorCode::kDivergenceDetected);
  std::vector<int> bad_labels = b.y;
  bad_labels[0] = 3;
  EXPECT_EQ(CodeOf([&] { loss_and_grad(LinearClassifier(3, 2), b.x, bad_labels); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { LinearClassifier(3, 5).logits(b.x); }), ErrorCode::kShapeMismatch);
}

TEST(EvaluateTest, MacroAucIsMeanOfPerClass) {
  auto b = MakeBlobs(9, 30, 1.5);
  TrainConfig config;
  config.learning_rate = 0.05;
  auto model = train(b.x, b.y, config);
  auto ev = evaluate(model, b.x, b.y, 300, 0.05, 10);
  ASSERT_EQ(ev.per_class_auc.size(), 3u);
  const double mean = (ev.per_class_auc[0] + ev.per_class_auc[1] + ev.per_class_auc[2]) / 3.0;
  EXPECT_NEAR(ev.auc_macro, mean, 1e-12);
  EXPECT_NEAR(ev.ci.estimate, ev.auc_macro, 1e-12);
  EXPECT_LE(ev.ci.lower, ev.auc_macro);
  EXPECT_GE(ev.ci.upper, ev.auc_macro);
  EXPECT_EQ(ev.confusion.total(), b.y.size());
  auto again = evaluate(model, b.x, b.y, 300, 0.05, 10, 4);
  EXPECT_EQ(again.ci.lower, ev.ci.lower);
}

TEST(EvaluateTest, MacroAucUndefinedWithoutNegatives) {
  Eigen::MatrixXd p(3, 3);
  p << 0.8, 0.1, 0.1, 0.1, 0.8, 0.1, 0.1, 0.1, 0.8;
  std::vector<int> y = {0, 1, 2};
  std::vector<std::size_t> all = {0, 1, 2};
  std::vector<std::size_t> only_first = {0, 0, 0};
  EXPECT_DOUBLE_EQ(macro_auc(p, y, all), 1.0);
  EXPECT_TRUE(std::isnan(macro_auc(p, y, only_first)));
}

LabeledDataset AsDataset(const Blobs& b, Origin origin, const std::string& name) {
  std::vector<ImageSample> s;
  for (Eigen::Index i = 0; i < b.x.rows(); ++i) {
    ImageSample sample{name + std::to_string(i), label_from_index(b.y[i]), origin,
                       {1, 1, static_cast<std::size_t>(b.x.cols())}, {}};
    for (Eigen::Index j = 0; j < b.x.cols(); ++j) {
      sample.pixels.push_back(static_cast<float>(b.x(i, j)));
    }
    s.push_back(sample);
  }
  return LabeledDataset(name, {1, 1, static_cast<std::size_t>(b.x.cols())}, s);
}

TEST(DiversityTest, IdenticalTrainingSetsGiveZeroGap) {
  auto tr = MakeBlobs(11, 30, 1.0, 3);
  auto te = MakeBlobs(12, 20, 1.0, 3);
  auto real = AsDataset(tr, Origin::kTrain, "r");
  auto synth = AsDataset(tr, Origin::kSynthetic, "s");
  auto test = AsDataset(te, Origin::kTest, "t");
  auto model = fit_embedding(real.samples(), 2, 0);
  DiversityConfig config;
  config.train.learning_rate = 0.05;
  config.n_resamples = 200;
  auto report = diversity_audit(real, synth, test, model, config);
  EXPECT_EQ(report.backbone, "linear");
  EXPECT_EQ(report.auc_gap, 0.0);
  EXPECT_EQ(report.f_real.ci.lower, report.f_synth.ci.lower);
  EXPECT_GT(report.f_real.auc_macro, 0.8);
}

TEST(ClassifierTest, TwoClassBlobsWithDefaultEpochs) {
  Rng rng(13);
  Eigen::MatrixXd x(100, 2);
  std::vector<int> y(100);
  for (int i = 0; i < 100; ++i) {
    y[i] = i < 50 ? 0 : 1;
    const double c = y[i] ? 2.0 : -2.0;
    x(i, 0) = c + 0.5 * rng.normal();
    x(i, 1) = c + 0.5 * rng.normal();
  }
  TrainConfig config;
  config.learning_rate = 0.1;
  auto model = train(x, y, config);
  auto p = model.predict_proba(x);
  int correct = 0;
  for (int i = 0; i < 100; ++i) {
    Eigen::Index arg = 0;
    p.row(i).maxCoeff(&arg);
    correct += arg == y[i];
  }
  EXPECT_GE(correct, 95);
}

TEST(DiversityTest, ShuffledSyntheticLabelsDestroySignal) {
  // A single run scatters widely because a random weight direction still
  // ranks whole clusters; the expectation over seeds is chance.
  const int runs = 100;
  double synth_sum = 0.0, gap_sum = 0.0;
  for (int r = 0; r < runs; ++r) {
    auto tr = MakeBlobs(1000 + r, 100, 1.0, 3);
    auto te = MakeBlobs(2000 + r, 50, 1.0, 3);
    auto shuffled = tr;
    Rng rng(3000 + r);
    rng.shuffle(shuffled.y);
    TrainConfig config;
    config.learning_rate = 0.05;
    config.seed = r;
    std::vector<std::size_t> rows(te.y.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    const double real = macro_auc(train(tr.x, tr.y, config).predict_proba(te.x), te.y, rows);
    const double synth =
        macro_auc(train(tr.x, shuffled.y, config).predict_proba(te.x), te.y, rows);
    synth_sum += synth;
    gap_sum += real - synth;
  }
  // Per-run sd is about 0.3, so the mean of 100 runs has sd 0.03.
  EXPECT_NEAR(synth_sum / runs, 0.5, 0.1);
  EXPECT_GT(gap_sum / runs, 0.3);
}

}  // namespace
}  // namespace synaudit
