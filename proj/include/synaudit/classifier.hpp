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
 * @file classifier.hpp
 *
 * @brief Two-classifier diversity audit.
 *
 * One classifier is trained on real features and one on synthetic features
 * with the same configuration and seed; both are scored on the same real
 * test set. The backbone is multinomial logistic regression on embedding
 * features.
 */

#ifndef SYNAUDIT_CLASSIFIER_HPP_
#define SYNAUDIT_CLASSIFIER_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "synaudit/embedding.hpp"
#include "synaudit/stats.hpp"
#include "synaudit/tensor_io.hpp"

namespace synaudit {

struct TrainConfig {
  double learning_rate = 1e-4;
  double momentum = 0.9;
  std::size_t epochs = 20;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;

  /// Throws InvalidConfig when a field is out of range.
  void validate() const;
};

class LinearClassifier {
 public:
  LinearClassifier() = default;
  /// Zero weights and bias.
  LinearClassifier(std::size_t num_classes, std::size_t feature_dim);
  LinearClassifier(Eigen::MatrixXd weights, Eigen::VectorXd bias);

  std::size_t num_classes() const { return static_cast<std::size_t>(weights_.rows()); }
  std::size_t feature_dim() const { return static_cast<std::size_t>(weights_.cols()); }

  const Eigen::MatrixXd& weights() const { return weights_; }  // K x d
  const Eigen::VectorXd& bias() const { return bias_; }
  Eigen::MatrixXd& weights() { return weights_; }
  Eigen::VectorXd& bias() { return bias_; }

  /// N x K logits. Throws ShapeMismatch on a wrong feature width.
  Eigen::MatrixXd logits(const Eigen::MatrixXd& features) const;
  /// N x K softmax rows.
  Eigen::MatrixXd predict_proba(const Eigen::MatrixXd& features) const;

  /// Full-data loss before training, then after each epoch.
  std::vector<double> loss_history;

 private:
  Eigen::MatrixXd weights_;
  Eigen::VectorXd bias_;
};

/// Row-wise softmax with the row maximum subtracted first.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

struct LossAndGrad {
  double loss = 0.0;
  Eigen::MatrixXd grad_weights;
  Eigen::VectorXd grad_bias;
};

/// Mean cross-entropy and its gradient. Throws ShapeMismatch when sizes
/// disagree and InvalidArgument for a label outside [0, K).
LossAndGrad loss_and_grad(const LinearClassifier& model,
                          const Eigen::MatrixXd& features, std::span<const int> labels);

/// Mini-batch SGD with momentum (v = mu v + g; theta -= lr v) from zero
/// parameters. Each epoch visits a fresh seeded permutation; the last short
/// batch is kept. Throws SingleClass when fewer than two classes are present
/// and DivergenceDetected on a non-finite loss.
LinearClassifier train(const Eigen::MatrixXd& features, std::span<const int> labels,
                       const TrainConfig& config, std::size_t num_classes = kNumClasses);

struct ClassifierEvaluation {
  double auc_macro = 0.0;  // mean of the per-class one-vs-rest AUCs
  BootstrapCI ci;
  std::vector<double> per_class_auc;
  std::vector<RocCurve> per_class_roc;
  RocCurve macro_roc;
  ConfusionMatrix confusion;
  std::vector<double> loss_history;
};

/// Per-class one-vs-rest ROC on the probability columns, macro AUC with a
/// BCa interval over test resamples, and the argmax confusion matrix.
ClassifierEvaluation evaluate(const LinearClassifier& model,
                              const Eigen::MatrixXd& features,
                              std::span<const int> labels, std::size_t n_resamples,
                              double alpha, std::uint64_t seed, unsigned workers = 1);

/// Macro AUC of probability rows; NaN when a class has no positives or no
/// negatives among `rows`.
double macro_auc(const Eigen::MatrixXd& probabilities, std::span<const int> labels,
                 std::span<const std::size_t> rows);

struct DiversityConfig {
  TrainConfig train;
  std::size_t n_resamples = 2000;
  double alpha = 0.05;
  std::uint64_t bootstrap_seed = 0;
  unsigned workers = 1;
};

struct DiversityReport {
  std::string backbone = "linear";
  ClassifierEvaluation f_real;
  ClassifierEvaluation f_synth;
  double auc_gap = 0.0;  // f_real.auc_macro - f_synth.auc_macro
};

std::vector<int> label_indices(const LabeledDataset& dataset);

/// Embeds the three datasets, trains F_real and F_synth with `config.train`,
/// and evaluates both on `test`.
DiversityReport diversity_audit(const LabeledDataset& real_train,
                                const LabeledDataset& synth_train,
                                const LabeledDataset& test,
                                const EmbeddingModel& embedding,
                                const DiversityConfig& config);

}  // namespace synaudit

#endif  // SYNAUDIT_CLASSIFIER_HPP_
