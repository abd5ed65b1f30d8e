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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "synaudit/error.hpp"
#include "synaudit/random.hpp"

namespace synaudit {
namespace {

void check_labels(std::span<const int> labels, std::size_t rows, std::size_t k) {
  if (labels.size() != rows) {
    throw Error(ErrorCode::kShapeMismatch,
                std::to_string(rows) + " feature rows, " + std::to_string(labels.size()) +
                    " labels");
  }
  for (int l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= k) {
      throw Error(ErrorCode::kInvalidArgument, "label " + std::to_string(l) +
                                                   " outside [0, " + std::to_string(k) +
                                                   ")");
    }
  }
}

// Loss and gradient over the listed rows only.
LossAndGrad batch_loss_and_grad(const LinearClassifier& model,
                                const Eigen::MatrixXd& features,
                                std::span<const int> labels,
                                std::span<const std::size_t> rows) {
  const auto k = static_cast<Eigen::Index>(model.num_classes());
  const auto d = static_cast<Eigen::Index>(model.feature_dim());
  LossAndGrad out;
  out.grad_weights = Eigen::MatrixXd::Zero(k, d);
  out.grad_bias = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd z(k);
  for (std::size_t r : rows) {
    const auto i = static_cast<Eigen::Index>(r);
    z = model.weights() * features.row(i).transpose() + model.bias();
    const double m = z.maxCoeff();
    const Eigen::VectorXd e = (z.array() - m).exp().matrix();
    const double s = e.sum();
    const int y = labels[r];
    out.loss += std::log(s) - (z(y) - m);
    Eigen::VectorXd p = e / s;
    p(y) -= 1.0;
    out.grad_weights.noalias() += p * features.row(i);
    out.grad_bias += p;
  }
  const double n = static_cast<double>(rows.size());
  out.loss /= n;
  out.grad_weights /= n;
  out.grad_bias /= n;
  return out;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::kInvalidConfig, "learning_rate must be > 0");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "momentum must lie in [0, 1)");
  }
  if (epochs < 1) throw Error(ErrorCode::kInvalidConfig, "epochs must be >= 1");
  if (batch_size < 1) throw Error(ErrorCode::kInvalidConfig, "batch_size must be >= 1");
}

LinearClassifier::LinearClassifier(std::size_t num_classes, std::size_t feature_dim)
    : weights_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(num_classes),
                                     static_cast<Eigen::Index>(feature_dim))),
      bias_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_classes))) {}

LinearClassifier::LinearClassifier(Eigen::MatrixXd weights, Eigen::VectorXd bias)
    : weights_(std::move(weights)), bias_(std::move(bias)) {
  if (bias_.size() != weights_.rows()) {
    throw Error(ErrorCode::kShapeMismatch, "bias length differs from class count");
  }
}

Eigen::MatrixXd LinearClassifier::logits(const Eigen::MatrixXd& features) const {
  if (features.cols() != weights_.cols()) {
    throw Error(ErrorCode::kShapeMismatch,
                "features have width " + std::to_string(features.cols()) +
                    ", model expects " + std::to_string(weights_.cols()));
  }
  Eigen::MatrixXd z = features * weights_.transpose();
  z.rowwise() += bias_.transpose();
  return z;
}

Eigen::MatrixXd LinearClassifier::predict_proba(const Eigen::MatrixXd& features) const {
  return softmax_rows(logits(features));
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd p(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    p.row(i) = (logits.row(i).array() - m).exp().matrix();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

LossAndGrad loss_and_grad(const LinearClassifier& model,
                          const Eigen::MatrixXd& features, std::span<const int> labels) {
  if (features.cols() != static_cast<Eigen::Index>(model.feature_dim())) {
    throw Error(ErrorCode::kShapeMismatch, "feature width differs from the model");
  }
  check_labels(labels, static_cast<std::size_t>(features.rows()), model.num_classes());
  if (labels.empty()) throw Error(ErrorCode::kEmptyInput, "no samples");
  const auto rows = all_rows(labels.size());
  return batch_loss_and_grad(model, features, labels, rows);
}

LinearClassifier train(const Eigen::MatrixXd& features, std::span<const int> labels,
                       const TrainConfig& config, std::size_t num_classes) {
  config.validate();
  const auto n = static_cast<std::size_t>(features.rows());
  check_labels(labels, n, num_classes);
  if (!features.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "features must be finite");
  }
  std::vector<bool> present(num_classes, false);
  for (int l : labels) present[static_cast<std::size_t>(l)] = true;
  if (std::count(present.begin(), present.end(), true) < 2) {
    throw Error(ErrorCode::kSingleClass, "training needs at least two classes");
  }

  LinearClassifier model(num_classes, static_cast<std::size_t>(features.cols()));
  const auto everything = all_rows(n);
  auto record_loss = [&](std::size_t epoch) {
    const double loss = batch_loss_and_grad(model, features, labels, everything).loss;
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kDivergenceDetected,
                  "non-finite loss after epoch " + std::to_string(epoch));
    }
    model.loss_history.push_back(loss);
  };
  record_loss(0);

  Eigen::MatrixXd velocity_w = Eigen::MatrixXd::Zero(model.weights().rows(),
                                                      model.weights().cols());
  Eigen::VectorXd velocity_b = Eigen::VectorXd::Zero(model.bias().size());
  Rng rng(config.seed);
  std::vector<std::size_t> order = everything;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t stop = std::min(n, start + config.batch_size);
      const std::span<const std::size_t> batch(order.data() + start, stop - start);
      const LossAndGrad g = batch_loss_and_grad(model, features, labels, batch);
      velocity_w = config.momentum * velocity_w + g.grad_weights;
      velocity_b = config.momentum * velocity_b + g.grad_bias;
      model.weights() -= config.learning_rate * velocity_w;
      model.bias() -= config.learning_rate * velocity_b;
    }
    record_loss(epoch);
  }
  return model;
}

double macro_auc(const Eigen::MatrixXd& probabilities, std::span<const int> labels,
                 std::span<const std::size_t> rows) {
  const auto k = static_cast<std::size_t>(probabilities.cols());
  double sum = 0.0;
  std::vector<double> scores(rows.size());
  std::vector<int> binary(rows.size());
  for (std::size_t c = 0; c < k; ++c) {
    bool has_pos = false, has_neg = false;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      scores[j] = probabilities(static_cast<Eigen::Index>(rows[j]),
                                static_cast<Eigen::Index>(c));
      binary[j] = labels[rows[j]] == static_cast<int>(c) ? 1 : 0;
      (binary[j] != 0 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) return std::numeric_limits<double>::quiet_NaN();
    sum += roc_curve(scores, binary).auc;
  }
  return sum / static_cast<double>(k);
}

ClassifierEvaluation evaluate(const LinearClassifier& model,
                              const Eigen::MatrixXd& features,
                              std::span<const int> labels, std::size_t n_resamples,
                              double alpha, std::uint64_t seed, unsigned workers) {
  check_labels(labels, static_cast<std::size_t>(features.rows()), model.num_classes());
  const Eigen::MatrixXd probs = model.predict_proba(features);
  ClassifierEvaluation out;
  double sum = 0.0;
  for (std::size_t c = 0; c < model.num_classes(); ++c) {
    const auto binary = one_vs_rest(labels, static_cast<int>(c));
    const Eigen::VectorXd column = probs.col(static_cast<Eigen::Index>(c));
    out.per_class_roc.push_back(roc_curve(
        std::span<const double>(column.data(), static_cast<std::size_t>(column.size())),
        binary));
    out.per_class_auc.push_back(out.per_class_roc.back().auc);
    sum += out.per_class_auc.back();
  }
  out.auc_macro = sum / static_cast<double>(model.num_classes());
  out.macro_roc = macro_average(out.per_class_roc);
  out.ci = bca_interval(
      labels.size(),
      [&](std::span<const std::size_t> rows) { return macro_auc(probs, labels, rows); },
      n_resamples, alpha, seed, workers);
  out.confusion = confusion(probs, labels);
  out.loss_history = model.loss_history;
  return out;
}

std::vector<int> label_indices(const LabeledDataset& dataset) {
  std::vector<int> out;
  out.reserve(dataset.size());
  for (const auto& s : dataset.samples()) out.push_back(label_index(s.label));
  return out;
}

DiversityReport diversity_audit(const LabeledDataset& real_train,
                                const LabeledDataset& synth_train,
                                const LabeledDataset& test,
                                const EmbeddingModel& embedding,
                                const DiversityConfig& config) {
  if (real_train.empty() || synth_train.empty() || test.empty()) {
    throw Error(ErrorCode::kEmptyInput, "diversity audit needs three non-empty datasets");
  }
  config.train.validate();
  const Eigen::MatrixXd x_real = embedding.transform(real_train);
  const Eigen::MatrixXd x_synth = embedding.transform(synth_train);
  const Eigen::MatrixXd x_test = embedding.transform(test);
  const auto y_real = label_indices(real_train);
  const auto y_synth = label_indices(synth_train);
  const auto y_test = label_indices(test);

  const LinearClassifier f_real = train(x_real, y_real, config.train);
  const LinearClassifier f_synth = train(x_synth, y_synth, config.train);

  DiversityReport report;
  report.f_real = evaluate(f_real, x_test, y_test, config.n_resamples, config.alpha,
                           config.bootstrap_seed, config.workers);
  report.f_synth = evaluate(f_synth, x_test, y_test, config.n_resamples, config.alpha,
                            config.bootstrap_seed, config.workers);
  report.auc_gap = report.f_real.auc_macro - report.f_synth.auc_macro;
  return report;
}

}  // namespace synaudit
