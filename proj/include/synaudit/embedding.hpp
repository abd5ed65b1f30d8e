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
 * @file embedding.hpp
 *
 * @brief Principal-component feature space learned from real samples only.
 *
 * The model maps a flattened image x to components * (x - mean). It is the
 * shared feature space of the embedding-space attacks, the 2-D coordinate
 * exports and the classifier audit.
 */

#ifndef SYNAUDIT_EMBEDDING_HPP_
#define SYNAUDIT_EMBEDDING_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>

#include <Eigen/Dense>

#include "synaudit/tensor_io.hpp"

namespace synaudit {

inline constexpr std::size_t kDefaultEmbeddingDim = 64;

class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  /// Assembles a model from stored parts; checks the dimensions agree.
  EmbeddingModel(ImageShape input_shape, Eigen::VectorXd mean,
                 Eigen::MatrixXd components, Eigen::VectorXd eigenvalues,
                 double total_variance);

  const ImageShape& input_shape() const { return input_shape_; }
  std::size_t input_dim() const { return static_cast<std::size_t>(mean_.size()); }
  std::size_t dim() const { return static_cast<std::size_t>(components_.rows()); }
  const Eigen::VectorXd& mean() const { return mean_; }
  /// d x D, orthonormal rows.
  const Eigen::MatrixXd& components() const { return components_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  double total_variance() const { return total_variance_; }

  /// Row i = components * (rows.row(i) - mean). `rows` is N x D.
  Eigen::MatrixXd transform(const Eigen::MatrixXd& rows) const;
  Eigen::MatrixXd transform(std::span<const ImageSample> samples) const;
  Eigen::MatrixXd transform(const LabeledDataset& dataset) const {
    return transform(std::span<const ImageSample>(dataset.samples()));
  }

  /// Row i = mean + features.row(i) * components. `features` is N x d.
  Eigen::MatrixXd inverse_transform(const Eigen::MatrixXd& features) const;

  /// eigenvalues / total variance.
  Eigen::VectorXd explained_variance_ratio() const;

 private:
  ImageShape input_shape_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd components_;
  Eigen::VectorXd eigenvalues_;
  double total_variance_ = 0.0;
};

/// Flattens samples into an N x D matrix of doubles.
Eigen::MatrixXd flatten(std::span<const ImageSample> samples);

/// Fits the top-`dim` principal components of `rows` (N x D) with 1/(N-1)
/// normalization. Uses the N x N Gram matrix when N < D, else the D x D
/// covariance. Each component row is negated if its largest-magnitude entry
/// is negative (lowest index on ties).
///
/// Throws DimTooLarge unless 1 <= dim <= min(N-1, D), and DegenerateData on
/// zero total variance. `workers` only splits Gram/covariance rows; every
/// entry is accumulated in index order, so the result is worker-independent.
EmbeddingModel fit_embedding(const Eigen::MatrixXd& rows, ImageShape shape,
                             std::size_t dim, unsigned workers = 1);

/// Real-data fit. Throws SyntheticContamination if any sample has origin
/// Synthetic. `seed` is unused by the principal-component fit; it is kept so
/// a stochastic embedding can be swapped in behind the same signature.
EmbeddingModel fit_embedding(std::span<const ImageSample> real_samples,
                             std::size_t dim, std::uint64_t seed,
                             unsigned workers = 1);

/// Writes `<stem>.npy` (mean, components, eigenvalues concatenated) and
/// `<stem>.json` ({dim, input_shape, total_variance, format_version}).
void save_embedding(const EmbeddingModel& model, const std::filesystem::path& stem);
EmbeddingModel load_embedding(const std::filesystem::path& stem);

}  // namespace synaudit

#endif  // SYNAUDIT_EMBEDDING_HPP_
