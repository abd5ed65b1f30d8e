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
 * @file conditioning.hpp
 *
 * @brief Class-condition vectors, morphing schedules, label sampling and the
 * generator interface.
 *
 * Class indices are 0-based here (0 = cervical, 1 = thoracic, 2 = lumbar).
 * Written notation usually counts from 1, so "c_1" is one_hot(0).
 */

#ifndef SYNAUDIT_CONDITIONING_HPP_
#define SYNAUDIT_CONDITIONING_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "synaudit/tensor_io.hpp"

namespace synaudit {

inline constexpr std::size_t kLatentDim = 100;

/// Non-negative weights summing to 1, one per class.
struct ConditionVector {
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  bool operator==(const ConditionVector&) const = default;
};

/// True when every weight is >= 0 and the sum is within `tol` of 1.
bool is_simplex(const ConditionVector& c, double tol = 1e-12);

/// Index of the largest weight; the lowest index wins ties.
std::size_t argmax(const ConditionVector& c);

struct LatentVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool operator==(const LatentVector&) const = default;
};

struct MorphSchedule {
  std::size_t source = 0;
  std::size_t target = 0;
  std::size_t n = 0;
  std::vector<ConditionVector> steps;  // n + 1 entries
};

struct LabelDistribution {
  std::vector<double> probabilities;  // (cervical, thoracic, lumbar)
};

/// Throws InvalidArgument unless `p` is a valid distribution.
LabelDistribution make_distribution(std::vector<double> p);

/// Class mix used to draw synthetic labels by default.
LabelDistribution default_label_distribution();

/// Throws IndexOutOfRange unless k < num_classes.
ConditionVector one_hot(std::size_t k, std::size_t num_classes = kNumClasses);

/// Weight (n - t) / n on `source`, t / n on `target`, 0 elsewhere.
/// Throws DegenerateMorph if source == target, StepOutOfRange if n == 0 or
/// t > n, IndexOutOfRange for a bad class index.
ConditionVector morph_step(std::size_t source, std::size_t target, std::size_t n,
                           std::size_t t, std::size_t num_classes = kNumClasses);

MorphSchedule morph_schedule(std::size_t source, std::size_t target, std::size_t n,
                             std::size_t num_classes = kNumClasses);

/// Class frequencies. Throws EmptyInput on an empty vector.
LabelDistribution empirical_distribution(std::span<const Label> labels);

/// i.i.d. categorical draws by inverse CDF on one uniform per draw.
std::vector<Label> sample_labels(const LabelDistribution& dist, std::size_t n,
                                 std::uint64_t seed);

/// kLatentDim standard-normal draws.
LatentVector sample_latent(std::uint64_t seed);

/// Maps (z, c) to an image. Implementations are immutable after
/// construction and deterministic in (z, c) and their own seed.
class Generator {
 public:
  virtual ~Generator() = default;

  virtual ImageShape shape() const = 0;
  /// Raw pixels before clamping. z and c have already been checked.
  virtual std::vector<float> render(const LatentVector& z,
                                    const ConditionVector& c) const = 0;
  /// Free-text note stored alongside each generated sample.
  virtual std::string provenance(const LatentVector& z,
                                 const ConditionVector& c) const = 0;
};

/// Renders, clamps pixels to [-1, 1] and labels the sample argmax(c).
/// Throws DimensionMismatch on a wrongly sized z or c, InvalidArgument if c
/// is not on the simplex.
ImageSample generate(const Generator& generator, const LatentVector& z,
                     const ConditionVector& c, std::string id);

/// tanh(gain * (W z + B c)) with class patterns B (D x K) ~ N(0, 1) and
/// W = A R of rank `rank`: A (D x rank) ~ N(0, 1/rank), R (rank x kLatentDim)
/// ~ N(0, 1/kLatentDim). All drawn once from `seed`; never sees a real
/// sample. The rank sets the intrinsic dimension of the output manifold.
class ToyPrivateGenerator final : public Generator {
 public:
  ToyPrivateGenerator(ImageShape shape, std::uint64_t seed,
                      std::size_t rank = kLatentDim, double gain = 1.0);

  ImageShape shape() const override { return shape_; }
  std::vector<float> render(const LatentVector& z,
                            const ConditionVector& c) const override;
  std::string provenance(const LatentVector& z,
                         const ConditionVector& c) const override;

 private:
  ImageShape shape_;
  double gain_;
  Eigen::MatrixXd latent_map_;
  Eigen::MatrixXd class_map_;
};

/// Returns a stored training sample plus uniform noise in [-epsilon,
/// epsilon]. generate() picks a sample of class argmax(c) at position
/// floor(Phi(z_0) * n_k); the noise stream is seeded from the generator seed
/// and the bits of z.
class ToyLeakyGenerator final : public Generator {
 public:
  ToyLeakyGenerator(LabeledDataset train, double epsilon, std::uint64_t seed);

  ImageShape shape() const override { return train_.shape(); }
  std::vector<float> render(const LatentVector& z,
                            const ConditionVector& c) const override;
  std::string provenance(const LatentVector& z,
                         const ConditionVector& c) const override;

  /// Copy of train sample `index` with noise from `noise_seed`, clamped,
  /// origin Synthetic, label copied from the source.
  ImageSample reproduce(std::size_t index, std::uint64_t noise_seed,
                        std::string id) const;

  const LabeledDataset& train() const { return train_; }
  double epsilon() const { return epsilon_; }

 private:
  std::size_t pick(const LatentVector& z, const ConditionVector& c) const;
  std::vector<float> noisy_copy(std::size_t index, std::uint64_t noise_seed) const;
  std::uint64_t noise_seed(const LatentVector& z) const;

  LabeledDataset train_;
  double epsilon_;
  std::uint64_t seed_;
  std::vector<std::vector<std::size_t>> by_class_;
};

}  // namespace synaudit

#endif  // SYNAUDIT_CONDITIONING_HPP_
