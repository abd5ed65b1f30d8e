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

#include "synaudit/conditioning.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "synaudit/error.hpp"
#include "synaudit/random.hpp"
#include "synaudit/stats.hpp"

namespace synaudit {
namespace {

void check_class(std::size_t k, std::size_t num_classes) {
  if (k >= num_classes) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "class " + std::to_string(k) + " with " + std::to_string(num_classes) +
                    " classes");
  }
}

void check_dimensions(const Generator& generator, const LatentVector& z,
                      const ConditionVector& c) {
  if (z.size() != kLatentDim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "latent has " + std::to_string(z.size()) + " entries, expected " +
                    std::to_string(kLatentDim));
  }
  if (c.size() != kNumClasses) {
    throw Error(ErrorCode::kDimensionMismatch,
                "condition has " + std::to_string(c.size()) + " entries, expected " +
                    std::to_string(kNumClasses));
  }
  if (generator.shape().flat_size() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "generator has an empty output shape");
  }
}

}  // namespace

bool is_simplex(const ConditionVector& c, double tol) {
  if (c.weights.empty()) return false;
  double sum = 0.0;
  for (double w : c.weights) {
    if (!(w >= 0.0)) return false;
    sum += w;
  }
  return std::abs(sum - 1.0) <= tol;
}

std::size_t argmax(const ConditionVector& c) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.weights.size(); ++i) {
    if (c.weights[i] > c.weights[best]) best = i;
  }
  return best;
}

LabelDistribution make_distribution(std::vector<double> p) {
  if (p.size() != kNumClasses || !is_simplex(ConditionVector{p})) {
    throw Error(ErrorCode::kInvalidArgument,
                "label distribution must be 3 non-negative weights summing to 1");
  }
  return LabelDistribution{std::move(p)};
}

LabelDistribution default_label_distribution() {
  return LabelDistribution{{0.25, 0.55, 0.2}};
}

ConditionVector one_hot(std::size_t k, std::size_t num_classes) {
  check_class(k, num_classes);
  ConditionVector c{std::vector<double>(num_classes, 0.0)};
  c.weights[k] = 1.0;
  return c;
}

ConditionVector morph_step(std::size_t source, std::size_t target, std::size_t n,
                           std::size_t t, std::size_t num_classes) {
  check_class(source, num_classes);
  check_class(target, num_classes);
  if (source == target) {
    throw Error(ErrorCode::kDegenerateMorph, "source and target class are equal");
  }
  if (n == 0 || t > n) {
    throw Error(ErrorCode::kStepOutOfRange,
                "step " + std::to_string(t) + " of " + std::to_string(n));
  }
  ConditionVector c{std::vector<double>(num_classes, 0.0)};
  const double steps = static_cast<double>(n);
  c.weights[source] = static_cast<double>(n - t) / steps;
  c.weights[target] = static_cast<double>(t) / steps;
  return c;
}

MorphSchedule morph_schedule(std::size_t source, std::size_t target, std::size_t n,
                             std::size_t num_classes) {
  MorphSchedule schedule{source, target, n, {}};
  // Validates before the loop so n == 0 is reported as a step error.
  schedule.steps.push_back(morph_step(source, target, n, 0, num_classes));
  for (std::size_t t = 1; t <= n; ++t) {
    schedule.steps.push_back(morph_step(source, target, n, t, num_classes));
  }
  return schedule;
}

LabelDistribution empirical_distribution(std::span<const Label> labels) {
  if (labels.empty()) throw Error(ErrorCode::kEmptyInput, "no labels");
  std::vector<std::size_t> counts(kNumClasses, 0);
  for (Label l : labels) ++counts[static_cast<std::size_t>(label_index(l))];
  LabelDistribution dist;
  const double n = static_cast<double>(labels.size());
  for (std::size_t c : counts) dist.probabilities.push_back(static_cast<double>(c) / n);
  return dist;
}

std::vector<Label> sample_labels(const LabelDistribution& dist, std::size_t n,
                                 std::uint64_t seed) {
  const LabelDistribution checked = make_distribution(dist.probabilities);
  std::vector<double> cumulative;
  double acc = 0.0;
  for (double p : checked.probabilities) cumulative.push_back(acc += p);
  std::size_t last = 0;
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    if (checked.probabilities[k] > 0.0) last = k;
  }
  Rng rng(seed);
  std::vector<Label> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    std::size_t k = 0;
    while (k < last && !(u < cumulative[k])) ++k;
    out.push_back(label_from_index(k));
  }
  return out;
}

LatentVector sample_latent(std::uint64_t seed) {
  Rng rng(seed);
  LatentVector z;
  z.values.reserve(kLatentDim);
  for (std::size_t i = 0; i < kLatentDim; ++i) z.values.push_back(rng.normal());
  return z;
}

ImageSample generate(const Generator& generator, const LatentVector& z,
                     const ConditionVector& c, std::string id) {
  check_dimensions(generator, z, c);
  if (!is_simplex(c)) {
    throw Error(ErrorCode::kInvalidArgument, "condition vector is not on the simplex");
  }
  ImageSample sample;
  sample.id = std::move(id);
  sample.label = label_from_index(argmax(c));
  sample.origin = Origin::kSynthetic;
  sample.shape = generator.shape();
  sample.pixels = generator.render(z, c);
  if (sample.pixels.size() != sample.shape.flat_size()) {
    throw Error(ErrorCode::kDimensionMismatch, "generator returned a wrong pixel count");
  }
  for (float& p : sample.pixels) p = std::clamp(p, -1.0f, 1.0f);
  return sample;
}

ToyPrivateGenerator::ToyPrivateGenerator(ImageShape shape, std::uint64_t seed,
                                         std::size_t rank, double gain)
    : shape_(shape), gain_(gain) {
  const auto d = static_cast<Eigen::Index>(shape.flat_size());
  if (d == 0) throw Error(ErrorCode::kInvalidArgument, "empty generator shape");
  if (rank < 1 || rank > kLatentDim) {
    throw Error(ErrorCode::kInvalidArgument, "generator rank must lie in [1, 100]");
  }
  Rng rng(derive_seed(seed, "private-generator"));
  const auto r = static_cast<Eigen::Index>(rank);
  const auto latent = static_cast<Eigen::Index>(kLatentDim);
  // Filled entry by entry in row order so the draws do not depend on
  // Eigen's storage order.
  auto fill = [&rng](Eigen::MatrixXd& m, double scale) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = scale * rng.normal();
    }
  };
  Eigen::MatrixXd a(d, r);
  Eigen::MatrixXd mix(r, latent);
  class_map_.resize(d, static_cast<Eigen::Index>(kNumClasses));
  fill(a, 1.0 / std::sqrt(static_cast<double>(rank)));
  fill(mix, 1.0 / std::sqrt(static_cast<double>(kLatentDim)));
  fill(class_map_, 1.0);
  latent_map_ = a * mix;
}

std::vector<float> ToyPrivateGenerator::render(const LatentVector& z,
                                               const ConditionVector& c) const {
  std::vector<float> pixels(static_cast<std::size_t>(latent_map_.rows()));
  for (Eigen::Index i = 0; i < latent_map_.rows(); ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < latent_map_.cols(); ++j) {
      acc += latent_map_(i, j) * z.values[static_cast<std::size_t>(j)];
    }
    for (Eigen::Index k = 0; k < class_map_.cols(); ++k) {
      acc += class_map_(i, k) * c.weights[static_cast<std::size_t>(k)];
    }
    pixels[static_cast<std::size_t>(i)] = static_cast<float>(std::tanh(gain_ * acc));
  }
  return pixels;
}

std::string ToyPrivateGenerator::provenance(const LatentVector&,
                                            const ConditionVector&) const {
  return "private:linear-map";
}

ToyLeakyGenerator::ToyLeakyGenerator(LabeledDataset train, double epsilon,
                                     std::uint64_t seed)
    : train_(std::move(train)), epsilon_(epsilon), seed_(seed), by_class_(kNumClasses) {
  if (train_.empty()) throw Error(ErrorCode::kEmptyInput, "leaky generator needs samples");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be finite and >= 0");
  }
  for (std::size_t i = 0; i < train_.size(); ++i) {
    by_class_[static_cast<std::size_t>(label_index(train_[i].label))].push_back(i);
  }
}

std::size_t ToyLeakyGenerator::pick(const LatentVector& z,
                                    const ConditionVector& c) const {
  const auto& pool = by_class_[argmax(c)];
  if (pool.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no stored sample of class " +
                    std::string(to_string(label_from_index(argmax(c)))));
  }
  const double u = normal_cdf(z.values[0]);
  auto pos = static_cast<std::size_t>(std::floor(u * static_cast<double>(pool.size())));
  return pool[std::min(pos, pool.size() - 1)];
}

std::uint64_t ToyLeakyGenerator::noise_seed(const LatentVector& z) const {
  std::uint64_t h = 1469598103934665603ULL;
  for (double v : z.values) {
    h ^= std::bit_cast<std::uint64_t>(v);
    h *= 1099511628211ULL;
  }
  return derive_seed(seed_, h);
}

std::vector<float> ToyLeakyGenerator::noisy_copy(std::size_t index,
                                                 std::uint64_t noise_seed) const {
  std::vector<float> pixels = train_[index].pixels;
  if (epsilon_ > 0.0) {
    Rng rng(noise_seed);
    for (float& p : pixels) {
      p = static_cast<float>(static_cast<double>(p) +
                             epsilon_ * (2.0 * rng.uniform() - 1.0));
    }
  }
  return pixels;
}

std::vector<float> ToyLeakyGenerator::render(const LatentVector& z,
                                             const ConditionVector& c) const {
  return noisy_copy(pick(z, c), noise_seed(z));
}

std::string ToyLeakyGenerator::provenance(const LatentVector& z,
                                          const ConditionVector& c) const {
  return "leaky:copy-of:" + train_[pick(z, c)].id;
}

ImageSample ToyLeakyGenerator::reproduce(std::size_t index, std::uint64_t noise_seed,
                                         std::string id) const {
  if (index >= train_.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "train index " + std::to_string(index));
  }
  ImageSample sample;
  sample.id = std::move(id);
  sample.label = train_[index].label;
  sample.origin = Origin::kSynthetic;
  sample.shape = train_.shape();
  sample.pixels = noisy_copy(index, noise_seed);
  for (float& p : sample.pixels) p = std::clamp(p, -1.0f, 1.0f);
  return sample;
}

}  // namespace synaudit
