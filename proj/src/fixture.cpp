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

#include "synaudit/fixture.hpp"

#include <cmath>

#include <fmt/format.h>

#include "synaudit/error.hpp"
#include "synaudit/random.hpp"

namespace synaudit {
namespace {

LabeledDataset draw_split(const ToyPrivateGenerator& generator, std::string_view name,
                          Origin origin, std::size_t n, std::uint64_t seed,
                          std::vector<std::string>* provenance) {
  const auto labels =
      sample_labels(default_label_distribution(), n, derive_seed(seed, "labels"));
  const std::uint64_t latent_root = derive_seed(seed, "latent");
  std::vector<ImageSample> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const LatentVector z = sample_latent(derive_seed(latent_root, i));
    const ConditionVector c = one_hot(static_cast<std::size_t>(label_index(labels[i])));
    ImageSample s = generate(generator, z, c, fmt::format("{}-{:05d}", name, i));
    s.origin = origin;
    if (provenance != nullptr) provenance->push_back(generator.provenance(z, c));
    samples.push_back(std::move(s));
  }
  return LabeledDataset(std::string(name), generator.shape(), std::move(samples));
}

const char* const kSplits[] = {"train", "val", "test", "synthetic"};

}  // namespace

std::string_view to_string(FixtureKind kind) {
  return kind == FixtureKind::kPrivate ? "private" : "leaky";
}

FixtureKind parse_fixture_kind(std::string_view token) {
  if (token == "private") return FixtureKind::kPrivate;
  if (token == "leaky") return FixtureKind::kLeaky;
  throw Error(ErrorCode::kInvalidArgument, "fixture kind '" + std::string(token) + "'");
}

std::size_t synthetic_size(const FixtureSpec& spec) {
  if (spec.synthetic) return *spec.synthetic;
  return static_cast<std::size_t>(std::llround(kSyntheticPerReal *
                                               static_cast<double>(spec.train)));
}

Fixture make_fixture(const FixtureSpec& spec) {
  const std::size_t n_synth = synthetic_size(spec);
  if (spec.train == 0 || spec.val == 0 || spec.test == 0 || n_synth == 0) {
    throw Error(ErrorCode::kInvalidArgument, "fixture sizes must be >= 1");
  }
  if (spec.world_rank < 1 || spec.world_rank > kLatentDim) {
    throw Error(ErrorCode::kInvalidArgument, "world rank must lie in [1, 100]");
  }
  if (spec.shape.flat_size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "fixture shape must be non-empty");
  }
  const ToyPrivateGenerator world(spec.shape, derive_seed(spec.seed, "world"),
                                  spec.world_rank);
  Fixture f;
  f.train = draw_split(world, "train", Origin::kTrain, spec.train,
                       derive_seed(spec.seed, "train"), nullptr);
  f.val = draw_split(world, "val", Origin::kVal, spec.val, derive_seed(spec.seed, "val"),
                     nullptr);
  f.test = draw_split(world, "test", Origin::kTest, spec.test,
                      derive_seed(spec.seed, "test"), nullptr);

  std::vector<ImageSample> synth;
  if (spec.kind == FixtureKind::kPrivate) {
    LabeledDataset s = draw_split(world, "synthetic", Origin::kSynthetic, n_synth,
                                  derive_seed(spec.seed, "synthetic"),
                                  &f.synthetic_provenance);
    synth = s.samples();
  } else {
    const ToyLeakyGenerator leaky(f.train, spec.epsilon,
                                  derive_seed(spec.seed, "leaky-generator"));
    const std::uint64_t noise_root = derive_seed(spec.seed, "leaky-noise");
    synth.reserve(n_synth);
    for (std::size_t j = 0; j < n_synth; ++j) {
      const std::size_t source = j % f.train.size();
      synth.push_back(leaky.reproduce(source, derive_seed(noise_root, j),
                                      fmt::format("synthetic-{:05d}", j)));
      f.synthetic_provenance.push_back("leaky:copy-of:" + f.train[source].id);
    }
  }
  if (spec.shuffle_labels) {
    std::vector<Label> labels;
    for (const auto& s : synth) labels.push_back(s.label);
    Rng rng(derive_seed(spec.seed, "shuffle-labels"));
    rng.shuffle(labels);
    for (std::size_t j = 0; j < synth.size(); ++j) synth[j].label = labels[j];
  }
  f.synthetic = LabeledDataset("synthetic", spec.shape, std::move(synth));
  return f;
}

void save_fixture(const Fixture& fixture, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const LabeledDataset* sets[] = {&fixture.train, &fixture.val, &fixture.test,
                                  &fixture.synthetic};
  for (std::size_t i = 0; i < 4; ++i) {
    const std::string split = kSplits[i];
    const std::span<const std::string> provenance =
        i == 3 ? std::span<const std::string>(fixture.synthetic_provenance)
               : std::span<const std::string>();
    save_dataset(*sets[i], dir / (split + ".npy"), dir / (split + ".csv"), provenance);
  }
}

Fixture load_fixture(const std::filesystem::path& dir) {
  Fixture f;
  LabeledDataset* sets[] = {&f.train, &f.val, &f.test, &f.synthetic};
  for (std::size_t i = 0; i < 4; ++i) {
    const std::string split = kSplits[i];
    *sets[i] = load_dataset(dir / (split + ".npy"), dir / (split + ".csv"), split);
  }
  for (const auto& r : load_manifest(dir / "synthetic.csv")) {
    f.synthetic_provenance.push_back(r.provenance);
  }
  return f;
}

}  // namespace synaudit
