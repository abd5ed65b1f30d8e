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
 * @file tensor_io.hpp
 *
 * @brief Image tensors, their label/origin manifests and the on-disk format.
 *
 * Each split is stored as one NPY array of shape (N, C, H, W) plus a CSV
 * manifest with header `id,label,origin`. Row i of the manifest describes
 * slice i of the array.
 */

#ifndef SYNAUDIT_TENSOR_IO_HPP_
#define SYNAUDIT_TENSOR_IO_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace synaudit {

/// Dense row-major float tensor of any rank.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<float> data;

  static std::size_t element_count(std::span<const std::size_t> shape);
  std::size_t size() const { return data.size(); }
};

/// Reads an NPY file (format versions 1.0 to 3.0). Accepts little-endian
/// float32 and float64 in C order; float64 payloads are narrowed to float32
/// with round-to-nearest.
Tensor load_array(const std::filesystem::path& path);
Tensor decode_array(std::span<const std::uint8_t> bytes);

/// Writes a version 1.0 NPY file with `<f4` dtype in C order.
void save_array(const Tensor& tensor, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_array(const Tensor& tensor);

// Class order is fixed everywhere: cervical, thoracic, lumbar.
enum class Label : std::uint8_t { kCervical = 0, kThoracic = 1, kLumbar = 2 };
inline constexpr std::size_t kNumClasses = 3;

enum class Origin : std::uint8_t { kTrain = 0, kVal = 1, kTest = 2, kSynthetic = 3 };

std::string_view to_string(Label label);
std::string_view to_string(Origin origin);
Label parse_label(std::string_view token);
Origin parse_origin(std::string_view token);
inline int label_index(Label label) { return static_cast<int>(label); }
Label label_from_index(std::size_t k);

struct ImageShape {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t flat_size() const { return channels * height * width; }
  friend bool operator==(const ImageShape&, const ImageShape&) = default;
};

std::string to_string(const ImageShape& shape);

/// Nine 64x64 slices per vertebral unit.
inline constexpr ImageShape kVertebralUnitShape{9, 64, 64};

struct ImageSample {
  std::string id;
  Label label = Label::kCervical;
  Origin origin = Origin::kTrain;
  ImageShape shape;
  std::vector<float> pixels;  // C*H*W values, row-major
};

/// An ordered set of samples sharing one shape, with unique ids.
class LabeledDataset {
 public:
  LabeledDataset() = default;
  /// Throws ShapeMismatch or DuplicateId when the invariants do not hold.
  LabeledDataset(std::string name, ImageShape shape,
                 std::vector<ImageSample> samples);

  const std::string& name() const { return name_; }
  const ImageShape& shape() const { return shape_; }
  const std::vector<ImageSample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const ImageSample& operator[](std::size_t i) const { return samples_[i]; }

  std::vector<Label> labels() const;

 private:
  std::string name_;
  ImageShape shape_;
  std::vector<ImageSample> samples_;
};

struct ManifestRecord {
  std::string id;
  Label label = Label::kCervical;
  Origin origin = Origin::kTrain;
  // Optional fourth column; fixtures use it to state how a synthetic sample
  // was produced. Empty when absent.
  std::string provenance;
};

std::vector<ManifestRecord> parse_manifest(std::istream& in);
std::vector<ManifestRecord> load_manifest(const std::filesystem::path& path);
void save_manifest(std::span<const ManifestRecord> records,
                   const std::filesystem::path& path);

/// Pairs slice i of `tensor` with record i. The tensor's first axis is the
/// sample axis; trailing axes are read as (C, H, W), (H, W) or (W).
/// Throws RowCountMismatch when the counts differ.
LabeledDataset join_dataset(std::string name, const Tensor& tensor,
                            std::span<const ManifestRecord> records);

/// Loads `<stem>.npy` and `<stem>.csv` and joins them.
LabeledDataset load_dataset(const std::filesystem::path& array_path,
                            const std::filesystem::path& manifest_path,
                            std::string name);
void save_dataset(const LabeledDataset& dataset,
                  const std::filesystem::path& array_path,
                  const std::filesystem::path& manifest_path,
                  std::span<const std::string> provenance = {});

/// Stacks a dataset into an (N, C, H, W) tensor.
Tensor to_tensor(const LabeledDataset& dataset);

struct CandidateCounts {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
};

/// Equal-thirds mix of real samples used to probe a synthetic dataset.
struct CandidateSet {
  ImageShape shape;
  std::vector<ImageSample> samples;
  CandidateCounts counts;

  std::vector<Origin> origins() const;
  std::size_t size() const { return samples.size(); }
};

/// Draws `per_origin` samples from each split uniformly without replacement,
/// then shuffles the combined list so that candidate order carries no origin
/// information. Each input sample must carry the matching origin tag.
CandidateSet build_candidate_set(const LabeledDataset& train,
                                 const LabeledDataset& val,
                                 const LabeledDataset& test,
                                 std::size_t per_origin, std::uint64_t seed);

enum class ViolationKind { kOutOfRange, kWrongShape, kNonFinite };

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string sample_id;
  std::size_t pixel_index = 0;  // unused for kWrongShape
  float value = 0.0f;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Lists every out-of-range, non-finite or wrongly shaped sample. Pass
/// std::nullopt to skip the shape contract (desk-scale toy data).
ValidationReport validate_dataset(
    const LabeledDataset& dataset,
    std::optional<ImageShape> required_shape = kVertebralUnitShape);

}  // namespace synaudit

#endif  // SYNAUDIT_TENSOR_IO_HPP_
