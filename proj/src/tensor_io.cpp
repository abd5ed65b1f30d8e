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

#include "synaudit/tensor_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_set>

#include "synaudit/error.hpp"
#include "synaudit/random.hpp"

namespace synaudit {
namespace {

constexpr std::uint8_t kMagic[6] = {0x93, 'N', 'U', 'M', 'P', 'Y'};

template <typename T>
T read_le(const std::uint8_t* p) {
  T value;
  std::memcpy(&value, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    auto* bytes = reinterpret_cast<std::uint8_t*>(&value);
    std::reverse(bytes, bytes + sizeof(T));
  }
  return value;
}

template <typename T>
void append_le(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  out.insert(out.end(), bytes, bytes + sizeof(T));
}

struct NpyHeader {
  std::string descr;
  bool fortran_order = false;
  std::vector<std::size_t> shape;
};

// Value following `'key':` in the header dict, with leading blanks removed.
std::string_view dict_value(std::string_view header, std::string_view key) {
  std::string quoted = "'" + std::string(key) + "'";
  auto pos = header.find(quoted);
  if (pos == std::string_view::npos) {
    quoted = "\"" + std::string(key) + "\"";
    pos = header.find(quoted);
  }
  if (pos == std::string_view::npos) {
    throw Error(ErrorCode::kMalformedHeader, "missing key " + std::string(key));
  }
  pos = header.find(':', pos + quoted.size());
  if (pos == std::string_view::npos) {
    throw Error(ErrorCode::kMalformedHeader, "missing ':' after key");
  }
  auto rest = header.substr(pos + 1);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  return rest;
}

NpyHeader parse_header(std::string_view text) {
  NpyHeader header;

  auto descr = dict_value(text, "descr");
  if (descr.empty() || (descr.front() != '\'' && descr.front() != '"')) {
    throw Error(ErrorCode::kMalformedHeader, "descr is not a string");
  }
  auto close = descr.find(descr.front(), 1);
  if (close == std::string_view::npos) {
    throw Error(ErrorCode::kMalformedHeader, "unterminated descr");
  }
  header.descr = std::string(descr.substr(1, close - 1));

  auto order = dict_value(text, "fortran_order");
  if (order.starts_with("True")) {
    header.fortran_order = true;
  } else if (!order.starts_with("False")) {
    throw Error(ErrorCode::kMalformedHeader, "fortran_order is not a bool");
  }

  auto shape = dict_value(text, "shape");
  if (shape.empty() || shape.front() != '(') {
    throw Error(ErrorCode::kMalformedHeader, "shape is not a tuple");
  }
  auto end = shape.find(')');
  if (end == std::string_view::npos) {
    throw Error(ErrorCode::kMalformedHeader, "unterminated shape");
  }
  std::string_view dims = shape.substr(1, end - 1);
  std::size_t i = 0;
  while (i < dims.size()) {
    while (i < dims.size() && (dims[i] == ' ' || dims[i] == ',')) ++i;
    if (i >= dims.size()) break;
    std::size_t value = 0;
    bool any = false;
    while (i < dims.size() && dims[i] >= '0' && dims[i] <= '9') {
      value = value * 10 + static_cast<std::size_t>(dims[i] - '0');
      any = true;
      ++i;
    }
    if (i < dims.size() && dims[i] == 'L') ++i;  // python 2 longs
    if (!any) throw Error(ErrorCode::kMalformedHeader, "bad shape entry");
    header.shape.push_back(value);
  }
  return header;
}

std::string shape_tuple(std::span<const std::size_t> shape) {
  std::string out = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(shape[i]);
  }
  if (shape.size() == 1) out += ",";
  out += ")";
  return out;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

ImageShape image_shape_from_axes(std::span<const std::size_t> axes) {
  switch (axes.size()) {
    case 3: return {axes[0], axes[1], axes[2]};
    case 2: return {1, axes[0], axes[1]};
    case 1: return {1, 1, axes[0]};
    default:
      throw Error(ErrorCode::kShapeMismatch,
                  "sample tensors need 1 to 3 trailing axes, got " +
                      std::to_string(axes.size()));
  }
}

}  // namespace

std::size_t Tensor::element_count(std::span<const std::size_t> shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

Tensor decode_array(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 6 || !std::equal(kMagic, kMagic + 6, bytes.begin())) {
    throw Error(ErrorCode::kMagicMismatch, "not an NPY file");
  }
  if (bytes.size() < 10) {
    throw Error(ErrorCode::kMalformedHeader, "file ends inside the preamble");
  }
  const std::uint8_t major = bytes[6];
  std::size_t header_len = 0;
  std::size_t header_start = 0;
  if (major == 1) {
    header_len = read_le<std::uint16_t>(bytes.data() + 8);
    header_start = 10;
  } else if (major == 2 || major == 3) {
    if (bytes.size() < 12) {
      throw Error(ErrorCode::kMalformedHeader, "file ends inside the preamble");
    }
    header_len = read_le<std::uint32_t>(bytes.data() + 8);
    header_start = 12;
  } else {
    throw Error(ErrorCode::kMalformedHeader,
                "unsupported format version " + std::to_string(major));
  }
  if (bytes.size() < header_start + header_len) {
    throw Error(ErrorCode::kMalformedHeader, "file ends inside the header");
  }
  std::string_view text(reinterpret_cast<const char*>(bytes.data()) + header_start,
                        header_len);
  NpyHeader header = parse_header(text);

  std::size_t item_size = 0;
  if (header.descr == "<f4") {
    item_size = 4;
  } else if (header.descr == "<f8") {
    item_size = 8;
  } else {
    throw Error(ErrorCode::kUnsupportedDtype, "dtype " + header.descr);
  }
  if (header.fortran_order) {
    throw Error(ErrorCode::kUnsupportedOrder, "column-major arrays are not supported");
  }

  Tensor tensor;
  tensor.shape = header.shape;
  const std::size_t count = Tensor::element_count(tensor.shape);
  const std::size_t payload = bytes.size() - header_start - header_len;
  if (payload != count * item_size) {
    throw Error(ErrorCode::kTruncatedPayload,
                "expected " + std::to_string(count * item_size) +
                    " payload bytes, found " + std::to_string(payload));
  }
  const std::uint8_t* p = bytes.data() + header_start + header_len;
  tensor.data.resize(count);
  if (item_size == 4) {
    for (std::size_t i = 0; i < count; ++i) {
      tensor.data[i] = read_le<float>(p + 4 * i);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      tensor.data[i] = static_cast<float>(read_le<double>(p + 8 * i));
    }
  }
  return tensor;
}

Tensor load_array(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_array(bytes);
}

std::vector<std::uint8_t> encode_array(const Tensor& tensor) {
  if (tensor.shape.size() > 4) {
    throw Error(ErrorCode::kInvalidArgument, "save_array supports rank <= 4");
  }
  if (Tensor::element_count(tensor.shape) != tensor.data.size()) {
    throw Error(ErrorCode::kShapeMismatch, "tensor data does not match its shape");
  }
  std::string dict = "{'descr': '<f4', 'fortran_order': False, 'shape': " +
                     shape_tuple(tensor.shape) + ", }";
  // Pad with spaces so that magic + preamble + header is 64-byte aligned.
  const std::size_t unpadded = 10 + dict.size() + 1;
  const std::size_t padded = (unpadded + 63) / 64 * 64;
  dict.append(padded - unpadded, ' ');
  dict.push_back('\n');

  std::vector<std::uint8_t> out;
  out.reserve(padded + 4 * tensor.data.size());
  out.insert(out.end(), kMagic, kMagic + 6);
  out.push_back(1);
  out.push_back(0);
  append_le<std::uint16_t>(out, static_cast<std::uint16_t>(dict.size()));
  out.insert(out.end(), dict.begin(), dict.end());
  if constexpr (std::endian::native == std::endian::little) {
    const auto* raw = reinterpret_cast<const std::uint8_t*>(tensor.data.data());
    out.insert(out.end(), raw, raw + 4 * tensor.data.size());
  } else {
    for (float v : tensor.data) append_le<float>(out, v);
  }
  return out;
}

void save_array(const Tensor& tensor, const std::filesystem::path& path) {
  auto bytes = encode_array(tensor);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::kCervical: return "cervical";
    case Label::kThoracic: return "thoracic";
    case Label::kLumbar: return "lumbar";
  }
  return "?";
}

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::kTrain: return "train";
    case Origin::kVal: return "val";
    case Origin::kTest: return "test";
    case Origin::kSynthetic: return "synthetic";
  }
  return "?";
}

Label parse_label(std::string_view token) {
  if (token == "cervical") return Label::kCervical;
  if (token == "thoracic") return Label::kThoracic;
  if (token == "lumbar") return Label::kLumbar;
  throw Error(ErrorCode::kUnknownLabel, "label '" + std::string(token) + "'");
}

Origin parse_origin(std::string_view token) {
  if (token == "train") return Origin::kTrain;
  if (token == "val") return Origin::kVal;
  if (token == "test") return Origin::kTest;
  if (token == "synthetic") return Origin::kSynthetic;
  throw Error(ErrorCode::kUnknownOrigin, "origin '" + std::string(token) + "'");
}

Label label_from_index(std::size_t k) {
  if (k >= kNumClasses) {
    throw Error(ErrorCode::kIndexOutOfRange, "class index " + std::to_string(k));
  }
  return static_cast<Label>(k);
}

std::string to_string(const ImageShape& shape) {
  return "(" + std::to_string(shape.channels) + "," +
         std::to_string(shape.height) + "," + std::to_string(shape.width) + ")";
}

LabeledDataset::LabeledDataset(std::string name, ImageShape shape,
                               std::vector<ImageSample> samples)
    : name_(std::move(name)), shape_(shape), samples_(std::move(samples)) {
  std::unordered_set<std::string> ids;
  ids.reserve(samples_.size());
  for (const auto& s : samples_) {
    if (s.shape != shape_ || s.pixels.size() != shape_.flat_size()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "sample '" + s.id + "' has shape " + to_string(s.shape) +
                      ", dataset '" + name_ + "' expects " + to_string(shape_));
    }
    if (!ids.insert(s.id).second) {
      throw Error(ErrorCode::kDuplicateId, "id '" + s.id + "' in " + name_);
    }
  }
}

std::vector<Label> LabeledDataset::labels() const {
  std::vector<Label> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.label);
  return out;
}

std::vector<ManifestRecord> parse_manifest(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kMalformedManifest, "empty manifest");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  bool with_provenance = false;
  if (line == "id,label,origin,provenance") {
    with_provenance = true;
  } else if (line != "id,label,origin") {
    throw Error(ErrorCode::kMalformedManifest, "unexpected header '" + line + "'");
  }
  const std::size_t columns = with_provenance ? 4 : 3;

  std::vector<ManifestRecord> records;
  std::unordered_set<std::string> ids;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != columns) {
      throw Error(ErrorCode::kMalformedManifest,
                  "line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields");
    }
    ManifestRecord rec;
    rec.id = std::string(fields[0]);
    rec.label = parse_label(fields[1]);
    rec.origin = parse_origin(fields[2]);
    if (with_provenance) rec.provenance = std::string(fields[3]);
    if (!ids.insert(rec.id).second) {
      throw Error(ErrorCode::kDuplicateId, "id '" + rec.id + "'");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<ManifestRecord> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return parse_manifest(in);
}

void save_manifest(std::span<const ManifestRecord> records,
                   const std::filesystem::path& path) {
  const bool with_provenance =
      std::any_of(records.begin(), records.end(),
                  [](const ManifestRecord& r) { return !r.provenance.empty(); });
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << (with_provenance ? "id,label,origin,provenance\n" : "id,label,origin\n");
  for (const auto& r : records) {
    out << r.id << ',' << to_string(r.label) << ',' << to_string(r.origin);
    if (with_provenance) out << ',' << r.provenance;
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

LabeledDataset join_dataset(std::string name, const Tensor& tensor,
                            std::span<const ManifestRecord> records) {
  if (tensor.shape.size() < 2) {
    throw Error(ErrorCode::kShapeMismatch,
                "dataset tensors need a sample axis plus image axes");
  }
  const std::size_t n = tensor.shape[0];
  if (n != records.size()) {
    throw Error(ErrorCode::kRowCountMismatch,
                "array has " + std::to_string(n) + " samples, manifest has " +
                    std::to_string(records.size()) + " rows");
  }
  ImageShape shape = image_shape_from_axes(
      std::span<const std::size_t>(tensor.shape).subspan(1));
  const std::size_t stride = shape.flat_size();
  std::vector<ImageSample> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ImageSample s;
    s.id = records[i].id;
    s.label = records[i].label;
    s.origin = records[i].origin;
    s.shape = shape;
    auto first = tensor.data.begin() + static_cast<std::ptrdiff_t>(i * stride);
    s.pixels.assign(first, first + static_cast<std::ptrdiff_t>(stride));
    samples.push_back(std::move(s));
  }
  return LabeledDataset(std::move(name), shape, std::move(samples));
}

LabeledDataset load_dataset(const std::filesystem::path& array_path,
                            const std::filesystem::path& manifest_path,
                            std::string name) {
  Tensor tensor = load_array(array_path);
  auto records = load_manifest(manifest_path);
  return join_dataset(std::move(name), tensor, records);
}

Tensor to_tensor(const LabeledDataset& dataset) {
  const auto& shape = dataset.shape();
  Tensor t;
  t.shape = {dataset.size(), shape.channels, shape.height, shape.width};
  t.data.reserve(dataset.size() * shape.flat_size());
  for (const auto& s : dataset.samples()) {
    t.data.insert(t.data.end(), s.pixels.begin(), s.pixels.end());
  }
  return t;
}

void save_dataset(const LabeledDataset& dataset,
                  const std::filesystem::path& array_path,
                  const std::filesystem::path& manifest_path,
                  std::span<const std::string> provenance) {
  if (!provenance.empty() && provenance.size() != dataset.size()) {
    throw Error(ErrorCode::kRowCountMismatch, "provenance column length");
  }
  std::vector<ManifestRecord> records;
  records.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& s = dataset[i];
    records.push_back({s.id, s.label, s.origin,
                       provenance.empty() ? std::string() : provenance[i]});
  }
  save_array(to_tensor(dataset), array_path);
  save_manifest(records, manifest_path);
}

std::vector<Origin> CandidateSet::origins() const {
  std::vector<Origin> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.origin);
  return out;
}

CandidateSet build_candidate_set(const LabeledDataset& train,
                                 const LabeledDataset& val,
                                 const LabeledDataset& test,
                                 std::size_t per_origin, std::uint64_t seed) {
  if (per_origin == 0) {
    throw Error(ErrorCode::kInvalidArgument, "per_origin must be >= 1");
  }
  const LabeledDataset* splits[3] = {&train, &val, &test};
  const Origin expected[3] = {Origin::kTrain, Origin::kVal, Origin::kTest};
  for (int k = 0; k < 3; ++k) {
    const auto& ds = *splits[k];
    if (ds.size() < per_origin) {
      throw Error(ErrorCode::kInsufficientSamples,
                  std::string(to_string(expected[k])) + " split has " +
                      std::to_string(ds.size()) + " samples, need " +
                      std::to_string(per_origin));
    }
    if (ds.shape() != train.shape()) {
      throw Error(ErrorCode::kShapeMismatch, "candidate splits differ in shape");
    }
    for (const auto& s : ds.samples()) {
      if (s.origin != expected[k]) {
        throw Error(ErrorCode::kOriginMismatch,
                    "sample '" + s.id + "' is tagged " +
                        std::string(to_string(s.origin)) + " but was passed as " +
                        std::string(to_string(expected[k])));
      }
    }
  }

  Rng rng(seed);
  CandidateSet out;
  out.shape = train.shape();
  out.samples.reserve(3 * per_origin);
  for (const auto* ds : splits) {
    for (std::size_t idx : sample_without_replacement(ds->size(), per_origin, rng)) {
      out.samples.push_back((*ds)[idx]);
    }
  }
  rng.shuffle(out.samples);
  out.counts = {per_origin, per_origin, per_origin};
  return out;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kOutOfRange: return "out_of_range";
    case ViolationKind::kWrongShape: return "wrong_shape";
    case ViolationKind::kNonFinite: return "non_finite";
  }
  return "?";
}

ValidationReport validate_dataset(const LabeledDataset& dataset,
                                  std::optional<ImageShape> required_shape) {
  ValidationReport report;
  for (const auto& s : dataset.samples()) {
    if (required_shape && s.shape != *required_shape) {
      report.violations.push_back({ViolationKind::kWrongShape, s.id, 0, 0.0f});
    }
    for (std::size_t i = 0; i < s.pixels.size(); ++i) {
      const float v = s.pixels[i];
      if (!std::isfinite(v)) {
        report.violations.push_back({ViolationKind::kNonFinite, s.id, i, v});
      } else if (v < -1.0f || v > 1.0f) {
        report.violations.push_back({ViolationKind::kOutOfRange, s.id, i, v});
      }
    }
  }
  return report;
}

}  // namespace synaudit
