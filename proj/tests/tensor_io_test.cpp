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

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "synaudit/error.hpp"
#include "synaudit/random.hpp"

namespace synaudit {
namespace {

namespace fs = std::filesystem;

fs::path ScratchDir(const std::string& name) {
  fs::path dir = fs::path(testing::TempDir()) / ("synaudit_tensor_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Builds an NPY byte stream by hand so that the reader is tested against an
// encoder that shares no code with it.
std::vector<std::uint8_t> HandMadeNpy(int major, const std::string& dict,
                                      const std::vector<std::uint8_t>& payload) {
  std::string header = dict;
  const std::size_t pre = major == 1 ? 10 : 12;
  while ((pre + header.size() + 1) % 64 != 0) header.push_back(' ');
  header.push_back('\n');
  std::vector<std::uint8_t> out = {0x93, 'N', 'U', 'M', 'P', 'Y'};
  out.push_back(static_cast<std::uint8_t>(major));
  out.push_back(0);
  const std::size_t len = header.size();
  out.push_back(static_cast<std::uint8_t>(len & 0xff));
  out.push_back(static_cast<std::uint8_t>((len >> 8) & 0xff));
  if (major != 1) {
    out.push_back(0);
    out.push_back(0);
  }
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

template <typename T>
std::vector<std::uint8_t> LittleEndianBytes(const std::vector<T>& values) {
  std::vector<std::uint8_t> out(values.size() * sizeof(T));
  std::memcpy(out.data(), values.data(), out.size());
  return out;
}

ErrorCode CodeOf(const std::vector<std::uint8_t>& bytes) {
  try {
    decode_array(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

TEST(TensorIoTest, RoundTripIsBitwise) {
  Rng rng(11);
  Tensor t;
  t.shape = {3, 2, 5, 4};
  t.data.resize(Tensor::element_count(t.shape));
  for (auto& v : t.data) v = static_cast<float>(rng.normal());
  t.data[0] = -0.0f;
  t.data[1] = std::numeric_limits<float>::denorm_min();
  t.data[2] = std::numeric_limits<float>::infinity();
  t.data[3] = std::numeric_limits<float>::quiet_NaN();
  const auto dir = ScratchDir("roundtrip");
  save_array(t, dir / "a.npy");
  Tensor back = load_array(dir / "a.npy");
  EXPECT_EQ(back.shape, t.shape);
  ASSERT_EQ(back.data.size(), t.data.size());
  for (std::size_t i = 0; i < t.data.size(); ++i) {
    EXPECT_EQ(std::bit_cast<std::uint32_t>(back.data[i]),
              std::bit_cast<std::uint32_t>(t.data[i]));
  }
}

TEST(TensorIoTest, EncodedHeaderIsAligned) {
  Tensor t{{2, 3}, {1, 2, 3, 4, 5, 6}};
  auto bytes = encode_array(t);
  const std::size_t header_len = bytes[8] | (bytes[9] << 8);
  EXPECT_EQ((10 + header_len) % 64, 0u);
  EXPECT_EQ(bytes.size(), 10 + header_len + 24);
  std::string header(bytes.begin() + 10, bytes.begin() + 10 + header_len);
  EXPECT_NE(header.find("'descr': '<f4'"), std::string::npos);
  EXPECT_NE(header.find("'shape': (2, 3)"), std::string::npos);
}

TEST(TensorIoTest, ReadsHandMadeFloat32) {
  std::vector<float> v = {0.5f, -1.0f, 2.25f};
  auto bytes = HandMadeNpy(
      1, "{'descr': '<f4', 'fortran_order': False, 'shape': (3,), }",
      LittleEndianBytes(v));
  Tensor t = decode_array(bytes);
  EXPECT_EQ(t.shape, std::vector<std::size_t>{3});
  EXPECT_EQ(t.data, v);
}

TEST(TensorIoTest, NarrowsFloat64WithRoundToNearest) {
  std::vector<double> v = {0.1, -1.0 / 3.0, 1e-3, 7.0};
  auto bytes = HandMadeNpy(
      2, "{'shape': (2, 2), 'fortran_order': False, 'descr': '<f8'}",
      LittleEndianBytes(v));
  Tensor t = decode_array(bytes);
  EXPECT_EQ(t.shape, (std::vector<std::size_t>{2, 2}));
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(t.data[i], static_cast<float>(v[i]));
  }
}

TEST(TensorIoTest, RejectsBadInput) {
  std::vector<float> v(4, 0.0f);
  auto good = HandMadeNpy(
      1, "{'descr': '<f4', 'fortran_order': False, 'shape': (4,), }",
      LittleEndianBytes(v));

  auto bad_magic = good;
  bad_magic[1] = 'X';
  EXPECT_EQ(CodeOf(bad_magic), ErrorCode::kMagicMismatch);

  auto truncated = good;
  truncated.pop_back();
  EXPECT_EQ(CodeOf(truncated), ErrorCode::kTruncatedPayload);

  auto extra = good;
  extra.push_back(0);
  EXPECT_EQ(CodeOf(extra), ErrorCode::kTruncatedPayload);

  EXPECT_EQ(CodeOf(HandMadeNpy(1,
                               "{'descr': '<i4', 'fortran_order': False, "
                               "'shape': (4,), }",
                               LittleEndianBytes(v))),
            ErrorCode::kUnsupportedDtype);
  EXPECT_EQ(CodeOf(HandMadeNpy(1,
                               "{'descr': '>f4', 'fortran_order': False, "
                               "'shape': (4,), }",
                               LittleEndianBytes(v))),
            ErrorCode::kUnsupportedDtype);
  EXPECT_EQ(CodeOf(HandMadeNpy(1,
                               "{'descr': '<f4', 'fortran_order': True, "
                               "'shape': (2, 2), }",
                               LittleEndianBytes(v))),
            ErrorCode::kUnsupportedOrder);

  std::vector<std::uint8_t> short_header(good.begin(), good.begin() + 30);
  EXPECT_EQ(CodeOf(short_header), ErrorCode::kMalformedHeader);
}

TEST(TensorIoTest, MissingFileIsIoFailure) {
  try {
    load_array("/nonexistent/dir/x.npy");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoFailure);
  }
}

TEST(TensorIoTest, ManifestParsing) {
  std::istringstream in(
      "id,label,origin\r\na,cervical,train\n\nb,lumbar,val\n");
  auto records = parse_manifest(in);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[1].id, "b");
  EXPECT_EQ(records[1].label, Label::kLumbar);
  EXPECT_EQ(records[1].origin, Origin::kVal);
  EXPECT_TRUE(records[0].provenance.empty());

  auto code = [](const std::string& text) {
    std::istringstream s(text);
    try {
      parse_manifest(s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInternal;
  };
  EXPECT_EQ(code(""), ErrorCode::kMalformedManifest);
  EXPECT_EQ(code("id,class,origin\n"), ErrorCode::kMalformedManifest);
  EXPECT_EQ(code("id,label,origin\na,cervical\n"), ErrorCode::kMalformedManifest);
  EXPECT_EQ(code("id,label,origin\na,sacral,train\n"), ErrorCode::kUnknownLabel);
  EXPECT_EQ(code("id,label,origin\na,lumbar,holdout\n"), ErrorCode::kUnknownOrigin);
  EXPECT_EQ(code("id,label,origin\na,lumbar,train\na,cervical,val\n"),
            ErrorCode::kDuplicateId);
}

TEST(TensorIoTest, DatasetRoundTripWithProvenance) {
  Tensor t{{2, 1, 2, 2}, {0, 0.1f, 0.2f, 0.3f, -0.4f, -0.5f, -0.6f, 1}};
  std::vector<ManifestRecord> records = {{"s0", Label::kThoracic, Origin::kSynthetic, ""},
                                         {"s1", Label::kLumbar, Origin::kSynthetic, ""}};
  LabeledDataset ds = join_dataset("synthetic", t, records);
  EXPECT_EQ(ds.shape(), (ImageShape{1, 2, 2}));
  const auto dir = ScratchDir("dataset");
  std::vector<std::string> prov = {"leaky:copy-of:a", "leaky:copy-of:b"};
  save_dataset(ds, dir / "s.npy", dir / "s.csv", prov);
  auto back = load_dataset(dir / "s.npy", dir / "s.csv", "synthetic");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].pixels, ds[1].pixels);
  EXPECT_EQ(back[0].label, Label::kThoracic);
  EXPECT_EQ(load_manifest(dir / "s.csv")[1].provenance, "leaky:copy-of:b");
  EXPECT_EQ(to_tensor(back).data, t.data);
}

TEST(TensorIoTest, JoinChecksRowCount) {
  Tensor t{{3, 4}, std::vector<float>(12, 0.0f)};
  std::vector<ManifestRecord> records = {{"a", Label::kCervical, Origin::kTrain, ""}};
  try {
    join_dataset("train", t, records);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRowCountMismatch);
  }
}

TEST(TensorIoTest, DatasetRejectsDuplicateIdsAndMixedShapes) {
  ImageSample a{"a", Label::kCervical, Origin::kTrain, {1, 1, 2}, {0, 0}};
  ImageSample b = a;
  EXPECT_THROW(LabeledDataset("x", {1, 1, 2}, {a, b}), Error);
  b.id = "b";
  b.shape = {1, 2, 1};
  EXPECT_THROW(LabeledDataset("x", {1, 1, 2}, {a, b}), Error);
}

LabeledDataset MakeSplit(Origin origin, std::size_t n) {
  std::vector<ImageSample> samples;
  for (std::size_t i = 0; i < n; ++i) {
    samples.push_back({std::string(to_string(origin)) + std::to_string(i),
                       label_from_index(i % 3), origin, {1, 1, 1},
                       {static_cast<float>(i) / n}});
  }
  return LabeledDataset(std::string(to_string(origin)), {1, 1, 1}, samples);
}

TEST(CandidateSetTest, EqualThirdsWithoutRepeats) {
  auto train = MakeSplit(Origin::kTrain, 50);
  auto val = MakeSplit(Origin::kVal, 40);
  auto test = MakeSplit(Origin::kTest, 30);
  auto set = build_candidate_set(train, val, test, 30, 9);
  ASSERT_EQ(set.size(), 90u);
  std::set<std::string> ids;
  int per[3] = {0, 0, 0};
  for (const auto& s : set.samples) {
    ids.insert(s.id);
    ++per[static_cast<int>(s.origin)];
  }
  EXPECT_EQ(ids.size(), 90u);
  EXPECT_EQ(per[0], 30);
  EXPECT_EQ(per[1], 30);
  EXPECT_EQ(per[2], 30);
  // Shuffled: the first block is not all train.
  int leading_train = 0;
  for (std::size_t i = 0; i < 30; ++i) {
    leading_train += set.samples[i].origin == Origin::kTrain;
  }
  EXPECT_LT(leading_train, 30);

  auto again = build_candidate_set(train, val, test, 30, 9);
  for (std::size_t i = 0; i < set.size(); ++i) {
    EXPECT_EQ(set.samples[i].id, again.samples[i].id);
  }
}

TEST(CandidateSetTest, Errors) {
  auto train = MakeSplit(Origin::kTrain, 5);
  auto val = MakeSplit(Origin::kVal, 5);
  auto test = MakeSplit(Origin::kTest, 5);
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInternal;
  };
  EXPECT_EQ(code([&] { build_candidate_set(train, val, test, 6, 1); }),
            ErrorCode::kInsufficientSamples);
  EXPECT_EQ(code([&] { build_candidate_set(val, train, test, 2, 1); }),
            ErrorCode::kOriginMismatch);
  EXPECT_EQ(code([&] { build_candidate_set(train, val, test, 0, 1); }),
            ErrorCode::kInvalidArgument);
}

TEST(ValidationTest, ReportsEachViolation) {
  ImageSample ok{"ok", Label::kCervical, Origin::kTrain, {1, 1, 3}, {-1, 0, 1}};
  ImageSample bad{"bad", Label::kCervical, Origin::kTrain, {1, 1, 3},
                  {1.5f, std::nanf(""), 0}};
  LabeledDataset ds("train", {1, 1, 3}, {ok, bad});
  auto loose = validate_dataset(ds, std::nullopt);
  ASSERT_EQ(loose.violations.size(), 2u);
  EXPECT_EQ(loose.violations[0].kind, ViolationKind::kOutOfRange);
  EXPECT_EQ(loose.violations[1].kind, ViolationKind::kNonFinite);
  EXPECT_EQ(loose.violations[1].pixel_index, 1u);
  auto strict = validate_dataset(ds);
  EXPECT_EQ(strict.violations.size(), 4u);
  EXPECT_EQ(strict.violations[0].kind, ViolationKind::kWrongShape);
}

TEST(LabelTest, NamesRoundTrip) {
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    Label l = label_from_index(k);
    EXPECT_EQ(parse_label(to_string(l)), l);
    EXPECT_EQ(label_index(l), static_cast<int>(k));
  }
  for (Origin o : {Origin::kTrain, Origin::kVal, Origin::kTest, Origin::kSynthetic}) {
    EXPECT_EQ(parse_origin(to_string(o)), o);
  }
  EXPECT_THROW(label_from_index(3), Error);
}

}  // namespace
}  // namespace synaudit
