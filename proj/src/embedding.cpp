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

#include "synaudit/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "synaudit/error.hpp"
#include "synaudit/parallel.hpp"

namespace synaudit {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr int kFormatVersion = 1;

void normalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  }
  if (v(best) < 0.0) v = -v;
}

// Modified Gram-Schmidt over the columns of `basis`, in order. Columns that
// collapse numerically are replaced by the first standard basis vector that
// is not yet spanned.
void orthonormalize(Eigen::MatrixXd& basis) {
  const Eigen::Index dim = basis.rows();
  std::size_t next_unit = 0;
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < j; ++k) {
        basis.col(j) -= basis.col(k).dot(basis.col(j)) * basis.col(k);
      }
    }
    double norm = basis.col(j).norm();
    while (norm < 1e-10) {
      if (static_cast<Eigen::Index>(next_unit) >= dim) {
        throw Error(ErrorCode::kDegenerateData, "cannot complete an orthonormal basis");
      }
      basis.col(j).setZero();
      basis(static_cast<Eigen::Index>(next_unit++), j) = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index k = 0; k < j; ++k) {
          basis.col(j) -= basis.col(k).dot(basis.col(j)) * basis.col(k);
        }
      }
      norm = basis.col(j).norm();
    }
    basis.col(j) /= norm;
  }
}

// Symmetric product of `centered` with itself, one entry at a time in index
// order. If `rows_as_points`, returns X X^T (Gram), else X^T X (scatter).
Eigen::MatrixXd symmetric_product(const RowMatrix& centered, bool rows_as_points,
                                  unsigned workers) {
  const Eigen::Index n = centered.rows();
  const Eigen::Index d = centered.cols();
  if (rows_as_points) {
    Eigen::MatrixXd gram(n, n);
    parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t ui) {
      const auto i = static_cast<Eigen::Index>(ui);
      const double* a = centered.data() + i * d;
      for (Eigen::Index j = 0; j <= i; ++j) {
        const double* b = centered.data() + j * d;
        double sum = 0.0;
        for (Eigen::Index k = 0; k < d; ++k) sum += a[k] * b[k];
        gram(i, j) = sum;
      }
    });
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) gram(i, j) = gram(j, i);
    }
    return gram;
  }
  Eigen::MatrixXd cols = centered;  // column-major copy: feature columns contiguous
  Eigen::MatrixXd scatter(d, d);
  parallel_for(static_cast<std::size_t>(d), workers, [&](std::size_t ua) {
    const auto a = static_cast<Eigen::Index>(ua);
    const double* x = cols.data() + a * n;
    for (Eigen::Index b = 0; b <= a; ++b) {
      const double* y = cols.data() + b * n;
      double sum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) sum += x[i] * y[i];
      scatter(a, b) = sum;
    }
  });
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a + 1; b < d; ++b) scatter(a, b) = scatter(b, a);
  }
  return scatter;
}

}  // namespace

EmbeddingModel::EmbeddingModel(ImageShape input_shape, Eigen::VectorXd mean,
                               Eigen::MatrixXd components,
                               Eigen::VectorXd eigenvalues, double total_variance)
    : input_shape_(input_shape),
      mean_(std::move(mean)),
      components_(std::move(components)),
      eigenvalues_(std::move(eigenvalues)),
      total_variance_(total_variance) {
  if (static_cast<std::size_t>(mean_.size()) != input_shape_.flat_size() ||
      components_.cols() != mean_.size() ||
      components_.rows() != eigenvalues_.size()) {
    throw Error(ErrorCode::kShapeMismatch, "inconsistent embedding model parts");
  }
}

Eigen::MatrixXd EmbeddingModel::transform(const Eigen::MatrixXd& rows) const {
  if (rows.cols() != mean_.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "expected " + std::to_string(mean_.size()) + " input features, got " +
                    std::to_string(rows.cols()));
  }
  return (rows.rowwise() - mean_.transpose()) * components_.transpose();
}

Eigen::MatrixXd EmbeddingModel::transform(std::span<const ImageSample> samples) const {
  return transform(flatten(samples));
}

Eigen::MatrixXd EmbeddingModel::inverse_transform(const Eigen::MatrixXd& features) const {
  if (features.cols() != components_.rows()) {
    throw Error(ErrorCode::kShapeMismatch,
                "expected " + std::to_string(components_.rows()) + " features, got " +
                    std::to_string(features.cols()));
  }
  return (features * components_).rowwise() + mean_.transpose();
}

Eigen::VectorXd EmbeddingModel::explained_variance_ratio() const {
  if (!(total_variance_ > 0.0)) {
    throw Error(ErrorCode::kDegenerateData, "total variance is zero");
  }
  return eigenvalues_ / total_variance_;
}

Eigen::MatrixXd flatten(std::span<const ImageSample> samples) {
  if (samples.empty()) return Eigen::MatrixXd(0, 0);
  const std::size_t d = samples.front().pixels.size();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(samples.size()),
                      static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].pixels.size() != d) {
      throw Error(ErrorCode::kShapeMismatch, "samples differ in size");
    }
    for (std::size_t k = 0; k < d; ++k) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          samples[i].pixels[k];
    }
  }
  return out;
}

EmbeddingModel fit_embedding(const Eigen::MatrixXd& rows, ImageShape shape,
                             std::size_t dim, unsigned workers) {
  const Eigen::Index n = rows.rows();
  const Eigen::Index d = rows.cols();
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "fit needs at least 2 samples");
  if (static_cast<std::size_t>(d) != shape.flat_size()) {
    throw Error(ErrorCode::kShapeMismatch, "row width does not match the image shape");
  }
  const auto max_dim = static_cast<std::size_t>(std::min<Eigen::Index>(n - 1, d));
  if (dim < 1 || dim > max_dim) {
    throw Error(ErrorCode::kDimTooLarge,
                "dim " + std::to_string(dim) + " outside [1, " +
                    std::to_string(max_dim) + "]");
  }
  if (!rows.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "non-finite input values");
  }

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < n; ++i) mean += rows.row(i).transpose();
  mean /= static_cast<double>(n);

  RowMatrix centered = rows.rowwise() - mean.transpose();
  double sum_sq = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) sum_sq += centered(i, k) * centered(i, k);
  }
  const double total_variance = sum_sq / static_cast<double>(n - 1);
  if (!(total_variance > 0.0)) {
    throw Error(ErrorCode::kDegenerateData, "all samples are identical");
  }

  const bool use_gram = n < d;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      symmetric_product(centered, use_gram, workers));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kInternal, "eigendecomposition did not converge");
  }
  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  const Eigen::Index m = values.size();
  const double largest = std::max(values(m - 1), 0.0);

  const auto k = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd basis(d, k);  // one component per column while assembling
  Eigen::VectorXd eigen(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Eigen::Index src = m - 1 - j;
    const double lambda = std::max(values(src), 0.0);
    eigen(j) = lambda / static_cast<double>(n - 1);
    if (use_gram) {
      if (lambda > 1e-12 * largest && lambda > 0.0) {
        basis.col(j) = centered.transpose() * vectors.col(src) / std::sqrt(lambda);
      } else {
        basis.col(j).setZero();  // null direction, completed below
      }
    } else {
      basis.col(j) = vectors.col(src);
    }
    normalize_sign(basis.col(j));
  }

  // Order by eigenvalue, exact-tolerance ties by sign-normalized vectors.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const double tie = 1e-12 * std::max(eigen.maxCoeff(), 1e-300);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (std::abs(eigen(a) - eigen(b)) > tie) return eigen(a) > eigen(b);
    return std::lexicographical_compare(
        basis.col(a).data(), basis.col(a).data() + d,
        basis.col(b).data(), basis.col(b).data() + d);
  });
  Eigen::MatrixXd sorted_basis(d, k);
  Eigen::VectorXd sorted_eigen(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    sorted_basis.col(j) = basis.col(order[static_cast<std::size_t>(j)]);
    sorted_eigen(j) = eigen(order[static_cast<std::size_t>(j)]);
  }

  orthonormalize(sorted_basis);
  for (Eigen::Index j = 0; j < k; ++j) normalize_sign(sorted_basis.col(j));

  return EmbeddingModel(shape, std::move(mean), sorted_basis.transpose(),
                        std::move(sorted_eigen), total_variance);
}

EmbeddingModel fit_embedding(std::span<const ImageSample> real_samples,
                             std::size_t dim, std::uint64_t /*seed*/,
                             unsigned workers) {
  for (const auto& s : real_samples) {
    if (s.origin == Origin::kSynthetic) {
      throw Error(ErrorCode::kSyntheticContamination,
                  "sample '" + s.id + "' is synthetic; fit on real data only");
    }
  }
  if (real_samples.empty()) throw Error(ErrorCode::kEmptyInput, "no samples to fit");
  const ImageShape shape = real_samples.front().shape;
  return fit_embedding(flatten(real_samples), shape, dim, workers);
}

void save_embedding(const EmbeddingModel& model, const std::filesystem::path& stem) {
  const std::size_t d = model.input_dim();
  const std::size_t k = model.dim();
  Tensor packed;
  packed.shape = {d + k * d + k};
  packed.data.reserve(packed.shape[0]);
  for (std::size_t i = 0; i < d; ++i) {
    packed.data.push_back(static_cast<float>(model.mean()(static_cast<Eigen::Index>(i))));
  }
  for (Eigen::Index r = 0; r < model.components().rows(); ++r) {
    for (Eigen::Index c = 0; c < model.components().cols(); ++c) {
      packed.data.push_back(static_cast<float>(model.components()(r, c)));
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    packed.data.push_back(
        static_cast<float>(model.eigenvalues()(static_cast<Eigen::Index>(i))));
  }
  auto array_path = stem;
  array_path += ".npy";
  save_array(packed, array_path);

  const auto& s = model.input_shape();
  nlohmann::json meta = {
      {"dim", k},
      {"input_shape", {s.channels, s.height, s.width}},
      {"total_variance", model.total_variance()},
      {"format_version", kFormatVersion},
  };
  auto meta_path = stem;
  meta_path += ".json";
  std::ofstream out(meta_path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + meta_path.string());
  out << meta.dump(2) << '\n';
}

EmbeddingModel load_embedding(const std::filesystem::path& stem) {
  auto meta_path = stem;
  meta_path += ".json";
  std::ifstream in(meta_path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + meta_path.string());
  nlohmann::json meta;
  try {
    in >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedHeader, meta_path.string() + ": " + e.what());
  }
  if (meta.value("format_version", 0) != kFormatVersion) {
    throw Error(ErrorCode::kMalformedHeader, "unsupported embedding format version");
  }
  const auto k = meta.at("dim").get<std::size_t>();
  const auto dims = meta.at("input_shape").get<std::vector<std::size_t>>();
  if (dims.size() != 3) throw Error(ErrorCode::kMalformedHeader, "input_shape needs 3 axes");
  const ImageShape shape{dims[0], dims[1], dims[2]};
  const std::size_t d = shape.flat_size();

  auto array_path = stem;
  array_path += ".npy";
  Tensor packed = load_array(array_path);
  if (packed.data.size() != d + k * d + k) {
    throw Error(ErrorCode::kShapeMismatch, "embedding array length does not match metadata");
  }
  const auto kd = static_cast<Eigen::Index>(d);
  const auto kk = static_cast<Eigen::Index>(k);
  Eigen::VectorXd mean(kd);
  Eigen::MatrixXd components(kk, kd);
  Eigen::VectorXd eigenvalues(kk);
  std::size_t pos = 0;
  for (Eigen::Index i = 0; i < kd; ++i) mean(i) = packed.data[pos++];
  for (Eigen::Index r = 0; r < kk; ++r) {
    for (Eigen::Index c = 0; c < kd; ++c) components(r, c) = packed.data[pos++];
  }
  for (Eigen::Index i = 0; i < kk; ++i) eigenvalues(i) = packed.data[pos++];
  return EmbeddingModel(shape, std::move(mean), std::move(components),
                        std::move(eigenvalues), meta.at("total_variance").get<double>());
}

}  // namespace synaudit
