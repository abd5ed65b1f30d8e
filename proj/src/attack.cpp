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

#include "synaudit/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "synaudit/error.hpp"
#include "synaudit/parallel.hpp"
#include "synaudit/stats.hpp"

namespace synaudit {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
double squared_distance(const T* a, const T* b, std::size_t dim) {
  double sum = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double diff = static_cast<double>(a[k]) - static_cast<double>(b[k]);
    sum += diff * diff;
  }
  return sum;
}

template <typename T>
void check_dims(const PointRows<T>& queries, const PointRows<T>& reference) {
  if (queries.dim != reference.dim) {
    throw Error(ErrorCode::kShapeMismatch, "query and reference widths differ");
  }
  if (reference.size() == 0) {
    throw Error(ErrorCode::kEmptySynthetic, "reference set is empty");
  }
}

PointRows<float> pixel_rows(std::span<const ImageSample> samples, std::size_t dim) {
  PointRows<float> out;
  out.dim = dim;
  out.rows.reserve(samples.size());
  for (const auto& s : samples) out.rows.push_back(s.pixels.data());
  return out;
}

PointRows<double> matrix_rows(const RowMatrix& m) {
  PointRows<double> out;
  out.dim = static_cast<std::size_t>(m.cols());
  out.rows.reserve(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.rows.push_back(m.data() + i * m.cols());
  return out;
}

// Validates the attack inputs and calls fn(candidate_rows, synthetic_rows)
// in the requested space.
template <typename Fn>
auto in_space(const CandidateSet& candidates, const LabeledDataset& synthetic,
              Space space, const EmbeddingModel* model, Fn&& fn) {
  if (synthetic.empty()) {
    throw Error(ErrorCode::kEmptySynthetic, "synthetic dataset is empty");
  }
  if (candidates.size() == 0) {
    throw Error(ErrorCode::kEmptyInput, "candidate set is empty");
  }
  if (candidates.shape != synthetic.shape()) {
    throw Error(ErrorCode::kShapeMismatch,
                "candidates are " + to_string(candidates.shape) + ", synthetic are " +
                    to_string(synthetic.shape()));
  }
  const std::size_t flat = synthetic.shape().flat_size();
  if (space == Space::kPixel) {
    return fn(pixel_rows(candidates.samples, flat),
              pixel_rows(std::span<const ImageSample>(synthetic.samples()), flat));
  }
  if (model == nullptr) {
    throw Error(ErrorCode::kMissingEmbeddingModel,
                "embedding-space attacks need a fitted model");
  }
  if (model->input_dim() != flat) {
    throw Error(ErrorCode::kShapeMismatch, "embedding model input width differs");
  }
  const RowMatrix cand = model->transform(std::span<const ImageSample>(candidates.samples));
  const RowMatrix syn = model->transform(synthetic);
  return fn(matrix_rows(cand), matrix_rows(syn));
}

std::vector<std::size_t> attack_order(std::span<const double> scores,
                                      Direction direction) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (direction == Direction::kSmallestFirst) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  } else {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  }
  return order;
}

void check_scores(std::span<const double> scores, std::span<const Origin> origins) {
  if (scores.size() != origins.size()) {
    throw Error(ErrorCode::kShapeMismatch, "scores and origins differ in length");
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw Error(ErrorCode::kInvalidArgument, "scores must be finite");
    }
    if (origins[i] == Origin::kSynthetic) {
      throw Error(ErrorCode::kInvalidArgument, "candidates cannot be synthetic");
    }
  }
}

CutoffRow make_row(std::size_t k, const std::size_t (&counts)[3]) {
  const double n = static_cast<double>(k);
  return {k, static_cast<double>(counts[0]) / n, static_cast<double>(counts[1]) / n,
          static_cast<double>(counts[2]) / n};
}

}  // namespace

std::string_view to_string(Space space) {
  return space == Space::kPixel ? "pixel" : "embedding";
}

Space parse_space(std::string_view token) {
  if (token == "pixel") return Space::kPixel;
  if (token == "embedding") return Space::kEmbedding;
  throw Error(ErrorCode::kInvalidArgument, "space '" + std::string(token) + "'");
}

double default_percentile(Space space) {
  return space == Space::kPixel ? kPixelPercentile : kEmbeddingPercentile;
}

template <typename T>
NearestNeighbors nearest_synthetic(const PointRows<T>& queries,
                                   const PointRows<T>& reference, unsigned workers) {
  check_dims(queries, reference);
  NearestNeighbors out;
  out.distance.resize(queries.size());
  out.index.resize(queries.size());
  parallel_for(queries.size(), workers, [&](std::size_t i) {
    double best = squared_distance(queries.rows[i], reference.rows[0], queries.dim);
    std::size_t best_index = 0;
    for (std::size_t j = 1; j < reference.size(); ++j) {
      const double d = squared_distance(queries.rows[i], reference.rows[j], queries.dim);
      if (d < best) {
        best = d;
        best_index = j;
      }
    }
    out.distance[i] = std::sqrt(best);
    out.index[i] = best_index;
  });
  return out;
}

template <typename T>
std::vector<std::size_t> count_within(const PointRows<T>& queries,
                                      const PointRows<T>& reference,
                                      double threshold, unsigned workers) {
  check_dims(queries, reference);
  if (!(threshold >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must be >= 0");
  }
  std::vector<std::size_t> counts(queries.size(), 0);
  parallel_for(queries.size(), workers, [&](std::size_t i) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < reference.size(); ++j) {
      const double d =
          std::sqrt(squared_distance(queries.rows[i], reference.rows[j], queries.dim));
      if (d < threshold) ++c;
    }
    counts[i] = c;
  });
  return counts;
}

template <typename T>
std::vector<double> all_distances(const PointRows<T>& queries,
                                  const PointRows<T>& reference, unsigned workers) {
  check_dims(queries, reference);
  const std::size_t m = reference.size();
  std::vector<double> out(queries.size() * m);
  parallel_for(queries.size(), workers, [&](std::size_t i) {
    for (std::size_t j = 0; j < m; ++j) {
      out[i * m + j] =
          std::sqrt(squared_distance(queries.rows[i], reference.rows[j], queries.dim));
    }
  });
  return out;
}

template NearestNeighbors nearest_synthetic<float>(const PointRows<float>&,
                                                   const PointRows<float>&, unsigned);
template NearestNeighbors nearest_synthetic<double>(const PointRows<double>&,
                                                    const PointRows<double>&, unsigned);
template std::vector<std::size_t> count_within<float>(const PointRows<float>&,
                                                      const PointRows<float>&, double,
                                                      unsigned);
template std::vector<std::size_t> count_within<double>(const PointRows<double>&,
                                                       const PointRows<double>&, double,
                                                       unsigned);
template std::vector<double> all_distances<float>(const PointRows<float>&,
                                                  const PointRows<float>&, unsigned);
template std::vector<double> all_distances<double>(const PointRows<double>&,
                                                   const PointRows<double>&, unsigned);

std::vector<double> PairwiseReport::scores() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.min_distance);
  return out;
}

std::vector<Origin> PairwiseReport::origins() const {
  std::vector<Origin> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.origin);
  return out;
}

std::vector<double> DistributionReport::scores() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(static_cast<double>(r.neighbor_count));
  return out;
}

std::vector<Origin> DistributionReport::origins() const {
  std::vector<Origin> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.origin);
  return out;
}

PairwiseReport min_distances(const CandidateSet& candidates,
                             const LabeledDataset& synthetic, Space space,
                             const EmbeddingModel* model, unsigned workers) {
  NearestNeighbors nn = in_space(candidates, synthetic, space, model,
                                 [&](const auto& cand, const auto& syn) {
                                   return nearest_synthetic(cand, syn, workers);
                                 });
  PairwiseReport report;
  report.space = space;
  report.records.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    report.records.push_back({candidates.samples[i].id, candidates.samples[i].origin,
                              nn.distance[i], nn.index[i]});
  }
  return report;
}

double neighbor_threshold(const CandidateSet& candidates,
                          const LabeledDataset& synthetic, double percentile,
                          Space space, const EmbeddingModel* model, unsigned workers) {
  if (!(percentile > 0.0 && percentile < 100.0)) {
    throw Error(ErrorCode::kOutOfDomain, "percentile must lie in (0, 100)");
  }
  std::vector<double> distances = in_space(candidates, synthetic, space, model,
                                           [&](const auto& cand, const auto& syn) {
                                             return all_distances(cand, syn, workers);
                                           });
  std::sort(distances.begin(), distances.end());
  return quantile_sorted(distances, percentile);
}

DistributionReport cluster_sizes(const CandidateSet& candidates,
                                 const LabeledDataset& synthetic, double threshold,
                                 Space space, const EmbeddingModel* model,
                                 unsigned workers) {
  std::vector<std::size_t> counts = in_space(
      candidates, synthetic, space, model, [&](const auto& cand, const auto& syn) {
        return count_within(cand, syn, threshold, workers);
      });
  DistributionReport report;
  report.space = space;
  report.threshold = threshold;
  std::vector<double> scores(counts.begin(), counts.end());
  const auto ranks = attack_ranks(scores, Direction::kLargestFirst);
  report.records.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    report.records.push_back({candidates.samples[i].id, candidates.samples[i].origin,
                              counts[i], ranks[i]});
  }
  return report;
}

std::vector<std::size_t> attack_ranks(std::span<const double> scores,
                                      Direction direction) {
  const auto order = attack_order(scores, direction);
  std::vector<std::size_t> ranks(scores.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) ranks[order[pos]] = pos + 1;
  return ranks;
}

CutoffTable cutoff_table(std::span<const double> scores,
                         std::span<const Origin> origins,
                         std::span<const std::size_t> cutoffs, Direction direction) {
  check_scores(scores, origins);
  for (std::size_t k : cutoffs) {
    if (k == 0) throw Error(ErrorCode::kInvalidArgument, "cutoff must be >= 1");
    if (k > scores.size()) {
      throw Error(ErrorCode::kCutoffTooLarge,
                  "cutoff " + std::to_string(k) + " exceeds " +
                      std::to_string(scores.size()) + " candidates");
    }
  }
  const auto order = attack_order(scores, direction);
  CutoffTable table;
  for (std::size_t k : cutoffs) {
    std::size_t counts[3] = {0, 0, 0};
    for (std::size_t pos = 0; pos < k; ++pos) {
      ++counts[static_cast<std::size_t>(origins[order[pos]])];
    }
    table.rows.push_back(make_row(k, counts));
  }
  return table;
}

CutoffTable cutoff_curve(std::span<const double> scores,
                         std::span<const Origin> origins, Direction direction) {
  check_scores(scores, origins);
  const auto order = attack_order(scores, direction);
  CutoffTable table;
  table.rows.reserve(scores.size());
  std::size_t counts[3] = {0, 0, 0};
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    ++counts[static_cast<std::size_t>(origins[order[pos]])];
    table.rows.push_back(make_row(pos + 1, counts));
  }
  return table;
}

std::vector<bool> anomaly_flags(const PairwiseReport& report, Origin reference,
                                double percentile) {
  std::vector<double> ref;
  for (const auto& r : report.records) {
    if (r.origin == reference) ref.push_back(r.min_distance);
  }
  if (ref.empty()) {
    throw Error(ErrorCode::kEmptyReference,
                "no " + std::string(to_string(reference)) + " candidates");
  }
  const double cut = empirical_quantile(ref, percentile);
  std::vector<bool> flags;
  flags.reserve(report.records.size());
  for (const auto& r : report.records) flags.push_back(r.min_distance < cut);
  return flags;
}

double attack_auc(std::span<const double> scores, std::span<const Origin> origins,
                  Origin positive, Origin negative, Direction direction) {
  if (scores.size() != origins.size()) {
    throw Error(ErrorCode::kShapeMismatch, "scores and origins differ in length");
  }
  std::vector<double> oriented;
  std::vector<int> labels;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (origins[i] != positive && origins[i] != negative) continue;
    oriented.push_back(direction == Direction::kSmallestFirst ? -scores[i] : scores[i]);
    labels.push_back(origins[i] == positive ? 1 : 0);
  }
  const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
  const bool has_neg = std::find(labels.begin(), labels.end(), 0) != labels.end();
  if (!has_pos || !has_neg) {
    throw Error(ErrorCode::kMissingOrigin,
                std::string(to_string(positive)) + " vs " +
                    std::string(to_string(negative)) + " needs both origins present");
  }
  return roc_curve(oriented, labels).auc;
}

}  // namespace synaudit
