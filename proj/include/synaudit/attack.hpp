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
 * @file attack.hpp
 *
 * @brief Simulated membership-inference attacks against a synthetic dataset.
 *
 * Pairwise attack: a candidate whose nearest synthetic sample is unusually
 * close is suspected to be a training member. Distribution attack: a
 * candidate with unusually many synthetic neighbours (distance below a
 * percentile threshold) is suspected to be a training member.
 *
 * Distances are Euclidean, either on raw flattened pixels or on embedding
 * features. The inner accumulation order is fixed (synthetic index ascending,
 * feature index ascending), and work is split across candidates only, so
 * every report is bitwise identical for any worker count.
 */

#ifndef SYNAUDIT_ATTACK_HPP_
#define SYNAUDIT_ATTACK_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "synaudit/embedding.hpp"
#include "synaudit/tensor_io.hpp"

namespace synaudit {

enum class Space { kPixel, kEmbedding };
enum class Direction { kSmallestFirst, kLargestFirst };

std::string_view to_string(Space space);
Space parse_space(std::string_view token);

/// Percentiles used for the neighbour threshold when none is given.
inline constexpr double kPixelPercentile = 1.0;
inline constexpr double kEmbeddingPercentile = 0.1;
double default_percentile(Space space);

/// Row-major points viewed through row pointers; rows need not be
/// contiguous with each other.
template <typename T>
struct PointRows {
  std::vector<const T*> rows;
  std::size_t dim = 0;

  std::size_t size() const { return rows.size(); }
};

struct NearestNeighbors {
  std::vector<double> distance;
  std::vector<std::size_t> index;  // first index attaining the minimum
};

template <typename T>
NearestNeighbors nearest_synthetic(const PointRows<T>& queries,
                                   const PointRows<T>& reference,
                                   unsigned workers = 1);

/// Number of reference points at distance strictly below `threshold`.
template <typename T>
std::vector<std::size_t> count_within(const PointRows<T>& queries,
                                      const PointRows<T>& reference,
                                      double threshold, unsigned workers = 1);

/// Every query-reference distance, query-major.
template <typename T>
std::vector<double> all_distances(const PointRows<T>& queries,
                                  const PointRows<T>& reference,
                                  unsigned workers = 1);

struct PairwiseRecord {
  std::string id;
  Origin origin = Origin::kTrain;
  double min_distance = 0.0;
  std::size_t nearest_synthetic_index = 0;
};

struct PairwiseReport {
  Space space = Space::kPixel;
  std::vector<PairwiseRecord> records;  // candidate order

  std::vector<double> scores() const;
  std::vector<Origin> origins() const;
};

struct DistributionRecord {
  std::string id;
  Origin origin = Origin::kTrain;
  std::size_t neighbor_count = 0;
  std::size_t cluster_rank = 0;  // 1 = largest cluster
};

struct DistributionReport {
  Space space = Space::kPixel;
  double threshold = 0.0;
  std::vector<DistributionRecord> records;  // candidate order

  std::vector<double> scores() const;
  std::vector<Origin> origins() const;
};

struct CutoffRow {
  std::size_t cutoff = 0;
  double train = 0.0;
  double val = 0.0;
  double test = 0.0;
};

struct CutoffTable {
  std::vector<CutoffRow> rows;
};

/// Minimum distance from each candidate to the synthetic set. `model` is
/// required for Space::kEmbedding and ignored for Space::kPixel.
PairwiseReport min_distances(const CandidateSet& candidates,
                             const LabeledDataset& synthetic, Space space,
                             const EmbeddingModel* model = nullptr,
                             unsigned workers = 1);

/// The `percentile`-th percentile of all candidate-synthetic distances.
double neighbor_threshold(const CandidateSet& candidates,
                          const LabeledDataset& synthetic, double percentile,
                          Space space, const EmbeddingModel* model = nullptr,
                          unsigned workers = 1);

/// Neighbour counts (distance < threshold) and cluster ranks, descending by
/// count with ties in candidate order.
DistributionReport cluster_sizes(const CandidateSet& candidates,
                                 const LabeledDataset& synthetic,
                                 double threshold, Space space,
                                 const EmbeddingModel* model = nullptr,
                                 unsigned workers = 1);

/// 1-based ranks of `scores` in attack order; ties keep candidate order.
std::vector<std::size_t> attack_ranks(std::span<const double> scores,
                                      Direction direction);

/// Origin proportions among the k most suspicious candidates for each k in
/// `cutoffs`. Throws CutoffTooLarge if any k exceeds the candidate count.
CutoffTable cutoff_table(std::span<const double> scores,
                         std::span<const Origin> origins,
                         std::span<const std::size_t> cutoffs,
                         Direction direction);

/// cutoff_table evaluated at every k = 1..N.
CutoffTable cutoff_curve(std::span<const double> scores,
                         std::span<const Origin> origins, Direction direction);

/// Flags candidates whose min distance is below the `percentile`-th
/// percentile of the reference origin's min distances.
std::vector<bool> anomaly_flags(const PairwiseReport& report, Origin reference,
                                double percentile);

/// ROC AUC of separating `positive` from `negative` candidates, with scores
/// oriented so the suspicious end ranks high. 0.5 means chance.
double attack_auc(std::span<const double> scores, std::span<const Origin> origins,
                  Origin positive, Origin negative, Direction direction);

}  // namespace synaudit

#endif  // SYNAUDIT_ATTACK_HPP_
