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

#ifndef SYNAUDIT_STATS_HPP_
#define SYNAUDIT_STATS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace synaudit {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

/// Piecewise-linear ROC curve from (0,0) to (1,1) with its trapezoidal area.
struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// Trapezoidal area under a polyline of ROC points.
double trapezoid_auc(std::span<const RocPoint> points);

/// Sweeps the threshold over the distinct scores in descending order; a group
/// of equal scores moves the curve in a single (possibly diagonal) step.
/// Labels are 0/1. Throws SingleClass unless both classes are present.
RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels);

/// Mann-Whitney estimate: the share of (positive, negative) pairs ranked
/// correctly, ties counting one half. Independent of roc_curve.
double auc_rank(std::span<const double> scores, std::span<const int> labels);

/// 1 where labels[i] == k, else 0.
std::vector<int> one_vs_rest(std::span<const int> labels, int k);

/// Equal-weight average of ROC curves on the union of their FPR values.
/// Where every curve holds the same number of points at an FPR value those
/// points are averaged pairwise; otherwise the averaged curve gets one point
/// for the left limits and one for the right limits.
RocCurve macro_average(std::span<const RocCurve> curves);

/// K-by-K counts, rows = true class, columns = predicted class.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t num_classes = 0)
      : num_classes_(num_classes), counts_(num_classes * num_classes, 0) {}

  std::size_t num_classes() const { return num_classes_; }
  std::size_t at(std::size_t truth, std::size_t predicted) const {
    return counts_[truth * num_classes_ + predicted];
  }
  void add(std::size_t truth, std::size_t predicted) {
    ++counts_[truth * num_classes_ + predicted];
  }
  std::size_t total() const;
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t num_classes_;
  std::vector<std::size_t> counts_;
};

/// Predicted class = argmax of each probability row; the lowest index wins
/// ties.
ConfusionMatrix confusion(const Eigen::MatrixXd& probabilities,
                          std::span<const int> labels);

/// Linear interpolation between order statistics:
/// h = (n-1) p / 100, q = v[floor(h)] + frac(h) (v[floor(h)+1] - v[floor(h)]).
/// p is in percent, [0, 100].
double empirical_quantile(std::span<const double> values, double p);
/// Same rule on values that are already sorted ascending.
double quantile_sorted(std::span<const double> sorted, double p);

double normal_cdf(double x);
/// Inverse standard normal CDF for p in (0, 1); absolute error below 1e-9.
double normal_quantile(double p);

struct BootstrapCI {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double alpha = 0.05;
  std::size_t n_resamples = 0;
  std::uint64_t seed = 0;
  // "bca", or "percentile" when the jackknife has zero variance.
  std::string method = "bca";
  double bias_correction = 0.0;  // z0
  double acceleration = 0.0;     // a
};

/// A statistic evaluated on the resampled index multiset. NaN marks a
/// resample on which the statistic is undefined; such a resample is redrawn.
using IndexStatistic = std::function<double(std::span<const std::size_t>)>;

/// Bias-corrected and accelerated bootstrap interval.
///
/// Resample r draws n indices uniformly with replacement from a stream seeded
/// by (seed, r), so the result does not depend on `workers`. z0 counts the
/// bootstrap values strictly below the estimate plus half of the ties. The
/// acceleration comes from leave-one-out jackknife values. Endpoints are
/// empirical quantiles of the bootstrap values at the adjusted levels.
BootstrapCI bca_interval(std::size_t n, const IndexStatistic& statistic,
                         std::size_t n_resamples, double alpha,
                         std::uint64_t seed, unsigned workers = 1);

BootstrapCI bca_interval(
    std::span<const double> data,
    const std::function<double(std::span<const double>)>& statistic,
    std::size_t n_resamples, double alpha, std::uint64_t seed,
    unsigned workers = 1);

}  // namespace synaudit

#endif  // SYNAUDIT_STATS_HPP_
