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

#include "synaudit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "synaudit/error.hpp"
#include "synaudit/parallel.hpp"
#include "synaudit/random.hpp"

namespace synaudit {
namespace {

void check_binary(std::span<const double> scores, std::span<const int> labels,
                  std::size_t& positives, std::size_t& negatives) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kShapeMismatch, "scores and labels differ in length");
  }
  positives = negatives = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) {
      ++positives;
    } else if (labels[i] == 0) {
      ++negatives;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "binary labels must be 0 or 1");
    }
    if (!std::isfinite(scores[i])) {
      throw Error(ErrorCode::kInvalidArgument, "scores must be finite");
    }
  }
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorCode::kSingleClass, "ROC needs both classes present");
  }
}

// TPR values a curve takes at `x`: its own points there, or one interpolated
// value when it has none.
std::vector<double> values_at(const RocCurve& curve, double x) {
  const auto& pts = curve.points;
  auto lo = std::lower_bound(pts.begin(), pts.end(), x,
                             [](const RocPoint& p, double v) { return p.fpr < v; });
  auto hi = std::upper_bound(pts.begin(), pts.end(), x,
                             [](double v, const RocPoint& p) { return v < p.fpr; });
  std::vector<double> out;
  if (lo != hi) {
    for (auto it = lo; it != hi; ++it) out.push_back(it->tpr);
    return out;
  }
  if (lo == pts.begin()) {
    out.push_back(pts.front().tpr);
  } else if (lo == pts.end()) {
    out.push_back(pts.back().tpr);
  } else {
    const RocPoint& a = *(lo - 1);
    const RocPoint& b = *lo;
    out.push_back(a.tpr + (x - a.fpr) * (b.tpr - a.tpr) / (b.fpr - a.fpr));
  }
  return out;
}

}  // namespace

double trapezoid_auc(std::span<const RocPoint> points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) *
            (points[i].tpr + points[i - 1].tpr) * 0.5;
  }
  return area;
}

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
  std::size_t positives = 0, negatives = 0;
  check_binary(scores, labels, positives, negatives);

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    while (i < order.size() && scores[order[i]] == threshold) {
      if (labels[order[i]] == 1) {
        ++tp;
      } else {
        ++fp;
      }
      ++i;
    }
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                            static_cast<double>(tp) / static_cast<double>(positives)});
  }
  curve.auc = trapezoid_auc(curve.points);
  return curve;
}

double auc_rank(std::span<const double> scores, std::span<const int> labels) {
  std::size_t positives = 0, negatives = 0;
  check_binary(scores, labels, positives, negatives);
  double wins = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / (static_cast<double>(positives) * static_cast<double>(negatives));
}

std::vector<int> one_vs_rest(std::span<const int> labels, int k) {
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = labels[i] == k ? 1 : 0;
  return out;
}

RocCurve macro_average(std::span<const RocCurve> curves) {
  if (curves.empty()) throw Error(ErrorCode::kEmptyInput, "no curves to average");

  std::vector<double> grid;
  for (const auto& c : curves) {
    for (const auto& p : c.points) grid.push_back(p.fpr);
  }
  grid.push_back(0.0);
  grid.push_back(1.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const double k = static_cast<double>(curves.size());
  RocCurve out;
  for (double x : grid) {
    std::vector<std::vector<double>> per_curve;
    per_curve.reserve(curves.size());
    for (const auto& c : curves) per_curve.push_back(values_at(c, x));

    const std::size_t m = per_curve.front().size();
    const bool aligned = std::all_of(per_curve.begin(), per_curve.end(),
                                     [m](const auto& v) { return v.size() == m; });
    if (aligned) {
      for (std::size_t j = 0; j < m; ++j) {
        double sum = 0.0;
        for (const auto& v : per_curve) sum += v[j];
        out.points.push_back({x, sum / k});
      }
    } else {
      double left = 0.0, right = 0.0;
      for (const auto& v : per_curve) {
        left += v.front();
        right += v.back();
      }
      out.points.push_back({x, left / k});
      if (right != left) out.points.push_back({x, right / k});
    }
  }
  out.auc = trapezoid_auc(out.points);
  return out;
}

std::size_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});
}

ConfusionMatrix confusion(const Eigen::MatrixXd& probabilities,
                          std::span<const int> labels) {
  if (static_cast<std::size_t>(probabilities.rows()) != labels.size()) {
    throw Error(ErrorCode::kShapeMismatch, "probability rows and labels differ");
  }
  const auto num_classes = static_cast<std::size_t>(probabilities.cols());
  ConfusionMatrix cm(num_classes);
  for (Eigen::Index i = 0; i < probabilities.rows(); ++i) {
    const int truth = labels[static_cast<std::size_t>(i)];
    if (truth < 0 || static_cast<std::size_t>(truth) >= num_classes) {
      throw Error(ErrorCode::kInvalidArgument, "label outside [0, K)");
    }
    std::size_t best = 0;
    for (Eigen::Index j = 0; j < probabilities.cols(); ++j) {
      if (!std::isfinite(probabilities(i, j))) {
        throw Error(ErrorCode::kInvalidArgument, "non-finite probability");
      }
      if (probabilities(i, j) > probabilities(i, static_cast<Eigen::Index>(best))) {
        best = static_cast<std::size_t>(j);
      }
    }
    cm.add(static_cast<std::size_t>(truth), best);
  }
  return cm;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::kEmptyInput, "quantile of nothing");
  if (!(p >= 0.0 && p <= 100.0)) {
    throw Error(ErrorCode::kOutOfDomain, "percentile outside [0, 100]");
  }
  const double h = static_cast<double>(sorted.size() - 1) * p / 100.0;
  const double lo = std::floor(h);
  const auto i = static_cast<std::size_t>(lo);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + (h - lo) * (sorted[i + 1] - sorted[i]);
}

double empirical_quantile(std::span<const double> values, double p) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "quantile of nothing");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "non-finite value");
  }
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, p);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::kOutOfDomain, "normal_quantile needs 0 < p < 1");
  }
  // Acklam's rational approximation, then one Halley step against erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

BootstrapCI bca_interval(std::size_t n, const IndexStatistic& statistic,
                         std::size_t n_resamples, double alpha,
                         std::uint64_t seed, unsigned workers) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "bootstrap needs n >= 2");
  if (n_resamples == 0) {
    throw Error(ErrorCode::kInvalidArgument, "n_resamples must be >= 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kOutOfDomain, "alpha must lie in (0, 1)");
  }

  BootstrapCI ci;
  ci.alpha = alpha;
  ci.n_resamples = n_resamples;
  ci.seed = seed;

  std::vector<std::size_t> identity(n);
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  ci.estimate = statistic(identity);
  if (std::isnan(ci.estimate)) {
    throw Error(ErrorCode::kDegenerateData, "statistic undefined on the full sample");
  }

  constexpr int kMaxAttempts = 100;
  std::vector<double> boot(n_resamples);
  parallel_for(n_resamples, workers, [&](std::size_t r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    std::vector<std::size_t> idx(n);
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      for (auto& v : idx) v = rng.index(n);
      const double value = statistic(idx);
      if (!std::isnan(value)) {
        boot[r] = value;
        return;
      }
    }
    throw Error(ErrorCode::kDegenerateData,
                "statistic undefined on resample " + std::to_string(r));
  });

  std::vector<double> jack(n, std::numeric_limits<double>::quiet_NaN());
  parallel_for(n, workers, [&](std::size_t i) {
    std::vector<std::size_t> idx;
    idx.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) idx.push_back(j);
    }
    jack[i] = statistic(idx);
  });
  std::erase_if(jack, [](double v) { return std::isnan(v); });

  std::vector<double> sorted = boot;
  std::sort(sorted.begin(), sorted.end());

  double num = 0.0, den = 0.0;
  if (jack.size() >= 2) {
    double mean = 0.0;
    for (double v : jack) mean += v;
    mean /= static_cast<double>(jack.size());
    for (double v : jack) {
      const double d = mean - v;
      num += d * d * d;
      den += d * d;
    }
  }

  if (!(den > 0.0)) {
    ci.method = "percentile";
    ci.lower = quantile_sorted(sorted, 100.0 * alpha / 2.0);
    ci.upper = quantile_sorted(sorted, 100.0 * (1.0 - alpha / 2.0));
    return ci;
  }

  ci.acceleration = num / (6.0 * std::pow(den, 1.5));

  std::size_t below = 0, equal = 0;
  for (double v : boot) {
    if (v < ci.estimate) {
      ++below;
    } else if (v == ci.estimate) {
      ++equal;
    }
  }
  const double b = static_cast<double>(n_resamples);
  double fraction = (static_cast<double>(below) + 0.5 * static_cast<double>(equal)) / b;
  fraction = std::clamp(fraction, 0.5 / b, 1.0 - 0.5 / b);
  if (n_resamples == 1) fraction = 0.5;
  ci.bias_correction = normal_quantile(fraction);

  auto adjusted_level = [&](double z_alpha, double fallback) {
    const double z = ci.bias_correction + z_alpha;
    const double denom = 1.0 - ci.acceleration * z;
    if (!(denom > 0.0)) return fallback;
    return normal_cdf(ci.bias_correction + z / denom);
  };
  const double level_lo = adjusted_level(normal_quantile(alpha / 2.0), 0.0);
  const double level_hi = adjusted_level(normal_quantile(1.0 - alpha / 2.0), 1.0);
  ci.lower = quantile_sorted(sorted, 100.0 * std::clamp(level_lo, 0.0, 1.0));
  ci.upper = quantile_sorted(sorted, 100.0 * std::clamp(level_hi, 0.0, 1.0));
  return ci;
}

BootstrapCI bca_interval(
    std::span<const double> data,
    const std::function<double(std::span<const double>)>& statistic,
    std::size_t n_resamples, double alpha, std::uint64_t seed,
    unsigned workers) {
  IndexStatistic by_index = [&](std::span<const std::size_t> idx) {
    std::vector<double> sample(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) sample[i] = data[idx[i]];
    return statistic(sample);
  };
  return bca_interval(data.size(), by_index, n_resamples, alpha, seed, workers);
}

}  // namespace synaudit
