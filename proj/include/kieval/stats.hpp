// Copyright 2026 The kieval Authors
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

// Statistics for meta-evaluation: correlation coefficients with p-values,
// inter-annotator agreement, variance and regression outliers.

#ifndef KIEVAL_STATS_HPP_
#define KIEVAL_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace kieval::stats {

struct Correlation {
  double coefficient = 0.0;
  double p_value = 1.0;  // two-sided
};

namespace detail {

inline void check_paired(std::span<const double> x, std::span<const double> y,
                         std::size_t min_length, const char* who) {
  if (x.size() != y.size()) {
    throw std::invalid_argument(std::string(who) + ": series lengths differ");
  }
  if (x.size() < min_length) {
    throw std::invalid_argument(std::string(who) + ": need at least " +
                                std::to_string(min_length) + " pairs");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw std::invalid_argument(std::string(who) + ": non-finite value");
    }
  }
}

inline double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Two-sided p for r under H0: t = r * sqrt(df / (1 - r^2)), Student t(df).
inline double t_test_p(double r, std::size_t n) {
  const double df = static_cast<double>(n) - 2.0;
  const double denom = 1.0 - r * r;
  if (denom <= 0.0) return 0.0;
  const double t = std::abs(r) * std::sqrt(df / denom);
  const boost::math::students_t dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, t)));
}

}  // namespace detail

// Sample Pearson r with the t-distribution p-value.
inline Correlation pearson(std::span<const double> x, std::span<const double> y) {
  detail::check_paired(x, y, 3, "pearson");
  const double mx = detail::mean(x);
  const double my = detail::mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson: zero variance");
  const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  return {r, detail::t_test_p(r, x.size())};
}

// 1-based ranks, ties sharing the mean of the ranks they span.
inline std::vector<double> midranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

// Pearson on midranks; p from the same t approximation.
inline Correlation spearman(std::span<const double> x, std::span<const double> y) {
  detail::check_paired(x, y, 3, "spearman");
  const auto rx = midranks(x);
  const auto ry = midranks(y);
  if (std::all_of(rx.begin(), rx.end(), [&](double r) { return r == rx.front(); }) ||
      std::all_of(ry.begin(), ry.end(), [&](double r) { return r == ry.front(); })) {
    throw std::invalid_argument("spearman: a series is entirely tied");
  }
  return pearson(rx, ry);
}

// Kendall tau-b. The p-value uses the normal approximation to
// (concordant - discordant) with its tie-corrected variance.
inline Correlation kendall(std::span<const double> x, std::span<const double> y) {
  detail::check_paired(x, y, 3, "kendall");
  const std::size_t n = x.size();
  double concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        ++ties_x;
      } else if (dy == 0) {
        ++ties_y;
      } else if ((dx > 0) == (dy > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double denom =
      std::sqrt((concordant + discordant + ties_x) * (concordant + discordant + ties_y));
  if (denom == 0.0) throw std::invalid_argument("kendall: a series is entirely tied");
  const double s = concordant - discordant;
  const double tau = std::clamp(s / denom, -1.0, 1.0);

  // Tie group sizes for the variance correction.
  auto groups = [](std::span<const double> v) {
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> sizes;
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      if (j - i > 1) sizes.push_back(static_cast<double>(j - i));
      i = j;
    }
    return sizes;
  };
  const double nn = static_cast<double>(n);
  double v0 = nn * (nn - 1) * (2 * nn + 5);
  double vt = 0, t1 = 0, t2 = 0;
  for (double t : groups(x)) {
    vt += t * (t - 1) * (2 * t + 5);
    t1 += t * (t - 1);
    t2 += t * (t - 1) * (t - 2);
  }
  double vu = 0, u1 = 0, u2 = 0;
  for (double u : groups(y)) {
    vu += u * (u - 1) * (2 * u + 5);
    u1 += u * (u - 1);
    u2 += u * (u - 1) * (u - 2);
  }
  const double var = (v0 - vt - vu) / 18.0 + t1 * u1 / (2 * nn * (nn - 1)) +
                     t2 * u2 / (9 * nn * (nn - 1) * (nn - 2));
  double p = 1.0;
  if (var > 0) {
    const double z = std::abs(s) / std::sqrt(var);
    p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(
                              boost::math::normal_distribution<double>(), z)));
  }
  return {tau, p};
}

// Cohen's kappa over two equal-length categorical series with chance
// agreement from the product of marginals.
template <typename T>
double cohen_kappa(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("cohen_kappa: series must be non-empty and equal length");
  }
  std::map<T, std::pair<double, double>> marginals;
  double agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) ++agree;
    ++marginals[a[i]].first;
    ++marginals[b[i]].second;
  }
  const double n = static_cast<double>(a.size());
  const double p_o = agree / n;
  double p_e = 0;
  for (const auto& [category, counts] : marginals) p_e += (counts.first / n) * (counts.second / n);
  if (p_e >= 1.0) throw std::invalid_argument("cohen_kappa: degenerate marginals (p_e = 1)");
  return (p_o - p_e) / (1.0 - p_e);
}

template <typename T>
double cohen_kappa(const std::vector<T>& a, const std::vector<T>& b) {
  return cohen_kappa(std::span<const T>(a), std::span<const T>(b));
}

// Inter-annotator agreement: unweighted mean of pairwise kappas.
inline double mean_pairwise_agreement(std::span<const double> pairwise_kappas) {
  if (pairwise_kappas.empty()) throw std::invalid_argument("no kappa values");
  return detail::mean(pairwise_kappas);
}

template <typename T>
double average_pairwise_kappa(const std::vector<std::vector<T>>& raters) {
  if (raters.size() < 2) throw std::invalid_argument("average_pairwise_kappa: need >= 2 raters");
  std::vector<double> kappas;
  for (std::size_t i = 0; i < raters.size(); ++i) {
    for (std::size_t j = i + 1; j < raters.size(); ++j) {
      kappas.push_back(cohen_kappa(raters[i], raters[j]));
    }
  }
  return mean_pairwise_agreement(kappas);
}

// Population variance (denominator n).
inline double variance(std::span<const double> v) {
  if (v.size() < 2) throw std::invalid_argument("variance: need at least 2 values");
  const double m = detail::mean(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size());
}

enum class OutlierFlag { kNone, kAbove, kBelow };

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_sigma = 0.0;  // sqrt(SSR / (n - 2))
  std::vector<double> residuals;
  std::vector<OutlierFlag> flags;
};

// Least-squares fit of y on x. A point is flagged when its residual is
// beyond threshold_sigmas residual standard errors; Above points outperform
// the trend, Below points underperform it.
inline RegressionFit regression_outliers(std::span<const double> x, std::span<const double> y,
                                         double threshold_sigmas = 1.5) {
  detail::check_paired(x, y, 3, "regression_outliers");
  const double mx = detail::mean(x);
  const double my = detail::mean(y);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("regression_outliers: zero x variance");

  RegressionFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    fit.residuals.push_back(r);
    ssr += r * r;
  }
  fit.residual_sigma = std::sqrt(ssr / static_cast<double>(x.size() - 2));

  // Residuals at rounding-noise level are treated as exact zeros.
  double scale = 0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  const double noise = 1e-9 * std::max(1.0, scale);
  for (double r : fit.residuals) {
    OutlierFlag flag = OutlierFlag::kNone;
    if (fit.residual_sigma > noise) {
      if (r > threshold_sigmas * fit.residual_sigma) flag = OutlierFlag::kAbove;
      if (r < -threshold_sigmas * fit.residual_sigma) flag = OutlierFlag::kBelow;
    }
    fit.flags.push_back(flag);
  }
  return fit;
}

}  // namespace kieval::stats

#endif  // KIEVAL_STATS_HPP_
