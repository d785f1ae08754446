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

#ifndef KIEVAL_SCORING_HPP_
#define KIEVAL_SCORING_HPP_

#include <array>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kieval/core.hpp"

namespace kieval {

struct WeightScheme {
  Weighting kind = Weighting::kDecaying;
  std::size_t horizon = 5;  // n: the configured maximum number of rounds

  // w_i for i = 1..n: exp(-i/n) when decaying, 1 when uniform.
  double weight(std::size_t i) const {
    if (kind == Weighting::kUniform) return 1.0;
    return std::exp(-static_cast<double>(i) / static_cast<double>(horizon));
  }
};

// Maps a definitive 1..4 grade onto [0,1]: (raw - 1) / 3.
inline double normalize(int raw) {
  if (raw < 1 || raw > 4) {
    throw std::invalid_argument("raw score " + std::to_string(raw) + " outside 1..4");
  }
  return static_cast<double>(raw - 1) / 3.0;
}

// Weighted mean of per-round normalized scores over the full horizon. Rounds
// after an early stop (m < n) contribute 0, so ending a dialogue early can
// never raise the score.
inline double kieval_score(std::span<const double> scores, const WeightScheme& scheme) {
  const std::size_t n = scheme.horizon;
  if (n == 0) throw std::invalid_argument("kieval_score: horizon must be >= 1");
  if (scores.size() > n) {
    throw std::invalid_argument("kieval_score: " + std::to_string(scores.size()) +
                                " rounds exceed horizon " + std::to_string(n));
  }
  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double w = scheme.weight(i);
    if (i <= scores.size()) {
      const double s = scores[i - 1];
      if (!(s >= 0.0 && s <= 1.0)) {
        throw std::invalid_argument("kieval_score: normalized score outside [0,1]");
      }
      numerator += s * w;
    }
    denominator += w;
  }
  return numerator / denominator;
}

// Per-aspect score of one sample from its evaluation history.
inline std::array<double, kAspectCount> sample_scores(const EvaluationHistory& evaluations,
                                                      const WeightScheme& scheme) {
  std::array<double, kAspectCount> out{};
  std::vector<double> series(evaluations.size());
  for (Aspect a : kAspects) {
    for (std::size_t i = 0; i < evaluations.size(); ++i) {
      series[i] = normalize(evaluations[i].score(a).raw);
    }
    out[index_of(a)] = kieval_score(series, scheme);
  }
  return out;
}

struct Aggregate {
  std::array<double, kAspectCount> aspect_scores{};  // x100
  double average_rounds = 0.0;
  std::size_t used = 0;  // non-failed samples averaged
};

// Mean over non-failed samples of each per-sample score, scaled by 100.
inline Aggregate aggregate(std::span<const SampleResult> samples) {
  Aggregate out;
  double rounds = 0.0;
  for (const auto& s : samples) {
    if (s.failed()) continue;
    ++out.used;
    for (Aspect a : kAspects) out.aspect_scores[index_of(a)] += s.per_aspect_score[index_of(a)];
    rounds += s.rounds;
  }
  if (out.used == 0) throw std::invalid_argument("aggregate: no usable (non-failed) samples");
  const auto n = static_cast<double>(out.used);
  for (auto& v : out.aspect_scores) v = v * 100.0 / n;
  out.average_rounds = rounds / n;
  return out;
}

inline StopHistogram stop_histogram(std::span<const SampleResult> samples) {
  StopHistogram h{};
  for (const auto& s : samples) {
    if (s.conversation.status != ConversationStatus::kStoppedEarly) continue;
    ++h[index_of(s.stop_reason().value_or(StopReason::kOther))];
  }
  return h;
}

// One-decimal rendering used by every report ("97.6").
inline std::string format_score(double value, int decimals = 1) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

}  // namespace kieval

#endif  // KIEVAL_SCORING_HPP_
