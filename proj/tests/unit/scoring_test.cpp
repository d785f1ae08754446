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

#include "kieval/scoring.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace kieval {
namespace {

WeightScheme decaying(std::size_t n) { return {Weighting::kDecaying, n}; }
WeightScheme uniform(std::size_t n) { return {Weighting::kUniform, n}; }

std::vector<double> normalized(std::initializer_list<int> raw) {
  std::vector<double> out;
  for (int r : raw) out.push_back(normalize(r));
  return out;
}

TEST(NormalizeTest, MapsGradesOntoUnitInterval) {
  EXPECT_DOUBLE_EQ(normalize(1), 0.0);
  EXPECT_DOUBLE_EQ(normalize(2), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(normalize(4), 1.0);
  EXPECT_THROW(normalize(0), std::invalid_argument);
  EXPECT_THROW(normalize(5), std::invalid_argument);
}

// Reference values from a direct evaluation of the weighted sum in Python.
TEST(KievalScoreTest, WorkedExamples) {
  EXPECT_NEAR(kieval_score(normalized({4, 3, 2}), decaying(3)), 0.7394012158169501, 1e-12);
  EXPECT_NEAR(kieval_score(normalized({4, 4}), decaying(5)), 0.5215460078933705, 1e-12);
}

TEST(KievalScoreTest, UniformIsPaddedMean) {
  EXPECT_NEAR(kieval_score(normalized({4, 3, 2}), uniform(3)), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(kieval_score(normalized({4}), uniform(4)), 0.25, 1e-12);
}

TEST(KievalScoreTest, RejectsBadInput) {
  EXPECT_THROW(kieval_score(normalized({4, 4, 4}), decaying(2)), std::invalid_argument);
  EXPECT_THROW(kieval_score(normalized({4}), decaying(0)), std::invalid_argument);
  const std::vector<double> bad{1.5};
  EXPECT_THROW(kieval_score(bad, decaying(2)), std::invalid_argument);
  EXPECT_DOUBLE_EQ(kieval_score({}, decaying(3)), 0.0);
}

TEST(KievalScoreTest, EarlyStopNeverHelps) {
  std::mt19937_64 gen(5);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = 1 + gen() % 8;
    std::vector<double> s(1 + gen() % n);
    for (auto& v : s) v = normalize(1 + static_cast<int>(gen() % 4));
    const auto full = kieval_score(s, decaying(n));
    auto shorter = s;
    shorter.pop_back();
    EXPECT_LE(kieval_score(shorter, decaying(n)), full + 1e-15);
  }
}

TurnEvaluation turn(int round, int raw) {
  TurnEvaluation e;
  e.round = round;
  for (Aspect a : kAspects) e.scores[index_of(a)] = {a, raw, ""};
  return e;
}

SampleResult sample(std::string id, std::array<double, kAspectCount> scores, int rounds,
                    ConversationStatus status) {
  SampleResult s;
  s.question_id = std::move(id);
  s.per_aspect_score = scores;
  s.rounds = rounds;
  s.conversation.status = status;
  return s;
}

TEST(SampleScoresTest, PerAspectFromHistory) {
  EvaluationHistory h{turn(1, 4), turn(2, 1)};
  h[1].scores[index_of(Aspect::kLogic)].raw = 4;
  const auto s = sample_scores(h, uniform(2));
  EXPECT_DOUBLE_EQ(s[index_of(Aspect::kAccuracy)], 0.5);
  EXPECT_DOUBLE_EQ(s[index_of(Aspect::kLogic)], 1.0);
}

TEST(AggregateTest, ExcludesFailedSamples) {
  const std::vector<SampleResult> samples{
      sample("a", {1, 1, 1, 1, 1, 1}, 5, ConversationStatus::kCompleted),
      sample("b", {0.5, 0.5, 0.5, 0.5, 0.5, 0.5}, 2, ConversationStatus::kStoppedEarly),
      sample("c", {0, 0, 0, 0, 0, 0}, 1, ConversationStatus::kFailed)};
  const auto agg = aggregate(samples);
  EXPECT_EQ(agg.used, 2u);
  EXPECT_DOUBLE_EQ(agg.aspect_scores[0], 75.0);
  EXPECT_DOUBLE_EQ(agg.average_rounds, 3.5);
  EXPECT_THROW(aggregate(std::span(samples).subspan(2)), std::invalid_argument);
}

TEST(StopHistogramTest, CountsOnlyEarlyStops) {
  auto stopped = sample("a", {}, 2, ConversationStatus::kStoppedEarly);
  stopped.evaluations = {turn(1, 3), turn(2, 1)};
  stopped.evaluations[1].stop = true;
  stopped.evaluations[1].stop_reason = StopReason::kHallucination;
  auto completed = sample("b", {}, 5, ConversationStatus::kCompleted);
  completed.evaluations = {turn(1, 3)};
  completed.evaluations[0].stop = true;
  completed.evaluations[0].stop_reason = StopReason::kOffTopic;
  const std::vector<SampleResult> samples{stopped, completed};
  const auto h = stop_histogram(samples);
  EXPECT_EQ(h[index_of(StopReason::kHallucination)], 1u);
  EXPECT_EQ(h[index_of(StopReason::kOffTopic)], 0u);
}

TEST(FormatScoreTest, FixedDecimals) {
  EXPECT_EQ(format_score(97.55), "97.5");
  EXPECT_EQ(format_score(97.56), "97.6");
  EXPECT_EQ(format_score(3.0, 2), "3.00");
}

}  // namespace
}  // namespace kieval
