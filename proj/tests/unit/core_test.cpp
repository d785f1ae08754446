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

#include "kieval/core.hpp"

#include <gtest/gtest.h>

#include "simulated_models.hpp"

namespace kieval {
namespace {

TurnEvaluation sample_evaluation(int round, bool stop) {
  TurnEvaluation e;
  e.round = round;
  for (Aspect a : kAspects) e.scores[index_of(a)] = {a, 1 + static_cast<int>(index_of(a)) % 4, "c"};
  e.stop = stop;
  if (stop) e.stop_reason = StopReason::kRoleShift;
  e.evaluator_raw = "{\"raw\": true}";
  return e;
}

TEST(EnumTest, NamesRoundTrip) {
  for (Role r : kRoles) EXPECT_EQ(parse_role(to_string(r)), r);
  for (Aspect a : kAspects) EXPECT_EQ(parse_aspect(to_string(a)), a);
  for (StopReason s : kStopReasons) EXPECT_EQ(parse_stop_reason(to_string(s)), s);
  EXPECT_EQ(parse_weighting("uniform"), Weighting::kUniform);
  EXPECT_EQ(parse_status("stopped_early"), ConversationStatus::kStoppedEarly);
}

TEST(EnumTest, UnknownNameListsAllowedValues) {
  try {
    parse_aspect("clarity");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("clarity"), std::string::npos);
    EXPECT_NE(what.find("conciseness"), std::string::npos);
  }
  EXPECT_THROW(parse_role("judge"), ParseError);
  EXPECT_THROW(parse_weighting("linear"), ParseError);
}

TEST(EnumTest, UnknownStopCodeIsOther) {
  EXPECT_EQ(stop_reason_from_code("hallucination"), StopReason::kHallucination);
  EXPECT_EQ(stop_reason_from_code("rambling"), StopReason::kOther);
}

TEST(QuestionTest, ValidateRejectsBrokenRecords) {
  auto q = testing::make_question("q1", "text", 2);
  EXPECT_NO_THROW(validate(q));
  q.gold_index = 4;
  EXPECT_THROW(validate(q), DatasetError);
  q.gold_index = 0;
  q.options = {"only"};
  EXPECT_THROW(validate(q), DatasetError);
  q.options = {"a", ""};
  EXPECT_THROW(validate(q), DatasetError);
  q.options = {"a", "b"};
  q.id.clear();
  EXPECT_THROW(validate(q), DatasetError);
}

TEST(QuestionTest, JsonRoundTrip) {
  auto q = testing::make_question("q1", "text", 2);
  q.subject = "physics";
  q.language = "zh";
  EXPECT_EQ(decode<BenchmarkQuestion>(encode(q)), q);
  q.subject.reset();
  EXPECT_EQ(decode<BenchmarkQuestion>(encode(q)), q);
}

TEST(QuestionTest, NegativeAnswerIsParseError) {
  EXPECT_THROW(decode<BenchmarkQuestion>(R"({"id":"x","question":"q","options":["a","b"],"answer":-1})"),
               ParseError);
  EXPECT_THROW(decode<BenchmarkQuestion>(R"({"id":"x","question":"q","options":["a","b"],"answer":"B"})"),
               ParseError);
}

TEST(SampleResultTest, JsonRoundTrip) {
  SampleResult s;
  s.question_id = "q1";
  s.conversation.question = testing::make_question("q1", "text", 1);
  s.conversation.initial_prediction = "B";
  s.conversation.messages = {{Role::kInteractor, 1, "why?"}, {Role::kCandidate, 1, "because"}};
  s.conversation.status = ConversationStatus::kStoppedEarly;
  s.conversation.rounds_completed = 1;
  s.evaluations = {sample_evaluation(1, true)};
  s.per_aspect_score = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  s.rounds = 1;
  s.token_usage.add(Role::kEvaluator, 10, 3);
  EXPECT_EQ(decode<SampleResult>(encode(s)), s);
  EXPECT_EQ(s.stop_reason(), StopReason::kRoleShift);

  s.conversation.status = ConversationStatus::kFailed;
  s.conversation.error = "boom";
  EXPECT_EQ(decode<SampleResult>(encode(s)), s);
  EXPECT_TRUE(s.failed());
  EXPECT_EQ(s.stop_reason(), std::nullopt);
}

TEST(SampleResultTest, DecodeErrorsBecomeParseError) {
  EXPECT_THROW(decode<SampleResult>("{not json"), ParseError);
  EXPECT_THROW(decode<SampleResult>(R"({"question_id": "q"})"), ParseError);
}

TEST(RunReportTest, JsonRoundTrip) {
  RunReport r;
  r.candidate_model = "m";
  r.dataset = "arc-easy";
  r.aspect_scores = {90, 80, 70, 60, 50, 40};
  r.average_rounds = 3.5;
  r.stop_histogram = {1, 0, 2, 0, 0};
  r.sample_count = 10;
  r.failed_count = 1;
  r.stopped_early_count = 3;
  r.cost_usd = 1.25;
  r.config_hash = "abc";
  r.config = json{{"seed", 1}};
  EXPECT_EQ(decode<RunReport>(encode(r)), r);
  r.static_accuracy = 0.5;
  r.cost_usd.reset();
  EXPECT_EQ(decode<RunReport>(encode(r)), r);
  EXPECT_DOUBLE_EQ(r.overall(), 40);
}

TEST(TokenUsageTest, AddsPerRole) {
  TokenUsage a, b;
  a.add(Role::kCandidate, 5, 1);
  b.add(Role::kCandidate, 2, 2);
  b.add(Role::kEvaluator, 7, 0);
  const auto c = a + b;
  EXPECT_EQ(c[Role::kCandidate].prompt_tokens, 7u);
  EXPECT_EQ(c[Role::kCandidate].completion_tokens, 3u);
  EXPECT_EQ(c[Role::kEvaluator].prompt_tokens, 7u);
  EXPECT_EQ(c[Role::kInteractor].prompt_tokens, 0u);
}

}  // namespace
}  // namespace kieval
