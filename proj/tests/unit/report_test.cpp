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

#include "kieval/report.hpp"

#include <gtest/gtest.h>

#include "kieval/converters.hpp"
#include "kieval/csv.hpp"

namespace kieval {
namespace {

RunReport report(std::optional<double> accuracy = std::nullopt) {
  RunReport r;
  r.candidate_model = "model-x";
  r.dataset = "arc-challenge";
  r.aspect_scores = {95.5, 84.14, 78.6, 74.44, 78.5, 76.8};
  r.average_rounds = 3.456;
  r.stop_histogram = {2, 0, 1, 0, 0};
  r.sample_count = 10;
  r.failed_count = 1;
  r.stopped_early_count = 3;
  r.static_accuracy = accuracy;
  return r;
}

TEST(MarkdownTest, EightColumnsWithoutAccuracy) {
  const auto r = report();
  const auto md = render_markdown(std::span(&r, 1));
  EXPECT_EQ(md,
            "| Model | Accuracy | Logic | Relevance | Coherence | Conciseness | Overall | Rounds |\n"
            "|---|---:|---:|---:|---:|---:|---:|---:|\n"
            "| model-x (arc-challenge) | 95.5 | 84.1 | 78.6 | 74.4 | 78.5 | 76.8 | 3.46 |\n");
}

TEST(MarkdownTest, AccuracyColumnWhenAvailable) {
  const std::vector<RunReport> rs{report(0.823), report()};
  const auto md = render_markdown(rs);
  EXPECT_NE(md.find("| Model | Acc. | Accuracy |"), std::string::npos);
  EXPECT_NE(md.find("| model-x (arc-challenge) | 82.3 | 95.5 |"), std::string::npos);
  EXPECT_NE(md.find("| model-x (arc-challenge) | - | 95.5 |"), std::string::npos);
}

TEST(CsvReportTest, Layout) {
  auto r = report(0.5);
  r.candidate_model = "a,b";
  r.cost_usd = 1.234;
  EXPECT_EQ(render_csv(std::span(&r, 1)),
            "model,dataset,accuracy,logic,relevance,coherence,conciseness,overall,rounds,"
            "static_accuracy,samples,failed,stopped_early,cost_usd\n"
            "\"a,b\",arc-challenge,95.5,84.1,78.6,74.4,78.5,76.8,3.46,50.0,10,1,3,1.23\n");
}

TEST(StopCsvTest, AllReasonsListed) {
  EXPECT_EQ(render_stop_csv(report()),
            "reason,count\noff_topic,2\nempty_response,0\nrole_shift,1\nhallucination,0\nother,0\n");
  RunReport none;
  EXPECT_EQ(render_stop_csv(none),
            "reason,count\noff_topic,0\nempty_response,0\nrole_shift,0\nhallucination,0\nother,0\n");
}

TEST(CsvParseTest, QuotesNewlinesAndBlankLines) {
  const auto rows = parse_csv("a,\"b,c\",\"d\"\"e\"\r\n\n\"multi\nline\",,x\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (CsvRow{"a", "b,c", "d\"e"}));
  EXPECT_EQ(rows[1], (CsvRow{"multi\nline", "", "x"}));
  EXPECT_EQ(parse_csv("x,y").size(), 1u);
  EXPECT_THROW(parse_csv("\"open"), ParseError);
  EXPECT_THROW(parse_csv("ab\"c\"\n"), ParseError);
}

TEST(ConvertTest, ArcNestedAndFlat) {
  const auto nested = convert_arc(
      R"({"id":"Mercury_1","question":{"stem":"Sky colour?","choices":[{"label":"A","text":"blue"},{"label":"B","text":"green"}]},"answerKey":"A"})"
      "\n",
      "arc-easy");
  ASSERT_EQ(nested.size(), 1u);
  EXPECT_EQ(nested[0].text, "Sky colour?");
  EXPECT_EQ(nested[0].gold_index, 0u);
  const auto flat = convert_arc(
      R"({"id":"x","question":"Q?","choices":{"text":["p","q","r"],"label":["1","2","3"]},"answerKey":"3"})",
      "arc-challenge");
  EXPECT_EQ(flat[0].gold_index, 2u);
  EXPECT_EQ(flat[0].options.size(), 3u);
  EXPECT_THROW(convert_arc(R"({"id":"x","question":"Q?","choices":{"text":["p","q"],"label":["A","B"]},"answerKey":"?"})",
                           "arc"),
               DatasetError);
}

TEST(ConvertTest, HellaSwag) {
  const auto qs = convert_hellaswag(
      R"({"ind":24,"ctx":"A man is","endings":["running","sleeping","x","y"],"label":"1","activity_label":"Running"})",
      "hellaswag");
  ASSERT_EQ(qs.size(), 1u);
  EXPECT_EQ(qs[0].id, "24");
  EXPECT_EQ(qs[0].gold_index, 1u);
  EXPECT_EQ(qs[0].subject, "Running");
}

TEST(ConvertTest, MmluAndCeval) {
  const auto mmlu = convert_mmlu("\"What, exactly?\",a,b,c,d,C\nq2,a,b,c,d,A\n", "anatomy", "mmlu");
  ASSERT_EQ(mmlu.size(), 2u);
  EXPECT_EQ(mmlu[0].id, "anatomy-0");
  EXPECT_EQ(mmlu[0].text, "What, exactly?");
  EXPECT_EQ(mmlu[0].gold_index, 2u);
  EXPECT_THROW(convert_mmlu("q,a,b,c\n", "s", "mmlu"), DatasetError);

  const auto ceval = convert_ceval("id,question,A,B,C,D,answer,explanation\n0,问题,甲,乙,丙,丁,D,因为\n",
                                   "law", "ceval");
  ASSERT_EQ(ceval.size(), 1u);
  EXPECT_EQ(ceval[0].id, "law-0");
  EXPECT_EQ(ceval[0].language, "zh");
  EXPECT_EQ(ceval[0].gold_index, 3u);
  EXPECT_THROW(convert_ceval("id,question,A,B\n", "s", "ceval"), DatasetError);
}

}  // namespace
}  // namespace kieval
