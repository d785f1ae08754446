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

#include "kieval/contamination.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "reference_tables.hpp"

namespace kieval {
namespace {

LogprobSequence sequence(std::string id, std::vector<double> lps,
                         std::optional<Membership> label = std::nullopt) {
  LogprobSequence s;
  s.id = std::move(id);
  s.label = label;
  for (std::size_t i = 0; i < lps.size(); ++i) s.tokens.push_back({"t" + std::to_string(i), lps[i]});
  return s;
}

TEST(MinKProbTest, AveragesLowestFraction) {
  const std::vector<double> lp{-0.1, -5.0, -0.2, -3.0, -0.3, -0.4, -0.5, -0.6, -0.7, -0.8};
  EXPECT_DOUBLE_EQ(min_k_prob(lp, 10), -5.0);
  EXPECT_DOUBLE_EQ(min_k_prob(lp, 20), -4.0);
  EXPECT_DOUBLE_EQ(min_k_prob(lp, 30), (-5.0 - 3.0 - 0.8) / 3);
  EXPECT_DOUBLE_EQ(min_k_prob(lp, 1), -5.0);
  EXPECT_NEAR(min_k_prob(lp, 100), -11.6 / 10, 1e-12);
  EXPECT_THROW(min_k_prob(lp, 0), std::invalid_argument);
  EXPECT_THROW(min_k_prob(lp, 101), std::invalid_argument);
  EXPECT_THROW(min_k_prob(std::vector<double>{}, 20), std::invalid_argument);
}

TEST(LossTest, MacroAverageAndDelta) {
  const std::vector<LogprobSequence> seqs{sequence("a", {-1, -3}), sequence("b", {-4})};
  EXPECT_DOUBLE_EQ(avg_lm_loss(seqs), 3.0);
  EXPECT_DOUBLE_EQ(loss_delta(3.88, 2.02), 2.02 - 3.88);
}

TEST(AucTest, SeparatedTiedAndInverted) {
  const std::vector<double> s{0.9, 0.8, 0.2, 0.1};
  const std::vector<Membership> l{Membership::kMember, Membership::kMember, Membership::kNonMember,
                                  Membership::kNonMember};
  EXPECT_DOUBLE_EQ(auc(s, l), 1.0);
  const std::vector<double> neg{-0.9, -0.8, -0.2, -0.1};
  EXPECT_DOUBLE_EQ(auc(neg, l), 0.0);
  const std::vector<double> tied{1, 1, 1, 1};
  EXPECT_DOUBLE_EQ(auc(tied, l), 0.5);
  EXPECT_THROW(auc(s, std::vector<Membership>(4, Membership::kMember)), std::invalid_argument);
}

TEST(DetectTest, CheaterLossGap) {
  // Train-split text scores loss 3.88, test-split text 2.02.
  const std::vector<LogprobSequence> train{sequence("tr1", {-3.88, -3.88}),
                                           sequence("tr2", {-3.0, -4.76})};
  const std::vector<LogprobSequence> test{sequence("te1", {-2.02}), sequence("te2", {-1.5, -2.54})};
  const auto r = detect(train, test);
  EXPECT_NEAR(r.train_loss, testing::kCheaterTrainLoss, 1e-12);
  EXPECT_NEAR(r.test_loss, testing::kCheaterTestLoss, 1e-12);
  EXPECT_NEAR(r.delta, testing::kCheaterDelta, 1e-12);
  EXPECT_DOUBLE_EQ(r.min_k_auc, 1.0);
}

TEST(DetectTest, ExplicitLabelsOverrideSplitDefaults) {
  const std::vector<LogprobSequence> train{sequence("a", {-0.1}, Membership::kMember),
                                           sequence("b", {-5.0})};
  const std::vector<LogprobSequence> test{sequence("c", {-6.0}, Membership::kNonMember),
                                          sequence("d", {-0.2})};
  EXPECT_DOUBLE_EQ(detect(train, test).min_k_auc, 1.0);
  EXPECT_DOUBLE_EQ(detect(train, test, 20, ScoreDirection::kLowerIsMember).min_k_auc, 0.0);
}

TEST(DumpTest, RoundTripAndErrors) {
  const auto path = std::filesystem::temp_directory_path() / "kieval_logprob_dump_test.jsonl";
  {
    std::ofstream out(path);
    out << encode(sequence("a", {-1, -2}, Membership::kMember)) << "\n\n"
        << encode(sequence("b", {-3})) << "\n";
  }
  const auto loaded = load_logprob_dump(path);
  ASSERT_EQ(loaded.size(), 2u);
  EXPECT_EQ(loaded[0].label, Membership::kMember);
  EXPECT_FALSE(loaded[1].label);
  EXPECT_EQ(loaded[0].logprobs(), (std::vector<double>{-1, -2}));
  std::filesystem::remove(path);

  EXPECT_THROW(decode<LogprobSequence>(R"({"id":"x","tokens":[]})"), ParseError);
  EXPECT_THROW(decode<LogprobSequence>(R"({"id":"x","label":"maybe","tokens":[["a",-1]]})"),
               ParseError);
  EXPECT_THROW(decode<LogprobSequence>(R"({"id":"x","tokens":[["a"]]})"), ParseError);
  EXPECT_THROW(load_logprob_dump("/nonexistent/dump.jsonl"), Error);
}

}  // namespace
}  // namespace kieval
