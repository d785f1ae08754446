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

#include "kieval/choice_prompt.hpp"

#include <gtest/gtest.h>

#include "simulated_models.hpp"

namespace kieval {
namespace {

TEST(ChoicePromptTest, ZeroShotLayout) {
  auto q = testing::make_question("q", "Which light?", 1);
  q.options = {"red", "green"};
  EXPECT_EQ(build_choice_prompt(q, {}), "Question: Which light?\nA. red\nB. green\nAnswer:");
}

TEST(ChoicePromptTest, ExemplarsCarryTheirAnswers) {
  auto q = testing::make_question("q", "Target?", 0);
  q.options = {"x", "y"};
  auto ex = testing::make_question("e", "Solved?", 1);
  ex.options = {"u", "v"};
  const std::vector<BenchmarkQuestion> shots{ex};
  EXPECT_EQ(build_choice_prompt(q, shots),
            "Question: Solved?\nA. u\nB. v\nAnswer: B\n\nQuestion: Target?\nA. x\nB. y\nAnswer:");
}

TEST(ChoicePromptTest, RejectsTargetAmongExemplarsAndTooManyOptions) {
  const auto q = testing::make_question("q", "t", 0);
  const std::vector<BenchmarkQuestion> shots{q};
  EXPECT_THROW(build_choice_prompt(q, shots), std::invalid_argument);
  auto wide = q;
  wide.options.assign(27, "o");
  EXPECT_THROW(build_choice_prompt(wide, {}), std::invalid_argument);
}

TEST(ExtractChoiceTest, FindsStandaloneLetters) {
  EXPECT_EQ(extract_choice("B", 4), 1u);
  EXPECT_EQ(extract_choice("The answer is C.", 4), 2u);
  EXPECT_EQ(extract_choice("(D) because", 4), 3u);
  EXPECT_EQ(extract_choice("  b  ", 4), 1u);
  EXPECT_EQ(extract_choice("option (c)", 4), 2u);
  EXPECT_EQ(extract_choice("d. seems right", 4), 3u);
}

TEST(ExtractChoiceTest, IgnoresArticlesWordsAndOutOfRangeLetters) {
  EXPECT_EQ(extract_choice("a dog barked", 4), std::nullopt);
  EXPECT_EQ(extract_choice("Apple", 4), std::nullopt);
  EXPECT_EQ(extract_choice("E", 4), std::nullopt);
  EXPECT_EQ(extract_choice("", 4), std::nullopt);
  EXPECT_EQ(extract_choice("I think a B", 4), 1u);
  EXPECT_THROW(extract_choice("A", 1), std::invalid_argument);
}

}  // namespace
}  // namespace kieval
