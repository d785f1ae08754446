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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "kieval/dataset.hpp"
#include "kieval/random.hpp"
#include "simulated_models.hpp"

namespace kieval {
namespace {

namespace fs = std::filesystem;

// Reference values computed by a separate Python implementation.
TEST(SplitMix64Test, MatchesReferenceSequence) {
  SplitMix64 a(1234567);
  EXPECT_EQ(a.next(), 6457827717110365317ULL);
  EXPECT_EQ(a.next(), 3203168211198807973ULL);
  EXPECT_EQ(a.next(), 9817491932198370423ULL);
  SplitMix64 b(0);
  EXPECT_EQ(b.next(), 16294208416658607535ULL);
  EXPECT_EQ(b.next(), 7960286522194355700ULL);
}

std::vector<int> shuffled(int n, std::uint64_t seed) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  seeded_shuffle(std::span(v), seed);
  return v;
}

TEST(ShuffleTest, MatchesReferencePermutations) {
  EXPECT_EQ(shuffled(5, 42), (std::vector<int>{1, 2, 0, 4, 3}));
  EXPECT_EQ(shuffled(10, 7), (std::vector<int>{8, 1, 5, 9, 0, 4, 3, 2, 6, 7}));
  EXPECT_EQ(shuffled(10, 2024), (std::vector<int>{9, 0, 6, 3, 4, 2, 5, 7, 8, 1}));
}

TEST(ShuffleTest, IsAPermutation) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(gen() % 60);
    auto v = shuffled(n, gen());
    std::sort(v.begin(), v.end());
    std::vector<int> expected(n);
    std::iota(expected.begin(), expected.end(), 0);
    EXPECT_EQ(v, expected);
  }
  EXPECT_TRUE(shuffled(0, 1).empty());
  EXPECT_EQ(shuffled(1, 1), std::vector<int>{0});
}

std::vector<BenchmarkQuestion> pool(int n) {
  std::vector<BenchmarkQuestion> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(testing::make_question(std::to_string(i), "q" + std::to_string(i), 0));
  }
  return out;
}

std::vector<std::string> ids(const std::vector<BenchmarkQuestion>& qs) {
  std::vector<std::string> out;
  for (const auto& q : qs) out.push_back(q.id);
  return out;
}

TEST(SampleSubsetTest, TakesShufflePrefix) {
  const auto p = pool(5);
  const auto s = sample_subset(p, 2, 42);
  EXPECT_EQ(ids(s.questions), (std::vector<std::string>{"1", "2"}));
  EXPECT_FALSE(s.short_input);
}

TEST(SampleSubsetTest, PrefixStableAcrossCounts) {
  const auto p = pool(40);
  const auto small = ids(sample_subset(p, 5, 99).questions);
  const auto large = ids(sample_subset(p, 20, 99).questions);
  EXPECT_TRUE(std::equal(small.begin(), small.end(), large.begin()));
}

TEST(SampleSubsetTest, ShortInputAndZeroCount) {
  const auto p = pool(3);
  const auto s = sample_subset(p, 10, 1);
  EXPECT_TRUE(s.short_input);
  EXPECT_EQ(s.questions.size(), 3u);
  EXPECT_THROW(sample_subset(p, 0, 1), std::invalid_argument);
}

class DatasetFileTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("kieval_dataset_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& content) {
    auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

  fs::path dir_;
};

TEST_F(DatasetFileTest, LoadsAndSkipsBlankLines) {
  const auto p = write("a.jsonl",
                       R"({"id":"1","question":"q","options":["a","b"],"answer":1})"
                       "\n\n"
                       R"({"id":"2","question":"r","options":["a","b","c"],"answer":2,"subject":"s"})"
                       "\n");
  const auto qs = load_questions(p, "test-src");
  ASSERT_EQ(qs.size(), 2u);
  EXPECT_EQ(qs[0].source, "test-src");
  EXPECT_EQ(qs[1].subject, "s");
}

TEST_F(DatasetFileTest, ReportsLineOfBadRecord) {
  const auto p = write("b.jsonl",
                       R"({"id":"1","question":"q","options":["a","b"],"answer":1})"
                       "\n"
                       R"({"id":"2","question":"q","options":["a","b"],"answer":5})"
                       "\n");
  try {
    load_questions(p, "x");
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_NE(std::string(e.what()).find("b.jsonl:2"), std::string::npos) << e.what();
  }
}

TEST_F(DatasetFileTest, RejectsDuplicatesAndMissingFile) {
  const auto p = write("c.jsonl",
                       R"({"id":"1","question":"q","options":["a","b"],"answer":1})"
                       "\n"
                       R"({"id":"1","question":"q","options":["a","b"],"answer":1})"
                       "\n");
  EXPECT_THROW(load_questions(p, "x"), DatasetError);
  EXPECT_THROW(load_questions(dir_ / "missing.jsonl", "x"), DatasetError);
  EXPECT_THROW(load_questions(write("d.jsonl", "{oops}\n"), "x"), DatasetError);
}

TEST_F(DatasetFileTest, ExemplarsAreDeterministicAndDisjoint) {
  std::string eval, dev;
  for (int i = 0; i < 4; ++i) {
    eval += encode(testing::make_question("e" + std::to_string(i), "e", 0)) + "\n";
    dev += encode(testing::make_question("d" + std::to_string(i), "d", 1)) + "\n";
  }
  DatasetDescriptor d;
  d.eval_path = write("eval.jsonl", eval);
  d.exemplar_path = write("dev.jsonl", dev);
  const auto a = draw_exemplars(d, 3, 5);
  EXPECT_EQ(a, draw_exemplars(d, 3, 5));
  EXPECT_EQ(a.size(), 3u);
  EXPECT_TRUE(draw_exemplars(d, 0, 5).empty());
  EXPECT_THROW(draw_exemplars(d, 5, 5), DatasetError);

  d.exemplar_path = write("dev2.jsonl", dev + encode(testing::make_question("e1", "e", 0)) + "\n");
  EXPECT_THROW(draw_exemplars(d, 2, 5), DatasetError);
  d.exemplar_path.clear();
  EXPECT_THROW(draw_exemplars(d, 1, 5), DatasetError);
}

}  // namespace
}  // namespace kieval
