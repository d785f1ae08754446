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

#ifndef KIEVAL_TESTS_SUPPORT_REFERENCE_TABLES_HPP_
#define KIEVAL_TESTS_SUPPORT_REFERENCE_TABLES_HPP_

// Published benchmark figures used as regression inputs.

#include <array>
#include <string_view>

namespace kieval::testing {

// Seven models: GPT-3.5, LLaMA2 70B / 13B / 7B, Mistral 7B, Yi 6B, MPT 7B.
inline constexpr std::size_t kModels = 7;
inline constexpr std::size_t kYiIndex = 5;

struct BenchmarkColumns {
  std::string_view name;
  std::array<double, kModels> static_accuracy;
  std::array<double, kModels> interactive;
};

inline constexpr std::array<BenchmarkColumns, 5> kLeaderboard{{
    {"ARC-E",
     {92.7, 92.3, 81.9, 73.6, 83.5, 90.7, 53.3},
     {97.6, 90.7, 86.2, 78.9, 80.8, 83.8, 68.4}},
    {"ARC-C",
     {82.3, 80.4, 65.7, 55.7, 67.5, 79.0, 43.4},
     {95.5, 84.1, 78.6, 74.4, 78.5, 76.8, 65.5}},
    {"MMLU",
     {58.2, 61.8, 52.1, 44.5, 52.7, 61.9, 33.9},
     {96.2, 89.6, 87.4, 83.0, 83.0, 86.5, 74.7}},
    {"HellaSwag",
     {76.6, 74.4, 59.3, 39.8, 54.4, 73.7, 27.3},
     {88.2, 80.1, 78.5, 76.4, 70.3, 68.7, 57.3}},
    {"C-Eval",
     {50.8, 42.0, 37.8, 33.4, 39.3, 71.5, 26.2},
     {83.3, 61.0, 54.4, 49.3, 52.2, 55.6, 44.9}},
}};

// Expected Pearson (r, p) of static accuracy vs. interactive score per
// benchmark, then pooled; all rows and with the Yi model removed.
struct CorrelationRow {
  std::string_view name;
  double r, p, r_excl, p_excl;
};

inline constexpr std::array<CorrelationRow, 6> kCorrelations{{
    {"ARC-E", 0.892, 6.97e-3, 0.934, 6.45e-3},
    {"ARC-C", 0.839, 1.83e-2, 0.940, 5.29e-3},
    {"MMLU", 0.814, 2.57e-2, 0.876, 2.21e-2},
    {"HellaSwag", 0.686, 8.85e-2, 0.862, 2.74e-2},
    {"C-Eval", 0.427, 3.40e-1, 0.924, 8.42e-3},
    {"Overall", 0.664, 1.37e-5, 0.765, 8.67e-7},
}};

// Interactive scores of three candidates (six aspects each) as graded by
// two different evaluator models, with the expected cross-evaluator
// correlations.
inline constexpr std::array<double, 18> kEvaluatorA{
    94.6, 94.7, 98.5, 96.1, 97.3, 95.5, 81.9, 82.8, 92.2,
    85.3, 75.6, 84.1, 70.6, 71.6, 90.4, 77.9, 71.7, 74.4};
inline constexpr std::array<double, 18> kEvaluatorB{
    98.6, 98.8, 99.8, 99.4, 99.0, 98.7, 98.3, 98.7, 98.2,
    96.9, 84.6, 96.4, 90.9, 91.8, 98.0, 95.0, 85.2, 91.0};
inline constexpr double kEvaluatorPearson[2] = {0.822, 2.87e-5};
inline constexpr double kEvaluatorSpearman[2] = {0.898, 4.17e-7};
inline constexpr double kEvaluatorKendall[2] = {0.761, 1.10e-5};

// Pairwise Cohen's kappas between three human annotators and their mean.
inline constexpr std::array<double, 3> kAnnotatorKappas{0.650, 0.580, 0.642};
inline constexpr double kAnnotatorAgreement = 0.624;

// API budget in USD for 1 / 10 / 100 models.
inline constexpr std::array<std::uint64_t, 3> kBudgetModels{1, 10, 100};
inline constexpr std::array<std::uint64_t, 3> kBudgetInteractive{27, 279, 2796};
inline constexpr std::array<std::uint64_t, 3> kBudgetPairwise{16, 720, 79200};

// Mean token usage of one interactive run and its approximate cost.
inline constexpr std::uint64_t kInteractorPrompt = 557'000;
inline constexpr std::uint64_t kInteractorCompletion = 28'000;
inline constexpr std::uint64_t kEvaluatorPrompt = 1'546'000;
inline constexpr std::uint64_t kEvaluatorCompletion = 203'000;
inline constexpr double kRunCostUsd = 27.0;

// Loss on training vs. test split of a model pre-trained on test data.
inline constexpr double kCheaterTrainLoss = 3.88;
inline constexpr double kCheaterTestLoss = 2.02;
inline constexpr double kCheaterDelta = -1.86;

}  // namespace kieval::testing

#endif  // KIEVAL_TESTS_SUPPORT_REFERENCE_TABLES_HPP_
