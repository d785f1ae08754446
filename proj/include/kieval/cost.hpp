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

#ifndef KIEVAL_COST_HPP_
#define KIEVAL_COST_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "kieval/core.hpp"

namespace kieval {

struct PriceRate {
  double prompt_per_1k = 0.0;      // USD per 1K prompt tokens
  double completion_per_1k = 0.0;  // USD per 1K completion tokens

  bool operator==(const PriceRate&) const = default;
};

using PriceTable = std::map<Role, PriceRate>;

// GPT-4 Turbo list prices for the interactor and evaluator; the candidate is
// assumed to be self-hosted.
inline PriceTable gpt4_turbo_prices() {
  return {{Role::kInteractor, {0.01, 0.03}},
          {Role::kCandidate, {0.0, 0.0}},
          {Role::kEvaluator, {0.01, 0.03}}};
}

// Sum over roles of tokens / 1000 * rate. Every role that consumed tokens
// needs a rate.
inline double estimate_run_cost(const TokenUsage& usage, const PriceTable& prices) {
  double usd = 0.0;
  for (Role r : kRoles) {
    const auto& u = usage[r];
    if (u.prompt_tokens == 0 && u.completion_tokens == 0) continue;
    auto it = prices.find(r);
    if (it == prices.end()) {
      throw ConfigError("no price rate for the " + std::string(to_string(r)) + " role");
    }
    if (it->second.prompt_per_1k < 0 || it->second.completion_per_1k < 0) {
      throw ConfigError("negative price rate for the " + std::string(to_string(r)) + " role");
    }
    usd += static_cast<double>(u.prompt_tokens) / 1000.0 * it->second.prompt_per_1k +
           static_cast<double>(u.completion_tokens) / 1000.0 * it->second.completion_per_1k;
  }
  return usd;
}

enum class CostMethod { kKieval, kPairwise };

// Per-model cost of one interactive evaluation, in cents (27.96 USD), and
// the per-pair cost of a pairwise-comparison judge, in USD.
inline constexpr std::uint64_t kKievalCentsPerModel = 2796;
inline constexpr std::uint64_t kPairwiseUsdPerPair = 16;

// Whole-dollar API budget for evaluating n models. Single-answer grading is
// linear in n; pairwise comparison needs C(n,2) pairs (at least one).
inline std::uint64_t scaling_estimate(std::uint64_t n_models, CostMethod method) {
  if (n_models < 1) throw std::invalid_argument("scaling_estimate: need at least one model");
  if (method == CostMethod::kKieval) return kKievalCentsPerModel * n_models / 100;
  const std::uint64_t pairs = std::max<std::uint64_t>(1, n_models * (n_models - 1) / 2);
  return kPairwiseUsdPerPair * pairs;
}

inline void to_json(json& j, const PriceTable& t) {
  j = json::object();
  for (const auto& [role, rate] : t) {
    j[std::string(to_string(role))] = {{"prompt_per_1k", rate.prompt_per_1k},
                                       {"completion_per_1k", rate.completion_per_1k}};
  }
}

inline void from_json(const json& j, PriceTable& t) {
  t.clear();
  for (const auto& [key, value] : j.items()) {
    PriceRate rate{value.at("prompt_per_1k").get<double>(),
                   value.at("completion_per_1k").get<double>()};
    if (rate.prompt_per_1k < 0 || rate.completion_per_1k < 0) {
      throw ConfigError("negative price rate for role " + key);
    }
    t[parse_role(key)] = rate;
  }
}

}  // namespace kieval

#endif  // KIEVAL_COST_HPP_
