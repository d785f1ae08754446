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

#ifndef KIEVAL_VERIFICATION_HPP_
#define KIEVAL_VERIFICATION_HPP_

#include <optional>
#include <span>
#include <vector>

#include "kieval/choice_prompt.hpp"
#include "kieval/gateway.hpp"
#include "kieval/parallel.hpp"

namespace kieval {

struct VerificationResult {
  std::vector<BenchmarkQuestion> questions;  // Q_V, in Q_S order
  std::size_t examined = 0;
  std::size_t transport_failures = 0;
  TokenUsage token_usage;
};

// Q_V: walks Q_S in order, keeping questions the evaluator answers correctly
// zero-shot, until `target_count` are kept. Calls run in windows of exactly
// the number still needed, so the set of requests issued does not depend on
// `parallelism`. A question whose call fails in transport counts as
// unverified.
inline VerificationResult verify_samples(std::span<const BenchmarkQuestion> pool,
                                         Gateway& evaluator, std::size_t target_count,
                                         std::size_t parallelism = 1) {
  VerificationResult out;
  std::size_t cursor = 0;
  while (out.questions.size() < target_count && cursor < pool.size()) {
    const std::size_t window = std::min(target_count - out.questions.size(), pool.size() - cursor);
    std::vector<std::optional<bool>> verdict(window);
    std::vector<ChatResponse> responses(window);
    parallel_for(window, parallelism, [&](std::size_t i) {
      const auto& q = pool[cursor + i];
      try {
        responses[i] = evaluator.complete({{"user", build_choice_prompt(q, {})}});
        verdict[i] = extract_choice(responses[i].content, q.options.size()) == q.gold_index;
      } catch (const TransportError&) {
        verdict[i] = std::nullopt;
      }
    });
    for (std::size_t i = 0; i < window; ++i) {
      out.token_usage.add(Role::kEvaluator, responses[i].prompt_tokens,
                          responses[i].completion_tokens);
      if (!verdict[i]) {
        ++out.transport_failures;
      } else if (*verdict[i]) {
        out.questions.push_back(pool[cursor + i]);
      }
    }
    cursor += window;
    out.examined = cursor;
  }
  if (out.questions.size() < target_count) {
    throw InsufficientSamplesError(out.questions.size(), target_count);
  }
  return out;
}

}  // namespace kieval

#endif  // KIEVAL_VERIFICATION_HPP_
