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

// k-shot multiple-choice prompting and answer-letter extraction. Shared by
// static accuracy, zero-shot verification and the candidate's round-0
// answer.

#ifndef KIEVAL_CHOICE_PROMPT_HPP_
#define KIEVAL_CHOICE_PROMPT_HPP_

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "kieval/core.hpp"

namespace kieval {

inline constexpr std::size_t kMaxOptions = 26;

inline char option_letter(std::size_t index) {
  if (index >= kMaxOptions) throw std::out_of_range("option index beyond 'Z'");
  return static_cast<char>('A' + index);
}

namespace detail {

inline void append_question_block(std::string& out, const BenchmarkQuestion& q) {
  if (q.options.size() > kMaxOptions) {
    throw std::invalid_argument("question '" + q.id + "' has " +
                                std::to_string(q.options.size()) +
                                " options; at most 26 can be lettered");
  }
  out += "Question: ";
  out += q.text;
  out += '\n';
  for (std::size_t i = 0; i < q.options.size(); ++i) {
    out += option_letter(i);
    out += ". ";
    out += q.options[i];
    out += '\n';
  }
  out += "Answer:";
}

}  // namespace detail

// Each exemplar renders as a solved block ("Answer: <gold letter>"), blank
// line separated, followed by the target block ending in a bare "Answer:".
inline std::string build_choice_prompt(const BenchmarkQuestion& question,
                                       std::span<const BenchmarkQuestion> exemplars) {
  std::string out;
  for (const auto& ex : exemplars) {
    if (ex.id == question.id) {
      throw std::invalid_argument("exemplar '" + ex.id + "' is the target question");
    }
    detail::append_question_block(out, ex);
    out += ' ';
    out += option_letter(ex.gold_index);
    out += "\n\n";
  }
  detail::append_question_block(out, question);
  return out;
}

// Index of the first standalone option letter in `completion`, or nullopt.
// Upper-case letters count whenever they stand alone ("B", "B.", "(B)");
// lower-case ones only with option punctuation ("(c)", "c.", "c)") or as the
// whole reply, so the article "a" is not read as option A.
inline std::optional<std::size_t> extract_choice(std::string_view completion,
                                                 std::size_t n_options) {
  if (n_options < 2) throw std::invalid_argument("extract_choice: need at least 2 options");
  const std::size_t limit = std::min(n_options, kMaxOptions);

  auto trimmed = completion;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) {
    trimmed.remove_prefix(1);
  }
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) {
    trimmed.remove_suffix(1);
  }

  auto is_word = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' ||
           static_cast<unsigned char>(c) >= 0x80;
  };
  for (std::size_t i = 0; i < completion.size(); ++i) {
    const char c = completion[i];
    if (!std::isalpha(static_cast<unsigned char>(c))) continue;
    const char before = i > 0 ? completion[i - 1] : ' ';
    const char after = i + 1 < completion.size() ? completion[i + 1] : ' ';
    if (is_word(before) || is_word(after)) continue;

    const auto index = static_cast<std::size_t>(std::toupper(static_cast<unsigned char>(c)) - 'A');
    if (index >= limit) continue;
    if (std::isupper(static_cast<unsigned char>(c))) return index;
    const bool punctuated = before == '(' || after == ')' || after == '.' || after == ':';
    if (punctuated || trimmed.size() == 1) return index;
  }
  return std::nullopt;
}

}  // namespace kieval

#endif  // KIEVAL_CHOICE_PROMPT_HPP_
