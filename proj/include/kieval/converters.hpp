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

#ifndef KIEVAL_CONVERTERS_HPP_
#define KIEVAL_CONVERTERS_HPP_

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "kieval/core.hpp"
#include "kieval/csv.hpp"

// Converters from the public distribution formats of the supported
// benchmarks into BenchmarkQuestion records.

namespace kieval {

namespace detail {

inline std::size_t letter_index(std::string_view key, std::string_view id) {
  if (key.size() == 1 && key[0] >= 'A' && key[0] <= 'Z') return key[0] - 'A';
  if (key.size() == 1 && key[0] >= '1' && key[0] <= '9') return key[0] - '1';
  throw DatasetError("question '" + std::string(id) + "': unrecognised answer key '" +
                     std::string(key) + "'");
}

template <typename Fn>
std::vector<BenchmarkQuestion> each_json_line(std::string_view text, Fn&& fn) {
  std::vector<BenchmarkQuestion> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      auto q = fn(json::parse(line));
      validate(q);
      out.push_back(std::move(q));
    } catch (const json::exception& e) {
      throw DatasetError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace detail

// ARC jsonl: {"id", "question": {"stem", "choices": [{"label","text"}]},
// "answerKey"} or the flattened {"question", "choices": {"text","label"}}.
inline std::vector<BenchmarkQuestion> convert_arc(std::string_view text, std::string source) {
  return detail::each_json_line(text, [&](const json& j) {
    BenchmarkQuestion q;
    q.id = j.at("id").get<std::string>();
    q.source = source;
    const auto& question = j.at("question");
    std::vector<std::string> labels;
    if (question.is_object()) {
      q.text = question.at("stem").get<std::string>();
      for (const auto& c : question.at("choices")) {
        labels.push_back(c.at("label").get<std::string>());
        q.options.push_back(c.at("text").get<std::string>());
      }
    } else {
      q.text = question.get<std::string>();
      const auto& choices = j.at("choices");
      labels = choices.at("label").get<std::vector<std::string>>();
      q.options = choices.at("text").get<std::vector<std::string>>();
    }
    const auto key = j.at("answerKey").get<std::string>();
    auto it = std::find(labels.begin(), labels.end(), key);
    q.gold_index = it != labels.end() ? static_cast<std::size_t>(it - labels.begin())
                                      : detail::letter_index(key, q.id);
    return q;
  });
}

// HellaSwag jsonl: {"ind", "ctx", "endings": [4], "label"}.
inline std::vector<BenchmarkQuestion> convert_hellaswag(std::string_view text,
                                                        std::string source) {
  return detail::each_json_line(text, [&](const json& j) {
    BenchmarkQuestion q;
    const auto& ind = j.at("ind");
    q.id = ind.is_string() ? ind.get<std::string>() : std::to_string(ind.get<long long>());
    q.source = source;
    q.text = j.at("ctx").get<std::string>();
    q.options = j.at("endings").get<std::vector<std::string>>();
    const auto& label = j.at("label");
    q.gold_index = label.is_string() ? std::stoul(label.get<std::string>())
                                     : label.get<std::size_t>();
    if (auto it = j.find("activity_label"); it != j.end()) q.subject = it->get<std::string>();
    return q;
  });
}

// MMLU csv (no header): question, A, B, C, D, answer-letter. Ids are
// "<subject>-<row>".
inline std::vector<BenchmarkQuestion> convert_mmlu(std::string_view text,
                                                   const std::string& subject,
                                                   std::string source) {
  std::vector<BenchmarkQuestion> out;
  std::size_t n = 0;
  for (const auto& row : parse_csv(text)) {
    ++n;
    if (row.size() != 6) {
      throw DatasetError("mmlu row " + std::to_string(n) + ": expected 6 fields, got " +
                         std::to_string(row.size()));
    }
    BenchmarkQuestion q;
    q.id = subject + "-" + std::to_string(n - 1);
    q.source = source;
    q.subject = subject;
    q.text = row[0];
    q.options.assign(row.begin() + 1, row.begin() + 5);
    q.gold_index = detail::letter_index(row[5], q.id);
    validate(q);
    out.push_back(std::move(q));
  }
  return out;
}

// C-Eval csv with header: id, question, A, B, C, D, answer[, explanation].
inline std::vector<BenchmarkQuestion> convert_ceval(std::string_view text,
                                                    const std::string& subject,
                                                    std::string source) {
  const auto rows = parse_csv(text);
  if (rows.empty()) return {};
  const auto& header = rows.front();
  auto column = [&](std::string_view name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DatasetError("c-eval csv lacks column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t id = column("id"), question = column("question"), answer = column("answer");
  const std::size_t letters[] = {column("A"), column("B"), column("C"), column("D")};

  std::vector<BenchmarkQuestion> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() < header.size()) {
      throw DatasetError("c-eval row " + std::to_string(r) + ": too few fields");
    }
    BenchmarkQuestion q;
    q.id = subject + "-" + row[id];
    q.source = source;
    q.subject = subject;
    q.language = "zh";
    q.text = row[question];
    for (auto col : letters) q.options.push_back(row[col]);
    q.gold_index = detail::letter_index(row[answer], q.id);
    validate(q);
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace kieval

#endif  // KIEVAL_CONVERTERS_HPP_
