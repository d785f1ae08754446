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

// Canonical dataset files, seeded subset sampling and few-shot exemplar
// draws. Upstream formats are mapped onto the canonical JSON Lines schema by
// the converters in converters.hpp; nothing here knows about them.

#ifndef KIEVAL_DATASET_HPP_
#define KIEVAL_DATASET_HPP_

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "kieval/core.hpp"
#include "kieval/random.hpp"

namespace kieval {

enum class DatasetId { kArcEasy, kArcChallenge, kHellaSwag, kMmlu, kCEval, kCustom };

namespace detail {
inline constexpr EnumNames<DatasetId, 6> kDatasetNames{
    "dataset id",
    {{{DatasetId::kArcEasy, "arc-easy"},
      {DatasetId::kArcChallenge, "arc-challenge"},
      {DatasetId::kHellaSwag, "hellaswag"},
      {DatasetId::kMmlu, "mmlu"},
      {DatasetId::kCEval, "ceval"},
      {DatasetId::kCustom, "custom"}}}};
}  // namespace detail

constexpr std::string_view to_string(DatasetId d) { return detail::kDatasetNames.name(d); }
inline DatasetId parse_dataset_id(std::string_view s) { return detail::kDatasetNames.parse(s); }

struct DatasetDescriptor {
  DatasetId id = DatasetId::kCustom;
  std::string language = "en";
  std::string eval_split = "test";
  std::string exemplar_split = "dev";
  std::filesystem::path eval_path;
  std::filesystem::path exemplar_path;  // may be empty when no few-shot is needed

  bool operator==(const DatasetDescriptor&) const = default;
};

inline void to_json(json& j, const DatasetDescriptor& d) {
  j = json{{"id", to_string(d.id)},
           {"language", d.language},
           {"eval_split", d.eval_split},
           {"exemplar_split", d.exemplar_split},
           {"eval_path", d.eval_path.generic_string()},
           {"exemplar_path", d.exemplar_path.generic_string()}};
}

inline void from_json(const json& j, DatasetDescriptor& d) {
  d.id = parse_dataset_id(j.at("id").get<std::string>());
  d.language = j.value("language", std::string("en"));
  d.eval_split = j.value("eval_split", std::string("test"));
  d.exemplar_split = j.value("exemplar_split", std::string("dev"));
  d.eval_path = j.at("eval_path").get<std::string>();
  d.exemplar_path = j.value("exemplar_path", std::string());
}

// Reads a canonical JSON Lines file. Blank lines are skipped; any other
// malformed line aborts with its 1-based line number.
inline std::vector<BenchmarkQuestion> load_questions(const std::filesystem::path& path,
                                                     std::string_view source) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open dataset file " + path.string());

  std::vector<BenchmarkQuestion> out;
  std::unordered_set<std::string> seen;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    const std::string where = path.filename().string() + ":" + std::to_string(line_no);
    BenchmarkQuestion q;
    try {
      q = decode<BenchmarkQuestion>(line, where);
      validate(q);
    } catch (const DatasetError& e) {
      throw DatasetError(where + ": " + e.what());
    } catch (const ParseError& e) {
      throw DatasetError(std::string("malformed record at ") + e.what());
    }
    if (!seen.insert(q.id).second) {
      throw DatasetError(where + ": duplicate id '" + q.id + "'");
    }
    if (q.source.empty()) q.source = std::string(source);
    out.push_back(std::move(q));
  }
  return out;
}

inline std::vector<BenchmarkQuestion> load_dataset(const DatasetDescriptor& d) {
  return load_questions(d.eval_path, to_string(d.id));
}

struct SampledSubset {
  std::vector<BenchmarkQuestion> questions;
  bool short_input = false;  // fewer questions available than requested
};

// Q_S: seeded shuffle of the whole pool, then the first min(count, n).
// Different counts under the same seed agree on their common prefix.
inline SampledSubset sample_subset(std::span<const BenchmarkQuestion> questions,
                                   std::size_t count, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("sample_subset: count must be >= 1");
  std::vector<std::size_t> order(questions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  seeded_shuffle(std::span(order), seed);

  SampledSubset out;
  out.short_input = questions.size() < count;
  const std::size_t take = std::min(count, questions.size());
  out.questions.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.questions.push_back(questions[order[i]]);
  return out;
}

// Deterministic k-item draw from the exemplar split. The split must not
// share ids with the evaluation split.
inline std::vector<BenchmarkQuestion> draw_exemplars(const DatasetDescriptor& d, std::size_t k,
                                                     std::uint64_t seed) {
  if (k == 0) return {};
  if (d.exemplar_path.empty()) {
    throw DatasetError("dataset '" + std::string(to_string(d.id)) + "' has no exemplar split");
  }
  auto pool = load_questions(d.exemplar_path, to_string(d.id));
  if (pool.size() < k) {
    throw DatasetError("exemplar split has " + std::to_string(pool.size()) +
                       " questions, fewer than k = " + std::to_string(k));
  }
  if (!d.eval_path.empty() && std::filesystem::exists(d.eval_path)) {
    std::unordered_set<std::string> eval_ids;
    for (const auto& q : load_dataset(d)) eval_ids.insert(q.id);
    for (const auto& q : pool) {
      if (eval_ids.contains(q.id)) {
        throw DatasetError("exemplar '" + q.id + "' also appears in the evaluation split");
      }
    }
  }
  return sample_subset(pool, k, seed).questions;
}

}  // namespace kieval

#endif  // KIEVAL_DATASET_HPP_
