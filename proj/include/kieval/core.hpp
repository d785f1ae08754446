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

// Shared domain types for the interactive evaluation protocol and their JSON
// encodings. Everything here is a plain value; nothing performs I/O.

#ifndef KIEVAL_CORE_HPP_
#define KIEVAL_CORE_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kieval/error.hpp"

namespace kieval {

using json = nlohmann::json;

enum class Role { kInteractor, kCandidate, kEvaluator };
inline constexpr std::array<Role, 3> kRoles{Role::kInteractor, Role::kCandidate,
                                            Role::kEvaluator};

enum class Aspect {
  kAccuracy,
  kLogic,
  kRelevance,
  kCoherence,
  kConciseness,
  kOverall,
};
inline constexpr std::size_t kAspectCount = 6;
inline constexpr std::array<Aspect, kAspectCount> kAspects{
    Aspect::kAccuracy,  Aspect::kLogic,       Aspect::kRelevance,
    Aspect::kCoherence, Aspect::kConciseness, Aspect::kOverall};

enum class StopReason {
  kOffTopic,
  kEmptyResponse,
  kRoleShift,
  kHallucination,
  kOther,
};
inline constexpr std::array<StopReason, 5> kStopReasons{
    StopReason::kOffTopic, StopReason::kEmptyResponse, StopReason::kRoleShift,
    StopReason::kHallucination, StopReason::kOther};

enum class ConversationStatus { kActive, kCompleted, kStoppedEarly, kFailed };

enum class Weighting { kDecaying, kUniform };

namespace detail {

template <typename E, std::size_t N>
struct EnumNames {
  std::string_view type_name;
  std::array<std::pair<E, std::string_view>, N> entries;

  constexpr std::string_view name(E value) const {
    for (const auto& [e, s] : entries) {
      if (e == value) return s;
    }
    return "?";
  }

  E parse(std::string_view text) const {
    for (const auto& [e, s] : entries) {
      if (s == text) return e;
    }
    std::string allowed;
    for (const auto& [e, s] : entries) {
      if (!allowed.empty()) allowed += ", ";
      allowed += s;
    }
    throw ParseError("unknown " + std::string(type_name) + " '" +
                     std::string(text) + "' (expected one of: " + allowed +
                     ")");
  }
};

inline constexpr EnumNames<Role, 3> kRoleNames{
    "role",
    {{{Role::kInteractor, "interactor"},
      {Role::kCandidate, "candidate"},
      {Role::kEvaluator, "evaluator"}}}};

inline constexpr EnumNames<Aspect, kAspectCount> kAspectNames{
    "aspect",
    {{{Aspect::kAccuracy, "accuracy"},
      {Aspect::kLogic, "logic"},
      {Aspect::kRelevance, "relevance"},
      {Aspect::kCoherence, "coherence"},
      {Aspect::kConciseness, "conciseness"},
      {Aspect::kOverall, "overall"}}}};

inline constexpr EnumNames<StopReason, 5> kStopReasonNames{
    "stop reason",
    {{{StopReason::kOffTopic, "off_topic"},
      {StopReason::kEmptyResponse, "empty_response"},
      {StopReason::kRoleShift, "role_shift"},
      {StopReason::kHallucination, "hallucination"},
      {StopReason::kOther, "other"}}}};

inline constexpr EnumNames<ConversationStatus, 4> kStatusNames{
    "conversation status",
    {{{ConversationStatus::kActive, "active"},
      {ConversationStatus::kCompleted, "completed"},
      {ConversationStatus::kStoppedEarly, "stopped_early"},
      {ConversationStatus::kFailed, "failed"}}}};

inline constexpr EnumNames<Weighting, 2> kWeightingNames{
    "weighting",
    {{{Weighting::kDecaying, "decaying"}, {Weighting::kUniform, "uniform"}}}};

}  // namespace detail

constexpr std::string_view to_string(Role r) { return detail::kRoleNames.name(r); }
constexpr std::string_view to_string(Aspect a) { return detail::kAspectNames.name(a); }
constexpr std::string_view to_string(StopReason s) {
  return detail::kStopReasonNames.name(s);
}
constexpr std::string_view to_string(ConversationStatus s) {
  return detail::kStatusNames.name(s);
}
constexpr std::string_view to_string(Weighting w) {
  return detail::kWeightingNames.name(w);
}

inline Role parse_role(std::string_view s) { return detail::kRoleNames.parse(s); }
inline Aspect parse_aspect(std::string_view s) { return detail::kAspectNames.parse(s); }
inline StopReason parse_stop_reason(std::string_view s) {
  return detail::kStopReasonNames.parse(s);
}
inline ConversationStatus parse_status(std::string_view s) {
  return detail::kStatusNames.parse(s);
}
inline Weighting parse_weighting(std::string_view s) {
  return detail::kWeightingNames.parse(s);
}

// Lenient mapping used for evaluator verdicts: unknown codes become kOther.
inline StopReason stop_reason_from_code(std::string_view code) {
  for (const auto& [e, s] : detail::kStopReasonNames.entries) {
    if (s == code) return e;
  }
  return StopReason::kOther;
}

// Human-readable column header ("Accuracy", "Logic", ...).
constexpr std::string_view display_name(Aspect a) {
  switch (a) {
    case Aspect::kAccuracy: return "Accuracy";
    case Aspect::kLogic: return "Logic";
    case Aspect::kRelevance: return "Relevance";
    case Aspect::kCoherence: return "Coherence";
    case Aspect::kConciseness: return "Conciseness";
    case Aspect::kOverall: return "Overall";
  }
  return "?";
}

constexpr std::size_t index_of(Role r) { return static_cast<std::size_t>(r); }
constexpr std::size_t index_of(Aspect a) { return static_cast<std::size_t>(a); }
constexpr std::size_t index_of(StopReason s) { return static_cast<std::size_t>(s); }

// One token of a completion with its natural-log probability.
struct TokenLogprob {
  std::string token;
  double logprob = 0.0;

  bool operator==(const TokenLogprob&) const = default;
};

// One multiple-choice item from a source dataset.
struct BenchmarkQuestion {
  std::string id;
  std::string text;
  std::vector<std::string> options;
  std::size_t gold_index = 0;
  std::optional<std::string> subject;
  std::string language = "en";
  std::string source;

  bool operator==(const BenchmarkQuestion&) const = default;
};

// Throws DatasetError naming the record when an invariant is broken.
inline void validate(const BenchmarkQuestion& q) {
  if (q.id.empty()) throw DatasetError("question with empty id");
  if (q.options.size() < 2) {
    throw DatasetError("question '" + q.id + "' has fewer than 2 options");
  }
  if (q.gold_index >= q.options.size()) {
    throw DatasetError("question '" + q.id + "' has answer index " +
                       std::to_string(q.gold_index) + " but only " +
                       std::to_string(q.options.size()) + " options");
  }
  for (const auto& o : q.options) {
    if (o.empty()) throw DatasetError("question '" + q.id + "' has an empty option");
  }
}

struct Message {
  Role role = Role::kInteractor;
  int round = 0;  // 0 is the static QA exchange; dialogue rounds start at 1
  std::string content;

  bool operator==(const Message&) const = default;
};

struct ConversationState {
  BenchmarkQuestion question;
  std::string initial_prediction;
  std::vector<Message> messages;
  ConversationStatus status = ConversationStatus::kActive;
  int rounds_completed = 0;
  std::optional<std::string> error;  // set when status is kFailed

  bool operator==(const ConversationState&) const = default;
};

struct AspectScore {
  Aspect aspect = Aspect::kAccuracy;
  int raw = 1;  // always in 1..4
  std::string comment;

  bool operator==(const AspectScore&) const = default;
};

struct TurnEvaluation {
  int round = 1;
  std::array<AspectScore, kAspectCount> scores{};  // indexed by Aspect
  bool stop = false;
  std::optional<StopReason> stop_reason;
  std::string evaluator_raw;

  const AspectScore& score(Aspect a) const { return scores[index_of(a)]; }
  bool operator==(const TurnEvaluation&) const = default;
};

using EvaluationHistory = std::vector<TurnEvaluation>;

struct RoleUsage {
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;

  RoleUsage& operator+=(const RoleUsage& o) {
    prompt_tokens += o.prompt_tokens;
    completion_tokens += o.completion_tokens;
    return *this;
  }
  bool operator==(const RoleUsage&) const = default;
};

struct TokenUsage {
  std::array<RoleUsage, 3> by_role{};

  RoleUsage& operator[](Role r) { return by_role[index_of(r)]; }
  const RoleUsage& operator[](Role r) const { return by_role[index_of(r)]; }

  void add(Role r, std::uint64_t prompt, std::uint64_t completion) {
    (*this)[r] += RoleUsage{prompt, completion};
  }
  TokenUsage& operator+=(const TokenUsage& o) {
    for (Role r : kRoles) (*this)[r] += o[r];
    return *this;
  }
  friend TokenUsage operator+(TokenUsage a, const TokenUsage& b) { return a += b; }
  bool operator==(const TokenUsage&) const = default;
};

struct SampleResult {
  std::string question_id;
  ConversationState conversation;
  EvaluationHistory evaluations;
  std::array<double, kAspectCount> per_aspect_score{};  // each in [0,1]
  int rounds = 0;
  TokenUsage token_usage;

  bool failed() const { return conversation.status == ConversationStatus::kFailed; }
  // Reason recorded by the verdict that ended the dialogue, if it ended early.
  std::optional<StopReason> stop_reason() const {
    if (conversation.status != ConversationStatus::kStoppedEarly || evaluations.empty()) {
      return std::nullopt;
    }
    return evaluations.back().stop_reason;
  }
  bool operator==(const SampleResult&) const = default;
};

using StopHistogram = std::array<std::size_t, 5>;  // indexed by StopReason

// Aggregated outcome of one evaluation run (the K of the procedure).
struct RunReport {
  std::string candidate_model;
  std::string dataset;
  std::array<double, kAspectCount> aspect_scores{};  // x100, Overall included
  double average_rounds = 0.0;
  StopHistogram stop_histogram{};
  std::size_t sample_count = 0;  // persisted samples, failed included
  std::size_t failed_count = 0;
  std::size_t stopped_early_count = 0;
  TokenUsage token_usage;
  std::optional<double> cost_usd;
  std::optional<double> static_accuracy;  // fraction in [0,1]
  std::string config_hash;
  json config;

  double overall() const { return aspect_scores[index_of(Aspect::kOverall)]; }
  bool operator==(const RunReport&) const = default;
};

// ---------------------------------------------------------------------------
// JSON encoding. Field names are part of the on-disk contract.

inline void to_json(json& j, const BenchmarkQuestion& q) {
  j = json{{"id", q.id},           {"question", q.text},
           {"options", q.options}, {"answer", q.gold_index},
           {"language", q.language}};
  j["subject"] = q.subject ? json(*q.subject) : json(nullptr);
  if (!q.source.empty()) j["source"] = q.source;
}

inline void from_json(const json& j, BenchmarkQuestion& q) {
  q.id = j.at("id").get<std::string>();
  q.text = j.at("question").get<std::string>();
  q.options = j.at("options").get<std::vector<std::string>>();
  const auto& answer = j.at("answer");
  if (!answer.is_number_integer() || answer.get<long long>() < 0) {
    throw ParseError("record '" + q.id + "': answer must be a non-negative integer");
  }
  q.gold_index = answer.get<std::size_t>();
  q.subject.reset();
  if (auto it = j.find("subject"); it != j.end() && !it->is_null()) {
    q.subject = it->get<std::string>();
  }
  q.language = j.value("language", std::string("en"));
  q.source = j.value("source", std::string());
}

inline void to_json(json& j, const Message& m) {
  j = json{{"role", to_string(m.role)}, {"round", m.round}, {"content", m.content}};
}
inline void from_json(const json& j, Message& m) {
  m.role = parse_role(j.at("role").get<std::string>());
  m.round = j.at("round").get<int>();
  m.content = j.at("content").get<std::string>();
}

inline void to_json(json& j, const ConversationState& c) {
  j = json{{"question", c.question},
           {"initial_prediction", c.initial_prediction},
           {"messages", c.messages},
           {"status", to_string(c.status)},
           {"rounds_completed", c.rounds_completed}};
  j["error"] = c.error ? json(*c.error) : json(nullptr);
}
inline void from_json(const json& j, ConversationState& c) {
  c.question = j.at("question").get<BenchmarkQuestion>();
  c.initial_prediction = j.at("initial_prediction").get<std::string>();
  c.messages = j.at("messages").get<std::vector<Message>>();
  c.status = parse_status(j.at("status").get<std::string>());
  c.rounds_completed = j.at("rounds_completed").get<int>();
  c.error.reset();
  if (auto it = j.find("error"); it != j.end() && !it->is_null()) {
    c.error = it->get<std::string>();
  }
}

inline void to_json(json& j, const TurnEvaluation& e) {
  json scores = json::object();
  for (const auto& s : e.scores) {
    scores[std::string(to_string(s.aspect))] = {{"score", s.raw}, {"comment", s.comment}};
  }
  j = json{{"round", e.round},
           {"scores", std::move(scores)},
           {"stop", e.stop},
           {"evaluator_raw", e.evaluator_raw}};
  j["stop_reason"] = e.stop_reason ? json(to_string(*e.stop_reason)) : json(nullptr);
}
inline void from_json(const json& j, TurnEvaluation& e) {
  e.round = j.at("round").get<int>();
  const auto& scores = j.at("scores");
  for (Aspect a : kAspects) {
    const auto& s = scores.at(std::string(to_string(a)));
    e.scores[index_of(a)] =
        AspectScore{a, s.at("score").get<int>(), s.at("comment").get<std::string>()};
  }
  e.stop = j.at("stop").get<bool>();
  e.stop_reason.reset();
  if (auto it = j.find("stop_reason"); it != j.end() && !it->is_null()) {
    e.stop_reason = parse_stop_reason(it->get<std::string>());
  }
  e.evaluator_raw = j.at("evaluator_raw").get<std::string>();
}

inline void to_json(json& j, const TokenUsage& u) {
  j = json::object();
  for (Role r : kRoles) {
    j[std::string(to_string(r))] = {{"prompt_tokens", u[r].prompt_tokens},
                                    {"completion_tokens", u[r].completion_tokens}};
  }
}
inline void from_json(const json& j, TokenUsage& u) {
  for (Role r : kRoles) {
    const auto& x = j.at(std::string(to_string(r)));
    u[r] = RoleUsage{x.at("prompt_tokens").get<std::uint64_t>(),
                     x.at("completion_tokens").get<std::uint64_t>()};
  }
}

namespace detail {
inline json aspect_map(const std::array<double, kAspectCount>& values) {
  json j = json::object();
  for (Aspect a : kAspects) j[std::string(to_string(a))] = values[index_of(a)];
  return j;
}
inline std::array<double, kAspectCount> aspect_array(const json& j) {
  std::array<double, kAspectCount> out{};
  for (Aspect a : kAspects) out[index_of(a)] = j.at(std::string(to_string(a))).get<double>();
  return out;
}
}  // namespace detail

inline void to_json(json& j, const SampleResult& s) {
  j = json{{"question_id", s.question_id},
           {"conversation", s.conversation},
           {"evaluations", s.evaluations},
           {"per_aspect_score", detail::aspect_map(s.per_aspect_score)},
           {"rounds", s.rounds},
           {"token_usage", s.token_usage}};
}
inline void from_json(const json& j, SampleResult& s) {
  s.question_id = j.at("question_id").get<std::string>();
  s.conversation = j.at("conversation").get<ConversationState>();
  s.evaluations = j.at("evaluations").get<EvaluationHistory>();
  s.per_aspect_score = detail::aspect_array(j.at("per_aspect_score"));
  s.rounds = j.at("rounds").get<int>();
  s.token_usage = j.at("token_usage").get<TokenUsage>();
}

inline void to_json(json& j, const RunReport& r) {
  json hist = json::object();
  for (StopReason s : kStopReasons) hist[std::string(to_string(s))] = r.stop_histogram[index_of(s)];
  j = json{{"candidate_model", r.candidate_model},
           {"dataset", r.dataset},
           {"aspect_scores", detail::aspect_map(r.aspect_scores)},
           {"average_rounds", r.average_rounds},
           {"stop_histogram", std::move(hist)},
           {"sample_count", r.sample_count},
           {"failed_count", r.failed_count},
           {"stopped_early_count", r.stopped_early_count},
           {"token_usage", r.token_usage},
           {"config_hash", r.config_hash},
           {"config", r.config}};
  j["cost_usd"] = r.cost_usd ? json(*r.cost_usd) : json(nullptr);
  j["static_accuracy"] = r.static_accuracy ? json(*r.static_accuracy) : json(nullptr);
}
inline void from_json(const json& j, RunReport& r) {
  r.candidate_model = j.at("candidate_model").get<std::string>();
  r.dataset = j.at("dataset").get<std::string>();
  r.aspect_scores = detail::aspect_array(j.at("aspect_scores"));
  r.average_rounds = j.at("average_rounds").get<double>();
  const auto& hist = j.at("stop_histogram");
  for (StopReason s : kStopReasons) {
    r.stop_histogram[index_of(s)] = hist.at(std::string(to_string(s))).get<std::size_t>();
  }
  r.sample_count = j.at("sample_count").get<std::size_t>();
  r.failed_count = j.at("failed_count").get<std::size_t>();
  r.stopped_early_count = j.at("stopped_early_count").get<std::size_t>();
  r.token_usage = j.at("token_usage").get<TokenUsage>();
  r.config_hash = j.at("config_hash").get<std::string>();
  r.config = j.at("config");
  r.cost_usd.reset();
  r.static_accuracy.reset();
  if (const auto& c = j.at("cost_usd"); !c.is_null()) r.cost_usd = c.get<double>();
  if (const auto& a = j.at("static_accuracy"); !a.is_null()) r.static_accuracy = a.get<double>();
}

// Parses one JSON document into T, converting every decoding failure
// (syntax, missing key, wrong type, unknown enum) into ParseError.
template <typename T>
T decode(std::string_view text, std::string_view what = "record") {
  try {
    return json::parse(text).get<T>();
  } catch (const ParseError& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

template <typename T>
std::string encode(const T& value) {
  return json(value).dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace kieval

#endif  // KIEVAL_CORE_HPP_
