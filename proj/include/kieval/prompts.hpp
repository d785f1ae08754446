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

// Role prompt templates, their rendering, and parsing of the evaluator's
// structured verdicts. Everything here is pure.

#ifndef KIEVAL_PROMPTS_HPP_
#define KIEVAL_PROMPTS_HPP_

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>

#include "kieval/choice_prompt.hpp"
#include "kieval/core.hpp"

namespace kieval {

using Bindings = std::map<std::string, std::string, std::less<>>;

namespace detail {

inline bool is_placeholder_char(char c) {
  return (c >= 'a' && c <= 'z') || c == '_';
}

// Calls fn(name, begin, end) for every "{name}" with name in [a-z_]+.
template <typename Fn>
void for_each_placeholder(std::string_view text, Fn&& fn) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '{') continue;
    std::size_t j = i + 1;
    while (j < text.size() && is_placeholder_char(text[j])) ++j;
    if (j > i + 1 && j < text.size() && text[j] == '}') {
      fn(text.substr(i + 1, j - i - 1), i, j + 1);
      i = j;
    }
  }
}

}  // namespace detail

// Substitutes every {placeholder}; an unbound one is a ConfigError.
// Substituted values are not rescanned.
inline std::string render_template(std::string_view tmpl, const Bindings& bindings) {
  std::string out;
  std::size_t cursor = 0;
  detail::for_each_placeholder(tmpl, [&](std::string_view name, std::size_t b, std::size_t e) {
    auto it = bindings.find(name);
    if (it == bindings.end()) {
      throw ConfigError("unbound placeholder {" + std::string(name) + "}");
    }
    out.append(tmpl.substr(cursor, b - cursor));
    out += it->second;
    cursor = e;
  });
  out.append(tmpl.substr(cursor));
  return out;
}

inline std::set<std::string, std::less<>> placeholders(std::string_view tmpl) {
  std::set<std::string, std::less<>> names;
  detail::for_each_placeholder(
      tmpl, [&](std::string_view name, std::size_t, std::size_t) { names.emplace(name); });
  return names;
}

// Default template set; identical to prompts/default/*.txt.
namespace defaults {
inline constexpr std::string_view kInteractorInitial = R"(You are the interactor in a knowledge-focused conversation with an AI assistant, called the candidate. Your goal is to find out whether the candidate really understands the knowledge behind a benchmark question, rather than having memorized its answer.

Benchmark question:
{question}

Options:
{options}

Correct answer: {gold_answer}

The candidate's answer to the benchmark question:
{candidate_prediction}

Ask the candidate one clear question that needs a deeper grasp of the underlying knowledge, such as explaining why the answer holds, applying it to a new case, or connecting it to a related concept. Do not reveal the correct answer. Reply with the question only.
)";

inline constexpr std::string_view kInteractorFollowup = R"(You are the interactor in a knowledge-focused conversation with an AI assistant, called the candidate. Your goal is to find out whether the candidate really understands the knowledge behind a benchmark question, rather than having memorized its answer.

Benchmark question:
{question}

Options:
{options}

Correct answer: {gold_answer}

Conversation so far:
{history}

Ask the next question. Build on the candidate's latest reply and go further into the same topic: probe a gap, ask for justification, or extend to a related case. Do not reveal the correct answer. Reply with the question only.
)";

inline constexpr std::string_view kEvaluator = R"(You are the evaluator of a knowledge-focused conversation between an interactor and an AI assistant, called the candidate. Judge only the candidate's latest reply, in the context of the whole conversation.

Benchmark question:
{question}

Options:
{options}

Correct answer: {gold_answer}

Conversation so far:
{history}

Your evaluations of earlier rounds:
{prior_evaluations}

{scoring_guide}

{stop_instruction}

{output_schema}
)";

inline constexpr std::string_view kCandidateSystem = R"(You are a helpful assistant. Answer the user's questions accurately and concisely.
)";

}  // namespace defaults

struct PromptTemplates {
  std::string interactor_initial{defaults::kInteractorInitial};
  std::string interactor_followup{defaults::kInteractorFollowup};
  std::string evaluator{defaults::kEvaluator};
  std::string candidate_system{defaults::kCandidateSystem};
};

namespace detail {

inline std::string read_template(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read prompt template " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void check_placeholders(std::string_view file, std::string_view tmpl,
                               std::initializer_list<std::string_view> allowed) {
  for (const auto& name : placeholders(tmpl)) {
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
      throw ConfigError("template " + std::string(file) + " uses unknown placeholder {" + name +
                        "}");
    }
  }
}

}  // namespace detail

// Loads a template set directory holding interactor_initial.txt,
// interactor_followup.txt, evaluator.txt and candidate_system.txt.
inline PromptTemplates load_templates(const std::filesystem::path& dir) {
  PromptTemplates t;
  t.interactor_initial = detail::read_template(dir / "interactor_initial.txt");
  t.interactor_followup = detail::read_template(dir / "interactor_followup.txt");
  t.evaluator = detail::read_template(dir / "evaluator.txt");
  t.candidate_system = detail::read_template(dir / "candidate_system.txt");
  detail::check_placeholders("interactor_initial.txt", t.interactor_initial,
                             {"question", "options", "gold_answer", "candidate_prediction"});
  detail::check_placeholders("interactor_followup.txt", t.interactor_followup,
                             {"question", "options", "gold_answer", "history"});
  detail::check_placeholders("evaluator.txt", t.evaluator,
                             {"question", "options", "gold_answer", "history",
                              "prior_evaluations", "scoring_guide", "stop_instruction",
                              "output_schema"});
  detail::check_placeholders("candidate_system.txt", t.candidate_system, {});
  return t;
}

// ---------------------------------------------------------------------------
// Fragments shared by the renderers.

inline std::string format_options(const BenchmarkQuestion& q) {
  std::string out;
  for (std::size_t i = 0; i < q.options.size(); ++i) {
    if (i) out += '\n';
    out += option_letter(i);
    out += ". ";
    out += q.options[i];
  }
  return out;
}

inline std::string format_gold(const BenchmarkQuestion& q) {
  return std::string(1, option_letter(q.gold_index)) + ". " + q.options.at(q.gold_index);
}

// Dialogue transcript, one tagged block per turn in order. Empty turns stay
// visible as empty blocks.
inline std::string format_history(std::span<const Message> messages) {
  std::string out;
  for (const auto& m : messages) {
    if (!out.empty()) out += '\n';
    out += "<turn role=\"";
    out += to_string(m.role);
    out += "\" round=\"" + std::to_string(m.round) + "\">\n";
    out += m.content;
    out += "\n</turn>";
  }
  return out;
}

inline std::string format_prior_evaluations(const EvaluationHistory& history) {
  if (history.empty()) return "(none yet)";
  std::string out;
  for (const auto& e : history) {
    if (!out.empty()) out += '\n';
    out += "Round " + std::to_string(e.round) + ":";
    for (const auto& s : e.scores) {
      out += ' ';
      out += to_string(s.aspect);
      out += '=' + std::to_string(s.raw);
    }
    const auto& overall = e.score(Aspect::kOverall).comment;
    if (!overall.empty()) out += " (" + overall + ")";
  }
  return out;
}

inline constexpr std::string_view kScoringGuide =
    R"(Score the latest reply on each aspect below with an integer from 1 to 4. Scores must be whole numbers; do not hedge between grades.

Aspects:
- accuracy: is what the candidate states true and factually correct?
- logic: is the reasoning well structured and sound, with conclusions that follow from their support?
- relevance: does the reply stay on the topic and inside the role of an assistant?
- coherence: does the reply fit the conversation, stay consistent with what was said before, and keep the dialogue flowing?
- conciseness: is the reply brief and clear, without needless elaboration or repetition?
- overall: your own holistic grade of the reply; judge it directly rather than averaging the other five.

Scale:
1 = Poor: serious deficiencies or errors.
2 = Below average: clear weaknesses in several respects.
3 = Above average: largely on target with a few minor shortcomings.
4 = Strong: excellent, often beyond expectations.)";

inline constexpr std::string_view kStopInstruction =
    R"(You may end the conversation early when the latest reply is badly inadequate. In that case set "stop" to true and set "stop_reason" to exactly one of these codes:
- off_topic: the reply moves far away from the topic of the conversation.
- empty_response: the reply is empty or has no content.
- role_shift: the candidate leaves its assistant role, for example by asking the questions itself or speaking as the interactor.
- hallucination: the reply contains fabricated or made-up content.
Otherwise set "stop" to false and "stop_reason" to null.)";

inline std::string output_schema(bool early_stopping) {
  std::string scores;
  for (Aspect a : kAspects) {
    if (!scores.empty()) scores += ", ";
    scores += "\"" + std::string(to_string(a)) + "\": {\"score\": <1-4>, \"comment\": \"<one sentence>\"}";
  }
  std::string out =
      "Reply with a single JSON object and nothing else, in exactly this form:\n{\"scores\": {" +
      scores + "}, ";
  out += early_stopping ? "\"stop\": <true or false>, \"stop_reason\": <null or a code>}"
                        : "\"stop\": false, \"stop_reason\": null}";
  return out;
}

// ---------------------------------------------------------------------------
// Renderers.

inline void require_non_empty(std::string_view value, std::string_view what) {
  if (value.empty()) throw std::invalid_argument(std::string(what) + " must not be empty");
}

inline std::string render_initial_question(const PromptTemplates& t, const BenchmarkQuestion& q,
                                           std::string_view prediction) {
  require_non_empty(q.text, "question text");
  require_non_empty(prediction, "candidate prediction");
  return render_template(t.interactor_initial, {{"question", q.text},
                                                {"options", format_options(q)},
                                                {"gold_answer", format_gold(q)},
                                                {"candidate_prediction", std::string(prediction)}});
}

inline std::string render_followup(const PromptTemplates& t, const ConversationState& c) {
  if (c.rounds_completed < 1) {
    throw std::invalid_argument("render_followup: conversation has no completed round");
  }
  return render_template(t.interactor_followup, {{"question", c.question.text},
                                                 {"options", format_options(c.question)},
                                                 {"gold_answer", format_gold(c.question)},
                                                 {"history", format_history(c.messages)}});
}

inline std::string render_evaluator(const PromptTemplates& t, const ConversationState& c,
                                    const EvaluationHistory& history, bool early_stopping) {
  if (c.messages.empty() || c.messages.back().role != Role::kCandidate) {
    throw std::invalid_argument("render_evaluator: no candidate reply awaiting evaluation");
  }
  return render_template(
      t.evaluator, {{"question", c.question.text},
                    {"options", format_options(c.question)},
                    {"gold_answer", format_gold(c.question)},
                    {"history", format_history(c.messages)},
                    {"prior_evaluations", format_prior_evaluations(history)},
                    {"scoring_guide", std::string(kScoringGuide)},
                    {"stop_instruction", early_stopping ? std::string(kStopInstruction) : ""},
                    {"output_schema", output_schema(early_stopping)}});
}

inline std::string render_repair(std::string_view error) {
  return "Your previous reply could not be used: " + std::string(error) +
         "\nReply again with only the corrected JSON object in the required form.";
}

// ---------------------------------------------------------------------------
// Verdict parsing.

// First balanced {...} span in `text` that parses as a JSON object.
inline std::optional<json> first_json_object(std::string_view text) {
  for (std::size_t start = text.find('{'); start != std::string_view::npos;
       start = text.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        json parsed = json::parse(text.substr(start, i - start + 1), nullptr, false);
        if (!parsed.is_discarded() && parsed.is_object()) return parsed;
        break;
      }
    }
  }
  return std::nullopt;
}

inline TurnEvaluation parse_evaluator_output(std::string_view text, int round = 1) {
  using K = VerdictError::Kind;
  const auto object = first_json_object(text);
  if (!object) throw VerdictError(K::kNoJsonObject, "no JSON object found in evaluator output");

  const auto scores = object->find("scores");
  if (scores == object->end() || !scores->is_object()) {
    throw VerdictError(K::kMissingScore, "missing \"scores\" object");
  }
  for (const auto& [key, value] : scores->items()) {
    bool known = false;
    for (Aspect a : kAspects) known = known || key == to_string(a);
    if (!known) throw VerdictError(K::kExtraScore, "unexpected score key \"" + key + "\"");
  }

  TurnEvaluation out;
  out.round = round;
  out.evaluator_raw = std::string(text);
  for (Aspect a : kAspects) {
    const std::string key(to_string(a));
    const auto entry = scores->find(key);
    if (entry == scores->end()) {
      throw VerdictError(K::kMissingScore, "missing score for \"" + key + "\"");
    }
    const json* value = &*entry;
    std::string comment;
    if (entry->is_object()) {
      const auto s = entry->find("score");
      if (s == entry->end()) throw VerdictError(K::kMissingScore, "missing score for \"" + key + "\"");
      value = &*s;
      if (auto c = entry->find("comment"); c != entry->end() && c->is_string()) {
        comment = c->get<std::string>();
      }
    }
    if (!value->is_number()) {
      throw VerdictError(K::kScoreOutOfRange, "score for \"" + key + "\" is not a number");
    }
    const double raw = value->get<double>();
    if (raw != std::floor(raw) || raw < 1 || raw > 4) {
      throw VerdictError(K::kScoreOutOfRange,
                         "score for \"" + key + "\" must be an integer from 1 to 4, got " +
                             value->dump());
    }
    out.scores[index_of(a)] = AspectScore{a, static_cast<int>(raw), std::move(comment)};
  }

  const auto stop = object->find("stop");
  if (stop == object->end() || !stop->is_boolean()) {
    throw VerdictError(K::kMissingStop, "missing boolean \"stop\"");
  }
  out.stop = stop->get<bool>();
  if (out.stop) {
    const auto reason = object->find("stop_reason");
    if (reason == object->end() || !reason->is_string() || reason->get<std::string>().empty()) {
      throw VerdictError(K::kStopWithoutReason, "\"stop\" is true but no \"stop_reason\" given");
    }
    std::string code = reason->get<std::string>();
    for (auto& ch : code) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    out.stop_reason = stop_reason_from_code(code);
  }
  return out;
}

}  // namespace kieval

#endif  // KIEVAL_PROMPTS_HPP_
