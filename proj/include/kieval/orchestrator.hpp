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

#ifndef KIEVAL_ORCHESTRATOR_HPP_
#define KIEVAL_ORCHESTRATOR_HPP_

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kieval/choice_prompt.hpp"
#include "kieval/config.hpp"
#include "kieval/dataset.hpp"
#include "kieval/gateway.hpp"
#include "kieval/http_backend.hpp"
#include "kieval/parallel.hpp"
#include "kieval/prompts.hpp"
#include "kieval/report.hpp"
#include "kieval/scoring.hpp"
#include "kieval/verification.hpp"

namespace kieval {

namespace fs = std::filesystem;

struct Participants {
  Gateway& interactor;
  Gateway& candidate;
  Gateway& evaluator;
};

struct DialogueOptions {
  int max_rounds = 5;
  bool early_stopping = true;
  Weighting weighting = Weighting::kDecaying;

  WeightScheme scheme() const {
    return WeightScheme{weighting, static_cast<std::size_t>(max_rounds)};
  }
};

inline DialogueOptions dialogue_options(const RunConfig& c) {
  return DialogueOptions{c.max_rounds, c.early_stopping, c.weighting};
}

inline constexpr std::string_view kEmptyPrediction = "(empty response)";

namespace detail {

// Per-sample call wrapper: accumulates the sample's own token usage.
class SampleCalls {
 public:
  explicit SampleCalls(TokenUsage& usage) : usage_(usage) {}

  std::string call(Gateway& g, std::vector<ChatTurn> messages) {
    auto r = g.complete(std::move(messages));
    usage_.add(g.role(), r.prompt_tokens, r.completion_tokens);
    return std::move(r.content);
  }

 private:
  TokenUsage& usage_;
};

inline std::vector<ChatTurn> candidate_turns(const PromptTemplates& t, const ConversationState& c) {
  std::vector<ChatTurn> turns;
  turns.reserve(c.messages.size() + 3);
  turns.push_back({"system", t.candidate_system});
  turns.push_back({"user", build_choice_prompt(c.question, {})});
  turns.push_back({"assistant", c.initial_prediction});
  for (const auto& m : c.messages) {
    turns.push_back({m.role == Role::kCandidate ? "assistant" : "user", m.content});
  }
  return turns;
}

// One verdict for the conversation's latest candidate reply, with a single
// repair attempt on an unusable answer.
inline TurnEvaluation judge(SampleCalls& calls, Gateway& evaluator, const PromptTemplates& t,
                            const ConversationState& c, const EvaluationHistory& history,
                            bool early_stopping) {
  const int round = c.rounds_completed;
  const auto prompt = render_evaluator(t, c, history, early_stopping);
  const auto first = calls.call(evaluator, {{"user", prompt}});
  try {
    return parse_evaluator_output(first, round);
  } catch (const VerdictError& e) {
    const auto second = calls.call(
        evaluator, {{"user", prompt}, {"assistant", first}, {"user", render_repair(e.what())}});
    return parse_evaluator_output(second, round);
  }
}

inline void finish(SampleResult& s, const WeightScheme& scheme) {
  s.rounds = s.conversation.rounds_completed;
  if (s.failed()) {
    s.per_aspect_score = {};
  } else {
    s.per_aspect_score = sample_scores(s.evaluations, scheme);
  }
}

}  // namespace detail

// One question through the full dialogue. Transport and protocol failures
// and a verdict that stays unusable after one repair end the sample as
// kFailed with the error recorded; fixture misses propagate.
inline SampleResult run_sample(const BenchmarkQuestion& question, Participants p,
                               const PromptTemplates& t, const DialogueOptions& o) {
  SampleResult s;
  s.question_id = question.id;
  auto& c = s.conversation;
  c.question = question;
  detail::SampleCalls calls(s.token_usage);

  auto fail = [&](const std::string& what) {
    c.status = ConversationStatus::kFailed;
    c.error = what;
  };

  try {
    c.initial_prediction = calls.call(p.candidate, {{"user", build_choice_prompt(question, {})}});
    if (c.initial_prediction.empty()) c.initial_prediction = kEmptyPrediction;

    auto next_question =
        calls.call(p.interactor, {{"user", render_initial_question(t, question,
                                                                   c.initial_prediction)}});
    if (next_question.empty()) {
      fail("interactor returned an empty initial question");
    }
    for (int round = 1; !c.error && round <= o.max_rounds; ++round) {
      c.messages.push_back({Role::kInteractor, round, std::move(next_question)});
      c.messages.push_back(
          {Role::kCandidate, round, calls.call(p.candidate, detail::candidate_turns(t, c))});
      c.rounds_completed = round;

      s.evaluations.push_back(
          detail::judge(calls, p.evaluator, t, c, s.evaluations, o.early_stopping));
      if (o.early_stopping && s.evaluations.back().stop && round < o.max_rounds) {
        c.status = ConversationStatus::kStoppedEarly;
        break;
      }
      if (round < o.max_rounds) {
        next_question = calls.call(p.interactor, {{"user", render_followup(t, c)}});
      }
    }
    if (c.status == ConversationStatus::kActive) c.status = ConversationStatus::kCompleted;
  } catch (const TransportError& e) {
    fail(e.what());
  } catch (const ProtocolError& e) {
    fail(e.what());
  } catch (const VerdictError& e) {
    fail(std::string("unusable evaluator verdict after repair: ") + e.what());
  }
  if (c.status == ConversationStatus::kFailed) {
    // Keep only evaluations for rounds whose candidate reply exists.
    s.evaluations.resize(std::min<std::size_t>(s.evaluations.size(), c.rounds_completed));
  }
  detail::finish(s, o.scheme());
  return s;
}

// ---------------------------------------------------------------------------
// Run directory.

using BackendFactory = std::function<std::unique_ptr<ChatBackend>(Role, const BackendSpec&)>;

inline std::unique_ptr<ChatBackend> default_backend(Role, const BackendSpec& spec) {
  return make_backend(spec);
}

struct RunOptions {
  BackendFactory factory = default_backend;
  Gateway::Sleeper sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  // Stop after committing this many new samples (the run stays resumable).
  std::optional<std::size_t> max_new_samples;
};

struct RunOutcome {
  std::optional<RunReport> report;  // set once every sample is committed
  std::size_t committed = 0;
  std::size_t resumed = 0;  // samples found already committed
  std::size_t total = 0;
};

inline Gateway::Options gateway_options(const RunConfig& c, Role r) {
  const auto& spec = c.backend(r);
  return Gateway::Options{spec.model, c.seed, spec.max_tokens, spec.retry, spec.rate};
}

struct Gateways {
  std::unique_ptr<Gateway> interactor;
  std::unique_ptr<Gateway> candidate;
  std::unique_ptr<Gateway> evaluator;

  Participants participants() { return {*interactor, *candidate, *evaluator}; }
};

inline std::unique_ptr<Gateway> make_gateway(const RunConfig& c, Role r, const RunOptions& o,
                                             std::shared_ptr<TokenLedger> ledger) {
  return std::make_unique<Gateway>(r, o.factory(r, c.backend(r)), gateway_options(c, r),
                                   std::move(ledger), o.sleeper);
}

inline Gateways make_gateways(const RunConfig& c, const RunOptions& o) {
  auto ledger = std::make_shared<TokenLedger>();
  return Gateways{make_gateway(c, Role::kInteractor, o, ledger),
                  make_gateway(c, Role::kCandidate, o, ledger),
                  make_gateway(c, Role::kEvaluator, o, ledger)};
}

inline PromptTemplates templates_for(const RunConfig& c) {
  return c.prompts.empty() ? PromptTemplates{} : load_templates(c.prompts);
}

namespace detail {

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Write-then-rename so readers never see a half-written file.
inline void write_file(const fs::path& p, std::string_view content) {
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, p);
}

inline json config_record(const RunConfig& c) {
  return json{{"hash", config_hash(c)}, {"config", canonical_config(c)}};
}

// Creates or checks config.json; a directory belonging to another config is
// refused.
inline void claim_run_dir(const fs::path& dir, const RunConfig& c) {
  fs::create_directories(dir);
  const auto path = dir / "config.json";
  const auto hash = config_hash(c);
  if (fs::exists(path)) {
    const auto existing = decode<json>(read_file(path), "config.json");
    const auto stored = existing.value("hash", std::string());
    if (stored != hash) {
      throw ConfigError("run directory " + dir.string() + " belongs to config " + stored +
                        ", not " + hash);
    }
    return;
  }
  write_file(path, config_record(c).dump(2) + "\n");
}

}  // namespace detail

// Reads samples.jsonl. A trailing line without its newline is an interrupted
// append and is cut off (the file is truncated when `repair` is set); any
// other undecodable line is an error.
inline std::vector<SampleResult> read_run_log(const fs::path& path, bool repair = false) {
  std::vector<SampleResult> out;
  if (!fs::exists(path)) return out;
  const auto text = detail::read_file(path);
  std::size_t pos = 0;
  std::size_t line_no = 0;
  std::unordered_set<std::string> seen;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      if (repair) fs::resize_file(path, pos);
      break;
    }
    ++line_no;
    const std::string_view line(text.data() + pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    auto s = decode<SampleResult>(line, path.string() + ":" + std::to_string(line_no));
    if (!seen.insert(s.question_id).second) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": duplicate sample '" +
                       s.question_id + "'");
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace detail {

// Q_V, computed once per run directory and replayed on resume.
inline VerificationResult load_or_verify(const fs::path& dir, const RunConfig& c,
                                         std::span<const BenchmarkQuestion> pool,
                                         Gateway& evaluator) {
  const auto path = dir / "verification.json";
  if (fs::exists(path)) {
    const auto j = decode<json>(read_file(path), "verification.json");
    std::unordered_map<std::string, const BenchmarkQuestion*> by_id;
    for (const auto& q : pool) by_id.emplace(q.id, &q);
    VerificationResult v;
    for (const auto& id : j.at("verified").get<std::vector<std::string>>()) {
      auto it = by_id.find(id);
      if (it == by_id.end()) throw DatasetError("verified question '" + id + "' not in dataset");
      v.questions.push_back(*it->second);
    }
    v.examined = j.at("examined").get<std::size_t>();
    v.transport_failures = j.at("transport_failures").get<std::size_t>();
    v.token_usage = j.at("token_usage").get<TokenUsage>();
    return v;
  }
  const auto candidates = sample_subset(pool, pool.size(), c.seed).questions;
  auto v = verify_samples(candidates, evaluator, c.sample_count, c.parallelism);
  json ids = json::array();
  for (const auto& q : v.questions) ids.push_back(q.id);
  write_file(path, json{{"verified", ids},
                        {"examined", v.examined},
                        {"transport_failures", v.transport_failures},
                        {"token_usage", v.token_usage}}
                       .dump(2) +
                       "\n");
  return v;
}

// Appends finished samples to the log strictly in Q_V order; indices
// [base, base + count) are expected.
class OrderedLog {
 public:
  OrderedLog(const fs::path& path, std::size_t base, std::size_t count)
      : out_(path, std::ios::binary | std::ios::app), base_(base), pending_(count) {
    if (!out_) throw Error("cannot append to " + path.string());
  }

  void commit(std::size_t index, SampleResult s) {
    std::lock_guard lock(mu_);
    pending_[index - base_] = std::move(s);
    while (next_ < pending_.size() && pending_[next_]) {
      out_ << encode(*pending_[next_]) << '\n';
      out_.flush();
      if (!out_) throw Error("run log write failed");
      pending_[next_].reset();
      ++next_;
    }
  }

 private:
  std::ofstream out_;
  std::mutex mu_;
  std::size_t base_;
  std::size_t next_ = 0;
  std::vector<std::optional<SampleResult>> pending_;
};

}  // namespace detail

// Executes (or resumes) a run in `dir`: verifies the seeded sample, runs
// every remaining dialogue with up to c.parallelism samples in flight,
// then writes the reports.
inline RunOutcome run_evaluation(const RunConfig& c, const fs::path& dir,
                                 const RunOptions& options = {}) {
  validate(c);
  detail::claim_run_dir(dir, c);
  const auto templates = templates_for(c);
  auto gateways = make_gateways(c, options);

  const auto pool = load_dataset(c.dataset);
  const auto verified = detail::load_or_verify(dir, c, pool, *gateways.evaluator);
  const auto& qv = verified.questions;

  const auto log_path = dir / "samples.jsonl";
  auto done = read_run_log(log_path, true);
  if (done.size() > qv.size()) throw Error("run log holds more samples than the run");
  for (std::size_t i = 0; i < done.size(); ++i) {
    if (done[i].question_id != qv[i].id) {
      throw Error("run log entry " + std::to_string(i + 1) + " is '" + done[i].question_id +
                  "', expected '" + qv[i].id + "'");
    }
  }

  RunOutcome outcome;
  outcome.total = qv.size();
  outcome.resumed = done.size();
  std::size_t todo = qv.size() - done.size();
  if (options.max_new_samples) todo = std::min(todo, *options.max_new_samples);

  const auto dialogue = dialogue_options(c);
  {
    detail::OrderedLog log(log_path, done.size(), todo);
    parallel_for(todo, c.parallelism, [&](std::size_t i) {
      const auto index = done.size() + i;
      log.commit(index, run_sample(qv[index], gateways.participants(), templates, dialogue));
    });
  }
  outcome.committed = done.size() + todo;
  if (outcome.committed < qv.size()) return outcome;

  const auto samples = read_run_log(log_path);
  outcome.report = build_report(c, samples, verified.token_usage, read_static_accuracy(dir));
  write_report_files(dir, *outcome.report);
  return outcome;
}

// Rebuilds the reports of a finished run directory from its run log.
inline RunReport emit_report(const fs::path& dir) {
  const auto record = decode<json>(detail::read_file(dir / "config.json"), "config.json");
  const auto config = record.at("config").get<RunConfig>();
  const auto samples = read_run_log(dir / "samples.jsonl");
  if (samples.empty()) throw Error("run log in " + dir.string() + " is empty");
  TokenUsage verification;
  if (fs::exists(dir / "verification.json")) {
    const auto v = decode<json>(detail::read_file(dir / "verification.json"), "verification.json");
    verification = v.at("token_usage").get<TokenUsage>();
    if (v.at("verified").size() != samples.size()) {
      throw Error("run in " + dir.string() + " is incomplete: " + std::to_string(samples.size()) +
                  " of " + std::to_string(v.at("verified").size()) + " samples");
    }
  }
  auto report = build_report(config, samples, verification, read_static_accuracy(dir));
  write_report_files(dir, report);
  return report;
}

// Re-scores the stored transcripts of `src` with the evaluator of `c`
// (interactor and candidate turns are reused verbatim) and writes a complete
// run directory to `dst`. With early stopping on, a stop verdict before the
// last stored round truncates the transcript there.
inline RunReport reevaluate_transcripts(const fs::path& src, const RunConfig& c,
                                        const fs::path& dst, const RunOptions& options = {}) {
  const auto log_path = src / "samples.jsonl";
  if (!fs::exists(log_path)) throw Error("no run log at " + log_path.string());
  const auto stored = read_run_log(log_path);
  if (stored.empty()) throw Error("run log " + log_path.string() + " is empty");

  validate(c);
  const auto templates = templates_for(c);
  auto evaluator = make_gateway(c, Role::kEvaluator, options, std::make_shared<TokenLedger>());
  const auto dialogue = dialogue_options(c);

  std::vector<SampleResult> out(stored.size());
  parallel_for(stored.size(), c.parallelism, [&](std::size_t i) {
    const auto& old = stored[i];
    SampleResult s;
    s.question_id = old.question_id;
    s.conversation = old.conversation;
    if (old.failed()) {
      s = old;
      out[i] = std::move(s);
      return;
    }
    if (old.conversation.rounds_completed > dialogue.max_rounds) {
      throw Error("sample '" + old.question_id + "' has more rounds than max_rounds");
    }
    s.token_usage = old.token_usage;
    s.token_usage[Role::kEvaluator] = {};
    detail::SampleCalls calls(s.token_usage);
    auto& c_new = s.conversation;
    c_new.messages.clear();
    c_new.rounds_completed = 0;
    c_new.status = ConversationStatus::kActive;
    try {
      for (int round = 1; round <= old.conversation.rounds_completed; ++round) {
        for (const auto& m : old.conversation.messages) {
          if (m.round == round) c_new.messages.push_back(m);
        }
        c_new.rounds_completed = round;
        s.evaluations.push_back(detail::judge(calls, *evaluator, templates, c_new, s.evaluations,
                                              dialogue.early_stopping));
        if (dialogue.early_stopping && s.evaluations.back().stop && round < dialogue.max_rounds) {
          c_new.status = ConversationStatus::kStoppedEarly;
          break;
        }
      }
      if (c_new.status == ConversationStatus::kActive) {
        c_new.status = ConversationStatus::kCompleted;
      }
    } catch (const TransportError& e) {
      c_new.status = ConversationStatus::kFailed;
      c_new.error = e.what();
    } catch (const ProtocolError& e) {
      c_new.status = ConversationStatus::kFailed;
      c_new.error = e.what();
    } catch (const VerdictError& e) {
      c_new.status = ConversationStatus::kFailed;
      c_new.error = std::string("unusable evaluator verdict after repair: ") + e.what();
    }
    detail::finish(s, dialogue.scheme());
    out[i] = std::move(s);
  });

  fs::create_directories(dst);
  detail::write_file(dst / "config.json", detail::config_record(c).dump(2) + "\n");
  std::string log;
  for (const auto& s : out) log += encode(s) + "\n";
  detail::write_file(dst / "samples.jsonl", log);
  auto report = build_report(c, out, TokenUsage{}, read_static_accuracy(src));
  write_report_files(dst, report);
  return report;
}

}  // namespace kieval

#endif  // KIEVAL_ORCHESTRATOR_HPP_
