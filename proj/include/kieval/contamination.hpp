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

// Loss-based contamination probes over per-token logprob dumps: Min-K% Prob,
// average language-modelling loss and its train/test delta, and ROC AUC.
// Dumps come from any engine that reports token logprobs; nothing here
// touches model weights.

#ifndef KIEVAL_CONTAMINATION_HPP_
#define KIEVAL_CONTAMINATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kieval/core.hpp"
#include "kieval/stats.hpp"

namespace kieval {

enum class Membership { kMember, kNonMember };

struct LogprobSequence {
  std::string id;
  std::optional<Membership> label;
  std::vector<TokenLogprob> tokens;

  std::vector<double> logprobs() const {
    std::vector<double> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(t.logprob);
    return out;
  }
};

inline constexpr double kDefaultMinKPercent = 20.0;

// Mean of the ceil(k% * T) smallest token logprobs.
inline double min_k_prob(std::span<const double> logprobs, double k_percent) {
  if (logprobs.empty()) throw std::invalid_argument("min_k_prob: empty sequence");
  if (!(k_percent > 0.0 && k_percent <= 100.0)) {
    throw std::invalid_argument("min_k_prob: k must be in (0, 100]");
  }
  const auto t = static_cast<double>(logprobs.size());
  // Multiply before dividing so that e.g. 30% of 10 is exactly 3.
  auto count = static_cast<std::size_t>(std::ceil(k_percent * t / 100.0 - 1e-9));
  count = std::clamp<std::size_t>(count, 1, logprobs.size());

  std::vector<double> sorted(logprobs.begin(), logprobs.end());
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(count),
                    sorted.end());
  double sum = 0;
  for (std::size_t i = 0; i < count; ++i) sum += sorted[i];
  return sum / static_cast<double>(count);
}

inline double min_k_prob(const LogprobSequence& s, double k_percent) {
  return min_k_prob(s.logprobs(), k_percent);
}

// Macro average: mean over sequences of each sequence's mean negative
// logprob.
inline double avg_lm_loss(std::span<const LogprobSequence> sequences) {
  if (sequences.empty()) throw std::invalid_argument("avg_lm_loss: no sequences");
  double total = 0;
  for (const auto& s : sequences) {
    if (s.tokens.empty()) throw std::invalid_argument("avg_lm_loss: sequence '" + s.id + "' is empty");
    double nll = 0;
    for (const auto& t : s.tokens) nll -= t.logprob;
    total += nll / static_cast<double>(s.tokens.size());
  }
  return total / static_cast<double>(sequences.size());
}

// L_test - L_train; strongly negative when the test split was trained on.
inline double loss_delta(double train_loss, double test_loss) { return test_loss - train_loss; }

// Mann-Whitney AUC: probability that a random member outscores a random
// non-member, ties counting one half (midranks).
inline double auc(std::span<const double> scores, std::span<const Membership> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("auc: length mismatch");
  const auto n_pos =
      static_cast<double>(std::count(labels.begin(), labels.end(), Membership::kMember));
  const double n_neg = static_cast<double>(scores.size()) - n_pos;
  if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("auc: both classes must be present");
  const auto ranks = stats::midranks(scores);
  double rank_sum = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == Membership::kMember) rank_sum += ranks[i];
  }
  return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg);
}

enum class ScoreDirection {
  kHigherIsMember,  // Min-K% Prob: members get higher likelihood
  kLowerIsMember,
};

struct DetectionReport {
  double train_loss = 0.0;
  double test_loss = 0.0;
  double delta = 0.0;
  double min_k_auc = 0.0;
  double k_percent = kDefaultMinKPercent;
  std::size_t train_count = 0;
  std::size_t test_count = 0;
};

// Loss delta and Min-K% AUC for one pair of dumps. Unlabelled sequences
// default to non-member for train and member for test.
inline DetectionReport detect(std::span<const LogprobSequence> train,
                              std::span<const LogprobSequence> test,
                              double k_percent = kDefaultMinKPercent,
                              ScoreDirection direction = ScoreDirection::kHigherIsMember) {
  DetectionReport r;
  r.k_percent = k_percent;
  r.train_count = train.size();
  r.test_count = test.size();
  r.train_loss = avg_lm_loss(train);
  r.test_loss = avg_lm_loss(test);
  r.delta = loss_delta(r.train_loss, r.test_loss);

  std::vector<double> scores;
  std::vector<Membership> labels;
  auto add = [&](std::span<const LogprobSequence> seqs, Membership fallback) {
    for (const auto& s : seqs) {
      const double score = min_k_prob(s, k_percent);
      scores.push_back(direction == ScoreDirection::kHigherIsMember ? score : -score);
      labels.push_back(s.label.value_or(fallback));
    }
  };
  add(train, Membership::kNonMember);
  add(test, Membership::kMember);
  r.min_k_auc = auc(scores, labels);
  return r;
}

inline void from_json(const json& j, LogprobSequence& s) {
  s.id = j.at("id").get<std::string>();
  s.label.reset();
  if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
    const auto label = it->get<std::string>();
    if (label == "member") {
      s.label = Membership::kMember;
    } else if (label == "non_member") {
      s.label = Membership::kNonMember;
    } else {
      throw ParseError("unknown label '" + label + "' (expected member or non_member)");
    }
  }
  s.tokens.clear();
  for (const auto& t : j.at("tokens")) {
    if (!t.is_array() || t.size() != 2) throw ParseError("token entries must be [token, logprob]");
    const double lp = t.at(1).get<double>();
    if (!std::isfinite(lp)) throw ParseError("non-finite logprob in '" + s.id + "'");
    s.tokens.push_back({t.at(0).get<std::string>(), lp});
  }
  if (s.tokens.empty()) throw ParseError("sequence '" + s.id + "' has no tokens");
}

inline void to_json(json& j, const LogprobSequence& s) {
  json tokens = json::array();
  for (const auto& t : s.tokens) tokens.push_back(json::array({t.token, t.logprob}));
  j = json{{"id", s.id}, {"tokens", std::move(tokens)}};
  if (s.label) j["label"] = *s.label == Membership::kMember ? "member" : "non_member";
}

// JSON Lines: {"id", "label"?, "tokens": [[token, logprob], ...]}.
inline std::vector<LogprobSequence> load_logprob_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open logprob dump " + path.string());
  std::vector<LogprobSequence> out;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(decode<LogprobSequence>(line, path.filename().string() + ":" +
                                                     std::to_string(line_no)));
  }
  return out;
}

}  // namespace kieval

#endif  // KIEVAL_CONTAMINATION_HPP_
