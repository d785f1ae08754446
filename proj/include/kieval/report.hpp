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

#ifndef KIEVAL_REPORT_HPP_
#define KIEVAL_REPORT_HPP_

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "kieval/config.hpp"
#include "kieval/core.hpp"
#include "kieval/cost.hpp"
#include "kieval/scoring.hpp"

namespace kieval {

// Aggregates persisted samples into the run report. Samples are ordered by
// question id first so the floating-point sums never depend on the order
// they finished in.
inline RunReport build_report(const RunConfig& c, std::span<const SampleResult> samples,
                              const TokenUsage& extra_usage = {},
                              std::optional<double> static_accuracy = std::nullopt) {
  std::vector<SampleResult> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.question_id < b.question_id; });

  RunReport r;
  r.candidate_model = c.backend(Role::kCandidate).model;
  r.dataset = std::string(to_string(c.dataset.id));
  r.sample_count = sorted.size();
  for (const auto& s : sorted) {
    r.failed_count += s.failed();
    r.stopped_early_count += s.conversation.status == ConversationStatus::kStoppedEarly;
    r.token_usage += s.token_usage;
  }
  if (r.failed_count == r.sample_count) {
    throw Error("all " + std::to_string(r.sample_count) + " samples failed");
  }
  const auto agg = aggregate(sorted);
  r.aspect_scores = agg.aspect_scores;
  r.average_rounds = agg.average_rounds;
  r.stop_histogram = stop_histogram(sorted);
  r.token_usage += extra_usage;
  if (c.prices) r.cost_usd = estimate_run_cost(r.token_usage, *c.prices);
  r.static_accuracy = static_accuracy;
  r.config_hash = config_hash(c);
  r.config = canonical_config(c);
  return r;
}

namespace detail {

inline std::string csv_field(std::string_view v) {
  if (v.find_first_of(",\"\n") == std::string_view::npos) return std::string(v);
  std::string out = "\"";
  for (char ch : v) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string optional_number(const std::optional<double>& v, int decimals) {
  return v ? format_score(*v, decimals) : std::string();
}

}  // namespace detail

// Markdown table, one row per report: the six aspect scores, average
// rounds, and a static accuracy column when any report carries one.
inline std::string render_markdown(std::span<const RunReport> reports) {
  const bool with_accuracy = std::any_of(reports.begin(), reports.end(),
                                         [](const auto& r) { return r.static_accuracy.has_value(); });
  std::ostringstream out;
  out << "| Model |";
  if (with_accuracy) out << " Acc. |";
  for (Aspect a : kAspects) out << ' ' << display_name(a) << " |";
  out << " Rounds |\n|---|";
  if (with_accuracy) out << "---:|";
  for (std::size_t i = 0; i < kAspectCount; ++i) out << "---:|";
  out << "---:|\n";
  for (const auto& r : reports) {
    out << "| " << r.candidate_model << " (" << r.dataset << ") |";
    if (with_accuracy) {
      out << ' '
          << (r.static_accuracy ? format_score(*r.static_accuracy * 100.0) : std::string("-"))
          << " |";
    }
    for (Aspect a : kAspects) out << ' ' << format_score(r.aspect_scores[index_of(a)]) << " |";
    out << ' ' << format_score(r.average_rounds, 2) << " |\n";
  }
  return out.str();
}

inline std::string render_csv(std::span<const RunReport> reports) {
  std::ostringstream out;
  out << "model,dataset";
  for (Aspect a : kAspects) out << ',' << to_string(a);
  out << ",rounds,static_accuracy,samples,failed,stopped_early,cost_usd\n";
  for (const auto& r : reports) {
    out << detail::csv_field(r.candidate_model) << ',' << detail::csv_field(r.dataset);
    for (Aspect a : kAspects) out << ',' << format_score(r.aspect_scores[index_of(a)]);
    out << ',' << format_score(r.average_rounds, 2) << ','
        << detail::optional_number(r.static_accuracy ? std::optional(*r.static_accuracy * 100.0)
                                                     : std::nullopt,
                                   1)
        << ',' << r.sample_count << ',' << r.failed_count << ',' << r.stopped_early_count << ','
        << detail::optional_number(r.cost_usd, 2) << '\n';
  }
  return out.str();
}

inline std::string render_stop_csv(const RunReport& r) {
  std::ostringstream out;
  out << "reason,count\n";
  for (StopReason s : kStopReasons) out << to_string(s) << ',' << r.stop_histogram[index_of(s)] << '\n';
  return out.str();
}

inline void write_text(const std::filesystem::path& p, std::string_view content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + p.string());
  out << content;
  if (!out.flush()) throw Error("cannot write " + p.string());
}

// report.json, report.md, report.csv and stop_reasons.csv for one run.
inline void write_report_files(const std::filesystem::path& dir, const RunReport& r) {
  write_text(dir / "report.json", json(r).dump(2) + "\n");
  write_text(dir / "report.md", render_markdown(std::span(&r, 1)));
  write_text(dir / "report.csv", render_csv(std::span(&r, 1)));
  write_text(dir / "stop_reasons.csv", render_stop_csv(r));
}

inline RunReport load_report(const std::filesystem::path& dir) {
  const auto path = dir / "report.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("no report at " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode<RunReport>(ss.str(), path.string());
}

// Static accuracy recorded by the `accuracy` command, if present.
inline std::optional<double> read_static_accuracy(const std::filesystem::path& dir) {
  const auto path = dir / "accuracy.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode<json>(ss.str(), path.string()).at("accuracy").get<double>();
}

}  // namespace kieval

#endif  // KIEVAL_REPORT_HPP_
