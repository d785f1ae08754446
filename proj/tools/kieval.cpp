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

// Command-line front end: run, accuracy, reeval, contamination, metaeval,
// report, cost.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kieval/config.hpp"
#include "kieval/contamination.hpp"
#include "kieval/cost.hpp"
#include "kieval/csv.hpp"
#include "kieval/orchestrator.hpp"
#include "kieval/report.hpp"
#include "kieval/static_bench.hpp"
#include "kieval/stats.hpp"

namespace {

namespace fs = std::filesystem;
using namespace kieval;

constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> dataset;
  std::optional<std::size_t> samples;
  std::optional<int> max_rounds;
  std::optional<std::string> weighting;
  bool no_early_stop = false;
  std::optional<std::size_t> parallelism;
};

void add_config_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Run configuration file (JSON)")->required();
  cmd->add_option("--seed", o.seed, "Override the run seed");
  cmd->add_option("--dataset", o.dataset, "Dataset id from the config's \"datasets\" catalog");
  cmd->add_option("--samples", o.samples, "Number of verified samples")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-rounds", o.max_rounds, "Maximum dialogue rounds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--weighting", o.weighting, "Round weighting")
      ->check(CLI::IsMember({"decaying", "uniform"}));
  cmd->add_flag("--no-early-stop", o.no_early_stop, "Ignore evaluator stop verdicts");
  cmd->add_option("--parallelism", o.parallelism, "Samples in flight")
      ->check(CLI::PositiveNumber);
}

RunConfig resolve_config(const Overrides& o) {
  auto c = load_config(o.config, o.dataset);
  if (o.seed) c.seed = *o.seed;
  if (o.samples) c.sample_count = *o.samples;
  if (o.max_rounds) c.max_rounds = *o.max_rounds;
  if (o.weighting) c.weighting = parse_weighting(*o.weighting);
  if (o.no_early_stop) c.early_stopping = false;
  if (o.parallelism) c.parallelism = *o.parallelism;
  validate(c);
  return c;
}

void print_report(const RunReport& r) {
  std::cout << render_markdown(std::span(&r, 1));
  std::cout << "samples " << r.sample_count << ", failed " << r.failed_count
            << ", stopped early " << r.stopped_early_count;
  if (r.cost_usd) std::cout << ", cost " << format_score(*r.cost_usd, 2) << " USD";
  std::cout << '\n';
}

int cmd_run(const Overrides& o, const fs::path& run_dir) {
  const auto c = resolve_config(o);
  const auto outcome = run_evaluation(c, run_dir);
  if (outcome.resumed > 0) {
    std::cerr << "resumed: " << outcome.resumed << " of " << outcome.total
              << " samples were already complete\n";
  }
  print_report(*outcome.report);
  return 0;
}

int cmd_accuracy(const Overrides& o, const fs::path& run_dir) {
  const auto c = resolve_config(o);
  Gateway candidate(Role::kCandidate, make_backend(c.backend(Role::kCandidate)),
                    gateway_options(c, Role::kCandidate));
  AccuracyOptions options{.k = c.few_shot, .seed = c.seed, .parallelism = c.parallelism};
  if (o.samples) options.sample_count = *o.samples;
  const auto r = eval_accuracy(c.dataset, candidate, options);
  json out = r;
  out["k"] = c.few_shot;
  out["model"] = c.backend(Role::kCandidate).model;
  out["dataset"] = to_string(c.dataset.id);
  fs::create_directories(run_dir);
  write_text(run_dir / "accuracy.json", out.dump(2) + "\n");
  for (const auto& m : r.failure_messages) std::cerr << "failed: " << m << '\n';
  std::cout << to_string(c.dataset.id) << ' ' << c.few_shot << "-shot accuracy "
            << format_score(r.accuracy * 100.0) << " (" << r.correct << '/' << r.total << ")\n";
  return 0;
}

int cmd_reeval(const Overrides& o, const fs::path& source, const fs::path& run_dir) {
  const auto c = resolve_config(o);
  print_report(reevaluate_transcripts(source, c, run_dir));
  return 0;
}

int cmd_contamination(const fs::path& train, const fs::path& test, double k, bool lower) {
  const auto a = load_logprob_dump(train);
  const auto b = load_logprob_dump(test);
  const auto r = detect(a, b, k,
                        lower ? ScoreDirection::kLowerIsMember : ScoreDirection::kHigherIsMember);
  std::cout << json{{"train_loss", r.train_loss},  {"test_loss", r.test_loss},
                    {"delta", r.delta},            {"min_k_auc", r.min_k_auc},
                    {"k_percent", r.k_percent},    {"train_count", r.train_count},
                    {"test_count", r.test_count}}
                   .dump(2)
            << '\n';
  return 0;
}

struct MetaevalArgs {
  fs::path input;
  std::string x = "x";
  std::string y = "y";
  std::string group;
  std::string label;
  std::string exclude_column;
  std::string exclude;
  double threshold = 1.5;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2E", v);
  return buf;
}

int cmd_metaeval(const MetaevalArgs& a) {
  std::ifstream in(a.input, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + a.input.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto rows = parse_csv(ss.str());
  if (rows.size() < 2) throw ParseError(a.input.string() + ": no data rows");
  const auto& header = rows.front();
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    if (name.empty()) return std::nullopt;
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("input has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto xc = *column(a.x), yc = *column(a.y);
  const auto gc = column(a.group), lc = column(a.label);
  const auto ec = column(a.exclude_column.empty() && !a.exclude.empty() ? a.label
                                                                         : a.exclude_column);
  if (!a.exclude.empty() && !ec) throw ConfigError("--exclude needs --exclude-column or --label");

  struct Point {
    std::string group, label;
    double x, y;
    bool excluded;
  };
  std::vector<Point> points;
  std::vector<std::string> groups;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw ParseError("row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                       " fields, header has " + std::to_string(header.size()));
    }
    Point p{gc ? row[*gc] : "", lc ? row[*lc] : std::to_string(r), 0, 0, false};
    try {
      p.x = std::stod(row[xc]);
      p.y = std::stod(row[yc]);
    } catch (const std::exception&) {
      throw ParseError("row " + std::to_string(r) + ": non-numeric value");
    }
    p.excluded = ec && !a.exclude.empty() && row[*ec] == a.exclude;
    if (gc && std::find(groups.begin(), groups.end(), p.group) == groups.end()) {
      groups.push_back(p.group);
    }
    points.push_back(std::move(p));
  }

  auto series = [&](const std::string* group, bool drop_excluded) {
    std::pair<std::vector<double>, std::vector<double>> xy;
    for (const auto& p : points) {
      if (group && p.group != *group) continue;
      if (drop_excluded && p.excluded) continue;
      xy.first.push_back(p.x);
      xy.second.push_back(p.y);
    }
    return xy;
  };
  const bool with_excl = !a.exclude.empty();
  std::cout << "| Group | n | Pearson r | p |";
  if (with_excl) std::cout << " r (excl. " << a.exclude << ") | p (excl.) |";
  std::cout << "\n|---|---:|---:|---:|" << (with_excl ? "---:|---:|" : "") << '\n';
  auto row = [&](const std::string& name, const std::string* group) {
    const auto [x, y] = series(group, false);
    const auto c = stats::pearson(x, y);
    std::cout << "| " << name << " | " << x.size() << " | " << format_score(c.coefficient, 3)
              << " | " << sci(c.p_value) << " |";
    if (with_excl) {
      const auto [xe, ye] = series(group, true);
      const auto ce = stats::pearson(xe, ye);
      std::cout << ' ' << format_score(ce.coefficient, 3) << " | " << sci(ce.p_value) << " |";
    }
    std::cout << '\n';
  };
  for (const auto& g : groups) row(g, &g);
  row("Overall", nullptr);

  const auto [x, y] = series(nullptr, false);
  const auto sp = stats::spearman(x, y);
  const auto kd = stats::kendall(x, y);
  std::cout << "\nSpearman rho " << format_score(sp.coefficient, 3) << " (p " << sci(sp.p_value)
            << "), Kendall tau " << format_score(kd.coefficient, 3) << " (p " << sci(kd.p_value)
            << ")\n";
  const auto fit = stats::regression_outliers(x, y, a.threshold);
  std::cout << "Fit y = " << format_score(fit.slope, 4) << " x + " << format_score(fit.intercept, 4)
            << ", residual sigma " << format_score(fit.residual_sigma, 4) << '\n';
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (fit.flags[i] == stats::OutlierFlag::kNone) continue;
    std::cout << (fit.flags[i] == stats::OutlierFlag::kAbove ? "above" : "below") << ": "
              << points[i].label << (points[i].group.empty() ? "" : " (" + points[i].group + ")")
              << " residual " << format_score(fit.residuals[i], 3) << '\n';
  }
  return 0;
}

int cmd_report(const std::vector<fs::path>& dirs) {
  std::vector<RunReport> reports;
  for (const auto& d : dirs) reports.push_back(emit_report(d));
  std::cout << render_markdown(reports);
  return 0;
}

int cmd_cost(std::optional<std::uint64_t> models, const std::string& method,
             const std::vector<fs::path>& dirs, const std::string& prices_path) {
  if (models) {
    const auto m = method == "pairwise" ? CostMethod::kPairwise : CostMethod::kKieval;
    std::cout << scaling_estimate(*models, m) << '\n';
  }
  PriceTable prices = gpt4_turbo_prices();
  if (!prices_path.empty()) {
    std::ifstream in(prices_path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + prices_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    prices = decode<PriceTable>(ss.str(), prices_path);
  }
  for (const auto& d : dirs) {
    const auto r = load_report(d);
    std::cout << d.string() << ' ' << format_score(estimate_run_cost(r.token_usage, prices), 2)
              << " USD\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive knowledge-grounded evaluation of language models"};
  app.require_subcommand(1);

  Overrides run_o, acc_o, reeval_o;
  fs::path run_dir, acc_dir, reeval_dir, source_dir;
  auto* run = app.add_subcommand("run", "Run (or resume) an interactive evaluation");
  add_config_flags(run, run_o);
  run->add_option("--run-dir", run_dir, "Run directory")->required();

  auto* accuracy = app.add_subcommand("accuracy", "Static k-shot multiple-choice accuracy");
  add_config_flags(accuracy, acc_o);
  accuracy->add_option("--run-dir", acc_dir, "Directory receiving accuracy.json")->required();

  auto* reeval = app.add_subcommand("reeval", "Re-score stored transcripts with another evaluator");
  add_config_flags(reeval, reeval_o);
  reeval->add_option("--source", source_dir, "Finished run directory")->required()
      ->check(CLI::ExistingDirectory);
  reeval->add_option("--run-dir", reeval_dir, "Output run directory")->required();

  fs::path train, test;
  double k = kDefaultMinKPercent;
  bool lower = false;
  auto* contamination = app.add_subcommand("contamination", "Loss delta and Min-K% Prob AUC");
  contamination->add_option("--train", train, "Log-prob dump of training-split text")
      ->required()->check(CLI::ExistingFile);
  contamination->add_option("--test", test, "Log-prob dump of test-split text")
      ->required()->check(CLI::ExistingFile);
  contamination->add_option("--k", k, "Min-K percent")->check(CLI::Range(0.0, 100.0));
  contamination->add_flag("--lower-is-member", lower, "Treat lower scores as members");

  MetaevalArgs meta;
  auto* metaeval = app.add_subcommand("metaeval", "Correlation and outlier analysis of a CSV");
  metaeval->add_option("--input", meta.input, "CSV with a header row")->required()
      ->check(CLI::ExistingFile);
  metaeval->add_option("--x", meta.x, "Column for x");
  metaeval->add_option("--y", meta.y, "Column for y");
  metaeval->add_option("--group", meta.group, "Column grouping rows");
  metaeval->add_option("--label", meta.label, "Column naming rows");
  metaeval->add_option("--exclude-column", meta.exclude_column, "Column matched by --exclude");
  metaeval->add_option("--exclude", meta.exclude, "Also report with rows of this value removed");
  metaeval->add_option("--threshold", meta.threshold, "Outlier threshold in residual sigmas")
      ->check(CLI::PositiveNumber);

  std::vector<fs::path> report_dirs;
  auto* report = app.add_subcommand("report", "Rebuild reports from run logs");
  report->add_option("--run-dir", report_dirs, "Run directories")->required();

  std::optional<std::uint64_t> models;
  std::string method = "kieval";
  std::vector<fs::path> cost_dirs;
  std::string prices;
  auto* cost = app.add_subcommand("cost", "API cost estimates");
  cost->add_option("--models", models, "Whole-dollar budget for this many models")
      ->check(CLI::PositiveNumber);
  cost->add_option("--method", method, "Evaluation method")
      ->check(CLI::IsMember({"kieval", "pairwise"}));
  cost->add_option("--run-dir", cost_dirs, "Price the token usage of these runs");
  cost->add_option("--prices", prices, "Price table (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_o, run_dir);
    if (*accuracy) return cmd_accuracy(acc_o, acc_dir);
    if (*reeval) return cmd_reeval(reeval_o, source_dir, reeval_dir);
    if (*contamination) return cmd_contamination(train, test, k, lower);
    if (*metaeval) return cmd_metaeval(meta);
    if (*report) return cmd_report(report_dirs);
    if (*cost) {
      if (!models && cost_dirs.empty()) {
        std::cerr << "cost: give --models or --run-dir\n";
        return kExitUsage;
      }
      return cmd_cost(models, method, cost_dirs, prices);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
