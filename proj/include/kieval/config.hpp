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

#ifndef KIEVAL_CONFIG_HPP_
#define KIEVAL_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "kieval/core.hpp"
#include "kieval/cost.hpp"
#include "kieval/dataset.hpp"
#include "kieval/gateway.hpp"

namespace kieval {

struct RunConfig {
  std::uint64_t seed = 0;
  DatasetDescriptor dataset;
  std::size_t sample_count = 200;
  int max_rounds = 5;
  std::map<Role, BackendSpec> backends;
  Weighting weighting = Weighting::kDecaying;
  bool early_stopping = true;
  std::size_t parallelism = 1;
  std::filesystem::path prompts;  // template set directory; empty = built-in
  std::optional<PriceTable> prices;
  std::size_t few_shot = 5;  // k for static accuracy

  const BackendSpec& backend(Role r) const {
    auto it = backends.find(r);
    if (it == backends.end()) {
      throw ConfigError("no backend configured for the " + std::string(to_string(r)) + " role");
    }
    return it->second;
  }

  bool operator==(const RunConfig&) const = default;
};

inline void validate(const RunConfig& c) {
  if (c.sample_count < 1) throw ConfigError("samples must be >= 1");
  if (c.max_rounds < 1) throw ConfigError("max_rounds must be >= 1");
  if (c.parallelism < 1) throw ConfigError("parallelism must be >= 1");
  for (Role r : kRoles) (void)c.backend(r);
}

inline void to_json(json& j, const RunConfig& c) {
  json backends = json::object();
  for (const auto& [role, spec] : c.backends) backends[std::string(to_string(role))] = spec;
  j = json{{"seed", c.seed},
           {"dataset", c.dataset},
           {"samples", c.sample_count},
           {"max_rounds", c.max_rounds},
           {"backends", std::move(backends)},
           {"weighting", to_string(c.weighting)},
           {"early_stopping", c.early_stopping},
           {"parallelism", c.parallelism},
           {"prompts", c.prompts.generic_string()},
           {"few_shot", c.few_shot}};
  j["prices"] = c.prices ? json(*c.prices) : json(nullptr);
}

inline void from_json(const json& j, RunConfig& c) {
  c.seed = j.value("seed", std::uint64_t{0});
  c.dataset = j.at("dataset").get<DatasetDescriptor>();
  c.sample_count = j.value("samples", std::size_t{200});
  c.max_rounds = j.value("max_rounds", 5);
  c.backends.clear();
  for (const auto& [key, value] : j.at("backends").items()) {
    c.backends[parse_role(key)] = value.get<BackendSpec>();
  }
  c.weighting = parse_weighting(j.value("weighting", std::string("decaying")));
  c.early_stopping = j.value("early_stopping", true);
  c.parallelism = j.value("parallelism", std::size_t{1});
  c.prompts = j.value("prompts", std::string());
  c.few_shot = j.value("few_shot", std::size_t{5});
  c.prices.reset();
  if (auto it = j.find("prices"); it != j.end() && !it->is_null()) c.prices = it->get<PriceTable>();
}

// Canonical snapshot used for hashing: everything except settings that
// cannot change results (worker count).
inline json canonical_config(const RunConfig& c) {
  json j = c;
  j.erase("parallelism");
  return j;
}

inline std::string config_hash(const RunConfig& c) {
  return sha256_hex(canonical_config(c).dump());
}

// Reads a JSON config file. Relative paths inside it (dataset files,
// fixtures, prompt directory) resolve against the file's directory. An
// optional "datasets" object maps dataset ids to descriptors; `dataset`
// selects one of them in place of the "dataset" entry.
inline RunConfig load_config(const std::filesystem::path& path,
                             std::optional<std::string> dataset = std::nullopt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  RunConfig c;
  try {
    json j = json::parse(ss.str());
    if (dataset) {
      const auto catalog = j.find("datasets");
      if (catalog == j.end() || !catalog->contains(*dataset)) {
        throw ConfigError("config " + path.string() + " has no entry for dataset '" + *dataset +
                          "' under \"datasets\"");
      }
      j["dataset"] = catalog->at(*dataset);
      j["dataset"]["id"] = *dataset;
    }
    c = j.get<RunConfig>();
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  } catch (const ParseError& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  const auto base = std::filesystem::absolute(path).parent_path();
  auto resolve = [&](std::filesystem::path& p) {
    if (!p.empty() && p.is_relative()) p = (base / p).lexically_normal();
  };
  resolve(c.dataset.eval_path);
  resolve(c.dataset.exemplar_path);
  resolve(c.prompts);
  for (auto& [role, spec] : c.backends) resolve(spec.fixture);
  validate(c);
  return c;
}

}  // namespace kieval

#endif  // KIEVAL_CONFIG_HPP_
