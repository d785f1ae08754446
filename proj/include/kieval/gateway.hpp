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

// Uniform access to the three model roles: chat request/response types, the
// OpenAI-compatible wire encoding, request digests, record/replay fixtures,
// and the Gateway that layers retries, rate limiting and token accounting
// over any ChatBackend. The HTTP transport lives in http_backend.hpp.

#ifndef KIEVAL_GATEWAY_HPP_
#define KIEVAL_GATEWAY_HPP_

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "kieval/core.hpp"

namespace kieval {

struct ChatTurn {
  std::string role;  // "system", "user" or "assistant"
  std::string content;

  bool operator==(const ChatTurn&) const = default;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatTurn> messages;
  double temperature = 0.0;
  std::uint64_t seed = 0;
  int max_tokens = 1024;
  bool logprobs = false;

  bool operator==(const ChatRequest&) const = default;
};

struct ChatResponse {
  std::string content;
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
  std::optional<std::vector<TokenLogprob>> logprobs;

  bool operator==(const ChatResponse&) const = default;
};

// Request body in the chat-completions wire format. Object keys serialize
// sorted, so dump() of this value is also the canonical form for digests.
inline json request_body(const ChatRequest& r) {
  json messages = json::array();
  for (const auto& m : r.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
  json body{{"model", r.model},
            {"messages", std::move(messages)},
            {"temperature", r.temperature},
            {"seed", r.seed},
            {"max_tokens", r.max_tokens}};
  if (r.logprobs) body["logprobs"] = true;
  return body;
}

inline ChatRequest request_from_body(const json& body) {
  ChatRequest r;
  r.model = body.at("model").get<std::string>();
  for (const auto& m : body.at("messages")) {
    r.messages.push_back({m.at("role").get<std::string>(), m.at("content").get<std::string>()});
  }
  r.temperature = body.at("temperature").get<double>();
  r.seed = body.at("seed").get<std::uint64_t>();
  r.max_tokens = body.at("max_tokens").get<int>();
  r.logprobs = body.value("logprobs", false);
  return r;
}

inline std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xF];
  }
  return out;
}

// Stable key for record/replay: SHA-256 over the canonical request body
// (model, ordered messages, decoding parameters).
inline std::string request_digest(const ChatRequest& r) {
  return sha256_hex(request_body(r).dump(-1, ' ', false, json::error_handler_t::replace));
}

// Reads choices[0].message.content, usage.* and, if present,
// choices[0].logprobs.content[*].{token,logprob}.
inline ChatResponse parse_chat_response(const json& body) {
  try {
    const auto& choice = body.at("choices").at(0);
    ChatResponse out;
    const auto& content = choice.at("message").at("content");
    out.content = content.is_null() ? std::string() : content.get<std::string>();
    if (auto u = body.find("usage"); u != body.end() && u->is_object()) {
      out.prompt_tokens = u->value("prompt_tokens", std::uint64_t{0});
      out.completion_tokens = u->value("completion_tokens", std::uint64_t{0});
    }
    if (auto lp = choice.find("logprobs"); lp != choice.end() && lp->is_object()) {
      if (auto c = lp->find("content"); c != lp->end() && c->is_array()) {
        std::vector<TokenLogprob> tokens;
        for (const auto& t : *c) {
          tokens.push_back({t.at("token").get<std::string>(), t.at("logprob").get<double>()});
        }
        out.logprobs = std::move(tokens);
      }
    }
    return out;
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed chat completion response: ") + e.what());
  }
}

// Inverse of parse_chat_response, used by fixtures and test stubs.
inline json response_body(const ChatResponse& r) {
  json choice{{"index", 0},
              {"message", {{"role", "assistant"}, {"content", r.content}}},
              {"finish_reason", "stop"}};
  if (r.logprobs) {
    json tokens = json::array();
    for (const auto& t : *r.logprobs) tokens.push_back({{"token", t.token}, {"logprob", t.logprob}});
    choice["logprobs"] = {{"content", std::move(tokens)}};
  }
  return json{{"object", "chat.completion"},
              {"choices", json::array({std::move(choice)})},
              {"usage",
               {{"prompt_tokens", r.prompt_tokens},
                {"completion_tokens", r.completion_tokens},
                {"total_tokens", r.prompt_tokens + r.completion_tokens}}}};
}

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  // One attempt. Throws TransportError / ProtocolError / FixtureError.
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

class FunctionBackend final : public ChatBackend {
 public:
  using Fn = std::function<ChatResponse(const ChatRequest&)>;
  explicit FunctionBackend(Fn fn) : fn_(std::move(fn)) {}
  ChatResponse complete(const ChatRequest& request) override { return fn_(request); }

 private:
  Fn fn_;
};

// Digest-keyed store of recorded exchanges, persisted as JSON Lines of
// {digest, request, response}. Safe for concurrent use.
class FixtureStore {
 public:
  FixtureStore() = default;

  // Loads `path` if it exists; later records are appended to it.
  explicit FixtureStore(std::filesystem::path path) : path_(std::move(path)) {
    std::ifstream in(path_, std::ios::binary);
    if (!in) return;
    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
      if (line.empty()) continue;
      try {
        const json j = json::parse(line);
        const auto digest = j.at("digest").get<std::string>();
        entries_.emplace(digest, Entry{j.at("request"), j.at("response")});
      } catch (const json::exception& e) {
        throw ParseError("fixture " + path_.string() + ":" + std::to_string(line_no) + ": " +
                         e.what());
      }
    }
  }

  std::optional<ChatResponse> find(const std::string& digest) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(digest);
    if (it == entries_.end()) return std::nullopt;
    return parse_chat_response(it->second.response);
  }

  // Returns the digest. Re-recording an identical exchange is a no-op;
  // the same digest with a different payload is an error.
  std::string record(const ChatRequest& request, const ChatResponse& response) {
    const auto digest = request_digest(request);
    Entry entry{request_body(request), response_body(response)};
    std::lock_guard lock(mu_);
    if (auto it = entries_.find(digest); it != entries_.end()) {
      if (it->second.request == entry.request && it->second.response == entry.response) {
        return digest;
      }
      throw FixtureError("fixture digest collision with a different payload", digest);
    }
    if (!path_.empty()) {
      std::ofstream out(path_, std::ios::binary | std::ios::app);
      if (!out) throw Error("cannot append to fixture file " + path_.string());
      json line{{"digest", digest}, {"request", entry.request}, {"response", entry.response}};
      out << line.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
    }
    entries_.emplace(digest, std::move(entry));
    return digest;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
  }

 private:
  struct Entry {
    json request;
    json response;
  };

  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<std::string, Entry> entries_;
};

// Replays recorded responses; an unknown request is a FixtureError carrying
// its digest.
class ScriptedBackend final : public ChatBackend {
 public:
  explicit ScriptedBackend(std::shared_ptr<const FixtureStore> store) : store_(std::move(store)) {}

  ChatResponse complete(const ChatRequest& request) override {
    const auto digest = request_digest(request);
    if (auto hit = store_->find(digest)) return *std::move(hit);
    throw FixtureError("no recorded response for request digest " + digest, digest);
  }

 private:
  std::shared_ptr<const FixtureStore> store_;
};

// Forwards to `inner` and records every successful exchange.
class RecordingBackend final : public ChatBackend {
 public:
  RecordingBackend(std::unique_ptr<ChatBackend> inner, std::shared_ptr<FixtureStore> store)
      : inner_(std::move(inner)), store_(std::move(store)) {}

  ChatResponse complete(const ChatRequest& request) override {
    auto response = inner_->complete(request);
    store_->record(request, response);
    return response;
  }

 private:
  std::unique_ptr<ChatBackend> inner_;
  std::shared_ptr<FixtureStore> store_;
};

struct RetryPolicy {
  int max_attempts = 4;
  std::chrono::milliseconds backoff_base{500};  // doubles after each failure
};

struct RateLimit {
  std::size_t max_in_flight = 8;
  std::chrono::milliseconds min_interval{0};  // between request starts
};

enum class BackendKind { kHttpChat, kScripted };

struct BackendSpec {
  BackendKind kind = BackendKind::kScripted;
  std::string endpoint;        // full chat-completions URL (HttpChat)
  std::string model;
  std::string credential_env;  // name of the variable holding the API key
  std::chrono::milliseconds timeout{60000};
  RetryPolicy retry;
  RateLimit rate;
  std::filesystem::path fixture;  // replay source (Scripted) or record target (HttpChat)
  int max_tokens = 1024;

  bool operator==(const BackendSpec& o) const {
    return kind == o.kind && endpoint == o.endpoint && model == o.model &&
           credential_env == o.credential_env && timeout == o.timeout &&
           retry.max_attempts == o.retry.max_attempts &&
           retry.backoff_base == o.retry.backoff_base &&
           rate.max_in_flight == o.rate.max_in_flight &&
           rate.min_interval == o.rate.min_interval && fixture == o.fixture &&
           max_tokens == o.max_tokens;
  }
};

inline void to_json(json& j, const BackendSpec& b) {
  j = json{{"kind", b.kind == BackendKind::kHttpChat ? "http" : "scripted"},
           {"model", b.model},
           {"max_tokens", b.max_tokens},
           {"timeout_ms", b.timeout.count()},
           {"max_attempts", b.retry.max_attempts},
           {"backoff_ms", b.retry.backoff_base.count()},
           {"max_in_flight", b.rate.max_in_flight},
           {"min_interval_ms", b.rate.min_interval.count()}};
  if (!b.endpoint.empty()) j["endpoint"] = b.endpoint;
  if (!b.credential_env.empty()) j["credential_env"] = b.credential_env;
  if (!b.fixture.empty()) j["fixture"] = b.fixture.generic_string();
}

inline void from_json(const json& j, BackendSpec& b) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "http") {
    b.kind = BackendKind::kHttpChat;
  } else if (kind == "scripted") {
    b.kind = BackendKind::kScripted;
  } else {
    throw ParseError("unknown backend kind '" + kind + "' (expected http or scripted)");
  }
  b.model = j.at("model").get<std::string>();
  b.endpoint = j.value("endpoint", std::string());
  b.credential_env = j.value("credential_env", std::string());
  b.fixture = j.value("fixture", std::string());
  b.max_tokens = j.value("max_tokens", 1024);
  b.timeout = std::chrono::milliseconds(j.value("timeout_ms", std::int64_t{60000}));
  b.retry.max_attempts = j.value("max_attempts", 4);
  b.retry.backoff_base = std::chrono::milliseconds(j.value("backoff_ms", std::int64_t{500}));
  b.rate.max_in_flight = j.value("max_in_flight", std::size_t{8});
  b.rate.min_interval = std::chrono::milliseconds(j.value("min_interval_ms", std::int64_t{0}));
  if (b.kind == BackendKind::kScripted && b.fixture.empty()) {
    throw ConfigError("scripted backend '" + b.model + "' needs a fixture path");
  }
  if (b.kind == BackendKind::kHttpChat && b.endpoint.empty()) {
    throw ConfigError("http backend '" + b.model + "' needs an endpoint");
  }
  if (b.retry.max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
  if (b.rate.max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
}

// Run-wide per-role token totals.
class TokenLedger {
 public:
  void add(Role role, const ChatResponse& r) {
    std::lock_guard lock(mu_);
    usage_.add(role, r.prompt_tokens, r.completion_tokens);
  }
  TokenUsage snapshot() const {
    std::lock_guard lock(mu_);
    return usage_;
  }

 private:
  mutable std::mutex mu_;
  TokenUsage usage_;
};

// Caps concurrent requests and spaces request starts.
class RateLimiter {
 public:
  explicit RateLimiter(RateLimit limit) : limit_(limit) {}

  class Permit {
   public:
    explicit Permit(RateLimiter* owner) : owner_(owner) {}
    Permit(Permit&& o) noexcept : owner_(std::exchange(o.owner_, nullptr)) {}
    Permit(const Permit&) = delete;
    Permit& operator=(const Permit&) = delete;
    Permit& operator=(Permit&&) = delete;
    ~Permit() {
      if (owner_) owner_->release();
    }

   private:
    RateLimiter* owner_;
  };

  Permit acquire() {
    std::chrono::steady_clock::time_point start;
    {
      std::unique_lock lock(mu_);
      cv_.wait(lock, [&] { return in_flight_ < limit_.max_in_flight; });
      ++in_flight_;
      const auto now = std::chrono::steady_clock::now();
      start = std::max(now, next_start_);
      next_start_ = start + limit_.min_interval;
    }
    std::this_thread::sleep_until(start);
    return Permit(this);
  }

  std::size_t in_flight() const {
    std::lock_guard lock(mu_);
    return in_flight_;
  }

 private:
  void release() {
    {
      std::lock_guard lock(mu_);
      --in_flight_;
    }
    cv_.notify_one();
  }

  RateLimit limit_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::size_t in_flight_ = 0;
  std::chrono::steady_clock::time_point next_start_{};
};

// One role's access point. Every call is issued at temperature 0 with the
// run seed; transient transport failures are retried with exponential
// backoff, everything else surfaces immediately.
class Gateway {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  struct Options {
    std::string model;
    std::uint64_t seed = 0;
    int max_tokens = 1024;
    RetryPolicy retry;
    RateLimit rate;
  };

  Gateway(Role role, std::unique_ptr<ChatBackend> backend, Options options,
          std::shared_ptr<TokenLedger> ledger = std::make_shared<TokenLedger>(),
          Sleeper sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); })
      : role_(role),
        backend_(std::move(backend)),
        options_(std::move(options)),
        limiter_(options_.rate),
        ledger_(std::move(ledger)),
        sleeper_(std::move(sleeper)) {}

  Role role() const { return role_; }
  const std::string& model() const { return options_.model; }
  const TokenLedger& ledger() const { return *ledger_; }

  ChatRequest make_request(std::vector<ChatTurn> messages, bool logprobs = false) const {
    ChatRequest r;
    r.model = options_.model;
    r.messages = std::move(messages);
    r.temperature = 0.0;
    r.seed = options_.seed;
    r.max_tokens = options_.max_tokens;
    r.logprobs = logprobs;
    return r;
  }

  ChatResponse complete(std::vector<ChatTurn> messages, bool logprobs = false) {
    return complete(make_request(std::move(messages), logprobs));
  }

  ChatResponse complete(const ChatRequest& request) {
    for (int attempt = 1;; ++attempt) {
      try {
        ChatResponse response;
        {
          auto permit = limiter_.acquire();
          response = backend_->complete(request);
        }
        ledger_->add(role_, response);
        return response;
      } catch (const TransportError& e) {
        if (!e.retriable() || attempt >= options_.retry.max_attempts) {
          throw TransportError(std::string(to_string(role_)) + " backend failed after " +
                                   std::to_string(attempt) + " attempt(s): " + e.what(),
                               false, e.status());
        }
        sleeper_(options_.retry.backoff_base * (1LL << std::min(attempt - 1, 16)));
      }
    }
  }

 private:
  Role role_;
  std::unique_ptr<ChatBackend> backend_;
  Options options_;
  RateLimiter limiter_;
  std::shared_ptr<TokenLedger> ledger_;
  Sleeper sleeper_;
};

}  // namespace kieval

#endif  // KIEVAL_GATEWAY_HPP_
