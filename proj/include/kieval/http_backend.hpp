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

#ifndef KIEVAL_HTTP_BACKEND_HPP_
#define KIEVAL_HTTP_BACKEND_HPP_

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif

#include <chrono>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "httplib.h"
#include "kieval/gateway.hpp"

namespace kieval {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

inline Endpoint split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint '" + url + "' must start with http:// or https://");
  }
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ConfigError("endpoint '" + url + "' has unsupported scheme '" + scheme + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/v1/chat/completions"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

// Single-attempt POST to an OpenAI-compatible chat-completions endpoint.
// Retrying is the Gateway's job.
class HttpChatBackend final : public ChatBackend {
 public:
  HttpChatBackend(std::string endpoint, std::optional<std::string> api_key,
                  std::chrono::milliseconds timeout)
      : endpoint_(split_endpoint(endpoint)), api_key_(std::move(api_key)), timeout_(timeout) {}

  ChatResponse complete(const ChatRequest& request) override {
    httplib::Client client(endpoint_.origin);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);

    httplib::Headers headers;
    if (api_key_) headers.emplace("Authorization", "Bearer " + *api_key_);

    const auto body = request_body(request).dump(-1, ' ', false, json::error_handler_t::replace);
    auto res = client.Post(endpoint_.path, headers, body, "application/json");
    if (!res) {
      throw TransportError("request to " + endpoint_.origin + " failed: " +
                               httplib::to_string(res.error()),
                           true);
    }
    const int status = res->status;
    if (status == 408 || status == 429 || status >= 500) {
      throw TransportError("HTTP " + std::to_string(status) + ": " + res->body, true, status);
    }
    if (status < 200 || status >= 300) {
      throw ProtocolError("HTTP " + std::to_string(status) + ": " + res->body, status);
    }
    json parsed;
    try {
      parsed = json::parse(res->body);
    } catch (const json::exception& e) {
      throw ProtocolError(std::string("response body is not JSON: ") + e.what(), status);
    }
    return parse_chat_response(parsed);
  }

 private:
  Endpoint endpoint_;
  std::optional<std::string> api_key_;
  std::chrono::milliseconds timeout_;
};

// Backend for a spec: Scripted replays its fixture file; HttpChat talks to
// the endpoint and, when a fixture path is configured, records into it.
inline std::unique_ptr<ChatBackend> make_backend(const BackendSpec& spec) {
  if (spec.kind == BackendKind::kScripted) {
    if (!std::filesystem::exists(spec.fixture)) {
      throw ConfigError("fixture file " + spec.fixture.string() + " does not exist");
    }
    return std::make_unique<ScriptedBackend>(std::make_shared<FixtureStore>(spec.fixture));
  }
  std::optional<std::string> key;
  if (!spec.credential_env.empty()) {
    const char* value = std::getenv(spec.credential_env.c_str());
    if (value == nullptr) {
      throw ConfigError("environment variable " + spec.credential_env + " is not set");
    }
    key = value;
  }
  std::unique_ptr<ChatBackend> http =
      std::make_unique<HttpChatBackend>(spec.endpoint, std::move(key), spec.timeout);
  if (spec.fixture.empty()) return http;
  return std::make_unique<RecordingBackend>(std::move(http),
                                            std::make_shared<FixtureStore>(spec.fixture));
}

}  // namespace kieval

#endif  // KIEVAL_HTTP_BACKEND_HPP_
