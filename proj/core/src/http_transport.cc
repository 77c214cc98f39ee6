// Copyright 2026 The Conceptual Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "conceptual/http_transport.h"

#include <utility>

#include "conceptual/error.h"
#include "httplib.h"

namespace conceptual {

using nlohmann::json;

HttpTransport::HttpTransport(std::string base_url, std::string bearer_token,
                             int timeout_seconds)
    : base_url_(std::move(base_url)),
      bearer_token_(std::move(bearer_token)),
      timeout_seconds_(timeout_seconds) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
  if (base_url_.empty()) throw ValidationError("backend URL is empty");
}

json HttpTransport::Call(std::string_view endpoint, const json& request) {
  httplib::Client client(base_url_);
  client.set_connection_timeout(timeout_seconds_);
  client.set_read_timeout(timeout_seconds_);
  httplib::Headers headers;
  if (!bearer_token_.empty()) {
    headers.emplace("Authorization", "Bearer " + bearer_token_);
  }
  const std::string path = "/v1/" + std::string(endpoint);
  auto result = client.Post(path, headers, request.dump(), "application/json");
  if (!result) {
    throw BackendError("backend unreachable at " + base_url_ + path + ": " +
                       httplib::to_string(result.error()));
  }
  if (result->status < 200 || result->status >= 300) {
    throw BackendError("backend returned HTTP " + std::to_string(result->status) +
                       " for " + path + ": " + result->body);
  }
  try {
    return json::parse(result->body);
  } catch (const json::parse_error& e) {
    throw BackendError("backend returned invalid JSON for " + path + ": " +
                       e.what());
  }
}

}  // namespace conceptual
