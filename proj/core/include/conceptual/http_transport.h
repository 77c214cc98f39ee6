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

#ifndef CONCEPTUAL_HTTP_TRANSPORT_H_
#define CONCEPTUAL_HTTP_TRANSPORT_H_

#include <string>
#include <string_view>

#include "conceptual/backend.h"

namespace conceptual {

// Environment variable holding the optional bearer token.
inline constexpr const char* kBearerTokenEnv = "CONCEPTUAL_BACKEND_TOKEN";

// JSON over HTTP against a server exposing POST /v1/<endpoint>. A fresh
// connection is opened per call, so instances can be shared across threads.
class HttpTransport : public Transport {
 public:
  // `base_url` like "http://localhost:8000". Empty token -> no auth header.
  explicit HttpTransport(std::string base_url, std::string bearer_token = "",
                         int timeout_seconds = 120);

  nlohmann::json Call(std::string_view endpoint,
                      const nlohmann::json& request) override;

 private:
  std::string base_url_;
  std::string bearer_token_;
  int timeout_seconds_;
};

}  // namespace conceptual

#endif  // CONCEPTUAL_HTTP_TRANSPORT_H_
