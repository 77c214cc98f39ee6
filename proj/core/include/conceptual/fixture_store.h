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

#ifndef CONCEPTUAL_FIXTURE_STORE_H_
#define CONCEPTUAL_FIXTURE_STORE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "conceptual/backend.h"
#include "json.hpp"

namespace conceptual {

enum class FixtureMode { kRecord, kReplay, kPassthrough };

FixtureMode ParseFixtureMode(std::string_view name);
std::string_view FixtureModeName(FixtureMode mode);

// Canonical request key: "<endpoint> <params>" where params are serialized
// with sorted keys, no insignificant whitespace, and every string value
// whitespace-normalized. The requested `k` of a "complete" call is not part
// of the key: a recorded list serves any smaller k by truncation.
std::string RequestDigest(std::string_view endpoint,
                          const nlohmann::json& request);

// Map from request digest to recorded response. All members are safe to call
// concurrently; writes are serialized.
class FixtureStore {
 public:
  FixtureStore() = default;
  FixtureStore(FixtureStore&& other) noexcept;
  FixtureStore& operator=(FixtureStore&& other) noexcept;

  // Missing file -> empty store. Malformed JSON -> ParseError.
  static FixtureStore Load(const std::filesystem::path& path);

  std::optional<nlohmann::json> Find(const std::string& digest) const;
  void Put(const std::string& digest, nlohmann::json response);
  std::size_t size() const;
  std::map<std::string, nlohmann::json> entries() const;

  // One UTF-8 JSON document, sorted keys, two-space indent, LF endings.
  std::string Serialize() const;
  // Atomic replace via a temporary sibling file.
  void Save(const std::filesystem::path& path) const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, nlohmann::json> entries_;
};

// Transport decorator implementing record / replay / passthrough. In REPLAY
// mode a lookup miss raises ReplayMiss and the upstream is never contacted.
// In RECORD mode each new response is persisted to `path` immediately.
class FixtureTransport : public Transport {
 public:
  FixtureTransport(std::shared_ptr<FixtureStore> store, FixtureMode mode,
                   std::shared_ptr<Transport> upstream,
                   std::optional<std::filesystem::path> path = std::nullopt);

  nlohmann::json Call(std::string_view endpoint,
                      const nlohmann::json& request) override;

  FixtureMode mode() const { return mode_; }
  const FixtureStore& store() const { return *store_; }

 private:
  std::shared_ptr<FixtureStore> store_;
  FixtureMode mode_;
  std::shared_ptr<Transport> upstream_;
  std::optional<std::filesystem::path> path_;
  std::mutex save_mu_;
};

}  // namespace conceptual

#endif  // CONCEPTUAL_FIXTURE_STORE_H_
