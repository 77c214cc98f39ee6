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

#include "conceptual/fixture_store.h"

#include <fstream>
#include <sstream>
#include <utility>

#include "conceptual/error.h"
#include "conceptual/text.h"

namespace conceptual {

using nlohmann::json;

FixtureMode ParseFixtureMode(std::string_view name) {
  const std::string lowered = ToLower(name);
  if (lowered == "record") return FixtureMode::kRecord;
  if (lowered == "replay") return FixtureMode::kReplay;
  if (lowered == "passthrough") return FixtureMode::kPassthrough;
  throw ValidationError("unknown fixture mode '" + std::string(name) +
                        "' (expected record, replay or passthrough)");
}

std::string_view FixtureModeName(FixtureMode mode) {
  switch (mode) {
    case FixtureMode::kRecord:
      return "record";
    case FixtureMode::kReplay:
      return "replay";
    case FixtureMode::kPassthrough:
      return "passthrough";
  }
  return "replay";
}

namespace {

json Canonicalize(const json& value) {
  if (value.is_string()) return NormalizeWhitespace(value.get<std::string>());
  if (value.is_object()) {
    json out = json::object();
    for (const auto& [key, item] : value.items()) out[key] = Canonicalize(item);
    return out;
  }
  if (value.is_array()) {
    json out = json::array();
    for (const json& item : value) out.push_back(Canonicalize(item));
    return out;
  }
  return value;
}

std::size_t CompletionCount(const json& response) {
  if (!response.is_object() || !response.contains("completions")) return 0;
  return response.at("completions").size();
}

}  // namespace

std::string RequestDigest(std::string_view endpoint, const json& request) {
  json params = Canonicalize(request.is_null() ? json::object() : request);
  if (endpoint == "complete" && params.is_object()) params.erase("k");
  // nlohmann::json objects iterate in key order, so dump() is canonical.
  return std::string(endpoint) + " " + params.dump();
}

FixtureStore::FixtureStore(FixtureStore&& other) noexcept {
  std::lock_guard lock(other.mu_);
  entries_ = std::move(other.entries_);
}

FixtureStore& FixtureStore::operator=(FixtureStore&& other) noexcept {
  if (this != &other) {
    std::scoped_lock lock(mu_, other.mu_);
    entries_ = std::move(other.entries_);
  }
  return *this;
}

FixtureStore FixtureStore::Load(const std::filesystem::path& path) {
  FixtureStore store;
  std::ifstream in(path, std::ios::binary);
  if (!in) return store;
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  if (!doc.is_object()) {
    throw ParseError(path.string(), 0, "fixture store must be a JSON object");
  }
  for (auto& [digest, response] : doc.items()) {
    store.entries_.emplace(digest, response);
  }
  return store;
}

std::optional<json> FixtureStore::Find(const std::string& digest) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(digest);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void FixtureStore::Put(const std::string& digest, json response) {
  std::lock_guard lock(mu_);
  entries_[digest] = std::move(response);
}

std::size_t FixtureStore::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::map<std::string, json> FixtureStore::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::string FixtureStore::Serialize() const {
  json doc = json::object();
  {
    std::lock_guard lock(mu_);
    for (const auto& [digest, response] : entries_) doc[digest] = response;
  }
  return doc.dump(2) + "\n";
}

void FixtureStore::Save(const std::filesystem::path& path) const {
  const std::string text = Serialize();
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io", "cannot write fixture store " + tmp.string());
    out << text;
    if (!out.flush()) throw Error("io", "failed writing fixture store " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error("io", "cannot replace fixture store " + path.string() + ": " +
                          ec.message());
  }
}

FixtureTransport::FixtureTransport(std::shared_ptr<FixtureStore> store,
                                   FixtureMode mode,
                                   std::shared_ptr<Transport> upstream,
                                   std::optional<std::filesystem::path> path)
    : store_(std::move(store)),
      mode_(mode),
      upstream_(std::move(upstream)),
      path_(std::move(path)) {
  if (!store_) throw ValidationError("fixture transport requires a store");
  if (mode_ != FixtureMode::kReplay && !upstream_) {
    throw ValidationError(std::string(FixtureModeName(mode_)) +
                          " mode requires an upstream backend");
  }
}

json FixtureTransport::Call(std::string_view endpoint, const json& request) {
  const std::string digest = RequestDigest(endpoint, request);
  if (mode_ == FixtureMode::kReplay) {
    if (auto hit = store_->Find(digest)) return *std::move(hit);
    throw ReplayMiss(digest);
  }
  json response = upstream_->Call(endpoint, request);
  if (mode_ == FixtureMode::kRecord) {
    // A longer completion list serves every shorter request; never shrink it.
    auto existing = store_->Find(digest);
    if (!existing || CompletionCount(*existing) <= CompletionCount(response)) {
      store_->Put(digest, response);
      if (path_) {
        std::lock_guard lock(save_mu_);
        store_->Save(*path_);
      }
    }
  }
  return response;
}

}  // namespace conceptual
