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

#ifndef CONCEPTUAL_TOOLS_CLI_COMMON_H_
#define CONCEPTUAL_TOOLS_CLI_COMMON_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "conceptual/backend.h"
#include "conceptual/fixture_store.h"
#include "json.hpp"

namespace conceptual::cli {

// Options shared by every subcommand.
struct GlobalOptions {
  std::string backend_url;
  std::string fixtures;
  std::string mode;  // empty -> replay with fixtures, passthrough without
  std::uint64_t seed = 0;
  std::string out = "out";
  std::string log_level = "warn";
  int timeout_seconds = 120;
};

void AddGlobalOptions(CLI::App& app, GlobalOptions& opts);

// Applies --log-level to the default logger.
void ApplyLogLevel(const GlobalOptions& opts);

// Resolved fixture mode for the given options.
FixtureMode ResolveMode(const GlobalOptions& opts);

// Backend over fixtures and/or HTTP; the bearer token comes from the
// environment, never from flags or config files.
std::unique_ptr<Backend> MakeBackend(const GlobalOptions& opts);

nlohmann::json GlobalJson(const GlobalOptions& opts);

// Collects every output in memory and writes them together, so a failing run
// leaves no partial report behind.
class OutputSet {
 public:
  void Add(std::string name, std::string content);
  void AddJson(std::string name, const nlohmann::json& doc);
  // Writes all files plus run_config.json into `dir`.
  void Commit(const std::filesystem::path& dir, const nlohmann::json& run_config) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, std::string> files_;
};

// JSON text with two-space indent and a trailing newline.
std::string PrettyJson(const nlohmann::json& doc);

// Shortest round-trip decimal form.
std::string Num(double value);

// Comma-separated line terminated by '\n'.
std::string CsvRow(const std::vector<std::string>& fields);

void RegisterComplete(CLI::App& app, GlobalOptions& global);
void RegisterProbe(CLI::App& app, GlobalOptions& global);
void RegisterEval(CLI::App& app, GlobalOptions& global);
void RegisterFixtures(CLI::App& app, GlobalOptions& global);

}  // namespace conceptual::cli

#endif  // CONCEPTUAL_TOOLS_CLI_COMMON_H_
