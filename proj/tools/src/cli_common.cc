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

#include "cli_common.h"

#include <cstdlib>
#include <fstream>
#include <system_error>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "conceptual/data_io.h"
#include "conceptual/error.h"
#include "conceptual/http_transport.h"

namespace conceptual::cli {

using nlohmann::json;

void AddGlobalOptions(CLI::App& app, GlobalOptions& opts) {
  app.add_option("--backend", opts.backend_url, "Backend base URL, e.g. http://localhost:8000");
  app.add_option("--fixtures", opts.fixtures, "Fixture store JSON file");
  app.add_option("--mode", opts.mode, "Fixture mode")
      ->check(CLI::IsMember({"record", "replay", "passthrough"}, CLI::ignore_case));
  app.add_option("--seed", opts.seed, "Seed for every random choice");
  app.add_option("--out", opts.out, "Output directory");
  app.add_option("--log-level", opts.log_level, "trace, debug, info, warn, error or off");
  app.add_option("--timeout", opts.timeout_seconds, "Backend request timeout in seconds")
      ->check(CLI::PositiveNumber);
}

void ApplyLogLevel(const GlobalOptions& opts) {
  const auto level = spdlog::level::from_str(opts.log_level);
  if (level == spdlog::level::off && opts.log_level != "off") {
    throw ValidationError("unknown log level '" + opts.log_level + "'");
  }
  spdlog::set_level(level);
}

FixtureMode ResolveMode(const GlobalOptions& opts) {
  if (!opts.mode.empty()) return ParseFixtureMode(opts.mode);
  return opts.fixtures.empty() ? FixtureMode::kPassthrough : FixtureMode::kReplay;
}

std::unique_ptr<Backend> MakeBackend(const GlobalOptions& opts) {
  const FixtureMode mode = ResolveMode(opts);
  std::shared_ptr<Transport> upstream;
  if (!opts.backend_url.empty()) {
    const char* token = std::getenv(kBearerTokenEnv);
    upstream = std::make_shared<HttpTransport>(opts.backend_url, token ? token : "",
                                               opts.timeout_seconds);
  }
  if (opts.fixtures.empty()) {
    if (!upstream) throw ValidationError("either --backend or --fixtures is required");
    if (mode != FixtureMode::kPassthrough) {
      throw ValidationError("--mode record/replay needs --fixtures");
    }
    return std::make_unique<Backend>(upstream);
  }
  if (mode != FixtureMode::kReplay && !upstream) {
    throw ValidationError("--mode record/passthrough needs --backend");
  }
  const std::filesystem::path path(opts.fixtures);
  if (mode == FixtureMode::kReplay && !std::filesystem::exists(path)) {
    throw ValidationError("fixture store not found: " + path.string());
  }
  auto store = std::make_shared<FixtureStore>(FixtureStore::Load(path));
  std::optional<std::filesystem::path> save_path;
  if (mode == FixtureMode::kRecord) save_path = path;
  return std::make_unique<Backend>(
      std::make_shared<FixtureTransport>(store, mode, upstream, save_path));
}

json GlobalJson(const GlobalOptions& opts) {
  return {{"backend", opts.backend_url},
          {"fixtures", opts.fixtures},
          {"mode", FixtureModeName(ResolveMode(opts))},
          {"seed", opts.seed},
          {"out", opts.out}};
}

void OutputSet::Add(std::string name, std::string content) {
  files_[std::move(name)] = std::move(content);
}

void OutputSet::AddJson(std::string name, const json& doc) {
  Add(std::move(name), PrettyJson(doc));
}

std::vector<std::string> OutputSet::names() const {
  std::vector<std::string> out;
  for (const auto& [name, content] : files_) out.push_back(name);
  return out;
}

void OutputSet::Commit(const std::filesystem::path& dir, const json& run_config) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("io", "cannot create " + dir.string() + ": " + ec.message());
  std::map<std::string, std::string> all = files_;
  all["run_config.json"] = PrettyJson(run_config);
  for (const auto& [name, content] : all) {
    const std::filesystem::path target = dir / name;
    const std::filesystem::path tmp = dir / (name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("io", "cannot write " + tmp.string());
      out << content;
      if (!out.flush()) throw Error("io", "cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw Error("io", "cannot rename " + tmp.string() + ": " + ec.message());
  }
}

std::string PrettyJson(const json& doc) { return doc.dump(2) + "\n"; }

std::string Num(double value) { return fmt::format("{}", value); }

std::string CsvRow(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) line += ',';
    line += CsvField(fields[i]);
  }
  line += '\n';
  return line;
}

}  // namespace conceptual::cli
