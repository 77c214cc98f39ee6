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

#include <iostream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cli_common.h"
#include "conceptual/error.h"

namespace {

using nlohmann::json;

int ReportError(std::string_view kind, const std::string& message, json extra = {}) {
  json err = {{"kind", kind}, {"message", message}};
  if (extra.is_object()) err.update(extra);
  std::cerr << json{{"error", err}}.dump() << "\n";
  return kind == "usage" ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace conceptual;
  spdlog::set_default_logger(spdlog::stderr_color_mt("conceptual"));

  CLI::App app{"Concept-level completion and concept-organization probing toolkit",
               "conceptual"};
  app.set_config("--config", "", "TOML file mirroring the command-line flags (flags win)");
  app.require_subcommand(1);
  app.fallthrough();
  cli::GlobalOptions global;
  cli::AddGlobalOptions(app, global);
  cli::RegisterComplete(app, global);
  cli::RegisterProbe(app, global);
  cli::RegisterEval(app, global);
  cli::RegisterFixtures(app, global);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return ReportError("usage", e.what());
  } catch (const ParseError& e) {
    return ReportError(e.kind(), e.what(), {{"source", e.source()}, {"line", e.line()}});
  } catch (const ReplayMiss& e) {
    return ReportError(e.kind(), e.what(), {{"digest", e.digest()}});
  } catch (const Error& e) {
    return ReportError(e.kind(), e.what());
  } catch (const std::exception& e) {
    return ReportError("internal", e.what());
  }
  return 0;
}
