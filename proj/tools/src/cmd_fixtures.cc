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

#include "cli_common.h"
#include "conceptual/error.h"
#include "conceptual/fixture_store.h"

namespace conceptual::cli {

namespace {

using nlohmann::json;

struct FixtureOptions {
  std::string endpoint;
  std::string request = "{}";
  std::string response;
};

json ParseJsonArg(const std::string& text, const std::string& what) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError(what + " is not valid JSON");
  return doc;
}

std::filesystem::path StorePath(const GlobalOptions& g) {
  if (g.fixtures.empty()) throw ValidationError("--fixtures is required");
  return g.fixtures;
}

}  // namespace

void RegisterFixtures(CLI::App& app, GlobalOptions& global) {
  auto o = std::make_shared<FixtureOptions>();
  CLI::App* fx = app.add_subcommand("fixtures", "Inspect and edit fixture stores");
  fx->require_subcommand(1);

  CLI::App* digest = fx->add_subcommand("digest", "Print the canonical digest of a request");
  digest->add_option("endpoint", o->endpoint, "complete, embed, ask, paraphrase or describe")
      ->required();
  digest->add_option("request", o->request, "Request parameters as JSON");
  digest->callback([o, &global] {
    ApplyLogLevel(global);
    std::cout << RequestDigest(o->endpoint, ParseJsonArg(o->request, "request")) << "\n";
  });

  CLI::App* list = fx->add_subcommand("list", "List the digests of a store");
  list->callback([&global] {
    ApplyLogLevel(global);
    const FixtureStore store = FixtureStore::Load(StorePath(global));
    for (const auto& [digest, response] : store.entries()) std::cout << digest << "\n";
  });

  CLI::App* put = fx->add_subcommand("put", "Insert or replace one recorded response");
  put->add_option("endpoint", o->endpoint, "Endpoint name")->required();
  put->add_option("request", o->request, "Request parameters as JSON")->required();
  put->add_option("response", o->response, "Response document as JSON")->required();
  put->callback([o, &global] {
    ApplyLogLevel(global);
    const auto path = StorePath(global);
    FixtureStore store = FixtureStore::Load(path);
    store.Put(RequestDigest(o->endpoint, ParseJsonArg(o->request, "request")),
              ParseJsonArg(o->response, "response"));
    store.Save(path);
  });

  CLI::App* normalize = fx->add_subcommand("normalize", "Rewrite a store in canonical form");
  normalize->callback([&global] {
    ApplyLogLevel(global);
    const auto path = StorePath(global);
    FixtureStore::Load(path).Save(path);
  });
}

}  // namespace conceptual::cli
