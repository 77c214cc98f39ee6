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
#include "conceptual/completion_pipeline.h"
#include "conceptual/concept_completion.h"
#include "conceptual/error.h"

namespace conceptual::cli {

namespace {

using nlohmann::json;

struct CompleteOptions {
  std::string sentence;
  std::string id = "s0";
  std::string stopwords;
  std::string init = "pca";
  bool dump = false;
  ConceptCompletionConfig config;
};

json ConfigJson(const CompleteOptions& o, const std::string& stopwords) {
  const ReductionConfig& r = o.config.reduction;
  return {{"sentence", o.sentence},
          {"id", o.id},
          {"stopwords", stopwords},
          {"k", o.config.k},
          {"alpha", o.config.alpha},
          {"cut_threshold", o.config.cut_threshold},
          {"dump_intermediate", o.dump},
          {"reduction",
           {{"pca_components", r.pca_components},
            {"tsne_components", r.tsne_components},
            {"perplexity", r.perplexity},
            {"tsne_iters", r.tsne_iters},
            {"exaggeration_factor", r.exaggeration_factor},
            {"exaggeration_iters", r.exaggeration_iters},
            {"learning_rate", r.learning_rate},
            {"momentum", r.momentum},
            {"final_momentum", r.final_momentum},
            {"min_gain", r.min_gain},
            {"degrees_of_freedom", r.ResolvedDegreesOfFreedom()},
            {"init", o.init},
            {"seed", r.seed}}}};
}

void Run(CompleteOptions& o, const GlobalOptions& global) {
  ApplyLogLevel(global);
  o.config.reduction.seed = global.seed;
  o.config.reduction.init = o.init == "random" ? TsneInit::kRandom : TsneInit::kPca;
  const MaskedSentence sentence(o.id, o.sentence);
  const std::string stopwords_path =
      o.stopwords.empty() ? DefaultStopwordsPath().string() : o.stopwords;
  const StopwordSet stopwords = LoadStopwords(stopwords_path);
  auto backend = MakeBackend(global);

  PipelineTrace trace;
  const ConceptDocument doc =
      RunConceptCompletion(sentence, *backend, stopwords, o.config, o.dump ? &trace : nullptr);

  OutputSet outputs;
  outputs.AddJson("concepts.json", ToJson(doc));
  if (o.dump) {
    outputs.AddJson("intermediate.json", ToJson(trace));
    outputs.Add("contextual.csv", trace.contextual.ToCsv());
    outputs.Add("reduced.csv", trace.reduced.ToCsv());
  }
  json run_config = GlobalJson(global);
  run_config["command"] = "complete";
  run_config["complete"] = ConfigJson(o, stopwords_path);
  outputs.Commit(global.out, run_config);

  for (const ConceptCluster& c : doc.concepts) {
    std::cout << c.rank << "\t" << Num(c.weight) << "\t" << c.centroid << "\t";
    for (std::size_t i = 0; i < c.tokens.size(); ++i) {
      std::cout << (i ? " " : "") << c.tokens[i];
    }
    std::cout << "\n";
  }
}

}  // namespace

void RegisterComplete(CLI::App& app, GlobalOptions& global) {
  auto opts = std::make_shared<CompleteOptions>();
  CLI::App* cmd = app.add_subcommand("complete", "Rank concept-level completions for a masked sentence");
  cmd->add_option("sentence", opts->sentence, "Sentence with one [MASK] marker")->required();
  cmd->add_option("--id", opts->id, "Sentence identifier");
  cmd->add_option("--stopwords", opts->stopwords, "Stopword list (default: bundled English list)");
  cmd->add_option("--k", opts->config.k, "Completions retrieved per sentence")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", opts->config.alpha, "Weight of max score against repetition")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--cut-threshold", opts->config.cut_threshold, "Dendrogram cut distance")
      ->check(CLI::NonNegativeNumber);
  ReductionConfig& r = opts->config.reduction;
  cmd->add_option("--perplexity", r.perplexity, "t-SNE perplexity")->check(CLI::PositiveNumber);
  cmd->add_option("--pca-components", r.pca_components, "PCA output dimension");
  cmd->add_option("--tsne-components", r.tsne_components, "t-SNE output dimension");
  cmd->add_option("--tsne-iters", r.tsne_iters, "t-SNE iterations");
  cmd->add_option("--learning-rate", r.learning_rate, "t-SNE learning rate");
  cmd->add_option("--exaggeration", r.exaggeration_factor, "Early exaggeration factor");
  cmd->add_option("--exaggeration-iters", r.exaggeration_iters, "Early exaggeration iterations");
  cmd->add_option("--dof", r.degrees_of_freedom,
                  "Student-t degrees of freedom (<= 0: max(components - 1, 1))");
  cmd->add_option("--init", opts->init, "t-SNE initialization")
      ->check(CLI::IsMember({"pca", "random"}));
  cmd->add_flag("--dump-intermediate", opts->dump,
                "Also write intermediate.json, contextual.csv and reduced.csv");
  cmd->callback([opts, &global] { Run(*opts, global); });
}

}  // namespace conceptual::cli
