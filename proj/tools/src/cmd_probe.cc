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

#include <spdlog/spdlog.h>

#include "cli_common.h"
#include "conceptual/error.h"
#include "conceptual/isa_probe.h"

namespace conceptual::cli {

namespace {

using nlohmann::json;

struct ProbeOptions {
  std::string ontology;
  std::string mode = "masked";
  int k = kDefaultProbeK;
  int k_max = kDefaultProbeK;
  std::string triplets;
  std::string phrasebook;
  double saliency_threshold = kDefaultSaliencyThreshold;
  int per_type = 10;
};

json BaseConfig(const std::string& name, const ProbeOptions& o, const GlobalOptions& g) {
  json c = GlobalJson(g);
  c["command"] = "probe " + name;
  c["probe"] = {{"ontology", o.ontology}, {"probe_mode", o.mode}};
  return c;
}

json CurveJson(const std::vector<CurvePoint>& curve) {
  json out = json::array();
  for (const CurvePoint& p : curve) out.push_back({{"k", p.k}, {"value", p.value}});
  return out;
}

void RunIsa(const ProbeOptions& o, const GlobalOptions& g) {
  ApplyLogLevel(g);
  const Ontology ontology = LoadOntology(o.ontology);
  auto backend = MakeBackend(g);
  IsAProber prober(*backend, ParseProbeMode(o.mode), o.k_max);
  ProbeLog log;
  const auto hyper = RetrievalCurve(ontology, prober, o.k_max, Direction::kHypernym, &log);
  const auto hypo = RetrievalCurve(ontology, prober, o.k_max, Direction::kHyponym, &log);

  std::string csv = CsvRow({"k", "hypernym", "hyponym"});
  for (int k = 1; k <= o.k_max; ++k) {
    auto at = [k](const std::vector<CurvePoint>& c) {
      return c.empty() ? std::string() : Num(c[k - 1].value);
    };
    csv += CsvRow({std::to_string(k), at(hyper), at(hypo)});
  }
  OutputSet out;
  out.Add("isa_curve.csv", csv);
  out.AddJson("isa_report.json",
              {{"probe", "isa"},
               {"mode", o.mode},
               {"k_max", o.k_max},
               {"hypernym_relations", Relations(ontology, Direction::kHypernym).size()},
               {"hyponym_relations", Relations(ontology, Direction::kHyponym).size()},
               {"hypernym_curve", CurveJson(hyper)},
               {"hyponym_curve", CurveJson(hypo)}});
  out.AddJson("probe_log.json", ToJson(log));
  json cfg = BaseConfig("isa", o, g);
  cfg["probe"]["k_max"] = o.k_max;
  out.Commit(g.out, cfg);
  if (!hyper.empty()) std::cout << "hypernym@" << o.k_max << "\t" << Num(hyper.back().value) << "\n";
  if (!hypo.empty()) std::cout << "hyponym@" << o.k_max << "\t" << Num(hypo.back().value) << "\n";
}

void RunAsymmetry(const ProbeOptions& o, const GlobalOptions& g) {
  ApplyLogLevel(g);
  const Ontology ontology = LoadOntology(o.ontology);
  auto backend = MakeBackend(g);
  IsAProber prober(*backend, ParseProbeMode(o.mode), o.k);
  ProbeLog log;
  std::string csv = CsvRow({"direction", "n_relations", "asymmetry"});
  json rows = json::array();
  std::vector<IsARelation> all;
  for (Direction d : {Direction::kHypernym, Direction::kHyponym}) {
    std::vector<IsARelation> retrieved = RetrievedRelations(ontology, prober, d, o.k);
    all.insert(all.end(), retrieved.begin(), retrieved.end());
    if (retrieved.empty()) {
      spdlog::warn("no {} relation was retrieved; row omitted", DirectionName(d));
      continue;
    }
    const double score = AsymmetryScore(retrieved, prober, o.k);
    csv += CsvRow({std::string(DirectionName(d)), std::to_string(retrieved.size()), Num(score)});
    rows.push_back({{"direction", DirectionName(d)},
                    {"n_relations", retrieved.size()},
                    {"asymmetry", score}});
  }
  const double overall = AsymmetryScore(all, prober, o.k, &log);
  csv += CsvRow({"all", std::to_string(all.size()), Num(overall)});
  rows.push_back({{"direction", "all"}, {"n_relations", all.size()}, {"asymmetry", overall}});

  OutputSet out;
  out.Add("asymmetry.csv", csv);
  out.AddJson("asymmetry_report.json",
              {{"probe", "asymmetry"}, {"mode", o.mode}, {"k", o.k}, {"rows", rows}});
  out.AddJson("probe_log.json", ToJson(log));
  json cfg = BaseConfig("asymmetry", o, g);
  cfg["probe"]["k"] = o.k;
  out.Commit(g.out, cfg);
  std::cout << "asymmetry\t" << Num(overall) << "\n";
}

void RunTransitivity(const ProbeOptions& o, const GlobalOptions& g) {
  ApplyLogLevel(g);
  const Ontology ontology = LoadOntology(o.ontology);
  auto backend = MakeBackend(g);
  IsAProber prober(*backend, ParseProbeMode(o.mode), o.k);
  ProbeLog log;
  const auto triples = CollectTransitiveTriples(ontology, prober, o.k);
  const TransitivityResult r = TransitivityScore(triples, prober, o.k, &log);

  OutputSet out;
  out.Add("transitivity.csv",
          CsvRow({"mean_retrieval", "n_ets", "n_relations"}) +
              CsvRow({Num(r.mean_retrieval), std::to_string(r.et_count),
                      std::to_string(r.relation_count)}));
  out.AddJson("transitivity_report.json", {{"probe", "transitivity"},
                                           {"mode", o.mode},
                                           {"k", o.k},
                                           {"mean_retrieval", r.mean_retrieval},
                                           {"n_ets", r.et_count},
                                           {"n_relations", r.relation_count}});
  out.AddJson("probe_log.json", ToJson(log));
  json cfg = BaseConfig("transitivity", o, g);
  cfg["probe"]["k"] = o.k;
  out.Commit(g.out, cfg);
  std::cout << "transitivity\t" << Num(r.mean_retrieval) << "\t" << r.et_count << "\t"
            << r.relation_count << "\n";
}

void RunInheritance(const ProbeOptions& o, const GlobalOptions& g) {
  ApplyLogLevel(g);
  const Ontology ontology = LoadOntology(o.ontology);
  const std::vector<PropertyTriplet> triplets = LoadTriplets(o.triplets);
  const SentenceBuilder builder = o.phrasebook.empty()
                                      ? TemplateSentenceBuilder()
                                      : PhrasebookSentenceBuilder(LoadPhrasebook(o.phrasebook));
  auto backend = MakeBackend(g);
  IsAProber prober(*backend, ParseProbeMode(o.mode), o.k);
  ProbeLog log;
  const InheritanceResult r =
      InheritanceScores(ontology, triplets, prober, o.saliency_threshold, builder, o.k, &log);

  OutputSet out;
  out.Add("inheritance.csv",
          CsvRow({"r_hyper_to_et", "r_hyper_to_hypo", "r_hyper_to_hypo_given_et"}) +
              CsvRow({Num(r.hyper_to_et), Num(r.hyper_to_hypo), Num(r.hyper_to_hypo_given_et)}));
  out.AddJson("inheritance_report.json",
              {{"probe", "inheritance"},
               {"mode", o.mode},
               {"k", o.k},
               {"saliency_threshold", o.saliency_threshold},
               {"r_hyper_to_et", r.hyper_to_et},
               {"r_hyper_to_hypo", r.hyper_to_hypo},
               {"r_hyper_to_hypo_given_et", r.hyper_to_hypo_given_et},
               {"denominators",
                {{"et", r.et_total},
                 {"hypo", r.hypo_total},
                 {"hypo_given_et", r.hypo_given_et_total}}},
               {"believed",
                {{"et", r.et_believed},
                 {"hypo", r.hypo_believed},
                 {"hypo_given_et", r.hypo_given_et_believed}}},
               {"skipped", r.skipped}});
  out.AddJson("probe_log.json", ToJson(log));
  json cfg = BaseConfig("inheritance", o, g);
  cfg["probe"]["k"] = o.k;
  cfg["probe"]["triplets"] = o.triplets;
  cfg["probe"]["phrasebook"] = o.phrasebook;
  cfg["probe"]["saliency_threshold"] = o.saliency_threshold;
  out.Commit(g.out, cfg);
  std::cout << "inheritance\t" << Num(r.hyper_to_et) << "\t" << Num(r.hyper_to_hypo) << "\t"
            << Num(r.hyper_to_hypo_given_et) << "\n";
}

void RunNegatives(const ProbeOptions& o, const GlobalOptions& g) {
  ApplyLogLevel(g);
  const Ontology ontology = LoadOntology(o.ontology);
  std::string text;
  for (const std::string& q : GenerateNegativeQuestions(ontology, o.per_type, g.seed)) {
    text += q + "\n";
  }
  OutputSet out;
  out.Add("negatives.txt", text);
  json cfg = BaseConfig("negatives", o, g);
  cfg["probe"]["per_type"] = o.per_type;
  out.Commit(g.out, cfg);
  std::cout << text;
}

CLI::App* AddProbe(CLI::App* parent, const std::string& name, const std::string& help,
                   ProbeOptions& o) {
  CLI::App* cmd = parent->add_subcommand(name, help);
  cmd->add_option("--ontology", o.ontology, "Ontology JSON-lines file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--probe-mode", o.mode, "masked or binary")
      ->check(CLI::IsMember({"masked", "binary"}));
  return cmd;
}

}  // namespace

void RegisterProbe(CLI::App& app, GlobalOptions& global) {
  auto o = std::make_shared<ProbeOptions>();
  CLI::App* probe = app.add_subcommand("probe", "Concept-organization probes over an ontology");
  probe->require_subcommand(1);

  CLI::App* isa = AddProbe(probe, "isa", "Retrieval curve over k for is-a relations", *o);
  isa->add_option("--k-max", o->k_max, "Largest k of the curve")->check(CLI::PositiveNumber);
  isa->callback([o, &global] { RunIsa(*o, global); });

  CLI::App* asym = AddProbe(probe, "asymmetry", "Reverse queries of retrieved relations", *o);
  asym->add_option("--k", o->k, "Completion depth")->check(CLI::PositiveNumber);
  asym->callback([o, &global] { RunAsymmetry(*o, global); });

  CLI::App* trans = AddProbe(probe, "transitivity", "Hyponym to hypernym queries", *o);
  trans->add_option("--k", o->k, "Completion depth")->check(CLI::PositiveNumber);
  trans->callback([o, &global] { RunTransitivity(*o, global); });

  CLI::App* inh = AddProbe(probe, "inheritance", "Property inheritance down the hierarchy", *o);
  inh->add_option("--k", o->k, "Completion depth")->check(CLI::PositiveNumber);
  inh->add_option("--triplets", o->triplets, "Tab-separated property triplets")
      ->required()
      ->check(CLI::ExistingFile);
  inh->add_option("--phrasebook", o->phrasebook, "Tab-separated triplet phrasings")
      ->check(CLI::ExistingFile);
  inh->add_option("--saliency-threshold", o->saliency_threshold, "Minimum triplet saliency")
      ->check(CLI::Range(0.0, 1.0));
  inh->callback([o, &global] { RunInheritance(*o, global); });

  CLI::App* neg = AddProbe(probe, "negatives", "Generate distractor yes/no questions", *o);
  neg->add_option("--per-type", o->per_type, "Questions per distractor type")
      ->check(CLI::PositiveNumber);
  neg->callback([o, &global] { RunNegatives(*o, global); });
}

}  // namespace conceptual::cli
