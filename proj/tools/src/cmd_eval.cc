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

#include <algorithm>
#include <iostream>

#include <spdlog/spdlog.h>

#include "cli_common.h"
#include "conceptual/data_io.h"
#include "conceptual/error.h"
#include "conceptual/evaluation.h"

namespace conceptual::cli {

namespace {

using nlohmann::json;

struct EvalOptions {
  std::vector<std::string> rankings;
  std::string annotations;
  std::string embeddings;
  int top_j = 10;
  int k = 10;
  double buffer_width = 0.15;
  int bins = 10;
  std::vector<double> widths = {0.10, 0.15, 0.20};
};

std::vector<SentenceRanking> LoadAllRankings(const EvalOptions& o) {
  std::vector<SentenceRanking> all;
  for (const std::string& path : o.rankings) {
    auto part = LoadRankings(path);
    all.insert(all.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  if (all.empty()) throw ValidationError("no rankings were loaded");
  return all;
}

void RequireBaselines(const std::vector<SentenceRanking>& rankings) {
  for (const SentenceRanking& r : rankings) {
    if (r.baseline.K() == 0) {
      throw ValidationError("ranking '" + r.sentence_id + "' has no baseline list");
    }
  }
}

json BaseConfig(const std::string& name, const EvalOptions& o, const GlobalOptions& g) {
  json c = GlobalJson(g);
  c["command"] = "eval " + name;
  c["eval"] = {{"rankings", o.rankings}};
  if (!o.annotations.empty()) c["eval"]["annotations"] = o.annotations;
  return c;
}

json OptionalNumber(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void RunCoherence(const EvalOptions& o, const GlobalOptions& g) {
  ApplyLogLevel(g);
  const auto rankings = LoadAllRankings(o);
  const StaticEmbeddings embeddings = LoadStaticEmbeddings(o.embeddings);
  std::string csv = CsvRow({"sentence_id", "within", "inter", "baseline"});
  double within = 0.0, inter = 0.0, baseline = 0.0;
  int baseline_n = 0, skipped = 0;
  for (const SentenceRanking& r : rankings) {
    const int j = std::min(o.top_j, r.concepts.K());
    const std::vector<std::vector<std::string>> top(r.concepts.items.begin(),
                                                    r.concepts.items.begin() + j);
    const Coherence c = ComputeCoherence(top, embeddings);
    within += c.within;
    inter += c.inter;
    skipped += c.skipped_tokens;
    std::string base_cell;
    if (r.baseline.K() > 0) {
      std::vector<std::string> tokens;
      for (int i = 0; i < std::min(o.top_j, r.baseline.K()); ++i) {
        tokens.push_back(r.baseline.items[i].front());
      }
      const double b = MeanPairwiseSimilarity(tokens, embeddings);
      baseline += b;
      ++baseline_n;
      base_cell = Num(b);
    }
    csv += CsvRow({r.sentence_id, Num(c.within), Num(c.inter), base_cell});
  }
  const double n = static_cast<double>(rankings.size());
  json report = {{"top_j", o.top_j},
                 {"sentences", rankings.size()},
                 {"within", within / n},
                 {"inter", inter / n},
                 {"baseline", baseline_n ? json(baseline / baseline_n) : json(nullptr)},
                 {"skipped_tokens", skipped}};
  OutputSet out;
  out.Add("coherence.csv", csv);
  out.AddJson("coherence_report.json", report);
  json cfg = BaseConfig("coherence", o, g);
  cfg["eval"]["embeddings"] = o.embeddings;
  cfg["eval"]["top_j"] = o.top_j;
  out.Commit(g.out, cfg);
  std::cout << "within\t" << Num(within / n) << "\ninter\t" << Num(inter / n) << "\n";
}

void RunScoreAtK(const EvalOptions& o, const GlobalOptions& g) {
  ApplyLogLevel(g);
  const auto rankings = LoadAllRankings(o);
  const auto records = LoadAnnotations(o.annotations);
  const AnnotationIndex index(records);
  std::vector<RankedList> concept_lists, baseline_lists;
  bool have_baseline = true;
  for (const SentenceRanking& r : rankings) {
    concept_lists.push_back(r.concepts);
    baseline_lists.push_back(r.baseline);
    have_baseline = have_baseline && r.baseline.K() > 0;
  }
  std::string csv = CsvRow({"k", "concept", "baseline"});
  json rows = json::array();
  for (int k = 1; k <= o.k; ++k) {
    const double c = ScoreAtK(concept_lists, index, k);
    std::optional<double> b;
    if (have_baseline) b = ScoreAtK(baseline_lists, index, k);
    csv += CsvRow({std::to_string(k), Num(c), b ? Num(*b) : std::string()});
    rows.push_back({{"k", k}, {"concept", c}, {"baseline", OptionalNumber(b)}});
  }
  OutputSet out;
  out.Add("score_at_k.csv", csv);
  out.AddJson("score_at_k_report.json", {{"k_max", o.k},
                                         {"sentences", rankings.size()},
                                         {"annotator_mean_variance", index.MeanVariance()},
                                         {"rows", rows}});
  json cfg = BaseConfig("score-at-k", o, g);
  cfg["eval"]["k"] = o.k;
  out.Commit(g.out, cfg);
  std::cout << "score@1\t" << Num(rows[0]["concept"].get<double>()) << "\n";
}

json AccuracyJson(const AccumulatedAccuracy& a) {
  return {{"pearson_r", a.pearson_r}, {"p_value", a.p_value}};
}

void RunDispute(const EvalOptions& o, const GlobalOptions& g) {
  ApplyLogLevel(g);
  const auto rankings = LoadAllRankings(o);
  RequireBaselines(rankings);
  const auto records = LoadAnnotations(o.annotations);
  const AnnotationIndex index(records);

  std::vector<DisputeRecord> all;
  json revealed = json::object();
  for (const SentenceRanking& r : rankings) {
    DisputePartition p = PartitionDisputes(r.baseline, r.concepts, o.buffer_width);
    revealed[r.sentence_id] = p.revealed;
    all.insert(all.end(), p.records.begin(), p.records.end());
  }
  const std::vector<DisputeRow> rows = DisputeScores(all, index);
  const auto base_scores = ScoresByRank(all, index, RankModel::kBaseline);
  const auto concept_scores = ScoresByRank(all, index, RankModel::kConcept);
  const AccumulatedAccuracy base_acc = ComputeAccumulatedAccuracy(base_scores);
  const AccumulatedAccuracy concept_acc = ComputeAccumulatedAccuracy(concept_scores);
  const auto heatmap = DisputeHeatmap(all, index, o.bins);

  std::string table = CsvRow({"scenario", "mean_score", "norm_score"});
  json row_json = json::array();
  for (const DisputeRow& row : rows) {
    table += CsvRow({std::string(ZoneName(row.zone)), Num(row.mean_score),
                     row.normalized_score ? Num(*row.normalized_score) : std::string()});
    row_json.push_back({{"scenario", ZoneName(row.zone)},
                        {"mean_score", row.mean_score},
                        {"norm_score", OptionalNumber(row.normalized_score)},
                        {"count", row.count}});
  }
  std::string curves = CsvRow({"rank", "baseline", "concept"});
  for (std::size_t i = 0; i < base_acc.curve.size(); ++i) {
    curves += CsvRow({std::to_string(base_acc.curve[i].first), Num(base_acc.curve[i].second),
                      Num(concept_acc.curve[i].second)});
  }
  std::string heat = CsvRow({"base_bin", "concept_bin", "count", "mean_score"});
  for (const HeatmapCell& c : heatmap) {
    heat += CsvRow({std::to_string(c.base_bin), std::to_string(c.concept_bin),
                    std::to_string(c.count), Num(c.mean_score)});
  }
  json zone_counts = json::object();
  for (const DisputeRecord& r : all) {
    const std::string name(ZoneName(r.zone));
    zone_counts[name] = zone_counts.value(name, 0) + 1;
  }

  OutputSet out;
  out.Add("dispute.csv", table);
  out.Add("accumulated_accuracy.csv", curves);
  out.Add("heatmap.csv", heat);
  out.AddJson("dispute_report.json", {{"buffer_width", o.buffer_width},
                                      {"rows", row_json},
                                      {"zone_counts", zone_counts},
                                      {"accumulated_accuracy",
                                       {{"baseline", AccuracyJson(base_acc)},
                                        {"concept", AccuracyJson(concept_acc)}}},
                                      {"revealed", revealed}});
  json cfg = BaseConfig("dispute", o, g);
  cfg["eval"]["buffer_width"] = o.buffer_width;
  cfg["eval"]["bins"] = o.bins;
  out.Commit(g.out, cfg);
  std::cout << table;
}

void RunSweep(const EvalOptions& o, const GlobalOptions& g) {
  ApplyLogLevel(g);
  const auto rankings = LoadAllRankings(o);
  RequireBaselines(rankings);
  const auto records = LoadAnnotations(o.annotations);
  const AnnotationIndex index(records);
  const std::vector<SweepPoint> points = ThresholdSweep(rankings, index, o.widths);

  std::string csv = CsvRow({"model", "width", "mean_score", "n_tokens"});
  json concept_json = json::array(), base_json = json::array();
  for (const SweepPoint& p : points) {
    if (p.concept_high_mean) {
      csv += CsvRow({"concept", Num(p.width), Num(*p.concept_high_mean),
                     std::to_string(p.concept_high_count)});
      concept_json.push_back({{"width", p.width},
                              {"mean_score", *p.concept_high_mean},
                              {"n_tokens", p.concept_high_count}});
    } else {
      spdlog::warn("concept high zone is empty at width {}; point omitted", p.width);
    }
  }
  for (const SweepPoint& p : points) {
    if (p.base_high_mean) {
      csv += CsvRow({"baseline", Num(p.width), Num(*p.base_high_mean),
                     std::to_string(p.base_high_count)});
      base_json.push_back({{"width", p.width},
                           {"mean_score", *p.base_high_mean},
                           {"n_tokens", p.base_high_count}});
    } else {
      spdlog::warn("baseline high zone is empty at width {}; point omitted", p.width);
    }
  }
  OutputSet out;
  out.Add("sweep.csv", csv);
  out.AddJson("sweep_report.json", {{"concept", concept_json}, {"baseline", base_json}});
  json cfg = BaseConfig("sweep", o, g);
  cfg["eval"]["widths"] = o.widths;
  out.Commit(g.out, cfg);
  std::cout << csv;
}

CLI::App* AddEval(CLI::App* parent, const std::string& name, const std::string& help,
                  EvalOptions& o, bool annotations) {
  CLI::App* cmd = parent->add_subcommand(name, help);
  cmd->add_option("--rankings", o.rankings, "Ranking files (pipeline output or JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);
  if (annotations) {
    cmd->add_option("--annotations", o.annotations, "Annotation CSV")
        ->required()
        ->check(CLI::ExistingFile);
  }
  return cmd;
}

}  // namespace

void RegisterEval(CLI::App& app, GlobalOptions& global) {
  auto o = std::make_shared<EvalOptions>();
  CLI::App* eval = app.add_subcommand("eval", "Evaluate concept rankings");
  eval->require_subcommand(1);

  CLI::App* coh = AddEval(eval, "coherence", "Within and inter cluster similarity", *o, false);
  coh->add_option("--embeddings", o->embeddings, "Static vectors in word2vec text format")
      ->required()
      ->check(CLI::ExistingFile);
  coh->add_option("--top-j", o->top_j, "Clusters per sentence")->check(CLI::PositiveNumber);
  coh->callback([o, &global] { RunCoherence(*o, global); });

  CLI::App* sak = AddEval(eval, "score-at-k", "Mean annotation score of the top k items", *o, true);
  sak->add_option("--k", o->k, "Largest k")->check(CLI::PositiveNumber);
  sak->callback([o, &global] { RunScoreAtK(*o, global); });

  CLI::App* dis = AddEval(eval, "dispute", "Scores of tokens the two rankings disagree on", *o, true);
  dis->add_option("--buffer-width", o->buffer_width, "Width of the agreement band")
      ->check(CLI::Range(0.0, 1.0));
  dis->add_option("--bins", o->bins, "Heatmap bins per axis")->check(CLI::PositiveNumber);
  dis->callback([o, &global] { RunDispute(*o, global); });

  CLI::App* sw = AddEval(eval, "sweep", "High-zone accuracy across buffer widths", *o, true);
  sw->add_option("--widths", o->widths, "Strictly increasing buffer widths")->delimiter(',');
  sw->callback([o, &global] { RunSweep(*o, global); });
}

}  // namespace conceptual::cli
