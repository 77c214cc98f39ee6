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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Everything runs from the shipped fixtures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "conceptual/clustering.h"
#include "conceptual/completion_pipeline.h"
#include "conceptual/data_io.h"
#include "conceptual/embedding_space.h"
#include "conceptual/error.h"
#include "conceptual/evaluation.h"
#include "conceptual/isa_probe.h"
#include "json.hpp"
#include "support/oracles.h"
#include "support/test_backend.h"

namespace {

using namespace conceptual;
namespace fs = std::filesystem;
namespace t = conceptual::testing;
using nlohmann::json;

// Collects failures for one criterion.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void Near(double actual, double expected, double tol, const std::string& what) {
    if (!(std::abs(actual - expected) <= tol)) {
      std::ostringstream s;
      s.precision(17);
      s << what << ": got " << actual << ", want " << expected << " +- " << tol;
      failures_.push_back(s.str());
    }
  }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

int g_failed = 0;

void Criterion(const std::string& name, const std::function<void(Check&)>& body) {
  Check check;
  try {
    body(check);
  } catch (const std::exception& e) {
    check.Expect(false, std::string("exception: ") + e.what());
  }
  if (check.failures().empty()) {
    std::cout << "PASS  " << name << "\n";
    return;
  }
  ++g_failed;
  std::cout << "FAIL  " << name << " (" << check.failures().front();
  if (check.failures().size() > 1) std::cout << "; +" << check.failures().size() - 1 << " more";
  std::cout << ")\n";
}

Eigen::MatrixXd RandomMatrix(int n, int d, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = normal(rng);
  return m;
}

EmbeddingMatrix Labelled(Eigen::MatrixXd rows) {
  std::vector<std::string> labels;
  for (int i = 0; i < rows.rows(); ++i) labels.push_back("t" + std::to_string(i));
  return EmbeddingMatrix(std::move(rows), std::move(labels));
}

int RunCli(const std::vector<std::string>& args, const fs::path& scratch) {
  std::string cmd = "'" + t::CliPath().string() + "'";
  for (const std::string& a : args) cmd += " '" + a + "'";
  cmd += " >'" + (scratch / "stdout.txt").string() + "' 2>'" + (scratch / "stderr.txt").string() +
         "'";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string CsvHeader(const fs::path& path) {
  std::istringstream in(t::ReadFile(path));
  std::string line;
  std::getline(in, line);
  return line;
}

void ClusteringOracle(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  int instances = 0;
  for (unsigned seed = 0; seed < 200; ++seed) {
    const int n = 2 + static_cast<int>(seed % 7);
    const Eigen::MatrixXd x = RandomMatrix(n, 2 + static_cast<int>(seed % 5), seed);
    const Dendrogram d = Agglomerate(Labelled(x));
    const std::vector<Merge> oracle = t::BruteForceAverageLinkage(x);
    bool same = d.merges.size() == oracle.size();
    for (std::size_t s = 0; same && s < oracle.size(); ++s) {
      same = d.merges[s].left == oracle[s].left && d.merges[s].right == oracle[s].right &&
             d.merges[s].node == oracle[s].node &&
             std::abs(d.merges[s].distance - oracle[s].distance) <= 1e-12;
    }
    c.Expect(same, "merge sequence differs for seed " + std::to_string(seed));
    ++instances;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.Expect(instances >= 100, "fewer than 100 instances");
  c.Expect(seconds < 10.0, "oracle comparison took " + std::to_string(seconds) + " s");
}

void TsneNumerics(Check& c) {
  for (unsigned seed = 0; seed < 100; ++seed) {
    const int n = 12 + static_cast<int>(seed % 20);
    const double perplexity = 2.0 + (seed % 9);
    const Affinities a =
        CalibratePerplexity(SquaredEuclideanDistances(RandomMatrix(n, 5, 1000 + seed)), perplexity);
    for (int i = 0; i < n; ++i) {
      c.Near(t::RowEntropyBits(a.conditional.row(i), i), std::log2(perplexity), 1e-4,
             "entropy seed " + std::to_string(seed));
    }
  }

  const Affinities five = CalibratePerplexity(SquaredEuclideanDistances(RandomMatrix(5, 4, 7)), 2.0);
  const Eigen::MatrixXd y = RandomMatrix(5, 2, 8);
  Eigen::MatrixXd grad;
  TsneObjective(five.joint, y, 1.0, &grad);
  for (int i = 0; i < y.rows(); ++i) {
    for (int j = 0; j < y.cols(); ++j) {
      const double h = 1e-6;
      Eigen::MatrixXd plus = y, minus = y;
      plus(i, j) += h;
      minus(i, j) -= h;
      const double fd =
          (TsneObjective(five.joint, plus, 1.0) - TsneObjective(five.joint, minus, 1.0)) / (2 * h);
      c.Expect(std::abs(grad(i, j) - fd) / std::max(std::abs(fd), 1e-8) <= 1e-5,
               "gradient entry differs from central difference");
    }
  }

  ReductionConfig cfg;
  cfg.tsne_components = 2;
  cfg.perplexity = 5.0;
  for (unsigned seed = 0; seed < 20; ++seed) {
    const TsneResult r = TsneEmbed(Labelled(RandomMatrix(20, 6, 9 + seed)), cfg);
    for (std::size_t i = cfg.exaggeration_iters + 1; i < r.kl_trace.size(); ++i) {
      c.Expect(r.kl_trace[i] <= r.kl_trace[i - 1] + 1e-6,
               "KL rose at iteration " + std::to_string(i) + " of instance " +
                   std::to_string(seed));
    }
  }
  cfg.init = TsneInit::kRandom;
  cfg.seed = 17;
  const EmbeddingMatrix x = Labelled(RandomMatrix(20, 6, 9));
  const TsneResult a = TsneEmbed(x, cfg);
  const TsneResult b = TsneEmbed(x, cfg);
  c.Expect(a.embedding.rows() == b.embedding.rows() && a.kl_trace == b.kl_trace,
           "identical seeds gave different embeddings");
}

void PcaOracle(Check& c) {
  for (auto [n, d, k] : {std::tuple{6, 4, 2}, std::tuple{50, 20, 10}}) {
    const Eigen::MatrixXd x = RandomMatrix(n, d, static_cast<unsigned>(n));
    const PcaResult fit = PcaFit(Labelled(x), k);
    const t::OraclePca oracle = t::CovariancePca(x, k);
    c.Near((fit.projected.rows() - oracle.projected).cwiseAbs().maxCoeff(), 0.0, 1e-8,
           std::to_string(n) + "x" + std::to_string(d) + " projection");
  }
  Eigen::VectorXd dir(5);
  dir << 1, -2, 0.5, 3, 1;
  Eigen::MatrixXd x(7, 5);
  for (int i = 0; i < 7; ++i) x.row(i) = (i * 0.7 - 1.0) * dir.transpose();
  const PcaResult fit = PcaFit(Labelled(x), 1);
  const Eigen::MatrixXd rebuilt =
      fit.projected.rows() * fit.components + fit.mean.transpose().replicate(7, 1);
  c.Near((rebuilt - x).cwiseAbs().maxCoeff(), 0.0, 1e-12, "rank-1 reconstruction");
}

void PipelineGolden(Check& c) {
  const fs::path dir = t::ScratchDir("acceptance_golden");
  const std::string fixtures = t::DataPath("golden/parent_teacher.fixtures.json").string();
  const std::string sentence = "I went to the parent teacher conference with my [MASK].";
  for (const char* run : {"a", "b"}) {
    c.Expect(RunCli({"complete", sentence, "--fixtures", fixtures, "--out", (dir / run).string()},
                    dir) == 0,
             std::string("run ") + run + " failed: " + t::ReadFile(dir / "stderr.txt"));
  }
  const std::string a = t::ReadFile(dir / "a" / "concepts.json");
  c.Expect(!a.empty() && a == t::ReadFile(dir / "b" / "concepts.json"), "runs differ");
  c.Expect(json::parse(a) == json::parse(t::ReadFile(t::DataPath("golden/expected_concepts.json"))),
           "document differs from the checked-in golden copy");
  const json top = json::parse(a)["concepts"][0]["tokens"];
  for (const char* family : {"mom", "mother", "dad"}) {
    c.Expect(std::find(top.begin(), top.end(), family) != top.end(),
             std::string("rank-1 cluster lacks ") + family);
  }
}

void FilterAndWeightLaws(Check& c) {
  for (int m = 1; m <= 12; ++m) {
    c.Expect(FrequencyThreshold(m) == (m + 1) / 2, "threshold at m=" + std::to_string(m));
    std::vector<AggregatedCompletion> agg;
    for (int count = 1; count <= m; ++count) {
      agg.push_back({"t" + std::to_string(count), 0.1, count, static_cast<double>(count) / m});
    }
    for (const AggregatedCompletion& kept : FrequencyFilter(agg, m)) {
      c.Expect(2 * kept.occurrence_count >= m, "kept a token below ceil(m/2)");
    }
    c.Expect(FrequencyFilter(agg, m).size() == static_cast<std::size_t>(m - (m + 1) / 2 + 1),
             "survivor count at m=" + std::to_string(m));
  }
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<AggregatedCompletion> members;
    const int size = 1 + trial % 9;
    double max_score = 0.0, max_rep = 0.0;
    for (int i = 0; i < size; ++i) {
      const double s = u(rng), r = u(rng);
      members.push_back({"t" + std::to_string(i), s, 1, r});
      max_score = std::max(max_score, s);
      max_rep = std::max(max_rep, r);
    }
    const double alpha = u(rng);
    c.Near(ClusterWeight(members, alpha), alpha * max_score + (1 - alpha) * max_rep, 1e-12,
           "weight formula");
    c.Near(ClusterWeight(members), 0.7 * max_score + 0.3 * max_rep, 1e-12, "default alpha");
  }
  c.Expect(kDefaultAlpha == 0.7, "default alpha is not 0.7");
}

// Ten ETs with scripted completion lists. Expected metrics are enumerated
// straight from the lists, independently of the probe code.
void ProbeOracles(Check& c) {
  std::mt19937 rng(21);
  const int k = 5;
  std::ostringstream text;
  std::vector<OntologyEntry> entries;
  std::vector<std::string> vocabulary;
  for (int e = 0; e < 10; ++e) {
    OntologyEntry entry{"et" + std::to_string(e),
                        {"hyper" + std::to_string(e), "hyperb" + std::to_string(e)},
                        {"hypo" + std::to_string(e), "hypob" + std::to_string(e)}};
    text << json{{"et", entry.et}, {"hypernyms", entry.hypernyms}, {"hyponyms", entry.hyponyms}}
                .dump()
         << "\n";
    vocabulary.push_back(entry.et);
    vocabulary.insert(vocabulary.end(), entry.hypernyms.begin(), entry.hypernyms.end());
    vocabulary.insert(vocabulary.end(), entry.hyponyms.begin(), entry.hyponyms.end());
    entries.push_back(std::move(entry));
  }
  std::istringstream in(text.str());
  const Ontology ontology = ParseOntology(in, "synthetic");

  // Each list mixes a term's true relatives with random distractors, so
  // every relation lands inside the top k about half of the time.
  std::map<std::string, std::vector<std::string>> relatives;
  for (const auto& e : entries) {
    for (const std::string& h : e.hypernyms) {
      relatives[e.et].push_back(h);
      relatives[h].push_back(e.et);
    }
    for (const std::string& y : e.hyponyms) {
      relatives[y].push_back(e.et);
      relatives[y].insert(relatives[y].end(), e.hypernyms.begin(), e.hypernyms.end());
      relatives[e.et].push_back(y);
    }
  }
  std::map<std::string, std::vector<std::string>> isa, props;
  t::FixtureBuilder f;
  f.Describe(2);
  for (const std::string& term : vocabulary) {
    std::vector<std::string> list = relatives[term];
    std::vector<std::string> others = vocabulary;
    std::erase_if(others, [&](const std::string& o) {
      return o == term || std::find(list.begin(), list.end(), o) != list.end();
    });
    std::shuffle(others.begin(), others.end(), rng);
    list.insert(list.end(), others.begin(), others.begin() + (10 - list.size()));
    std::shuffle(list.begin(), list.end(), rng);
    isa[term] = list;
    f.CompleteTokens(MaskedIsAQuery(term), list);
    std::vector<std::string> p = {"fur", "wings", "scales", "feet", "wheels", "legs", "roots"};
    std::shuffle(p.begin(), p.end(), rng);
    props[term] = p;
    f.CompleteTokens(term + " has [MASK].", p);
  }
  std::vector<PropertyTriplet> triplets;
  for (const auto& e : entries) {
    for (const std::string& h : e.hypernyms) {
      triplets.push_back({h, "has", "fur", 0.95});
      triplets.push_back({h, "has", "wings", 0.93});
      triplets.push_back({h, "has", "roots", 0.5});  // below the saliency threshold
    }
  }
  auto hit = [&](const std::map<std::string, std::vector<std::string>>& lists,
                 const std::string& child, const std::string& answer) {
    const auto& l = lists.at(child);
    return std::find(l.begin(), l.begin() + std::min<std::size_t>(k, l.size()), answer) !=
           l.begin() + std::min<std::size_t>(k, l.size());
  };

  // Brute-force expectations.
  std::vector<IsARelation> retrieved;
  int asym_kept = 0;
  for (const auto& e : entries) {
    for (const std::string& h : e.hypernyms) {
      if (hit(isa, e.et, h)) {
        retrieved.push_back({e.et, h});
        asym_kept += hit(isa, h, e.et) ? 0 : 1;
      }
    }
  }
  int triples = 0, triple_hits = 0;
  std::set<std::string> triple_ets;
  for (const auto& e : entries) {
    for (const std::string& y : e.hyponyms) {
      if (!hit(isa, y, e.et)) continue;
      for (const std::string& h : e.hypernyms) {
        if (!hit(isa, e.et, h)) continue;
        ++triples;
        triple_ets.insert(e.et);
        triple_hits += hit(isa, y, h) ? 1 : 0;
      }
    }
  }
  t::InheritanceCounts want;
  for (const auto& e : entries) {
    for (const std::string& h : e.hypernyms) {
      for (const char* subject : {"fur", "wings"}) {
        if (!hit(props, h, subject)) continue;
        const bool et = hit(props, e.et, subject);
        ++want.et_total;
        want.et_believed += et ? 1 : 0;
        for (const std::string& y : e.hyponyms) {
          const bool yb = hit(props, y, subject);
          ++want.hypo_total;
          want.hypo_believed += yb ? 1 : 0;
          if (et) {
            ++want.cond_total;
            want.cond_believed += yb ? 1 : 0;
          }
        }
      }
    }
  }

  auto backend = f.Replay();
  IsAProber prober(*backend, ProbeMode::kMasked, 20);
  const auto got_retrieved = RetrievedRelations(ontology, prober, Direction::kHypernym, k);
  c.Expect(got_retrieved.size() == retrieved.size(), "retrieved relation count");
  c.Expect(!retrieved.empty() && triples > 0 && want.et_total > 0, "degenerate synthetic set");
  ProbeLog log;
  const double asym = AsymmetryScore(got_retrieved, prober, k, &log);
  c.Expect(asym == static_cast<double>(asym_kept) / retrieved.size(), "asymmetry");
  c.Expect(t::RecountAsymmetry(log) == asym, "asymmetry log recount");

  const auto got_triples = CollectTransitiveTriples(ontology, prober, k);
  ProbeLog tlog;
  const TransitivityResult tr = TransitivityScore(got_triples, prober, k, &tlog);
  c.Expect(tr.relation_count == triples, "transitivity relation count");
  c.Expect(tr.et_count == static_cast<int>(triple_ets.size()), "transitivity ET count");
  c.Expect(tr.mean_retrieval == static_cast<double>(triple_hits) / triples, "transitivity");
  int ets = 0, rels = 0;
  c.Expect(t::RecountTransitivity(tlog, &ets, &rels) == tr.mean_retrieval,
           "transitivity log recount");

  ProbeLog ilog;
  const InheritanceResult ir =
      InheritanceScores(ontology, triplets, prober, 0.9, TemplateSentenceBuilder(), k, &ilog);
  c.Expect(ir.et_total == want.et_total && ir.et_believed == want.et_believed, "m1 counts");
  c.Expect(ir.hypo_total == want.hypo_total && ir.hypo_believed == want.hypo_believed,
           "m2 counts");
  c.Expect(ir.hypo_given_et_total == want.cond_total &&
               ir.hypo_given_et_believed == want.cond_believed,
           "m3 counts");
  const t::InheritanceCounts recount = t::RecountInheritance(ilog);
  c.Expect(recount.et_believed == ir.et_believed && recount.hypo_believed == ir.hypo_believed &&
               recount.cond_believed == ir.hypo_given_et_believed,
           "inheritance log recount");

  for (Direction dir : {Direction::kHypernym, Direction::kHyponym}) {
    const auto curve = RetrievalCurve(ontology, prober, 20, dir);
    for (std::size_t i = 1; i < curve.size(); ++i) {
      c.Expect(curve[i].value >= curve[i - 1].value, "retrieval curve decreased");
    }
  }
}

void EvaluationOracles(Check& c) {
  const auto records = LoadAnnotations(t::DataPath("eval/annotations.csv"));
  const AnnotationIndex index(records);
  const auto rankings = LoadRankings(t::DataPath("eval/rankings.jsonl"));
  std::set<std::pair<std::string, std::string>> tokens;
  for (const auto& r : records) tokens.insert({r.sentence_id, r.token});
  c.Expect(rankings.size() == 2 && tokens.size() == 24, "synthetic set is not 2 x 12");

  // Hand values: tests/data/eval/hand_values.py.
  std::vector<RankedList> concepts, baseline;
  for (const auto& r : rankings) {
    concepts.push_back(r.concepts);
    baseline.push_back(r.baseline);
  }
  c.Near(ScoreAtK(concepts, index, 1), 0.75, 1e-12, "concept score@1");
  c.Near(ScoreAtK(baseline, index, 1), 1.0, 1e-12, "baseline score@1");
  c.Near(ScoreAtK(concepts, index, 2), 0.7916666666666666, 1e-12, "concept score@2");
  c.Near(ScoreAtK(baseline, index, 5), 0.55, 1e-12, "baseline score@5");

  std::vector<DisputeRecord> all;
  for (const auto& r : rankings) {
    const auto p = PartitionDisputes(r.baseline, r.concepts, 0.2);
    all.insert(all.end(), p.records.begin(), p.records.end());
  }
  const std::map<std::string, Zone> hand = {
      {"s1/lawyer", Zone::kConceptHighBaseLow}, {"s1/boss", Zone::kConceptHighBaseLow},
      {"s1/mom", Zone::kNeither},               {"s1/cousin", Zone::kNeither},
      {"s1/son", Zone::kBuffer},                {"s1/wife", Zone::kBuffer},
      {"s1/friend", Zone::kBaseHighConceptLow}, {"s1/aunt", Zone::kBaseHighConceptLow},
      {"s2/frog", Zone::kConceptHighBaseLow},   {"s2/mouse", Zone::kConceptHighBaseLow},
      {"s2/cat", Zone::kNeither},               {"s2/horse", Zone::kBuffer},
      {"s2/cow", Zone::kBuffer},                {"s2/sheep", Zone::kBuffer},
      {"s2/dog", Zone::kBaseHighConceptLow},    {"s2/bird", Zone::kBaseHighConceptLow}};
  c.Expect(all.size() == hand.size(), "zoned token count");
  for (const DisputeRecord& r : all) {
    const auto it = hand.find(r.sentence_id + "/" + r.token);
    c.Expect(it != hand.end() && it->second == r.zone, "zone of " + r.token);
  }

  const auto rows = DisputeScores(all, index);
  c.Expect(rows.size() == 3, "dispute row count");
  if (rows.size() == 3) {
    c.Near(rows[0].mean_score, 0.6875, 1e-12, "CHBL mean");
    c.Near(rows[0].normalized_score.value_or(99), -1.0 / 12.0, 1e-12, "CHBL normalized");
    c.Near(rows[1].mean_score, 0.75, 1e-12, "buffer mean");
    c.Near(rows[2].mean_score, 0.25, 1e-12, "BHCL mean");
    c.Near(rows[2].normalized_score.value_or(99), -25.0 / 48.0, 1e-12, "BHCL normalized");
  }

  const std::vector<double> four = {1.0, 0.5, 1.0, 0.0};
  c.Near(ComputeAccumulatedAccuracy(four).pearson_r, -std::sqrt(125.0 / 171.0), 1e-12,
         "4-point Pearson");
  c.Near(ComputeAccumulatedAccuracy(ScoresByRank(all, index, RankModel::kBaseline)).pearson_r,
         0.9421765818666714, 1e-12, "baseline accumulated Pearson");

  const std::vector<double> widths = {0.15, 0.2};
  const auto sweep = ThresholdSweep(rankings, index, widths);
  c.Expect(sweep.size() == 2, "sweep size");
  if (sweep.size() == 2) {
    c.Near(sweep[0].concept_high_mean.value_or(99), 0.7, 1e-12, "sweep concept @0.15");
    c.Near(sweep[0].base_high_mean.value_or(99), 0.35, 1e-12, "sweep baseline @0.15");
    c.Near(sweep[1].concept_high_mean.value_or(99), 0.6875, 1e-12, "sweep concept @0.20");
    c.Near(sweep[1].base_high_mean.value_or(99), 0.25, 1e-12, "sweep baseline @0.20");
  }

  for (int K : {1, 2, 10, 100}) {
    c.Expect(RelativeRank(1, K) == 1.0, "relative_rank(1, K) != 1");
    for (int r = 2; r <= K; ++r) {
      c.Expect(RelativeRank(r, K) < RelativeRank(r - 1, K), "relative_rank not decreasing");
    }
  }
  c.Near(RelativeRank(50, 100), 0.51, 1e-15, "relative_rank(50, 100)");
}

void ReportShapes(Check& c) {
  const fs::path dir = t::ScratchDir("acceptance_reports");
  const std::string fixtures = t::WriteSampleProbeFixtures(dir).string();
  const std::string ontology = t::DataPath("probe/sample_ontology.jsonl").string();
  c.Expect(RunCli({"probe", "inheritance", "--ontology", ontology, "--triplets",
                   t::DataPath("probe/sample_triplets.tsv").string(), "--fixtures", fixtures,
                   "--out", (dir / "inh").string()},
                  dir) == 0,
           "inheritance run failed");
  c.Expect(CsvHeader(dir / "inh" / "inheritance.csv") ==
               "r_hyper_to_et,r_hyper_to_hypo,r_hyper_to_hypo_given_et",
           "inheritance columns");
  c.Expect(RunCli({"probe", "transitivity", "--ontology", ontology, "--fixtures", fixtures,
                   "--out", (dir / "trans").string()},
                  dir) == 0,
           "transitivity run failed");
  c.Expect(CsvHeader(dir / "trans" / "transitivity.csv") == "mean_retrieval,n_ets,n_relations",
           "transitivity columns");
  c.Expect(RunCli({"eval", "dispute", "--rankings", t::DataPath("eval/rankings.jsonl").string(),
                   "--annotations", t::DataPath("eval/annotations.csv").string(),
                   "--buffer-width", "0.2", "--out", (dir / "dispute").string()},
                  dir) == 0,
           "dispute run failed");
  c.Expect(CsvHeader(dir / "dispute" / "dispute.csv") == "scenario,mean_score,norm_score",
           "dispute columns");
}

}  // namespace

int main() {
  Criterion("Clustering oracle: agglomerate equals brute-force average linkage (200 seeds, n<=8, <10 s)",
            ClusteringOracle);
  Criterion("t-SNE numerics: entropy 1e-4 x100, gradient 1e-5, KL non-increasing after exaggeration, determinism",
            TsneNumerics);
  Criterion("PCA oracle: 6x4 and 50x20 within 1e-8 of covariance eigendecomposition; rank-1 lossless",
            PcaOracle);
  Criterion("Pipeline golden run: byte-identical replays, matches shipped document, family cluster at rank 1",
            PipelineGolden);
  Criterion("Filter and weight laws: threshold ceil(m/2) for m in 1..12; weight formula within 1e-12, alpha 0.7",
            FilterAndWeightLaws);
  Criterion("Probe metric oracles: 10-ET synthetic ontology, brute-force counts, monotone curves",
            ProbeOracles);
  Criterion("Evaluation metric oracles: synthetic 2x12 set, hand values, zoning, Pearson 1e-12, relative rank",
            EvaluationOracles);
  Criterion("Report-shape conformance: inheritance, dispute and transitivity columns", ReportShapes);
  std::cout << (g_failed == 0 ? "all criteria passed" : std::to_string(g_failed) + " criteria failed")
            << "\n";
  return g_failed == 0 ? 0 : 1;
}
