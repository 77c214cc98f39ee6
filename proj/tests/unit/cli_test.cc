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

// End-to-end runs of the command-line binary against fixture stores.

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "support/test_backend.h"

namespace conceptual {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::DataPath;
using testing::ReadFile;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string Quote(const std::string& arg) {
  std::string q = "'";
  for (char c : arg) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

RunResult RunCli(const fs::path& scratch, const std::vector<std::string>& args) {
  std::string cmd = Quote(testing::CliPath().string());
  for (const std::string& a : args) cmd += " " + Quote(a);
  const fs::path out = scratch / "stdout.txt", err = scratch / "stderr.txt";
  cmd += " >" + Quote(out.string()) + " 2>" + Quote(err.string());
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = ReadFile(out);
  r.err = ReadFile(err);
  return r;
}

std::vector<std::vector<std::string>> CsvRows(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(ReadFile(path));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

const char kSentence[] = "I went to the parent teacher conference with my [MASK].";

TEST(CliTest, CompleteGoldenIsByteIdenticalAcrossRuns) {
  const fs::path dir = testing::ScratchDir("cli_complete");
  const std::string fixtures = DataPath("golden/parent_teacher.fixtures.json").string();
  const RunResult a = RunCli(dir, {"complete", kSentence, "--fixtures", fixtures, "--out",
                                (dir / "a").string()});
  ASSERT_EQ(a.exit_code, 0) << a.err;
  const RunResult b = RunCli(dir, {"complete", kSentence, "--fixtures", fixtures, "--out",
                                (dir / "b").string()});
  ASSERT_EQ(b.exit_code, 0) << b.err;
  const std::string doc = ReadFile(dir / "a" / "concepts.json");
  EXPECT_EQ(doc, ReadFile(dir / "b" / "concepts.json"));
  EXPECT_EQ(json::parse(doc),
            json::parse(ReadFile(DataPath("golden/expected_concepts.json"))));
  const json top = json::parse(doc)["concepts"][0]["tokens"];
  for (const char* t : {"mom", "mother", "dad"}) {
    EXPECT_NE(std::find(top.begin(), top.end(), t), top.end()) << t;
  }
  const json cfg = json::parse(ReadFile(dir / "a" / "run_config.json"));
  EXPECT_EQ(cfg["complete"]["k"], 100);
  EXPECT_EQ(cfg["complete"]["alpha"], 0.7);
  EXPECT_EQ(cfg["complete"]["cut_threshold"], 0.45);
  EXPECT_EQ(cfg["complete"]["reduction"]["perplexity"], 10.0);
  EXPECT_EQ(cfg["mode"], "replay");
}

TEST(CliTest, CompleteIntermediateDump) {
  const fs::path dir = testing::ScratchDir("cli_dump");
  const RunResult r =
      RunCli(dir, {"complete", kSentence, "--fixtures",
                DataPath("golden/parent_teacher.fixtures.json").string(), "--out",
                (dir / "o").string(), "--dump-intermediate"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  for (const char* f : {"intermediate.json", "contextual.csv", "reduced.csv"}) {
    EXPECT_TRUE(fs::exists(dir / "o" / f)) << f;
  }
  const auto reduced = CsvRows(dir / "o" / "reduced.csv");
  ASSERT_FALSE(reduced.empty());
  EXPECT_EQ(reduced[0][0], "token");
  EXPECT_EQ(reduced[0].size(), 11u);
}

TEST(CliTest, ConfigFileAndFlagPrecedence) {
  const fs::path dir = testing::ScratchDir("cli_config");
  std::ofstream(dir / "run.toml") << "[complete]\nalpha = 0.5\ncut-threshold = 0.3\n";
  const std::string fixtures = DataPath("golden/parent_teacher.fixtures.json").string();
  const RunResult r = RunCli(dir, {"--config", (dir / "run.toml").string(), "complete", kSentence,
                                "--fixtures", fixtures, "--out", (dir / "o").string(),
                                "--alpha", "0.6"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json cfg = json::parse(ReadFile(dir / "o" / "run_config.json"));
  EXPECT_EQ(cfg["complete"]["alpha"], 0.6);
  EXPECT_EQ(cfg["complete"]["cut_threshold"], 0.3);
}

TEST(CliTest, MissingMaskFailsWithJsonError) {
  const fs::path dir = testing::ScratchDir("cli_nomask");
  const RunResult r = RunCli(dir, {"complete", "No marker here.", "--fixtures",
                                DataPath("golden/parent_teacher.fixtures.json").string(),
                                "--out", (dir / "o").string()});
  EXPECT_NE(r.exit_code, 0);
  const json err = json::parse(r.err.substr(r.err.rfind("{\"error\"")));
  EXPECT_EQ(err["error"]["kind"], "validation");
  EXPECT_FALSE(fs::exists(dir / "o"));
}

TEST(CliTest, ReplayMissNamesTheDigest) {
  const fs::path dir = testing::ScratchDir("cli_miss");
  const RunResult r = RunCli(dir, {"complete", "A brand new [MASK].", "--fixtures",
                                DataPath("golden/parent_teacher.fixtures.json").string(),
                                "--out", (dir / "o").string()});
  EXPECT_EQ(r.exit_code, 1);
  const json err = json::parse(r.err.substr(r.err.rfind("{\"error\"")));
  EXPECT_EQ(err["error"]["kind"], "replay_miss");
  EXPECT_TRUE(err["error"].contains("digest"));
  EXPECT_FALSE(fs::exists(dir / "o"));
}

TEST(CliTest, UsageErrorsExitTwo) {
  const fs::path dir = testing::ScratchDir("cli_usage");
  const RunResult r = RunCli(dir, {"complete", kSentence, "--k", "zero"});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("\"usage\""), std::string::npos);
  EXPECT_EQ(RunCli(dir, {"--help"}).exit_code, 0);
}

TEST(CliTest, IsaCurveHasKMaxRows) {
  const fs::path dir = testing::ScratchDir("cli_isa");
  const RunResult r =
      RunCli(dir, {"probe", "isa", "--ontology", DataPath("probe/sample_ontology.jsonl").string(),
                "--fixtures", testing::WriteSampleProbeFixtures(dir).string(), "--k-max", "12", "--out",
                (dir / "o").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto rows = CsvRows(dir / "o" / "isa_curve.csv");
  ASSERT_EQ(rows.size(), 13u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"k", "hypernym", "hyponym"}));
  EXPECT_EQ(rows[1][0], "1");
  EXPECT_EQ(rows[12][0], "12");
  // shoe->footwear at rank 1, dog->canine at 4, dog->domestic animal never: 1/3 then 2/3.
  EXPECT_DOUBLE_EQ(std::stod(rows[1][1]), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(std::stod(rows[4][1]), 2.0 / 3.0);
  EXPECT_TRUE(fs::exists(dir / "o" / "probe_log.json"));
  EXPECT_TRUE(fs::exists(dir / "o" / "isa_report.json"));
}

TEST(CliTest, InheritanceRowHasThreeMetrics) {
  const fs::path dir = testing::ScratchDir("cli_inheritance");
  const RunResult r = RunCli(
      dir, {"probe", "inheritance", "--ontology",
            DataPath("probe/sample_ontology.jsonl").string(), "--triplets",
            DataPath("probe/sample_triplets.tsv").string(), "--saliency-threshold", "0.9",
            "--fixtures", testing::WriteSampleProbeFixtures(dir).string(), "--out", (dir / "o").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto rows = CsvRows(dir / "o" / "inheritance.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"r_hyper_to_et", "r_hyper_to_hypo",
                                               "r_hyper_to_hypo_given_et"}));
  ASSERT_EQ(rows[1].size(), 3u);
  // footwear: protects feet (ET and all 4 hyponyms believe it), made of
  // leather (nobody else does); canine has fur (dog and 3 hyponyms).
  EXPECT_DOUBLE_EQ(std::stod(rows[1][0]), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(std::stod(rows[1][1]), 7.0 / 11.0);
  EXPECT_DOUBLE_EQ(std::stod(rows[1][2]), 1.0);
  const json report = json::parse(ReadFile(dir / "o" / "inheritance_report.json"));
  EXPECT_TRUE(report.contains("denominators"));
}

TEST(CliTest, MissingInputLeavesNoPartialReport) {
  const fs::path dir = testing::ScratchDir("cli_missing");
  const RunResult r = RunCli(dir, {"probe", "isa", "--ontology", (dir / "absent.jsonl").string(),
                                "--fixtures", testing::WriteSampleProbeFixtures(dir).string(), "--out",
                                (dir / "o").string()});
  EXPECT_NE(r.exit_code, 0);
  EXPECT_FALSE(fs::exists(dir / "o"));
  const RunResult e = RunCli(dir, {"eval", "dispute", "--rankings",
                                DataPath("eval/rankings.jsonl").string(), "--annotations",
                                (dir / "absent.csv").string(), "--out", (dir / "e").string()});
  EXPECT_NE(e.exit_code, 0);
  EXPECT_FALSE(fs::exists(dir / "e"));
}

TEST(CliTest, BadInputReportsFileAndLine) {
  const fs::path dir = testing::ScratchDir("cli_badline");
  std::ofstream(dir / "bad.csv") << "sentence_id,token,annotator_id,score\ns1,mom,a1,1\ns1,dad,a1,2\n";
  const RunResult r = RunCli(dir, {"eval", "score-at-k", "--rankings",
                                DataPath("eval/rankings.jsonl").string(), "--annotations",
                                (dir / "bad.csv").string(), "--out", (dir / "o").string()});
  EXPECT_EQ(r.exit_code, 1);
  const json err = json::parse(r.err.substr(r.err.rfind("{\"error\"")));
  EXPECT_EQ(err["error"]["kind"], "parse");
  EXPECT_EQ(err["error"]["line"], 3);
  EXPECT_FALSE(fs::exists(dir / "o"));
}

std::vector<std::string> EvalArgs(const std::string& sub, const fs::path& out) {
  return {"eval", sub, "--rankings", DataPath("eval/rankings.jsonl").string(), "--annotations",
          DataPath("eval/annotations.csv").string(), "--out", out.string()};
}

TEST(CliTest, ScoreAtKHasTenRows) {
  const fs::path dir = testing::ScratchDir("cli_sak");
  auto args = EvalArgs("score-at-k", dir / "o");
  args.insert(args.end(), {"--k", "10"});
  const RunResult r = RunCli(dir, args);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto rows = CsvRows(dir / "o" / "score_at_k.csv");
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"k", "concept", "baseline"}));
  EXPECT_DOUBLE_EQ(std::stod(rows[1][1]), 0.75);
  EXPECT_DOUBLE_EQ(std::stod(rows[1][2]), 1.0);
  EXPECT_NEAR(std::stod(rows[2][1]), 0.7916666666666666, 1e-12);
  const json report = json::parse(ReadFile(dir / "o" / "score_at_k_report.json"));
  EXPECT_DOUBLE_EQ(report["annotator_mean_variance"].get<double>(), 0.03125);
}

TEST(CliTest, DisputeTableMatchesHandRows) {
  const fs::path dir = testing::ScratchDir("cli_dispute");
  auto args = EvalArgs("dispute", dir / "o");
  args.insert(args.end(), {"--buffer-width", "0.2"});
  const RunResult r = RunCli(dir, args);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto rows = CsvRows(dir / "o" / "dispute.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"scenario", "mean_score", "norm_score"}));
  EXPECT_EQ(rows[1][0], "CONCEPT_HIGH_BASE_LOW");
  EXPECT_NEAR(std::stod(rows[1][1]), 0.6875, 1e-12);
  EXPECT_NEAR(std::stod(rows[1][2]), -0.08333333333333331, 1e-12);
  EXPECT_EQ(rows[2][0], "BUFFER");
  EXPECT_NEAR(std::stod(rows[2][1]), 0.75, 1e-12);
  EXPECT_EQ(rows[2][2], "");
  EXPECT_EQ(rows[3][0], "BASE_HIGH_CONCEPT_LOW");
  EXPECT_NEAR(std::stod(rows[3][1]), 0.25, 1e-12);
  EXPECT_NEAR(std::stod(rows[3][2]), -0.5208333333333333, 1e-12);
  const json report = json::parse(ReadFile(dir / "o" / "dispute_report.json"));
  EXPECT_NEAR(report["accumulated_accuracy"]["baseline"]["pearson_r"].get<double>(),
              0.9421765818666714, 1e-12);
  EXPECT_EQ(report["revealed"]["s1"], json({"husband", "neighbor"}));
  EXPECT_EQ(CsvRows(dir / "o" / "accumulated_accuracy.csv").size(), 14u);
  EXPECT_TRUE(fs::exists(dir / "o" / "heatmap.csv"));
}

TEST(CliTest, SweepHasThreePointsPerModel) {
  const fs::path dir = testing::ScratchDir("cli_sweep");
  auto args = EvalArgs("sweep", dir / "o");
  args.insert(args.end(), {"--widths", "0.10,0.15,0.20"});
  const RunResult r = RunCli(dir, args);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto rows = CsvRows(dir / "o" / "sweep.csv");
  ASSERT_EQ(rows.size(), 7u);
  int concept_rows = 0, baseline_rows = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    (rows[i][0] == "concept" ? concept_rows : baseline_rows) += 1;
  }
  EXPECT_EQ(concept_rows, 3);
  EXPECT_EQ(baseline_rows, 3);
  EXPECT_NEAR(std::stod(rows[3][2]), 0.6875, 1e-12);  // concept at 0.20
  EXPECT_NEAR(std::stod(rows[4][2]), 0.35, 1e-12);    // baseline at 0.10
}

TEST(CliTest, CoherenceWithStaticVectors) {
  const fs::path dir = testing::ScratchDir("cli_coherence");
  std::ofstream vec(dir / "vectors.txt");
  vec << "lawyer 1 0\nhusband 1 0.1\nboss 0 1\nmom 0.1 1\ncousin 0 1\n"
         "frog 1 1\nlion 1 1\nmouse 1 -1\ncat 1 -1\ndad 0.5 1\ndog 1 -0.5\n";
  vec.close();
  const RunResult r =
      RunCli(dir, {"eval", "coherence", "--rankings", DataPath("eval/rankings.jsonl").string(),
                "--embeddings", (dir / "vectors.txt").string(), "--top-j", "2", "--out",
                (dir / "o").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto rows = CsvRows(dir / "o" / "coherence.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"sentence_id", "within", "inter", "baseline"}));
  EXPECT_GT(std::stod(rows[1][1]), std::stod(rows[1][2]));
}

TEST(CliTest, FixturesDigestIsCanonical) {
  const fs::path dir = testing::ScratchDir("cli_digest");
  const RunResult r = RunCli(dir, {"fixtures", "digest", "complete",
                                R"({"sentence": "My  [MASK] came.", "k": 5})"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out, "complete {\"sentence\":\"My [MASK] came.\"}\n");
}

TEST(CliTest, InputsAreNotModified) {
  const fs::path dir = testing::ScratchDir("cli_inputs");
  const fs::path fixtures = DataPath("golden/parent_teacher.fixtures.json");
  const std::string before = ReadFile(fixtures);
  const auto stamp = fs::last_write_time(fixtures);
  ASSERT_EQ(RunCli(dir, {"complete", kSentence, "--fixtures", fixtures.string(), "--out",
                      (dir / "o").string()})
                .exit_code,
            0);
  EXPECT_EQ(ReadFile(fixtures), before);
  EXPECT_EQ(fs::last_write_time(fixtures), stamp);
}

}  // namespace
}  // namespace conceptual
