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

#ifndef CONCEPTUAL_EVALUATION_H_
#define CONCEPTUAL_EVALUATION_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace conceptual {

// One human judgement: 1 likely, 0.5 possible but unlikely, 0 nonsense.
struct AnnotationRecord {
  std::string sentence_id;
  std::string token;
  std::string annotator_id;
  double score = 0.0;
};

bool IsValidAnnotationScore(double score);

// Per-(sentence, token) aggregation of annotation records. Tokens are matched
// lowercased.
class AnnotationIndex {
 public:
  explicit AnnotationIndex(std::span<const AnnotationRecord> records);

  // Mean over annotators; nullopt when the token was never annotated.
  std::optional<double> TokenScore(std::string_view sentence_id,
                                   std::string_view token) const;

  // Mean over member tokens. Throws ValidationError naming every
  // unannotated member.
  double ItemScore(std::string_view sentence_id,
                   std::span<const std::string> tokens) const;

  // Mean over annotated items of the population variance of their scores.
  double MeanVariance() const;

  std::size_t item_count() const { return scores_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, std::vector<double>> scores_;
};

// Ordered items of one model's output for one sentence. Baseline items are
// single tokens; concept items are clusters. K is the list length.
struct RankedList {
  std::string sentence_id;
  std::vector<std::vector<std::string>> items;

  int K() const { return static_cast<int>(items.size()); }
  static RankedList FromTokens(std::string sentence_id, std::vector<std::string> tokens);
};

// Baseline and concept outputs for the same sentence.
struct SentenceRanking {
  std::string sentence_id;
  RankedList baseline;
  RankedList concepts;
};

// Context-free word vectors (word2vec text format).
class StaticEmbeddings {
 public:
  void Add(std::string token, Eigen::VectorXd vector);
  const Eigen::VectorXd* Find(std::string_view token) const;
  std::size_t size() const { return vectors_.size(); }

 private:
  std::unordered_map<std::string, Eigen::VectorXd> vectors_;
};

double CosineSimilarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct Coherence {
  double within = 0.0;  // mean over non-singleton clusters of mean pair similarity
  double inter = 0.0;   // mean similarity over token pairs from different clusters
  int skipped_tokens = 0;
};

// Out-of-vocabulary tokens are skipped. Throws ValidationError when no
// cluster keeps two in-vocabulary members.
Coherence ComputeCoherence(std::span<const std::vector<std::string>> clusters,
                           const StaticEmbeddings& embeddings);

// Mean pairwise similarity of a flat token list (the baseline reference).
double MeanPairwiseSimilarity(std::span<const std::string> tokens,
                              const StaticEmbeddings& embeddings);

// Mean item score over ranks 1..min(k, K), averaged over sentences.
double ScoreAtK(std::span<const RankedList> lists, const AnnotationIndex& annotations,
                int k);

// (K - rank + 1) / K: rank 1 maps to 1, rank K to 1/K.
double RelativeRank(int rank, int K);

enum class Zone { kConceptHighBaseLow, kBaseHighConceptLow, kBuffer, kNeither };

std::string_view ZoneName(Zone zone);

// Zone of a token given its two relative ranks and the buffer width.
Zone ClassifyZone(double rank_base, double rank_concept, double buffer_width);

struct DisputeRecord {
  std::string sentence_id;
  std::string token;
  double rank_base = 0.0;
  double rank_concept = 0.0;
  Zone zone = Zone::kNeither;
};

struct DisputePartition {
  std::vector<DisputeRecord> records;  // tokens ranked by both models
  std::vector<std::string> revealed;   // concept-only tokens
};

// Zones every token present in both lists; a concept token's rank is its
// cluster's rank.
DisputePartition PartitionDisputes(const RankedList& base, const RankedList& clusters,
                                   double buffer_width);

struct DisputeRow {
  Zone zone = Zone::kNeither;
  int count = 0;
  double mean_score = 0.0;
  // Mean over sentences of (zone mean - buffer mean); absent for the buffer
  // row and when no sentence has both.
  std::optional<double> normalized_score;
};

// Rows for CONCEPT_HIGH_BASE_LOW, BUFFER, BASE_HIGH_CONCEPT_LOW in that
// order; empty zones are omitted with a warning.
std::vector<DisputeRow> DisputeScores(std::span<const DisputeRecord> records,
                                      const AnnotationIndex& annotations);

struct AccumulatedAccuracy {
  std::vector<std::pair<int, double>> curve;  // (rank, running mean)
  double pearson_r = 0.0;
  double p_value = 1.0;  // two-sided, Student t with n-2 dof
};

// `scores` ordered best rank first; needs at least three.
AccumulatedAccuracy ComputeAccumulatedAccuracy(std::span<const double> scores);

enum class RankModel { kBaseline, kConcept };

// Annotation scores of the zoned (non-NEITHER) records, ordered by
// `model`'s relative rank, best first.
std::vector<double> ScoresByRank(std::span<const DisputeRecord> records,
                                 const AnnotationIndex& annotations, RankModel model);

struct SweepPoint {
  double width = 0.0;
  std::optional<double> concept_high_mean;  // CONCEPT_HIGH_BASE_LOW tokens
  std::optional<double> base_high_mean;     // BASE_HIGH_CONCEPT_LOW tokens
  int concept_high_count = 0;
  int base_high_count = 0;
};

// Mean accuracy of each model's high-zone disputed tokens per buffer width.
// Widths must be strictly increasing and lie in (0, 1].
std::vector<SweepPoint> ThresholdSweep(std::span<const SentenceRanking> rankings,
                                       const AnnotationIndex& annotations,
                                       std::span<const double> widths);

struct HeatmapCell {
  int base_bin = 0;
  int concept_bin = 0;
  int count = 0;
  double mean_score = 0.0;
};

// Mean annotation score over a bins x bins grid of (base, concept) relative
// ranks. Only non-empty cells are returned.
std::vector<HeatmapCell> DisputeHeatmap(std::span<const DisputeRecord> records,
                                        const AnnotationIndex& annotations, int bins);

}  // namespace conceptual

#endif  // CONCEPTUAL_EVALUATION_H_
