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

#include "conceptual/concept_completion.h"

#include <map>

#include <spdlog/spdlog.h>

#include "conceptual/error.h"
#include "conceptual/text.h"

namespace conceptual {

using nlohmann::json;

namespace {

std::vector<AggregatedCompletion> MembersOf(
    const std::vector<int>& leaves,
    const std::vector<AggregatedCompletion>& kept) {
  std::vector<AggregatedCompletion> out;
  out.reserve(leaves.size());
  for (int leaf : leaves) out.push_back(kept[leaf]);
  return out;
}

double MaxRepNorm(const std::vector<AggregatedCompletion>& members) {
  double best = 0.0;
  for (const auto& m : members) best = std::max(best, m.rep_norm);
  return best;
}

}  // namespace

ConceptDocument RunConceptCompletion(const MaskedSentence& sentence,
                                     Backend& backend,
                                     const StopwordSet& stopwords,
                                     const ConceptCompletionConfig& config,
                                     PipelineTrace* trace) {
  config.reduction.Validate();
  if (!(config.cut_threshold >= 0.0)) throw ValidationError("cut threshold must be >= 0");
  if (!(config.alpha >= 0.0 && config.alpha <= 1.0)) {
    throw ValidationError("alpha must lie in [0, 1]");
  }

  AugmentationSet aug = BuildAugmentations(sentence, backend, config.k, stopwords);
  spdlog::info("seed '{}', {} sentences ({} paraphrases dropped)", aug.seed_token,
               aug.m(), aug.dropped.size());
  std::vector<AggregatedCompletion> aggregated =
      AggregateCompletions(aug, backend, config.k);
  std::vector<AggregatedCompletion> kept = FrequencyFilter(aggregated, aug.m());
  spdlog::info("{} distinct completions, {} kept at threshold {}",
               aggregated.size(), kept.size(), FrequencyThreshold(aug.m()));
  if (kept.empty()) throw ValidationError("no completion survived the frequency filter");

  const int dim = backend.Describe().embedding_dim;
  Eigen::MatrixXd raw(static_cast<Eigen::Index>(kept.size()), dim);
  std::vector<std::string> labels;
  labels.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const EmbeddingVector v = backend.ContextualEmbedding(sentence, kept[i].token);
    raw.row(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::RowVectorXd>(v.values.data(), v.dim());
    labels.push_back(kept[i].token);
  }
  EmbeddingMatrix contextual(std::move(raw), labels);

  ConceptDocument doc;
  doc.sentence_id = sentence.id();
  doc.sentence = sentence.text();
  doc.seed_token = aug.seed_token;
  doc.m = aug.m();
  for (const TokenCompletion& c : backend.TopKCompletions(sentence, config.k)) {
    doc.baseline.push_back(ToLower(c.token));
  }

  EmbeddingMatrix reduced;
  std::vector<std::vector<int>> flat;
  if (kept.size() == 1) {
    reduced = contextual;
    flat = {{0}};
    doc.dendrogram.leaf_labels = labels;
  } else {
    reduced = ReduceEmbeddings(contextual, config.reduction);
    doc.dendrogram = Agglomerate(reduced);
    flat = CutThresholdIndices(doc.dendrogram, config.cut_threshold);
  }

  for (const Merge& m : doc.dendrogram.merges) {
    doc.node_weights.push_back(
        ClusterWeight(MembersOf(doc.dendrogram.Leaves(m.node), kept), config.alpha));
  }

  std::vector<ConceptCluster> clusters;
  for (const std::vector<int>& leaves : flat) {
    const std::vector<AggregatedCompletion> members = MembersOf(leaves, kept);
    ConceptCluster c;
    for (const auto& member : members) c.tokens.push_back(member.token);
    c.weight = ClusterWeight(members, config.alpha);
    c.max_rep_norm = MaxRepNorm(members);
    c.centroid = SelectCentroid(c.tokens, reduced);
    clusters.push_back(std::move(c));
  }
  doc.concepts = RankConcepts(std::move(clusters));

  if (trace != nullptr) {
    trace->augmentation = {std::move(aug)};
    trace->aggregated = std::move(aggregated);
    trace->kept = std::move(kept);
    trace->contextual = std::move(contextual);
    trace->reduced = std::move(reduced);
  }
  return doc;
}

json ToJson(const ConceptDocument& doc) {
  json concepts = json::array();
  for (const ConceptCluster& c : doc.concepts) {
    concepts.push_back({{"rank", c.rank},
                        {"weight", c.weight},
                        {"centroid", c.centroid},
                        {"tokens", c.tokens}});
  }
  json merges = json::array();
  for (std::size_t i = 0; i < doc.dendrogram.merges.size(); ++i) {
    const Merge& m = doc.dendrogram.merges[i];
    merges.push_back({{"left", m.left},
                      {"right", m.right},
                      {"distance", m.distance},
                      {"node", m.node},
                      {"weight", doc.node_weights.at(i)}});
  }
  return {{"sentence_id", doc.sentence_id},
          {"sentence", doc.sentence},
          {"seed", doc.seed_token},
          {"m", doc.m},
          {"baseline", doc.baseline},
          {"concepts", std::move(concepts)},
          {"leaf_labels", doc.dendrogram.leaf_labels},
          {"merges", std::move(merges)}};
}

namespace {

json AggregatedJson(const std::vector<AggregatedCompletion>& rows) {
  json out = json::array();
  for (const auto& a : rows) {
    out.push_back({{"token", a.token},
                   {"max_score", a.max_score},
                   {"occurrence_count", a.occurrence_count},
                   {"rep_norm", a.rep_norm}});
  }
  return out;
}

}  // namespace

json ToJson(const PipelineTrace& trace) {
  json aug = nullptr;
  if (!trace.augmentation.empty()) {
    const AugmentationSet& a = trace.augmentation.front();
    json sentences = json::array();
    for (const MaskedSentence& s : a.sentences()) {
      sentences.push_back({{"id", s.id()}, {"text", s.text()}});
    }
    aug = {{"seed", a.seed_token},
           {"filled_original", a.filled_original},
           {"m", a.m()},
           {"sentences", std::move(sentences)},
           {"dropped", a.dropped}};
  }
  return {{"augmentation", std::move(aug)},
          {"aggregated", AggregatedJson(trace.aggregated)},
          {"kept", AggregatedJson(trace.kept)}};
}

}  // namespace conceptual
