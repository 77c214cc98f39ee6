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

#ifndef CONCEPTUAL_CONCEPT_COMPLETION_H_
#define CONCEPTUAL_CONCEPT_COMPLETION_H_

#include <string>
#include <vector>

#include "conceptual/backend.h"
#include "conceptual/clustering.h"
#include "conceptual/completion_pipeline.h"
#include "conceptual/embedding_space.h"
#include "json.hpp"

namespace conceptual {

struct ConceptCompletionConfig {
  int k = 100;
  double alpha = kDefaultAlpha;
  double cut_threshold = kDefaultCutThreshold;
  ReductionConfig reduction;
};

// The pipeline's primary artifact.
struct ConceptDocument {
  std::string sentence_id;
  std::string sentence;
  std::string seed_token;
  int m = 0;
  std::vector<std::string> baseline;     // S0's own top-k tokens, best first
  std::vector<ConceptCluster> concepts;  // ranked
  Dendrogram dendrogram;
  std::vector<double> node_weights;      // one per merge, same formula
};

// Intermediate state kept for debugging dumps and golden tests.
struct PipelineTrace {
  std::vector<AugmentationSet> augmentation;  // zero or one element
  std::vector<AggregatedCompletion> aggregated;
  std::vector<AggregatedCompletion> kept;
  EmbeddingMatrix contextual;
  EmbeddingMatrix reduced;
};

// Augment -> aggregate top-k -> frequency filter -> contextual embeddings ->
// PCA + t-SNE -> cosine agglomeration -> threshold cut -> weight and rank.
ConceptDocument RunConceptCompletion(const MaskedSentence& sentence,
                                     Backend& backend,
                                     const StopwordSet& stopwords,
                                     const ConceptCompletionConfig& config,
                                     PipelineTrace* trace = nullptr);

// {sentence_id, sentence, seed, m, concepts: [{rank, weight, centroid,
// tokens}], leaf_labels, merges: [{left, right, distance, node, weight}]}
nlohmann::json ToJson(const ConceptDocument& doc);
nlohmann::json ToJson(const PipelineTrace& trace);

}  // namespace conceptual

#endif  // CONCEPTUAL_CONCEPT_COMPLETION_H_
