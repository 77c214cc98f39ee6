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

#ifndef CONCEPTUAL_CLUSTERING_H_
#define CONCEPTUAL_CLUSTERING_H_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conceptual/completion_pipeline.h"
#include "conceptual/embedding_space.h"

namespace conceptual {

// One agglomeration step. Leaves are nodes 0..n-1; the merge at step s
// creates node n+s. `left` is the child whose smallest leaf index is lower.
struct Merge {
  int left = 0;
  int right = 0;
  double distance = 0.0;
  int node = 0;
};

struct Dendrogram {
  std::vector<Merge> merges;  // n-1 entries, distances non-decreasing
  std::vector<std::string> leaf_labels;

  int leaf_count() const { return static_cast<int>(leaf_labels.size()); }
  // Leaf indices under `node`, ascending.
  std::vector<int> Leaves(int node) const;
};

// 1 - cos(a, b), clamped to [0, 2]. Throws ValidationError on a zero vector.
double CosineDistance(const Eigen::Ref<const Eigen::VectorXd>& a,
                      const Eigen::Ref<const Eigen::VectorXd>& b);
Eigen::MatrixXd CosineDistanceMatrix(const Eigen::MatrixXd& rows);

// Average-linkage agglomerative clustering under cosine distance. Among
// equally distant pairs the one with the smallest (left min leaf, right min
// leaf) is merged first.
Dendrogram Agglomerate(const EmbeddingMatrix& x);

// Flat clusters from applying, in order, every merge strictly below
// `threshold`. Clusters are ordered by their smallest leaf; members ascend.
std::vector<std::vector<int>> CutThresholdIndices(const Dendrogram& dendrogram,
                                                  double threshold);
std::vector<std::vector<std::string>> CutThreshold(const Dendrogram& dendrogram,
                                                   double threshold);

inline constexpr double kDefaultAlpha = 0.7;
inline constexpr double kDefaultCutThreshold = 0.45;

// alpha * max(max_score) + (1 - alpha) * max(rep_norm) over the members.
double ClusterWeight(std::span<const AggregatedCompletion> members,
                     double alpha = kDefaultAlpha);

struct ConceptCluster {
  std::vector<std::string> tokens;
  double weight = 0.0;
  std::string centroid;
  int rank = 0;
  double max_rep_norm = 0.0;  // tie-breaker for ranking
};

// Member with the smallest mean cosine distance to the other members of the
// cluster, measured on `embeddings`; ties go to the lexicographically
// smaller token.
std::string SelectCentroid(std::span<const std::string> tokens,
                           const EmbeddingMatrix& embeddings);

// Descending weight, then higher max_rep_norm, then centroid; ranks 1..N.
std::vector<ConceptCluster> RankConcepts(std::vector<ConceptCluster> clusters);

}  // namespace conceptual

#endif  // CONCEPTUAL_CLUSTERING_H_
