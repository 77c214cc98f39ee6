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

#include "conceptual/clustering.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "conceptual/error.h"

namespace conceptual {

std::vector<int> Dendrogram::Leaves(int node) const {
  const int n = leaf_count();
  std::vector<int> out;
  std::vector<int> stack = {node};
  while (!stack.empty()) {
    const int current = stack.back();
    stack.pop_back();
    if (current < n) {
      out.push_back(current);
      continue;
    }
    const Merge& m = merges.at(current - n);
    stack.push_back(m.left);
    stack.push_back(m.right);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double CosineDistance(const Eigen::Ref<const Eigen::VectorXd>& a,
                      const Eigen::Ref<const Eigen::VectorXd>& b) {
  const double aa = a.squaredNorm();
  const double bb = b.squaredNorm();
  if (aa == 0.0 || bb == 0.0) {
    throw ValidationError("cosine distance is undefined for a zero vector");
  }
  // sqrt(aa * bb) rather than |a||b| so identical vectors give exactly 0.
  const double cosine = a.dot(b) / std::sqrt(aa * bb);
  return std::clamp(1.0 - cosine, 0.0, 2.0);
}

Eigen::MatrixXd CosineDistanceMatrix(const Eigen::MatrixXd& rows) {
  const Eigen::Index n = rows.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = CosineDistance(rows.row(i).transpose(), rows.row(j).transpose());
    }
  }
  return d;
}

Dendrogram Agglomerate(const EmbeddingMatrix& x) {
  const int n = x.n();
  if (n < 2) throw ValidationError("agglomerative clustering needs at least two points");
  for (int i = 0; i < n; ++i) {
    if (x.rows().row(i).squaredNorm() == 0.0) {
      throw ValidationError("row '" + x.labels()[i] + "' has zero norm");
    }
  }

  // Slot i starts as leaf i; merged clusters reuse the slot of their left
  // child and deactivate the right one.
  Eigen::MatrixXd dist = CosineDistanceMatrix(x.rows());
  std::vector<int> node(n), size(n, 1), min_leaf(n);
  std::vector<bool> active(n, true);
  std::iota(node.begin(), node.end(), 0);
  std::iota(min_leaf.begin(), min_leaf.end(), 0);

  Dendrogram tree;
  tree.leaf_labels = x.labels();
  tree.merges.reserve(n - 1);
  for (int step = 0; step < n - 1; ++step) {
    int best_a = -1, best_b = -1;
    std::tuple<double, int, int> best_key;
    for (int a = 0; a < n; ++a) {
      if (!active[a]) continue;
      for (int b = a + 1; b < n; ++b) {
        if (!active[b]) continue;
        const int lo = std::min(min_leaf[a], min_leaf[b]);
        const int hi = std::max(min_leaf[a], min_leaf[b]);
        const std::tuple<double, int, int> key{dist(a, b), lo, hi};
        if (best_a < 0 || key < best_key) {
          best_key = key;
          best_a = a;
          best_b = b;
        }
      }
    }
    int left = best_a, right = best_b;
    if (min_leaf[right] < min_leaf[left]) std::swap(left, right);
    tree.merges.push_back(
        {node[left], node[right], std::get<0>(best_key), n + step});

    // Lance-Williams update for average linkage.
    const double wl = size[left], wr = size[right];
    for (int k = 0; k < n; ++k) {
      if (!active[k] || k == left || k == right) continue;
      const double merged = (wl * dist(k, left) + wr * dist(k, right)) / (wl + wr);
      dist(k, left) = dist(left, k) = merged;
    }
    active[right] = false;
    size[left] += size[right];
    min_leaf[left] = std::min(min_leaf[left], min_leaf[right]);
    node[left] = n + step;
  }
  return tree;
}

std::vector<std::vector<int>> CutThresholdIndices(const Dendrogram& dendrogram,
                                                  double threshold) {
  if (threshold < 0.0) throw ValidationError("cut threshold must be >= 0");
  const int n = dendrogram.leaf_count();
  // Representative leaf of each node so far.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<int> node_leaf(2 * n, -1);
  for (int i = 0; i < n; ++i) node_leaf[i] = i;
  for (const Merge& m : dendrogram.merges) {
    if (!(m.distance < threshold)) break;
    const int a = find(node_leaf[m.left]);
    const int b = find(node_leaf[m.right]);
    parent[std::max(a, b)] = std::min(a, b);
    node_leaf[m.node] = std::min(a, b);
  }
  std::vector<std::vector<int>> clusters;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(clusters.size());
      clusters.emplace_back();
    }
    clusters[slot[root]].push_back(i);
  }
  return clusters;
}

std::vector<std::vector<std::string>> CutThreshold(const Dendrogram& dendrogram,
                                                   double threshold) {
  std::vector<std::vector<std::string>> out;
  for (const auto& cluster : CutThresholdIndices(dendrogram, threshold)) {
    auto& tokens = out.emplace_back();
    for (int leaf : cluster) tokens.push_back(dendrogram.leaf_labels[leaf]);
  }
  return out;
}

double ClusterWeight(std::span<const AggregatedCompletion> members, double alpha) {
  if (members.empty()) throw ValidationError("cluster weight of an empty cluster");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
  double max_score = 0.0;
  double max_rep = 0.0;
  for (const AggregatedCompletion& c : members) {
    max_score = std::max(max_score, c.max_score);
    max_rep = std::max(max_rep, c.rep_norm);
  }
  return alpha * max_score + (1.0 - alpha) * max_rep;
}

std::string SelectCentroid(std::span<const std::string> tokens,
                           const EmbeddingMatrix& embeddings) {
  if (tokens.empty()) throw ValidationError("centroid of an empty cluster");
  std::vector<int> rows;
  rows.reserve(tokens.size());
  for (const std::string& t : tokens) {
    const auto index = embeddings.IndexOf(t);
    if (!index) throw ValidationError("token '" + t + "' has no embedding row");
    rows.push_back(*index);
  }
  if (tokens.size() == 1) return tokens.front();

  std::size_t best = 0;
  double best_mean = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (i == j) continue;
      total += CosineDistance(embeddings.rows().row(rows[i]).transpose(),
                              embeddings.rows().row(rows[j]).transpose());
    }
    const double mean = total / static_cast<double>(rows.size() - 1);
    if (i == 0 || mean < best_mean ||
        (mean == best_mean && tokens[i] < tokens[best])) {
      best = i;
      best_mean = mean;
    }
  }
  return tokens[best];
}

std::vector<ConceptCluster> RankConcepts(std::vector<ConceptCluster> clusters) {
  std::stable_sort(clusters.begin(), clusters.end(),
                   [](const ConceptCluster& a, const ConceptCluster& b) {
                     if (a.weight != b.weight) return a.weight > b.weight;
                     if (a.max_rep_norm != b.max_rep_norm) {
                       return a.max_rep_norm > b.max_rep_norm;
                     }
                     return a.centroid < b.centroid;
                   });
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    clusters[i].rank = static_cast<int>(i) + 1;
  }
  return clusters;
}

}  // namespace conceptual
