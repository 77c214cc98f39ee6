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

#ifndef CONCEPTUAL_EMBEDDING_SPACE_H_
#define CONCEPTUAL_EMBEDDING_SPACE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace conceptual {

// n labelled rows of d finite reals. Labels are unique.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(Eigen::MatrixXd rows, std::vector<std::string> labels);

  const Eigen::MatrixXd& rows() const { return rows_; }
  const std::vector<std::string>& labels() const { return labels_; }
  int n() const { return static_cast<int>(rows_.rows()); }
  int d() const { return static_cast<int>(rows_.cols()); }

  std::optional<int> IndexOf(std::string_view label) const;

  // Header "token,dim_0,...,dim_{d-1}", then one line per row with the label
  // first and values at 17 significant digits.
  std::string ToCsv() const;

 private:
  Eigen::MatrixXd rows_;
  std::vector<std::string> labels_;
};

struct PcaResult {
  EmbeddingMatrix projected;           // n x c
  Eigen::MatrixXd components;          // c x d, unit rows
  Eigen::VectorXd explained_variance;  // non-increasing, length c
  Eigen::VectorXd mean;                // length d
};

// Full-SVD PCA onto min(c, n-1, d) components. Each component is flipped so
// that its largest-magnitude loading is positive (first such loading on ties).
// Throws NumericalError when all rows coincide.
PcaResult PcaFit(const EmbeddingMatrix& x, int c);
EmbeddingMatrix PcaFitTransform(const EmbeddingMatrix& x, int c);

enum class TsneInit { kPca, kRandom };

struct ReductionConfig {
  int pca_components = 100;
  int tsne_components = 10;
  double perplexity = 10.0;
  int tsne_iters = 1000;
  double exaggeration_factor = 12.0;
  int exaggeration_iters = 250;
  double learning_rate = 200.0;
  double momentum = 0.5;        // during exaggeration
  double final_momentum = 0.8;  // afterwards
  double min_gain = 0.01;
  // Student-t degrees of freedom; <= 0 selects max(tsne_components - 1, 1).
  double degrees_of_freedom = 0.0;
  TsneInit init = TsneInit::kPca;
  std::uint64_t seed = 0;  // only consumed by random initialization

  double ResolvedDegreesOfFreedom() const;
  // Throws ValidationError on non-positive sizes or rates.
  void Validate() const;
};

// Pairwise squared Euclidean distances between rows.
Eigen::MatrixXd SquaredEuclideanDistances(const Eigen::MatrixXd& x);

struct Affinities {
  Eigen::MatrixXd conditional;  // row i holds p(j|i); rows sum to 1
  Eigen::MatrixXd joint;        // (p(j|i) + p(i|j)) / 2n
  Eigen::VectorXd precisions;   // calibrated beta per row
  Eigen::VectorXd entropies;    // achieved entropy in bits per row
};

inline constexpr double kPerplexityTolerance = 1e-4;
inline constexpr int kPerplexityMaxSteps = 50;

// Bisects each row's Gaussian precision until the conditional distribution's
// Shannon entropy (bits) is within 1e-4 of log2(perplexity), using at most 50
// steps per row. Rows are independent; the work is split across threads but
// the result is identical to the sequential order.
Affinities CalibratePerplexity(const Eigen::MatrixXd& distances,
                               double perplexity);

// KL(P || Q) for embedding `y` under the heavy-tailed kernel with
// `degrees_of_freedom`. When `gradient` is non-null it receives dKL/dy.
double TsneObjective(const Eigen::MatrixXd& joint, const Eigen::MatrixXd& y,
                     double degrees_of_freedom,
                     Eigen::MatrixXd* gradient = nullptr);

// Normalized low-dimensional affinities Q (zero diagonal).
Eigen::MatrixXd TsneLowDimAffinities(const Eigen::MatrixXd& y,
                                     double degrees_of_freedom);

struct TsneResult {
  EmbeddingMatrix embedding;
  // Objective evaluated at the start of every iteration, then once more at
  // the final position. Entries [0, exaggeration_iters) use exaggerated P.
  std::vector<double> kl_trace;
};

// Exact t-SNE of the rows of `x`. Once exaggeration ends the objective never
// rises: a momentum step that would raise it is swapped for a backtracked
// gradient step.
TsneResult TsneEmbed(const EmbeddingMatrix& x, const ReductionConfig& cfg);

// PCA to cfg.pca_components followed by t-SNE to cfg.tsne_components.
EmbeddingMatrix ReduceEmbeddings(const EmbeddingMatrix& x,
                                 const ReductionConfig& cfg);

}  // namespace conceptual

#endif  // CONCEPTUAL_EMBEDDING_SPACE_H_
