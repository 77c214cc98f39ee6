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

#include "conceptual/embedding_space.h"

#include <cmath>
#include <set>

#include <fmt/format.h>

#include "conceptual/error.h"

namespace conceptual {

EmbeddingMatrix::EmbeddingMatrix(Eigen::MatrixXd rows,
                                 std::vector<std::string> labels)
    : rows_(std::move(rows)), labels_(std::move(labels)) {
  if (rows_.rows() != static_cast<Eigen::Index>(labels_.size())) {
    throw ValidationError(fmt::format("embedding matrix has {} rows but {} labels",
                                      rows_.rows(), labels_.size()));
  }
  if (!rows_.allFinite()) {
    throw ValidationError("embedding matrix contains non-finite values");
  }
  std::set<std::string_view> seen;
  for (const std::string& label : labels_) {
    if (!seen.insert(label).second) {
      throw ValidationError("duplicate embedding label '" + label + "'");
    }
  }
}

std::optional<int> EmbeddingMatrix::IndexOf(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::string EmbeddingMatrix::ToCsv() const {
  std::string out = "token";
  for (int j = 0; j < d(); ++j) out += fmt::format(",dim_{}", j);
  out += '\n';
  for (int i = 0; i < n(); ++i) {
    out += labels_[i];
    for (int j = 0; j < d(); ++j) out += fmt::format(",{:.17g}", rows_(i, j));
    out += '\n';
  }
  return out;
}

PcaResult PcaFit(const EmbeddingMatrix& x, int c) {
  if (x.n() < 2) throw ValidationError("PCA needs at least two rows");
  if (c < 1) throw ValidationError("PCA needs at least one component");
  const int kept = std::min({c, x.n() - 1, x.d()});

  const Eigen::VectorXd mean = x.rows().colwise().mean();
  const Eigen::MatrixXd centered = x.rows().rowwise() - mean.transpose();
  const double scale = std::max(1.0, x.rows().cwiseAbs().maxCoeff());
  if (centered.cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    throw NumericalError("PCA input has zero variance (all rows identical)");
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::MatrixXd v = svd.matrixV().leftCols(kept);
  for (int j = 0; j < kept; ++j) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      if (std::abs(v(i, j)) > best) {
        best = std::abs(v(i, j));
        arg = i;
      }
    }
    if (v(arg, j) < 0) v.col(j) *= -1.0;
  }

  const Eigen::VectorXd singular = svd.singularValues().head(kept);
  PcaResult result;
  result.projected = EmbeddingMatrix(centered * v, x.labels());
  result.components = v.transpose();
  result.explained_variance = singular.array().square() / (x.n() - 1);
  result.mean = mean;
  return result;
}

EmbeddingMatrix PcaFitTransform(const EmbeddingMatrix& x, int c) {
  return PcaFit(x, c).projected;
}

}  // namespace conceptual
