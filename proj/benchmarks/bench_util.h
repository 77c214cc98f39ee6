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

#ifndef CONCEPTUAL_BENCHMARKS_BENCH_UTIL_H_
#define CONCEPTUAL_BENCHMARKS_BENCH_UTIL_H_

#include <random>
#include <string>
#include <vector>

#include "conceptual/embedding_space.h"

namespace conceptual::bench {

// n x d standard normal rows labelled t0..t{n-1}.
inline EmbeddingMatrix GaussianRows(int n, int d, unsigned seed = 1) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = normal(rng);
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("t" + std::to_string(i));
  return EmbeddingMatrix(std::move(m), std::move(labels));
}

}  // namespace conceptual::bench

#endif  // CONCEPTUAL_BENCHMARKS_BENCH_UTIL_H_
