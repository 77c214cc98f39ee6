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

#include <algorithm>

#include <benchmark/benchmark.h>

#include "bench_util.h"
#include "conceptual/embedding_space.h"

namespace conceptual {
namespace {

void BM_TsneEmbed(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const EmbeddingMatrix x = bench::GaussianRows(n, 100);
  ReductionConfig cfg;
  cfg.perplexity = std::min(10.0, (n - 1) / 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(TsneEmbed(x, cfg));
}
BENCHMARK(BM_TsneEmbed)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_CalibratePerplexity(benchmark::State& state) {
  const EmbeddingMatrix x = bench::GaussianRows(static_cast<int>(state.range(0)), 100);
  const Eigen::MatrixXd d = SquaredEuclideanDistances(x.rows());
  for (auto _ : state) benchmark::DoNotOptimize(CalibratePerplexity(d, 10.0));
}
BENCHMARK(BM_CalibratePerplexity)->Arg(64)->Arg(256)->Arg(1024);

}  // namespace
}  // namespace conceptual
