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

#ifndef CONCEPTUAL_COMPLETION_PIPELINE_H_
#define CONCEPTUAL_COMPLETION_PIPELINE_H_

#include <filesystem>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "conceptual/backend.h"

namespace conceptual {

using StopwordSet = std::unordered_set<std::string>;

// One lowercase token per line; blank lines and '#' comments ignored.
StopwordSet LoadStopwords(const std::filesystem::path& path);

// The English list shipped in data/.
std::filesystem::path DefaultStopwordsPath();

// S0 plus its re-masked paraphrases S1..S(M-1).
struct AugmentationSet {
  MaskedSentence original;
  std::vector<MaskedSentence> paraphrases;
  std::string seed_token;
  std::string filled_original;          // S0 with the seed substituted
  std::vector<std::string> dropped;     // paraphrases lacking the seed

  int m() const { return 1 + static_cast<int>(paraphrases.size()); }

  // S0 first, then paraphrases in backend order.
  std::vector<MaskedSentence> sentences() const;
};

struct AggregatedCompletion {
  std::string token;          // lowercased
  double max_score = 0.0;     // max over every list containing the token
  int occurrence_count = 0;   // number of distinct lists containing it
  double rep_norm = 0.0;      // occurrence_count / m
};

// First completion longer than three characters that is neither a stopword
// nor a sub-word. Throws NoEligibleSeed when nothing qualifies.
std::string SelectSeedCompletion(std::span<const TokenCompletion> completions,
                                 const StopwordSet& stopwords);

// Picks the seed from S0's top-k, paraphrases the filled sentence and masks
// the first whole-word, case-insensitive occurrence of the seed in each
// paraphrase. Paraphrases without the seed are dropped.
AugmentationSet BuildAugmentations(const MaskedSentence& s0, Backend& backend,
                                   int k, const StopwordSet& stopwords);

// Masks `seed` in `paraphrase`; empty when the seed does not occur.
std::optional<std::string> MaskSeed(std::string_view paraphrase,
                                    std::string_view seed);

// Union of the per-sentence lists. `lists[i]` is sentence i's top-k.
std::vector<AggregatedCompletion> AggregateCompletionLists(
    std::span<const std::vector<TokenCompletion>> lists);

// Fetches every sentence's top-k (concurrently) and aggregates them.
// Output order: max_score descending, then token.
std::vector<AggregatedCompletion> AggregateCompletions(const AugmentationSet& aug,
                                                       Backend& backend, int k);

// ceil(m / 2)
int FrequencyThreshold(int m);

// Keeps tokens seen in at least ceil(m/2) lists, preserving input order.
std::vector<AggregatedCompletion> FrequencyFilter(
    std::span<const AggregatedCompletion> aggregated, int m);

}  // namespace conceptual

#endif  // CONCEPTUAL_COMPLETION_PIPELINE_H_
