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

#include "conceptual/completion_pipeline.h"

#include <algorithm>
#include <fstream>
#include <future>
#include <map>

#include <spdlog/spdlog.h>

#include "conceptual/error.h"
#include "conceptual/text.h"

namespace conceptual {

namespace {

// Code points, not bytes.
std::size_t Utf8Length(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

}  // namespace

StopwordSet LoadStopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open stopword list " + path.string());
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view word = Trim(line);
    if (word.empty() || word.front() == '#') continue;
    words.insert(ToLower(word));
  }
  return words;
}

std::filesystem::path DefaultStopwordsPath() {
  return std::filesystem::path(CONCEPTUAL_DEFAULT_DATA_DIR) / "stopwords_en.txt";
}

std::vector<MaskedSentence> AugmentationSet::sentences() const {
  std::vector<MaskedSentence> out;
  out.reserve(paraphrases.size() + 1);
  out.push_back(original);
  out.insert(out.end(), paraphrases.begin(), paraphrases.end());
  return out;
}

std::string SelectSeedCompletion(std::span<const TokenCompletion> completions,
                                 const StopwordSet& stopwords) {
  for (const TokenCompletion& c : completions) {
    if (c.is_subword) continue;
    if (Utf8Length(c.token) <= 3) continue;
    if (stopwords.contains(ToLower(c.token))) continue;
    return c.token;
  }
  throw NoEligibleSeed("none of " + std::to_string(completions.size()) +
                       " completions passed the seed filter");
}

std::optional<std::string> MaskSeed(std::string_view paraphrase,
                                    std::string_view seed) {
  const auto pos = FindWordCaseInsensitive(paraphrase, seed);
  if (!pos) return std::nullopt;
  return ReplaceAt(paraphrase, *pos, seed.size(), kMaskMarker);
}

AugmentationSet BuildAugmentations(const MaskedSentence& s0, Backend& backend,
                                   int k, const StopwordSet& stopwords) {
  const std::vector<TokenCompletion> top = backend.TopKCompletions(s0, k, 0);
  AugmentationSet aug{.original = s0,
                      .paraphrases = {},
                      .seed_token = SelectSeedCompletion(top, stopwords),
                      .filled_original = {},
                      .dropped = {}};
  aug.filled_original = s0.Fill(aug.seed_token);

  int index = 0;
  for (const std::string& p : backend.Paraphrase(aug.filled_original)) {
    // A paraphrase that already carries a mask marker cannot be re-masked.
    std::optional<std::string> masked;
    if (p.find(kMaskMarker) == std::string::npos) masked = MaskSeed(p, aug.seed_token);
    if (!masked) {
      spdlog::debug("dropping paraphrase without seed '{}': {}", aug.seed_token, p);
      aug.dropped.push_back(p);
      continue;
    }
    aug.paraphrases.emplace_back(s0.id() + "/p" + std::to_string(++index),
                                 *std::move(masked));
  }
  return aug;
}

std::vector<AggregatedCompletion> AggregateCompletionLists(
    std::span<const std::vector<TokenCompletion>> lists) {
  const int m = static_cast<int>(lists.size());
  if (m == 0) return {};
  std::map<std::string, AggregatedCompletion> by_token;
  for (const auto& list : lists) {
    std::unordered_set<std::string> seen_here;
    for (const TokenCompletion& c : list) {
      std::string token = ToLower(c.token);
      auto [it, inserted] = by_token.try_emplace(token);
      AggregatedCompletion& agg = it->second;
      if (inserted) agg.token = token;
      agg.max_score = std::max(agg.max_score, c.score);
      if (seen_here.insert(std::move(token)).second) ++agg.occurrence_count;
    }
  }
  std::vector<AggregatedCompletion> out;
  out.reserve(by_token.size());
  for (auto& [token, agg] : by_token) {
    agg.rep_norm = static_cast<double>(agg.occurrence_count) / m;
    out.push_back(std::move(agg));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const AggregatedCompletion& a, const AggregatedCompletion& b) {
                     if (a.max_score != b.max_score) return a.max_score > b.max_score;
                     return a.token < b.token;
                   });
  return out;
}

std::vector<AggregatedCompletion> AggregateCompletions(const AugmentationSet& aug,
                                                       Backend& backend, int k) {
  if (k < 1) throw ValidationError("k must be >= 1");
  const std::vector<MaskedSentence> sentences = aug.sentences();
  std::vector<std::future<std::vector<TokenCompletion>>> pending;
  pending.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    pending.push_back(std::async(std::launch::async, [&, i] {
      return backend.TopKCompletions(sentences[i], k, static_cast<int>(i));
    }));
  }
  std::vector<std::vector<TokenCompletion>> lists;
  lists.reserve(pending.size());
  for (auto& f : pending) lists.push_back(f.get());
  return AggregateCompletionLists(lists);
}

int FrequencyThreshold(int m) {
  if (m < 1) throw ValidationError("m must be >= 1");
  return (m + 1) / 2;
}

std::vector<AggregatedCompletion> FrequencyFilter(
    std::span<const AggregatedCompletion> aggregated, int m) {
  const int threshold = FrequencyThreshold(m);
  std::vector<AggregatedCompletion> out;
  std::copy_if(aggregated.begin(), aggregated.end(), std::back_inserter(out),
               [threshold](const AggregatedCompletion& a) {
                 return a.occurrence_count >= threshold;
               });
  return out;
}

}  // namespace conceptual
