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

#include "conceptual/evaluation.h"

#include <algorithm>
#include <cmath>
#include <set>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <spdlog/spdlog.h>

#include "conceptual/error.h"
#include "conceptual/text.h"

namespace conceptual {

namespace {

// Relative ranks are ratios of small integers; boundary comparisons get a
// little slack so that k/K landing exactly on 0.5 +- w is treated as inside.
constexpr double kZoneSlack = 1e-12;

double Mean(std::span<const double> values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

[[noreturn]] void ThrowMissing(const std::set<std::string>& missing) {
  throw ValidationError(fmt::format("missing annotations for: {}",
                                    fmt::join(missing, ", ")));
}

}  // namespace

bool IsValidAnnotationScore(double score) {
  return score == 0.0 || score == 0.5 || score == 1.0;
}

AnnotationIndex::AnnotationIndex(std::span<const AnnotationRecord> records) {
  for (const AnnotationRecord& r : records) {
    if (!IsValidAnnotationScore(r.score)) {
      throw ValidationError(fmt::format("annotation score {} for '{}' is not 0, 0.5 or 1",
                                        r.score, r.token));
    }
    scores_[{r.sentence_id, ToLower(r.token)}].push_back(r.score);
  }
}

std::optional<double> AnnotationIndex::TokenScore(std::string_view sentence_id,
                                                  std::string_view token) const {
  auto it = scores_.find({std::string(sentence_id), ToLower(token)});
  if (it == scores_.end()) return std::nullopt;
  return Mean(it->second);
}

double AnnotationIndex::ItemScore(std::string_view sentence_id,
                                  std::span<const std::string> tokens) const {
  if (tokens.empty()) throw ValidationError("cannot score an empty item");
  std::set<std::string> missing;
  double total = 0.0;
  for (const std::string& t : tokens) {
    const auto s = TokenScore(sentence_id, t);
    if (!s) {
      missing.insert(std::string(sentence_id) + "/" + t);
      continue;
    }
    total += *s;
  }
  if (!missing.empty()) ThrowMissing(missing);
  return total / static_cast<double>(tokens.size());
}

double AnnotationIndex::MeanVariance() const {
  if (scores_.empty()) return 0.0;
  double total = 0.0;
  for (const auto& [key, values] : scores_) {
    const double mean = Mean(values);
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    total += var / static_cast<double>(values.size());
  }
  return total / static_cast<double>(scores_.size());
}

RankedList RankedList::FromTokens(std::string sentence_id, std::vector<std::string> tokens) {
  RankedList list;
  list.sentence_id = std::move(sentence_id);
  for (std::string& t : tokens) list.items.push_back({std::move(t)});
  return list;
}

void StaticEmbeddings::Add(std::string token, Eigen::VectorXd vector) {
  vectors_[ToLower(token)] = std::move(vector);
}

const Eigen::VectorXd* StaticEmbeddings::Find(std::string_view token) const {
  auto it = vectors_.find(ToLower(token));
  return it == vectors_.end() ? nullptr : &it->second;
}

double CosineSimilarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double aa = a.squaredNorm();
  const double bb = b.squaredNorm();
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return a.dot(b) / std::sqrt(aa * bb);
}

Coherence ComputeCoherence(std::span<const std::vector<std::string>> clusters,
                           const StaticEmbeddings& embeddings) {
  Coherence out;
  std::vector<std::vector<const Eigen::VectorXd*>> vecs;
  for (const auto& cluster : clusters) {
    auto& kept = vecs.emplace_back();
    for (const std::string& t : cluster) {
      if (const Eigen::VectorXd* v = embeddings.Find(t)) {
        kept.push_back(v);
      } else {
        spdlog::debug("coherence: '{}' is out of vocabulary", t);
        ++out.skipped_tokens;
      }
    }
  }
  double within_total = 0.0;
  int within_clusters = 0;
  for (const auto& members : vecs) {
    if (members.size() < 2) continue;
    double total = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        total += CosineSimilarity(*members[i], *members[j]);
        ++pairs;
      }
    }
    within_total += total / pairs;
    ++within_clusters;
  }
  if (within_clusters == 0) {
    throw ValidationError("within-cluster similarity is undefined: every cluster is a singleton");
  }
  out.within = within_total / within_clusters;

  double inter_total = 0.0;
  long inter_pairs = 0;
  for (std::size_t a = 0; a < vecs.size(); ++a) {
    for (std::size_t b = a + 1; b < vecs.size(); ++b) {
      for (const auto* u : vecs[a]) {
        for (const auto* v : vecs[b]) {
          inter_total += CosineSimilarity(*u, *v);
          ++inter_pairs;
        }
      }
    }
  }
  out.inter = inter_pairs == 0 ? 0.0 : inter_total / static_cast<double>(inter_pairs);
  return out;
}

double MeanPairwiseSimilarity(std::span<const std::string> tokens,
                              const StaticEmbeddings& embeddings) {
  std::vector<const Eigen::VectorXd*> vecs;
  for (const std::string& t : tokens) {
    if (const Eigen::VectorXd* v = embeddings.Find(t)) vecs.push_back(v);
  }
  if (vecs.size() < 2) throw ValidationError("need two in-vocabulary tokens");
  double total = 0.0;
  int pairs = 0;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    for (std::size_t j = i + 1; j < vecs.size(); ++j) {
      total += CosineSimilarity(*vecs[i], *vecs[j]);
      ++pairs;
    }
  }
  return total / pairs;
}

double ScoreAtK(std::span<const RankedList> lists, const AnnotationIndex& annotations,
                int k) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (lists.empty()) throw ValidationError("score@k needs at least one ranked list");
  std::set<std::string> missing;
  double total = 0.0;
  for (const RankedList& list : lists) {
    const int depth = std::min(k, list.K());
    if (depth == 0) throw ValidationError("ranked list for '" + list.sentence_id + "' is empty");
    double sentence_total = 0.0;
    for (int r = 0; r < depth; ++r) {
      try {
        sentence_total += annotations.ItemScore(list.sentence_id, list.items[r]);
      } catch (const ValidationError&) {
        for (const std::string& t : list.items[r]) {
          if (!annotations.TokenScore(list.sentence_id, t)) {
            missing.insert(list.sentence_id + "/" + t);
          }
        }
      }
    }
    total += sentence_total / depth;
  }
  if (!missing.empty()) ThrowMissing(missing);
  return total / static_cast<double>(lists.size());
}

double RelativeRank(int rank, int K) {
  if (K < 1 || rank < 1 || rank > K) {
    throw ValidationError(fmt::format("rank {} outside [1, {}]", rank, K));
  }
  return static_cast<double>(K - rank + 1) / K;
}

std::string_view ZoneName(Zone zone) {
  switch (zone) {
    case Zone::kConceptHighBaseLow:
      return "CONCEPT_HIGH_BASE_LOW";
    case Zone::kBaseHighConceptLow:
      return "BASE_HIGH_CONCEPT_LOW";
    case Zone::kBuffer:
      return "BUFFER";
    case Zone::kNeither:
      return "NEITHER";
  }
  return "NEITHER";
}

Zone ClassifyZone(double rank_base, double rank_concept, double buffer_width) {
  const double half = buffer_width / 2.0;
  const double lo = 0.5 - half;
  const double hi = 0.5 + half;
  auto inside = [&](double r) { return r >= lo - kZoneSlack && r <= hi + kZoneSlack; };
  auto above = [&](double r) { return r > hi + kZoneSlack; };
  auto below = [&](double r) { return r < lo - kZoneSlack; };
  if (inside(rank_base) && inside(rank_concept)) return Zone::kBuffer;
  if (above(rank_concept) && below(rank_base)) return Zone::kConceptHighBaseLow;
  if (above(rank_base) && below(rank_concept)) return Zone::kBaseHighConceptLow;
  return Zone::kNeither;
}

DisputePartition PartitionDisputes(const RankedList& base, const RankedList& clusters,
                                   double buffer_width) {
  if (!(buffer_width > 0.0 && buffer_width <= 1.0)) {
    throw ValidationError("buffer width must lie in (0, 1]");
  }
  std::map<std::string, int> base_rank;
  for (int r = 0; r < base.K(); ++r) {
    for (const std::string& t : base.items[r]) base_rank.try_emplace(ToLower(t), r + 1);
  }
  DisputePartition out;
  std::set<std::string> seen;
  for (int r = 0; r < clusters.K(); ++r) {
    for (const std::string& raw : clusters.items[r]) {
      const std::string token = ToLower(raw);
      if (!seen.insert(token).second) continue;
      auto it = base_rank.find(token);
      if (it == base_rank.end()) {
        out.revealed.push_back(token);
        continue;
      }
      DisputeRecord rec;
      rec.sentence_id = clusters.sentence_id.empty() ? base.sentence_id : clusters.sentence_id;
      rec.token = token;
      rec.rank_base = RelativeRank(it->second, base.K());
      rec.rank_concept = RelativeRank(r + 1, clusters.K());
      rec.zone = ClassifyZone(rec.rank_base, rec.rank_concept, buffer_width);
      out.records.push_back(std::move(rec));
    }
  }
  return out;
}

std::vector<DisputeRow> DisputeScores(std::span<const DisputeRecord> records,
                                      const AnnotationIndex& annotations) {
  // zone -> sentence -> scores
  std::map<Zone, std::map<std::string, std::vector<double>>> grouped;
  std::set<std::string> missing;
  for (const DisputeRecord& rec : records) {
    if (rec.zone == Zone::kNeither) continue;
    const auto s = annotations.TokenScore(rec.sentence_id, rec.token);
    if (!s) {
      missing.insert(rec.sentence_id + "/" + rec.token);
      continue;
    }
    grouped[rec.zone][rec.sentence_id].push_back(*s);
  }
  if (!missing.empty()) ThrowMissing(missing);

  const auto& buffer = grouped[Zone::kBuffer];
  std::vector<DisputeRow> rows;
  for (Zone zone : {Zone::kConceptHighBaseLow, Zone::kBuffer, Zone::kBaseHighConceptLow}) {
    const auto& by_sentence = grouped[zone];
    std::vector<double> pooled;
    for (const auto& [sentence, scores] : by_sentence) {
      pooled.insert(pooled.end(), scores.begin(), scores.end());
    }
    if (pooled.empty()) {
      spdlog::warn("dispute zone {} is empty; row omitted", ZoneName(zone));
      continue;
    }
    DisputeRow row;
    row.zone = zone;
    row.count = static_cast<int>(pooled.size());
    row.mean_score = Mean(pooled);
    if (zone != Zone::kBuffer) {
      std::vector<double> diffs;
      for (const auto& [sentence, scores] : by_sentence) {
        auto b = buffer.find(sentence);
        if (b == buffer.end()) continue;
        diffs.push_back(Mean(scores) - Mean(b->second));
      }
      if (!diffs.empty()) row.normalized_score = Mean(diffs);
    }
    rows.push_back(row);
  }
  return rows;
}

AccumulatedAccuracy ComputeAccumulatedAccuracy(std::span<const double> scores) {
  const std::size_t n = scores.size();
  if (n < 3) throw ValidationError("accumulated accuracy needs at least three items");
  AccumulatedAccuracy out;
  double running = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    running += scores[i];
    out.curve.emplace_back(static_cast<int>(i) + 1, running / static_cast<double>(i + 1));
  }
  double mx = 0.0, my = 0.0;
  for (const auto& [rank, acc] : out.curve) {
    mx += rank;
    my += acc;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (const auto& [rank, acc] : out.curve) {
    sxy += (rank - mx) * (acc - my);
    sxx += (rank - mx) * (rank - mx);
    syy += (acc - my) * (acc - my);
  }
  if (syy == 0.0) {
    throw NumericalError("accumulated accuracy has zero variance; correlation undefined");
  }
  out.pearson_r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (std::abs(out.pearson_r) >= 1.0) {
    out.p_value = 0.0;
  } else {
    const double dof = static_cast<double>(n - 2);
    const double t =
        out.pearson_r * std::sqrt(dof / (1.0 - out.pearson_r * out.pearson_r));
    boost::math::students_t dist(dof);
    out.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  }
  return out;
}

std::vector<double> ScoresByRank(std::span<const DisputeRecord> records,
                                 const AnnotationIndex& annotations, RankModel model) {
  std::vector<const DisputeRecord*> zoned;
  for (const DisputeRecord& r : records) {
    if (r.zone != Zone::kNeither) zoned.push_back(&r);
  }
  auto rank_of = [model](const DisputeRecord* r) {
    return model == RankModel::kBaseline ? r->rank_base : r->rank_concept;
  };
  std::stable_sort(zoned.begin(), zoned.end(),
                   [&](const DisputeRecord* a, const DisputeRecord* b) {
                     if (rank_of(a) != rank_of(b)) return rank_of(a) > rank_of(b);
                     if (a->sentence_id != b->sentence_id) return a->sentence_id < b->sentence_id;
                     return a->token < b->token;
                   });
  std::set<std::string> missing;
  std::vector<double> out;
  for (const DisputeRecord* r : zoned) {
    const auto s = annotations.TokenScore(r->sentence_id, r->token);
    if (!s) {
      missing.insert(r->sentence_id + "/" + r->token);
      continue;
    }
    out.push_back(*s);
  }
  if (!missing.empty()) ThrowMissing(missing);
  return out;
}

std::vector<SweepPoint> ThresholdSweep(std::span<const SentenceRanking> rankings,
                                       const AnnotationIndex& annotations,
                                       std::span<const double> widths) {
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (!(widths[i] > 0.0 && widths[i] <= 1.0)) {
      throw ValidationError("sweep widths must lie in (0, 1]");
    }
    if (i > 0 && !(widths[i] > widths[i - 1])) {
      throw ValidationError("sweep widths must be strictly increasing");
    }
  }
  std::vector<SweepPoint> out;
  std::set<std::string> missing;
  for (double width : widths) {
    std::vector<double> concept_high, base_high;
    for (const SentenceRanking& sr : rankings) {
      for (const DisputeRecord& rec : PartitionDisputes(sr.baseline, sr.concepts, width).records) {
        if (rec.zone != Zone::kConceptHighBaseLow && rec.zone != Zone::kBaseHighConceptLow) {
          continue;
        }
        const auto s = annotations.TokenScore(rec.sentence_id, rec.token);
        if (!s) {
          missing.insert(rec.sentence_id + "/" + rec.token);
          continue;
        }
        (rec.zone == Zone::kConceptHighBaseLow ? concept_high : base_high).push_back(*s);
      }
    }
    SweepPoint p;
    p.width = width;
    p.concept_high_count = static_cast<int>(concept_high.size());
    p.base_high_count = static_cast<int>(base_high.size());
    if (!concept_high.empty()) p.concept_high_mean = Mean(concept_high);
    if (!base_high.empty()) p.base_high_mean = Mean(base_high);
    out.push_back(p);
  }
  if (!missing.empty()) ThrowMissing(missing);
  return out;
}

std::vector<HeatmapCell> DisputeHeatmap(std::span<const DisputeRecord> records,
                                        const AnnotationIndex& annotations, int bins) {
  if (bins < 1) throw ValidationError("heatmap needs at least one bin");
  auto bin_of = [bins](double r) {
    return std::clamp(static_cast<int>(std::floor(r * bins)), 0, bins - 1);
  };
  std::map<std::pair<int, int>, std::vector<double>> cells;
  for (const DisputeRecord& rec : records) {
    const auto s = annotations.TokenScore(rec.sentence_id, rec.token);
    if (!s) continue;
    cells[{bin_of(rec.rank_base), bin_of(rec.rank_concept)}].push_back(*s);
  }
  std::vector<HeatmapCell> out;
  for (const auto& [key, scores] : cells) {
    out.push_back({key.first, key.second, static_cast<int>(scores.size()), Mean(scores)});
  }
  return out;
}

}  // namespace conceptual
