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

#ifndef CONCEPTUAL_ISA_PROBE_H_
#define CONCEPTUAL_ISA_PROBE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "conceptual/backend.h"
#include "json.hpp"

namespace conceptual {

struct OntologyEntry {
  std::string et;
  std::vector<std::string> hypernyms;
  std::vector<std::string> hyponyms;
};

struct OntologyStats {
  int et_count = 0;
  double mean_hypernyms = 0.0;
  double mean_hyponyms = 0.0;
};

struct Ontology {
  std::vector<OntologyEntry> entries;

  // ETs unique; no term is both a hypernym and a hyponym of one ET; no
  // relation links a term to itself.
  void Validate() const;
  OntologyStats Stats() const;
  const OntologyEntry* Find(std::string_view et) const;
};

// JSON lines: {"et": ..., "hypernyms": [...], "hyponyms": [...]}. Blank lines
// are skipped. Terms are lowercased and trimmed.
Ontology ParseOntology(std::istream& in, const std::string& source);
Ontology LoadOntology(const std::filesystem::path& path);

struct IsARelation {
  std::string child;
  std::string parent;
};

struct PropertyTriplet {
  std::string object;
  std::string predicate;
  std::string subject;
  double saliency = 0.0;
};

// Tab-separated object, predicate, subject, saliency. An optional header
// line starting with "object" and '#' comments are ignored.
std::vector<PropertyTriplet> ParseTriplets(std::istream& in, const std::string& source);
std::vector<PropertyTriplet> LoadTriplets(const std::filesystem::path& path);

inline constexpr double kDefaultSaliencyThreshold = 0.9;
inline constexpr int kDefaultProbeK = 50;

std::vector<PropertyTriplet> FilterBySaliency(const std::vector<PropertyTriplet>& triplets,
                                              double threshold = kDefaultSaliencyThreshold);

enum class ProbeMode { kMasked, kBinary };
enum class Direction { kHypernym, kHyponym };

ProbeMode ParseProbeMode(std::string_view name);
std::string_view ProbeModeName(ProbeMode mode);
std::string_view DirectionName(Direction direction);

// "<child> is a type of [MASK]."
std::string MaskedIsAQuery(std::string_view child);
// "Is <child> a type of <parent>?"
std::string BinaryIsAQuery(std::string_view child, std::string_view parent);

// Hypernym direction: isa(ET, hypernym). Hyponym direction: isa(hyponym, ET).
std::vector<IsARelation> Relations(const Ontology& ontology, Direction direction);

// One logged probe query.
struct QueryOutcome {
  std::string probe;    // isa, asymmetry, transitivity, inheritance
  std::string role;     // probe-specific tag (e.g. hypernym / et / hyponym)
  int group = -1;       // probe-specific grouping key
  std::string child;    // concept queried
  std::string answer;   // expected parent / property value
  std::string query;
  ProbeMode mode = ProbeMode::kMasked;
  int k = 0;
  std::optional<int> rank;  // 1-based rank of the answer, MASKED only
  Verdict verdict = Verdict::kUnparseable;  // BINARY only
  bool retrieved = false;
};

// Append-ordered log of every query issued by a probe run.
struct ProbeLog {
  std::vector<QueryOutcome> outcomes;
};

// Issues probe queries. MASKED lists are fetched once per distinct prompt at
// `max_k` and cached, so a retrieval curve costs one request per prompt.
class IsAProber {
 public:
  IsAProber(Backend& backend, ProbeMode mode, int max_k);

  ProbeMode mode() const { return mode_; }
  int max_k() const { return max_k_; }

  // 1-based rank of `answer` (lowercased exact match) in the top-max_k
  // completions of `prompt`; nullopt when absent.
  std::optional<int> AnswerRank(const std::string& prompt, std::string_view answer);
  BinaryAnswer Ask(const std::string& question);

  // Evaluates isa(child, parent) at `k` (ignored in BINARY mode).
  QueryOutcome Query(const IsARelation& relation, int k);

 private:
  Backend& backend_;
  ProbeMode mode_;
  int max_k_;
  std::mutex mu_;
  std::map<std::string, std::vector<std::string>> completions_;
  std::map<std::string, BinaryAnswer> answers_;
};

// Single-relation check without caching.
bool RetrievalAtK(const IsARelation& relation, Backend& backend, int k, ProbeMode mode);

struct CurvePoint {
  int k = 0;
  double value = 0.0;
};

// Fraction of the ontology's relations retrieved for each k in 1..k_max.
std::vector<CurvePoint> RetrievalCurve(const Ontology& ontology, IsAProber& prober,
                                       int k_max, Direction direction,
                                       ProbeLog* log = nullptr);

// Relations of `direction` retrieved at `k`.
std::vector<IsARelation> RetrievedRelations(const Ontology& ontology, IsAProber& prober,
                                            Direction direction, int k);

// Fraction of `retrieved` whose reversed relation is NOT retrieved at `k`.
double AsymmetryScore(const std::vector<IsARelation>& retrieved, IsAProber& prober,
                      int k, ProbeLog* log = nullptr);

struct TransitiveTriple {
  std::string hyponym;
  std::string et;
  std::string hypernym;
};

// Triples whose two direct links are both retrieved at `k`.
std::vector<TransitiveTriple> CollectTransitiveTriples(const Ontology& ontology,
                                                       IsAProber& prober, int k);

struct TransitivityResult {
  double mean_retrieval = 0.0;
  int et_count = 0;
  int relation_count = 0;
};

// Fraction of triples whose skip-level relation isa(hyponym, hypernym) is
// retrieved at `k`.
TransitivityResult TransitivityScore(const std::vector<TransitiveTriple>& triples,
                                     IsAProber& prober, int k,
                                     ProbeLog* log = nullptr);

struct PropertyQuery {
  std::string text;    // masked sentence (MASKED) or question (BINARY)
  std::string answer;  // expected completion, MASKED only
};

// Phrases `triplet` about `concept` (which replaces the triplet's object).
// Returns nullopt when the phrasing cannot be built; such triplets are
// skipped.
using SentenceBuilder = std::function<std::optional<PropertyQuery>(
    const PropertyTriplet& triplet, std::string_view subject, ProbeMode mode)>;

// "<concept> <predicate> [MASK]." with the subject as answer, or
// "Is it true that <concept> <predicate> <subject>?".
SentenceBuilder TemplateSentenceBuilder();

// Phrasings keyed by (object, predicate, subject). Each statement mentions the
// object and the subject; the object is swapped for the probed concept and
// the subject is masked. Questions default to the statement ending in '?'.
struct Phrasing {
  std::string statement;
  std::string question;
};
using Phrasebook = std::map<std::tuple<std::string, std::string, std::string>, Phrasing>;

// TSV: object, predicate, subject, statement[, question].
Phrasebook LoadPhrasebook(const std::filesystem::path& path);
SentenceBuilder PhrasebookSentenceBuilder(Phrasebook phrasebook);

struct InheritanceResult {
  double hyper_to_et = 0.0;             // m1
  double hyper_to_hypo = 0.0;           // m2
  double hyper_to_hypo_given_et = 0.0;  // m3
  int et_total = 0, et_believed = 0;
  int hypo_total = 0, hypo_believed = 0;
  int hypo_given_et_total = 0, hypo_given_et_believed = 0;
  int skipped = 0;
};

// For each ET, each hypernym and each salient triplet about that hypernym
// believed by the model: probe the ET and every hyponym in its place.
InheritanceResult InheritanceScores(const Ontology& ontology,
                                    const std::vector<PropertyTriplet>& triplets,
                                    IsAProber& prober, double saliency_threshold,
                                    const SentenceBuilder& builder, int k,
                                    ProbeLog* log = nullptr);

// Distractor questions ("Is <ET> a type of <another ET's hypernym>?",
// "Is <hyponym> a type of <different ET>?"), `per_type` of each. They are
// shown to annotators only and never scored.
std::vector<std::string> GenerateNegativeQuestions(const Ontology& ontology,
                                                   int per_type, std::uint64_t seed);

nlohmann::json ToJson(const QueryOutcome& outcome);
nlohmann::json ToJson(const ProbeLog& log);

}  // namespace conceptual

#endif  // CONCEPTUAL_ISA_PROBE_H_
