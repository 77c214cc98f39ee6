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

#include "conceptual/isa_probe.h"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "conceptual/error.h"
#include "conceptual/text.h"

namespace conceptual {

using nlohmann::json;

namespace {

std::string NormalizeTerm(std::string_view term) {
  return ToLower(NormalizeWhitespace(term));
}

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, '\t')) fields.push_back(field);
  if (!line.empty() && line.back() == '\t') fields.emplace_back();
  return fields;
}

std::string StripCarriageReturn(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

double Ratio(int numerator, int denominator) {
  return denominator == 0 ? 0.0 : static_cast<double>(numerator) / denominator;
}

}  // namespace

void Ontology::Validate() const {
  std::set<std::string> ets;
  for (const OntologyEntry& e : entries) {
    if (e.et.empty()) throw ValidationError("ontology entry with empty et");
    if (!ets.insert(e.et).second) {
      throw ValidationError("duplicate ontology et '" + e.et + "'");
    }
    const std::set<std::string> hypers(e.hypernyms.begin(), e.hypernyms.end());
    for (const std::string& h : e.hyponyms) {
      if (hypers.contains(h)) {
        throw ValidationError("'" + h + "' is both hypernym and hyponym of '" +
                              e.et + "'");
      }
      if (h == e.et) throw ValidationError("'" + e.et + "' lists itself as hyponym");
    }
    if (hypers.contains(e.et)) {
      throw ValidationError("'" + e.et + "' lists itself as hypernym");
    }
  }
}

OntologyStats Ontology::Stats() const {
  OntologyStats s;
  s.et_count = static_cast<int>(entries.size());
  if (entries.empty()) return s;
  double hypers = 0.0, hypos = 0.0;
  for (const OntologyEntry& e : entries) {
    hypers += static_cast<double>(e.hypernyms.size());
    hypos += static_cast<double>(e.hyponyms.size());
  }
  s.mean_hypernyms = hypers / s.et_count;
  s.mean_hyponyms = hypos / s.et_count;
  return s;
}

const OntologyEntry* Ontology::Find(std::string_view et) const {
  for (const OntologyEntry& e : entries) {
    if (e.et == et) return &e;
  }
  return nullptr;
}

Ontology ParseOntology(std::istream& in, const std::string& source) {
  Ontology ontology;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      const json doc = json::parse(line);
      OntologyEntry entry;
      entry.et = NormalizeTerm(doc.at("et").get<std::string>());
      for (const auto& h : doc.value("hypernyms", std::vector<std::string>{})) {
        entry.hypernyms.push_back(NormalizeTerm(h));
      }
      for (const auto& h : doc.value("hyponyms", std::vector<std::string>{})) {
        entry.hyponyms.push_back(NormalizeTerm(h));
      }
      ontology.entries.push_back(std::move(entry));
    } catch (const json::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  try {
    ontology.Validate();
  } catch (const ValidationError& e) {
    throw ParseError(source, 0, e.what());
  }
  const OntologyStats stats = ontology.Stats();
  spdlog::info("{}: {} ETs, {:.2f} hypernyms and {:.2f} hyponyms per ET", source,
               stats.et_count, stats.mean_hypernyms, stats.mean_hyponyms);
  return ontology;
}

Ontology LoadOntology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open ontology file " + path.string());
  return ParseOntology(in, path.string());
}

std::vector<PropertyTriplet> ParseTriplets(std::istream& in, const std::string& source) {
  std::vector<PropertyTriplet> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = StripCarriageReturn(line);
    if (Trim(line).empty() || Trim(line).front() == '#') continue;
    const std::vector<std::string> fields = SplitTabs(line);
    if (line_no == 1 && !fields.empty() && ToLower(Trim(fields[0])) == "object") continue;
    if (fields.size() != 4) {
      throw ParseError(source, line_no,
                       "expected 4 tab-separated fields, got " + std::to_string(fields.size()));
    }
    PropertyTriplet t{NormalizeTerm(fields[0]), NormalizeTerm(fields[1]),
                      NormalizeTerm(fields[2]), 0.0};
    if (t.object.empty() || t.predicate.empty() || t.subject.empty()) {
      throw ParseError(source, line_no, "empty triplet field");
    }
    try {
      std::size_t used = 0;
      const std::string value(Trim(fields[3]));
      t.saliency = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ParseError(source, line_no, "saliency '" + fields[3] + "' is not a number");
    }
    if (!(t.saliency >= 0.0 && t.saliency <= 1.0)) {
      throw ParseError(source, line_no, "saliency outside [0, 1]");
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<PropertyTriplet> LoadTriplets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open triplet file " + path.string());
  return ParseTriplets(in, path.string());
}

std::vector<PropertyTriplet> FilterBySaliency(const std::vector<PropertyTriplet>& triplets,
                                              double threshold) {
  std::vector<PropertyTriplet> out;
  std::copy_if(triplets.begin(), triplets.end(), std::back_inserter(out),
               [threshold](const PropertyTriplet& t) { return t.saliency >= threshold; });
  return out;
}

ProbeMode ParseProbeMode(std::string_view name) {
  const std::string lowered = ToLower(name);
  if (lowered == "masked") return ProbeMode::kMasked;
  if (lowered == "binary") return ProbeMode::kBinary;
  throw ValidationError("unknown probe mode '" + std::string(name) +
                        "' (expected masked or binary)");
}

std::string_view ProbeModeName(ProbeMode mode) {
  return mode == ProbeMode::kMasked ? "masked" : "binary";
}

std::string_view DirectionName(Direction direction) {
  return direction == Direction::kHypernym ? "hypernym" : "hyponym";
}

std::string MaskedIsAQuery(std::string_view child) {
  return std::string(child) + " is a type of " + std::string(kMaskMarker) + ".";
}

std::string BinaryIsAQuery(std::string_view child, std::string_view parent) {
  return "Is " + std::string(child) + " a type of " + std::string(parent) + "?";
}

std::vector<IsARelation> Relations(const Ontology& ontology, Direction direction) {
  std::vector<IsARelation> out;
  for (const OntologyEntry& e : ontology.entries) {
    if (direction == Direction::kHypernym) {
      for (const std::string& h : e.hypernyms) out.push_back({e.et, h});
    } else {
      for (const std::string& h : e.hyponyms) out.push_back({h, e.et});
    }
  }
  return out;
}

IsAProber::IsAProber(Backend& backend, ProbeMode mode, int max_k)
    : backend_(backend), mode_(mode), max_k_(max_k) {
  if (mode_ == ProbeMode::kMasked && max_k_ < 1) {
    throw ValidationError("k must be >= 1 in masked mode");
  }
}

std::optional<int> IsAProber::AnswerRank(const std::string& prompt,
                                         std::string_view answer) {
  std::optional<std::vector<std::string>> cached;
  {
    std::lock_guard lock(mu_);
    auto it = completions_.find(prompt);
    if (it != completions_.end()) cached = it->second;
  }
  if (!cached) {
    const MaskedSentence sentence("probe", prompt);
    cached.emplace();
    for (const TokenCompletion& c : backend_.TopKCompletions(sentence, max_k_)) {
      cached->push_back(ToLower(c.token));
    }
    std::lock_guard lock(mu_);
    completions_.emplace(prompt, *cached);
  }
  const std::vector<std::string>& tokens = *cached;
  const std::string target = NormalizeTerm(answer);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == target) return static_cast<int>(i) + 1;
  }
  return std::nullopt;
}

BinaryAnswer IsAProber::Ask(const std::string& question) {
  {
    std::lock_guard lock(mu_);
    auto it = answers_.find(question);
    if (it != answers_.end()) return it->second;
  }
  BinaryAnswer answer = backend_.AskBinary(question);
  if (answer.verdict == Verdict::kUnparseable) {
    spdlog::warn("unparseable answer to '{}': '{}'", question, answer.raw);
  }
  std::lock_guard lock(mu_);
  answers_.emplace(question, answer);
  return answer;
}

QueryOutcome IsAProber::Query(const IsARelation& relation, int k) {
  QueryOutcome out;
  out.child = relation.child;
  out.answer = relation.parent;
  out.mode = mode_;
  if (mode_ == ProbeMode::kMasked) {
    if (k < 1 || k > max_k_) {
      throw ValidationError("k=" + std::to_string(k) + " outside [1, " +
                            std::to_string(max_k_) + "]");
    }
    out.k = k;
    out.query = MaskedIsAQuery(relation.child);
    out.rank = AnswerRank(out.query, relation.parent);
    out.retrieved = out.rank.has_value() && *out.rank <= k;
  } else {
    out.k = k;
    out.query = BinaryIsAQuery(relation.child, relation.parent);
    out.verdict = Ask(out.query).verdict;
    out.retrieved = out.verdict == Verdict::kYes;
  }
  return out;
}

bool RetrievalAtK(const IsARelation& relation, Backend& backend, int k, ProbeMode mode) {
  IsAProber prober(backend, mode, mode == ProbeMode::kMasked ? k : 1);
  return prober.Query(relation, k).retrieved;
}

std::vector<CurvePoint> RetrievalCurve(const Ontology& ontology, IsAProber& prober,
                                       int k_max, Direction direction, ProbeLog* log) {
  if (k_max < 1) throw ValidationError("k_max must be >= 1");
  const std::vector<IsARelation> relations = Relations(ontology, direction);
  std::vector<QueryOutcome> outcomes;
  outcomes.reserve(relations.size());
  for (std::size_t i = 0; i < relations.size(); ++i) {
    QueryOutcome o = prober.Query(relations[i], k_max);
    o.probe = "isa";
    o.role = std::string(DirectionName(direction));
    o.group = static_cast<int>(i);
    outcomes.push_back(std::move(o));
  }
  std::vector<CurvePoint> curve;
  if (relations.empty()) return curve;
  for (int k = 1; k <= k_max; ++k) {
    int hits = 0;
    for (const QueryOutcome& o : outcomes) {
      const bool hit = prober.mode() == ProbeMode::kMasked
                           ? (o.rank.has_value() && *o.rank <= k)
                           : o.retrieved;
      hits += hit ? 1 : 0;
    }
    curve.push_back({k, static_cast<double>(hits) / static_cast<double>(outcomes.size())});
  }
  if (log) log->outcomes.insert(log->outcomes.end(), outcomes.begin(), outcomes.end());
  return curve;
}

std::vector<IsARelation> RetrievedRelations(const Ontology& ontology, IsAProber& prober,
                                            Direction direction, int k) {
  std::vector<IsARelation> out;
  for (const IsARelation& r : Relations(ontology, direction)) {
    if (prober.Query(r, k).retrieved) out.push_back(r);
  }
  return out;
}

double AsymmetryScore(const std::vector<IsARelation>& retrieved, IsAProber& prober,
                      int k, ProbeLog* log) {
  if (retrieved.empty()) {
    throw ValidationError("asymmetry needs at least one retrieved relation");
  }
  int preserved = 0;
  for (std::size_t i = 0; i < retrieved.size(); ++i) {
    QueryOutcome o = prober.Query({retrieved[i].parent, retrieved[i].child}, k);
    o.probe = "asymmetry";
    o.role = "reverse";
    o.group = static_cast<int>(i);
    if (!o.retrieved) ++preserved;
    if (log) log->outcomes.push_back(std::move(o));
  }
  return static_cast<double>(preserved) / static_cast<double>(retrieved.size());
}

std::vector<TransitiveTriple> CollectTransitiveTriples(const Ontology& ontology,
                                                       IsAProber& prober, int k) {
  std::vector<TransitiveTriple> out;
  for (const OntologyEntry& e : ontology.entries) {
    std::vector<std::string> hypers, hypos;
    for (const std::string& h : e.hypernyms) {
      if (prober.Query({e.et, h}, k).retrieved) hypers.push_back(h);
    }
    if (hypers.empty()) continue;
    for (const std::string& y : e.hyponyms) {
      if (prober.Query({y, e.et}, k).retrieved) hypos.push_back(y);
    }
    for (const std::string& y : hypos) {
      for (const std::string& h : hypers) {
        if (y != h) out.push_back({y, e.et, h});
      }
    }
  }
  return out;
}

TransitivityResult TransitivityScore(const std::vector<TransitiveTriple>& triples,
                                     IsAProber& prober, int k, ProbeLog* log) {
  if (triples.empty()) throw ValidationError("transitivity needs at least one triple");
  TransitivityResult result;
  std::set<std::string> ets;
  int hits = 0;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const TransitiveTriple& t = triples[i];
    QueryOutcome o = prober.Query({t.hyponym, t.hypernym}, k);
    o.probe = "transitivity";
    o.role = t.et;
    o.group = static_cast<int>(i);
    ets.insert(t.et);
    if (o.retrieved) ++hits;
    if (log) log->outcomes.push_back(std::move(o));
  }
  result.relation_count = static_cast<int>(triples.size());
  result.et_count = static_cast<int>(ets.size());
  result.mean_retrieval = static_cast<double>(hits) / result.relation_count;
  return result;
}

SentenceBuilder TemplateSentenceBuilder() {
  return [](const PropertyTriplet& t, std::string_view subject,
            ProbeMode mode) -> std::optional<PropertyQuery> {
    if (mode == ProbeMode::kMasked) {
      return PropertyQuery{std::string(subject) + " " + t.predicate + " " +
                               std::string(kMaskMarker) + ".",
                           t.subject};
    }
    return PropertyQuery{"Is it true that " + std::string(subject) + " " + t.predicate +
                             " " + t.subject + "?",
                         t.subject};
  };
}

Phrasebook LoadPhrasebook(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open phrasebook " + path.string());
  Phrasebook book;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = StripCarriageReturn(line);
    if (Trim(line).empty() || Trim(line).front() == '#') continue;
    const std::vector<std::string> fields = SplitTabs(line);
    if (fields.size() != 4 && fields.size() != 5) {
      throw ParseError(path.string(), line_no, "expected 4 or 5 tab-separated fields");
    }
    Phrasing p{NormalizeWhitespace(fields[3]),
               fields.size() == 5 ? NormalizeWhitespace(fields[4]) : std::string()};
    book[{NormalizeTerm(fields[0]), NormalizeTerm(fields[1]), NormalizeTerm(fields[2])}] =
        std::move(p);
  }
  return book;
}

SentenceBuilder PhrasebookSentenceBuilder(Phrasebook phrasebook) {
  return [book = std::move(phrasebook)](const PropertyTriplet& t, std::string_view subject,
                                        ProbeMode mode) -> std::optional<PropertyQuery> {
    auto it = book.find({t.object, t.predicate, t.subject});
    if (it == book.end()) return std::nullopt;
    const Phrasing& p = it->second;
    std::string text = mode == ProbeMode::kBinary && !p.question.empty() ? p.question
                                                                         : p.statement;
    const auto object_pos = FindWordCaseInsensitive(text, t.object);
    if (!object_pos) return std::nullopt;
    text = ReplaceAt(text, *object_pos, t.object.size(), subject);
    if (mode == ProbeMode::kBinary) {
      if (p.question.empty()) {
        while (!text.empty() && (text.back() == '.' || text.back() == ' ')) text.pop_back();
        text += "?";
      }
      return PropertyQuery{std::move(text), t.subject};
    }
    const auto subject_pos = FindWordCaseInsensitive(text, t.subject);
    if (!subject_pos) return std::nullopt;
    return PropertyQuery{ReplaceAt(text, *subject_pos, t.subject.size(), kMaskMarker),
                         t.subject};
  };
}

InheritanceResult InheritanceScores(const Ontology& ontology,
                                    const std::vector<PropertyTriplet>& triplets,
                                    IsAProber& prober, double saliency_threshold,
                                    const SentenceBuilder& builder, int k, ProbeLog* log) {
  const std::vector<PropertyTriplet> salient = FilterBySaliency(triplets, saliency_threshold);
  InheritanceResult r;
  int group = 0;

  auto believe = [&](const PropertyQuery& q, const std::string& subject,
                     const std::string& role, const PropertyTriplet& t) {
    QueryOutcome o;
    o.probe = "inheritance";
    o.role = role;
    o.group = group;
    o.child = subject;
    o.answer = t.object + " | " + t.predicate + " | " + t.subject;
    o.query = q.text;
    o.mode = prober.mode();
    o.k = k;
    if (prober.mode() == ProbeMode::kMasked) {
      o.rank = prober.AnswerRank(q.text, q.answer);
      o.retrieved = o.rank.has_value() && *o.rank <= k;
    } else {
      o.verdict = prober.Ask(q.text).verdict;
      o.retrieved = o.verdict == Verdict::kYes;
    }
    const bool retrieved = o.retrieved;
    if (log) log->outcomes.push_back(std::move(o));
    return retrieved;
  };

  for (const OntologyEntry& e : ontology.entries) {
    for (const std::string& hyper : e.hypernyms) {
      for (const PropertyTriplet& t : salient) {
        if (t.object != hyper) continue;
        const auto hyper_query = builder(t, hyper, prober.mode());
        if (!hyper_query) {
          spdlog::warn("skipping triplet ({}, {}, {}): cannot phrase it", t.object,
                       t.predicate, t.subject);
          ++r.skipped;
          continue;
        }
        if (!believe(*hyper_query, hyper, "hypernym", t)) {
          ++group;
          continue;
        }
        const auto et_query = builder(t, e.et, prober.mode());
        if (!et_query) {
          ++r.skipped;
          ++group;
          continue;
        }
        const bool et_believed = believe(*et_query, e.et, "et", t);
        ++r.et_total;
        r.et_believed += et_believed ? 1 : 0;
        for (const std::string& hypo : e.hyponyms) {
          const auto hypo_query = builder(t, hypo, prober.mode());
          if (!hypo_query) {
            ++r.skipped;
            continue;
          }
          const bool hypo_believed = believe(*hypo_query, hypo, "hyponym", t);
          ++r.hypo_total;
          r.hypo_believed += hypo_believed ? 1 : 0;
          if (et_believed) {
            ++r.hypo_given_et_total;
            r.hypo_given_et_believed += hypo_believed ? 1 : 0;
          }
        }
        ++group;
      }
    }
  }
  r.hyper_to_et = Ratio(r.et_believed, r.et_total);
  r.hyper_to_hypo = Ratio(r.hypo_believed, r.hypo_total);
  r.hyper_to_hypo_given_et = Ratio(r.hypo_given_et_believed, r.hypo_given_et_total);
  spdlog::info(
      "inheritance denominators: et {}, hyponym {}, hyponym|et {} ({} skipped)",
      r.et_total, r.hypo_total, r.hypo_given_et_total, r.skipped);
  return r;
}

std::vector<std::string> GenerateNegativeQuestions(const Ontology& ontology,
                                                   int per_type, std::uint64_t seed) {
  std::vector<std::string> out;
  const auto& entries = ontology.entries;
  if (entries.size() < 2 || per_type <= 0) return out;
  std::mt19937_64 rng(seed);
  auto pick = [&rng](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  const int max_attempts = per_type * 100;

  std::set<std::string> made;
  for (int made_a = 0, attempts = 0; made_a < per_type && attempts < max_attempts; ++attempts) {
    const OntologyEntry& e = entries[pick(entries.size())];
    const OntologyEntry& other = entries[pick(entries.size())];
    if (&e == &other || other.hypernyms.empty()) continue;
    const std::string& h = other.hypernyms[pick(other.hypernyms.size())];
    if (std::find(e.hypernyms.begin(), e.hypernyms.end(), h) != e.hypernyms.end()) continue;
    if (h == e.et) continue;
    std::string q = BinaryIsAQuery(e.et, h);
    if (made.insert(q).second) {
      out.push_back(std::move(q));
      ++made_a;
    }
  }
  for (int made_b = 0, attempts = 0; made_b < per_type && attempts < max_attempts; ++attempts) {
    const OntologyEntry& e = entries[pick(entries.size())];
    const OntologyEntry& other = entries[pick(entries.size())];
    if (&e == &other || e.hyponyms.empty()) continue;
    const std::string& y = e.hyponyms[pick(e.hyponyms.size())];
    if (y == other.et) continue;
    std::string q = BinaryIsAQuery(y, other.et);
    if (made.insert(q).second) {
      out.push_back(std::move(q));
      ++made_b;
    }
  }
  return out;
}

json ToJson(const QueryOutcome& o) {
  json doc = {{"probe", o.probe},       {"role", o.role},     {"group", o.group},
              {"child", o.child},       {"answer", o.answer}, {"query", o.query},
              {"mode", ProbeModeName(o.mode)}, {"k", o.k},    {"retrieved", o.retrieved}};
  if (o.mode == ProbeMode::kMasked) {
    doc["rank"] = o.rank ? json(*o.rank) : json(nullptr);
  } else {
    doc["verdict"] = VerdictName(o.verdict);
  }
  return doc;
}

json ToJson(const ProbeLog& log) {
  json out = json::array();
  for (const QueryOutcome& o : log.outcomes) out.push_back(ToJson(o));
  return out;
}

}  // namespace conceptual
