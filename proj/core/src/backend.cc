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

#include "conceptual/backend.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "conceptual/error.h"
#include "conceptual/text.h"

namespace conceptual {

using nlohmann::json;

MaskedSentence::MaskedSentence(std::string id, std::string text)
    : id_(std::move(id)), text_(std::move(text)) {
  if (Trim(text_).empty()) {
    throw ValidationError("masked sentence '" + id_ + "' is empty");
  }
  const std::size_t masks = CountOccurrences(text_, kMaskMarker);
  if (masks != 1) {
    throw ValidationError("masked sentence '" + id_ + "' must contain exactly one " +
                          std::string(kMaskMarker) + " marker, found " +
                          std::to_string(masks));
  }
}

std::string MaskedSentence::Fill(std::string_view token) const {
  return ReplaceAt(text_, text_.find(kMaskMarker), kMaskMarker.size(), token);
}

BinaryAnswer ParseBinaryAnswer(std::string raw) {
  const std::string lowered = ToLower(Trim(raw));
  BinaryAnswer answer;
  if (lowered.starts_with("yes")) {
    answer.verdict = Verdict::kYes;
  } else if (lowered.starts_with("no")) {
    answer.verdict = Verdict::kNo;
  } else {
    answer.verdict = Verdict::kUnparseable;
  }
  answer.raw = std::move(raw);
  return answer;
}

std::string_view VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kYes:
      return "YES";
    case Verdict::kNo:
      return "NO";
    case Verdict::kUnparseable:
      return "UNPARSEABLE";
  }
  return "UNPARSEABLE";
}

namespace {

const json& RequireField(const json& doc, const char* field,
                         std::string_view endpoint) {
  if (!doc.is_object() || !doc.contains(field)) {
    throw BackendError(std::string(endpoint) + " response lacks field '" +
                       field + "'");
  }
  return doc.at(field);
}

}  // namespace

Backend::Backend(std::shared_ptr<Transport> transport)
    : transport_(std::move(transport)) {
  if (!transport_) throw ValidationError("backend requires a transport");
}

const BackendDescriptor& Backend::Describe() {
  std::call_once(describe_once_, [this] {
    const json doc = transport_->Call("describe", json::object());
    BackendDescriptor d;
    try {
      d.model_name = RequireField(doc, "model_name", "describe").get<std::string>();
      d.embedding_dim = RequireField(doc, "embedding_dim", "describe").get<int>();
      d.max_k = RequireField(doc, "max_k", "describe").get<int>();
    } catch (const json::exception& e) {
      throw BackendError(std::string("malformed describe response: ") + e.what());
    }
    if (d.embedding_dim <= 0 || d.max_k <= 0) {
      throw BackendError("describe response has non-positive embedding_dim or max_k");
    }
    for (const auto& [key, value] : doc.items()) {
      if (key != "model_name" && key != "embedding_dim" && key != "max_k") {
        d.extra[key] = value;
      }
    }
    descriptor_ = std::move(d);
  });
  return descriptor_;
}

std::vector<TokenCompletion> Backend::TopKCompletions(
    const MaskedSentence& sentence, int k, int source_index) {
  if (k < 1) throw ValidationError("k must be >= 1, got " + std::to_string(k));
  const int max_k = Describe().max_k;
  if (k > max_k) {
    throw BackendError("k=" + std::to_string(k) + " exceeds backend max_k=" +
                       std::to_string(max_k));
  }
  const json doc =
      transport_->Call("complete", json{{"sentence", sentence.text()}, {"k", k}});
  std::vector<TokenCompletion> out;
  try {
    for (const json& item : RequireField(doc, "completions", "complete")) {
      TokenCompletion c;
      c.token = item.at("token").get<std::string>();
      c.score = item.at("score").get<double>();
      c.is_subword = item.value("is_subword", false);
      c.source_index = source_index;
      if (c.token.empty()) throw BackendError("complete returned an empty token");
      if (!(c.score >= 0.0 && c.score <= 1.0)) {
        throw BackendError("complete returned score outside [0,1] for '" +
                           c.token + "'");
      }
      out.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw BackendError(std::string("malformed complete response: ") + e.what());
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const TokenCompletion& a, const TokenCompletion& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.token < b.token;
                   });
  if (out.size() > static_cast<std::size_t>(k)) out.resize(k);
  return out;
}

EmbeddingVector Backend::ContextualEmbedding(const MaskedSentence& sentence,
                                             std::string_view token) {
  if (Trim(token).empty()) throw ValidationError("embedding token is empty");
  const int dim = Describe().embedding_dim;
  const json doc = transport_->Call(
      "embed", json{{"sentence", sentence.text()}, {"token", std::string(token)}});
  EmbeddingVector v;
  try {
    v.values = RequireField(doc, "vector", "embed").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw BackendError(std::string("malformed embed response: ") + e.what());
  }
  if (v.dim() != dim) {
    throw BackendError("embedding for '" + std::string(token) + "' has dim " +
                       std::to_string(v.dim()) + ", backend declared " +
                       std::to_string(dim));
  }
  for (double x : v.values) {
    if (!std::isfinite(x)) {
      throw BackendError("embedding for '" + std::string(token) +
                         "' has a non-finite value");
    }
  }
  return v;
}

BinaryAnswer Backend::AskBinary(std::string_view question) {
  if (Trim(question).empty()) throw ValidationError("question is empty");
  const json doc = transport_->Call("ask", json{{"question", std::string(question)}});
  try {
    return ParseBinaryAnswer(RequireField(doc, "answer", "ask").get<std::string>());
  } catch (const json::exception& e) {
    throw BackendError(std::string("malformed ask response: ") + e.what());
  }
}

std::vector<std::string> Backend::Paraphrase(std::string_view sentence) {
  if (Trim(sentence).empty()) throw ValidationError("paraphrase input is empty");
  if (sentence.find(kMaskMarker) != std::string_view::npos) {
    throw ValidationError("paraphrase input must not contain a mask marker");
  }
  const json doc =
      transport_->Call("paraphrase", json{{"sentence", std::string(sentence)}});
  std::vector<std::string> raw;
  try {
    raw = RequireField(doc, "paraphrases", "paraphrase").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw BackendError(std::string("malformed paraphrase response: ") + e.what());
  }
  const std::string input = NormalizeWhitespace(sentence);
  std::set<std::string> seen;
  std::vector<std::string> out;
  for (std::string& p : raw) {
    const std::string norm = NormalizeWhitespace(p);
    if (norm.empty() || norm == input) continue;
    if (!seen.insert(norm).second) continue;
    out.push_back(norm);
  }
  return out;
}

}  // namespace conceptual
