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

#ifndef CONCEPTUAL_BACKEND_H_
#define CONCEPTUAL_BACKEND_H_

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace conceptual {

// A sentence with exactly one "[MASK]" slot.
class MaskedSentence {
 public:
  // Throws ValidationError unless `text` is non-blank and holds exactly one
  // mask marker.
  MaskedSentence(std::string id, std::string text);

  const std::string& id() const { return id_; }
  const std::string& text() const { return text_; }

  // The sentence with `token` substituted into the mask slot.
  std::string Fill(std::string_view token) const;

 private:
  std::string id_;
  std::string text_;
};

struct TokenCompletion {
  std::string token;
  double score = 0.0;  // soft-max probability
  bool is_subword = false;
  int source_index = 0;  // which sentence of an augmentation set produced it
};

struct EmbeddingVector {
  std::vector<double> values;

  int dim() const { return static_cast<int>(values.size()); }
};

enum class Verdict { kYes, kNo, kUnparseable };

struct BinaryAnswer {
  Verdict verdict = Verdict::kUnparseable;
  std::string raw;
};

// YES iff the lowercased, trimmed text starts with "yes"; NO iff it starts
// with "no"; UNPARSEABLE otherwise. Total over all strings.
BinaryAnswer ParseBinaryAnswer(std::string raw);

std::string_view VerdictName(Verdict verdict);

// Handshake document returned by the "describe" endpoint.
struct BackendDescriptor {
  std::string model_name;
  int embedding_dim = 0;
  int max_k = 0;
  nlohmann::json extra = nlohmann::json::object();  // decoding params etc.
};

// Moves one request document to a backend and returns its response document.
// Endpoint names are the wire-protocol verbs: complete, embed, ask,
// paraphrase, describe. Implementations must tolerate concurrent calls.
class Transport {
 public:
  virtual ~Transport() = default;

  virtual nlohmann::json Call(std::string_view endpoint,
                              const nlohmann::json& request) = 0;
};

// Typed client over a Transport. Enforces the post-conditions of each
// operation (ordering, truncation, dimensionality, parse rules) regardless
// of what the transport returned.
class Backend {
 public:
  explicit Backend(std::shared_ptr<Transport> transport);

  // Fetched once and cached.
  const BackendDescriptor& Describe();

  // At most `k` completions, score descending, ties by token. Each result
  // carries `source_index`.
  std::vector<TokenCompletion> TopKCompletions(const MaskedSentence& sentence,
                                               int k, int source_index = 0);

  // Final-layer vector of `token` substituted into the mask slot.
  EmbeddingVector ContextualEmbedding(const MaskedSentence& sentence,
                                      std::string_view token);

  BinaryAnswer AskBinary(std::string_view question);

  // Distinct paraphrases of an unmasked sentence; the input itself is never
  // returned.
  std::vector<std::string> Paraphrase(std::string_view sentence);

  Transport& transport() { return *transport_; }

 private:
  std::shared_ptr<Transport> transport_;
  std::once_flag describe_once_;
  BackendDescriptor descriptor_;
};

}  // namespace conceptual

#endif  // CONCEPTUAL_BACKEND_H_
