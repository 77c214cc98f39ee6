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

#ifndef CONCEPTUAL_DATA_IO_H_
#define CONCEPTUAL_DATA_IO_H_

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "conceptual/evaluation.h"

namespace conceptual {

// Splits one CSV line; double quotes may wrap fields and "" escapes a quote.
std::vector<std::string> SplitCsvLine(std::string_view line);

// Quotes a field when it contains a comma, quote or newline.
std::string CsvField(std::string_view value);

// Header: sentence_id,token,annotator_id,score. Scores must be 0, 0.5 or 1.
std::vector<AnnotationRecord> ParseAnnotations(std::istream& in, const std::string& source);
std::vector<AnnotationRecord> LoadAnnotations(const std::filesystem::path& path);

// One token per line followed by its space-separated vector. A leading
// "<count> <dim>" header line is skipped. Every vector must share one length.
StaticEmbeddings ParseStaticEmbeddings(std::istream& in, const std::string& source);
StaticEmbeddings LoadStaticEmbeddings(const std::filesystem::path& path);

// Rankings as {"sentence_id", "baseline": [token...], "concepts":
// [{"tokens": [...]}, ...]}: one JSON document (object or array) or JSON
// lines. Concept documents written by the pipeline are accepted as-is.
std::vector<SentenceRanking> ParseRankings(std::istream& in, const std::string& source);
std::vector<SentenceRanking> LoadRankings(const std::filesystem::path& path);

}  // namespace conceptual

#endif  // CONCEPTUAL_DATA_IO_H_
