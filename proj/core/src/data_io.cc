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

#include "conceptual/data_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "conceptual/error.h"
#include "conceptual/text.h"
#include "json.hpp"

namespace conceptual {

namespace {

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return in;
}

std::optional<double> ParseDouble(std::string_view s) {
  s = Trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::vector<std::string> JsonStrings(const nlohmann::json& arr, const std::string& source,
                                     int line, std::string_view what) {
  if (!arr.is_array()) throw ParseError(source, line, std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& v : arr) {
    if (!v.is_string()) {
      throw ParseError(source, line, std::string(what) + " entries must be strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

std::string CsvField(std::string_view value) {
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<AnnotationRecord> ParseAnnotations(std::istream& in, const std::string& source) {
  std::vector<AnnotationRecord> out;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitCsvLine(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != 4 || Trim(fields[0]) != "sentence_id" || Trim(fields[1]) != "token" ||
          Trim(fields[2]) != "annotator_id" || Trim(fields[3]) != "score") {
        throw ParseError(source, line_no,
                         "expected header sentence_id,token,annotator_id,score");
      }
      continue;
    }
    if (fields.size() != 4) {
      throw ParseError(source, line_no, fmt::format("expected 4 fields, got {}", fields.size()));
    }
    const auto score = ParseDouble(fields[3]);
    if (!score || !IsValidAnnotationScore(*score)) {
      throw ParseError(source, line_no, "score must be 0, 0.5 or 1");
    }
    AnnotationRecord r{std::string(Trim(fields[0])), std::string(Trim(fields[1])),
                       std::string(Trim(fields[2])), *score};
    if (r.sentence_id.empty() || r.token.empty()) {
      throw ParseError(source, line_no, "empty sentence_id or token");
    }
    out.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError(source, line_no, "annotation file is empty");
  return out;
}

std::vector<AnnotationRecord> LoadAnnotations(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  return ParseAnnotations(in, path.string());
}

StaticEmbeddings ParseStaticEmbeddings(std::istream& in, const std::string& source) {
  StaticEmbeddings out;
  std::string line;
  int line_no = 0;
  long dim = -1;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> values;
    std::string word;
    while (fields >> word) {
      const auto v = ParseDouble(word);
      if (!v) throw ParseError(source, line_no, "non-numeric vector component '" + word + "'");
      values.push_back(*v);
    }
    if (line_no == 1 && values.size() == 1 && ParseDouble(token)) continue;  // count dim
    if (values.empty()) throw ParseError(source, line_no, "token without a vector");
    if (dim < 0) dim = static_cast<long>(values.size());
    if (static_cast<long>(values.size()) != dim) {
      throw ParseError(source, line_no,
                       fmt::format("vector has {} components, expected {}", values.size(), dim));
    }
    out.Add(token, Eigen::Map<Eigen::VectorXd>(values.data(), dim));
  }
  spdlog::debug("loaded {} static vectors from {}", out.size(), source);
  return out;
}

StaticEmbeddings LoadStaticEmbeddings(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  return ParseStaticEmbeddings(in, path.string());
}

namespace {

SentenceRanking RankingFromJson(const nlohmann::json& doc, const std::string& source,
                                int line_no) {
  if (!doc.is_object() || !doc.contains("sentence_id") || !doc["sentence_id"].is_string()) {
    throw ParseError(source, line_no, "missing string field sentence_id");
  }
  SentenceRanking r;
  r.sentence_id = doc["sentence_id"].get<std::string>();
  r.baseline.sentence_id = r.sentence_id;
  r.concepts.sentence_id = r.sentence_id;
  if (doc.contains("baseline")) {
    r.baseline = RankedList::FromTokens(r.sentence_id,
                                        JsonStrings(doc["baseline"], source, line_no, "baseline"));
  }
  if (!doc.contains("concepts") || !doc["concepts"].is_array()) {
    throw ParseError(source, line_no, "missing array field concepts");
  }
  for (const auto& c : doc["concepts"]) {
    if (!c.is_object() || !c.contains("tokens")) {
      throw ParseError(source, line_no, "concept entries need a tokens array");
    }
    auto tokens = JsonStrings(c["tokens"], source, line_no, "tokens");
    if (tokens.empty()) throw ParseError(source, line_no, "empty concept");
    r.concepts.items.push_back(std::move(tokens));
  }
  return r;
}

}  // namespace

std::vector<SentenceRanking> ParseRankings(std::istream& in, const std::string& source) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::vector<SentenceRanking> out;
  // A single document (one object or an array of them) is accepted first,
  // which covers pretty-printed pipeline output; otherwise JSON lines.
  const nlohmann::json whole = nlohmann::json::parse(text, nullptr, false);
  if (!whole.is_discarded() && (whole.is_object() || whole.is_array())) {
    if (whole.is_object()) {
      out.push_back(RankingFromJson(whole, source, 1));
    } else {
      for (const auto& doc : whole) out.push_back(RankingFromJson(doc, source, 1));
    }
    return out;
  }
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(source, line_no, e.what());
    }
    out.push_back(RankingFromJson(doc, source, line_no));
  }
  return out;
}

std::vector<SentenceRanking> LoadRankings(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  return ParseRankings(in, path.string());
}

}  // namespace conceptual
