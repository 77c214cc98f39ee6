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

#include "conceptual/text.h"

#include <cctype>

namespace conceptual {

namespace {

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }

bool IsWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

char LowerChar(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

}  // namespace

std::string ToLower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = LowerChar(c);
  return out;
}

std::string_view Trim(std::string_view text) {
  while (!text.empty() && IsSpace(text.front())) text.remove_prefix(1);
  while (!text.empty() && IsSpace(text.back())) text.remove_suffix(1);
  return text;
}

std::string NormalizeWhitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : Trim(text)) {
    if (IsSpace(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::size_t CountOccurrences(std::string_view haystack,
                             std::string_view needle) {
  if (needle.empty()) return 0;
  std::size_t count = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

std::optional<std::size_t> FindWordCaseInsensitive(std::string_view text,
                                                   std::string_view word) {
  if (word.empty() || word.size() > text.size()) return std::nullopt;
  const std::string lower_text = ToLower(text);
  const std::string lower_word = ToLower(word);
  for (std::size_t pos = lower_text.find(lower_word);
       pos != std::string::npos;
       pos = lower_text.find(lower_word, pos + 1)) {
    const bool left_ok = pos == 0 || !IsWordChar(lower_text[pos - 1]);
    const std::size_t end = pos + lower_word.size();
    const bool right_ok = end == lower_text.size() || !IsWordChar(lower_text[end]);
    if (left_ok && right_ok) return pos;
  }
  return std::nullopt;
}

std::string ReplaceAt(std::string_view text, std::size_t pos,
                      std::size_t length, std::string_view replacement) {
  std::string out;
  out.reserve(text.size() - length + replacement.size());
  out.append(text.substr(0, pos));
  out.append(replacement);
  out.append(text.substr(pos + length));
  return out;
}

}  // namespace conceptual
