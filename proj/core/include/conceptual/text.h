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

#ifndef CONCEPTUAL_TEXT_H_
#define CONCEPTUAL_TEXT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace conceptual {

// The literal placeholder every masked sentence carries exactly once.
inline constexpr std::string_view kMaskMarker = "[MASK]";

// ASCII lowercase. Non-ASCII bytes are passed through unchanged.
std::string ToLower(std::string_view text);

// Strips leading and trailing ASCII whitespace.
std::string_view Trim(std::string_view text);

// Trims and collapses every internal run of whitespace into one space.
std::string NormalizeWhitespace(std::string_view text);

// Number of non-overlapping occurrences of `needle` in `haystack`.
std::size_t CountOccurrences(std::string_view haystack, std::string_view needle);

// Position of the first case-insensitive occurrence of `word` in `text` that
// is not glued to other letters or digits on either side.
std::optional<std::size_t> FindWordCaseInsensitive(std::string_view text,
                                                   std::string_view word);

// Replaces `length` bytes at `pos` with `replacement`.
std::string ReplaceAt(std::string_view text, std::size_t pos,
                      std::size_t length, std::string_view replacement);

}  // namespace conceptual

#endif  // CONCEPTUAL_TEXT_H_
