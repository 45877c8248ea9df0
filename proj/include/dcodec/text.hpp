// Copyright 2026 The dither-codec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace dcodec {

/// Policy applied to every transcript before scoring. Recorded verbatim in
/// sweep metadata; CER values are comparable only under one policy.
inline constexpr std::string_view kNormalizationPolicy =
    "lowercase(root locale); drop Unicode categories P* and S*; "
    "collapse whitespace runs to one space; trim";

/// Applies kNormalizationPolicy to UTF-8 text. Invalid sequences become U+FFFD.
std::string normalize_transcript(std::string_view utf8);

/// UTF-8 to Unicode scalar values (invalid sequences become U+FFFD).
std::u32string to_scalars(std::string_view utf8);

/// Unit-cost edit distance between two scalar sequences.
std::size_t levenshtein(std::u32string_view ref, std::u32string_view hyp);
/// Edit distance over the Unicode scalar values of two UTF-8 strings.
std::size_t levenshtein(std::string_view ref, std::string_view hyp);

struct CerResult {
  std::string reference;
  std::string hypothesis;
  std::size_t distance = 0;
  double cer = 0.0;
};

/// distance / reference length in scalars. Not clamped: a long hypothesis
/// can score above 1. Throws InputError on an empty reference.
CerResult cer(std::string_view ref, std::string_view hyp);

}  // namespace dcodec
