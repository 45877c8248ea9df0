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

#include "dcodec/text.hpp"

#include "dcodec/error.hpp"

#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <vector>

namespace dcodec {
namespace {

bool is_punct_or_symbol(UChar32 c) {
  switch (u_charType(c)) {
    case U_DASH_PUNCTUATION:
    case U_START_PUNCTUATION:
    case U_END_PUNCTUATION:
    case U_CONNECTOR_PUNCTUATION:
    case U_OTHER_PUNCTUATION:
    case U_INITIAL_PUNCTUATION:
    case U_FINAL_PUNCTUATION:
    case U_MATH_SYMBOL:
    case U_CURRENCY_SYMBOL:
    case U_MODIFIER_SYMBOL:
    case U_OTHER_SYMBOL:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::u32string to_scalars(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto len = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < len) {
    UChar32 c = 0;
    U8_NEXT(s, i, len, c);
    out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
  }
  return out;
}

std::string normalize_transcript(std::string_view utf8) {
  icu::UnicodeString lowered =
      icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  lowered.toLower(icu::Locale::getRoot());

  icu::UnicodeString out;
  bool pending_space = false;
  for (int32_t i = 0; i < lowered.length();) {
    const UChar32 c = lowered.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) {
      pending_space = true;
      continue;
    }
    if (is_punct_or_symbol(c)) continue;
    if (pending_space && !out.isEmpty()) out.append(static_cast<UChar>(u' '));
    pending_space = false;
    out.append(c);
  }
  std::string result;
  out.toUTF8String(result);
  return result;
}

std::size_t levenshtein(std::u32string_view ref, std::u32string_view hyp) {
  if (ref.empty()) return hyp.size();
  if (hyp.empty()) return ref.size();
  std::vector<std::size_t> prev(hyp.size() + 1);
  std::vector<std::size_t> cur(hyp.size() + 1);
  for (std::size_t j = 0; j <= hyp.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= hyp.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[hyp.size()];
}

std::size_t levenshtein(std::string_view ref, std::string_view hyp) {
  return levenshtein(std::u32string_view(to_scalars(ref)), std::u32string_view(to_scalars(hyp)));
}

CerResult cer(std::string_view ref, std::string_view hyp) {
  const std::u32string r = to_scalars(ref);
  if (r.empty()) throw InputError("cer: empty reference transcript");
  const std::u32string h = to_scalars(hyp);
  CerResult out;
  out.reference = std::string(ref);
  out.hypothesis = std::string(hyp);
  out.distance = levenshtein(std::u32string_view(r), std::u32string_view(h));
  out.cer = static_cast<double>(out.distance) / static_cast<double>(r.size());
  return out;
}

}  // namespace dcodec
