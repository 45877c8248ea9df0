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

#include <filesystem>
#include <optional>
#include <string>

namespace dcodec {

/// External speech recognizer invoked through /bin/sh.
///
/// `command_template` may contain `{in}` (input WAV) and `{out}` (transcript
/// file); both are substituted shell-quoted. Without `{out}` the command's
/// stdout is taken as the transcript.
struct AsrClient {
  std::string command_template;
  double timeout_s = 600.0;
  std::filesystem::path working_dir;
  int max_parallel = 1;
};

struct Transcript {
  bool ok = false;
  std::string raw;         ///< transcript as produced, trailing whitespace stripped
  std::string text;        ///< after normalize_transcript
  std::string failure;     ///< reason when !ok
  int attempts = 0;
};

/// Runs the recognizer on `wav`, writing the transcript to `out` (default:
/// `wav` with a .txt extension). A nonzero exit is retried once. Timeouts,
/// a second nonzero exit, or an empty transcript yield ok = false; this
/// function does not throw for recognizer failures.
Transcript transcribe(const AsrClient& client, const std::filesystem::path& wav,
                      std::optional<std::filesystem::path> out = std::nullopt);

/// POSIX single-quote escaping for /bin/sh.
std::string shell_quote(const std::string& s);

/// Substitutes the placeholders; appends a stdout redirect when `{out}` is
/// absent.
std::string expand_command(const std::string& tmpl, const std::filesystem::path& in,
                           const std::filesystem::path& out);

}  // namespace dcodec
