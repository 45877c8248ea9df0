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

#include "dcodec/asr.hpp"
#include "dcodec/model_fit.hpp"
#include "dcodec/quantizer.hpp"
#include "dcodec/signal.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dcodec {

/// Nine-point grid {0, 0.125, ..., 1}.
std::vector<double> default_alpha_grid();

struct SweepOptions {
  std::vector<double> alphas = default_alpha_grid();
  std::vector<int> families = {1, 2};
  std::vector<int> bits = {1, 2, 3};
  std::uint64_t seed = 0;
  std::optional<AsrClient> asr;
  int jobs = 1;
  /// Decoded and reference WAVs plus transcripts go here when ASR is enabled.
  std::filesystem::path out_dir;
  int tau = 5;
  QuantizerMode mode = QuantizerMode::kMidRise;
  double full_scale = 1.0;
};

/// Metrics for one (file, m, alpha, b) job.
struct ConditionRecord {
  std::string file;
  int family = 1;
  double alpha = 0.0;
  int bits = 1;
  std::uint64_t dither_seed = 0;
  bool ok = false;
  std::string failure;
  double mse = 0.0;
  double acf5 = 0.0;
  double entropy_bits = 0.0;
  double huffman_rate_bits = 0.0;
  std::uint64_t payload_bits = 0;
  std::optional<double> cer;
  std::string cer_failure;
};

struct SweepResult {
  SweepTable table;
  std::vector<ConditionRecord> records;   ///< file-major, then m, b, alpha
  std::vector<std::string> failures;      ///< human-readable log, in job order
  std::vector<std::string> references;    ///< normalized reference transcript per file
};

/// Per-job dither seed: a hash of (seed, file label, m, alpha bits, b).
std::uint64_t derive_dither_seed(std::uint64_t seed, const std::string& file, int family,
                                 double alpha, int bits);

/// Runs every (file, m, alpha, b) condition: encode, decode from bytes,
/// error/rate metrics against the input, and, when an ASR client is set, CER
/// of the decoded audio against the recognizer's transcript of the input.
/// Per-file failures are recorded and excluded from aggregation. Results are
/// independent of `jobs`.
SweepResult run_sweep(const std::vector<AudioBuffer>& corpus, const SweepOptions& opts);

}  // namespace dcodec
