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

#include "dcodec/signal.hpp"

#include <cstdint>
#include <vector>

namespace dcodec {

enum class QuantizerMode : std::uint8_t { kMidRise = 0, kMidTread = 1 };

/// b-bit uniform scalar quantizer with 2^b levels.
///
/// Bin indices j run over [-2^(b-1), 2^(b-1) - 1].
///   mid-rise:  C_j = j delta + delta/2, cell [j delta, (j+1) delta)
///   mid-tread: C_j = j delta,           cell [j delta - delta/2, j delta + delta/2)
/// Inputs beyond the outermost thresholds saturate to the extreme bins.
struct QuantizerConfig {
  int bits = 1;
  double delta = 1.0;
  QuantizerMode mode = QuantizerMode::kMidRise;
  double full_scale = 1.0;

  /// delta = 2 F / 2^b, so a mid-rise codebook spans (-F, F).
  static QuantizerConfig from_full_scale(int bits, double full_scale = 1.0,
                                         QuantizerMode mode = QuantizerMode::kMidRise);

  std::int32_t min_index() const { return -(std::int32_t{1} << (bits - 1)); }
  std::int32_t max_index() const { return (std::int32_t{1} << (bits - 1)) - 1; }
  std::uint32_t levels() const { return std::uint32_t{1} << bits; }

  /// Reconstruction value of bin j (no range check).
  double level(std::int32_t j) const;
  /// Lower decision threshold of bin j; the cell of j is [lower(j), lower(j+1)).
  double lower_threshold(std::int32_t j) const;
};

void validate(const QuantizerConfig& cfg);

/// Codebook C_j for every bin in index order.
Signal codebook(const QuantizerConfig& cfg);

/// Interior decision thresholds (2^b - 1 of them), increasing.
Signal thresholds(const QuantizerConfig& cfg);

/// Quantizer output as bin indices. Entropy coding works on the alphabet
/// symbol s = j - min_index(), which lies in [0, 2^b).
struct SymbolBuffer {
  std::vector<std::int32_t> indices;
  QuantizerConfig config;

  std::vector<std::uint32_t> alphabet_symbols() const;
  static SymbolBuffer from_alphabet(const std::vector<std::uint32_t>& symbols,
                                    const QuantizerConfig& cfg);
};

/// Bin index of one sample. Ties on a threshold go to the upper bin.
std::int32_t quantize_sample(double y, const QuantizerConfig& cfg);

/// Throws InputError naming the first non-finite sample.
SymbolBuffer quantize(const Signal& y, const QuantizerConfig& cfg);

/// Throws CorruptionError on an out-of-range index.
Signal reconstruct(const SymbolBuffer& sym);

/// Non-subtractive error x_hat - x, measured against the pre-dither input.
Signal error_signal(const Signal& x, const Signal& x_hat);

}  // namespace dcodec
