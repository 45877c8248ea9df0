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

#include "dcodec/dither.hpp"
#include "dcodec/quantizer.hpp"
#include "dcodec/rate.hpp"
#include "dcodec/signal.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace dcodec {

/// Self-describing stream layout (all multi-byte fields little-endian):
///
///   offset  size  field
///        0     4  magic "PDQC"
///        4     1  version
///        5     1  bits b
///        6     1  quantizer mode (0 mid-rise, 1 mid-tread)
///        7     1  dither family m
///        8     2  alpha, round(alpha * 65535)
///       10     8  delta, IEEE-754 binary64
///       18     4  sample rate
///       22     6  sample count N
///       28   2^b  Huffman codeword length per symbol
///   28+2^b     .  payload, MSB-first, zero-padded to a byte boundary
///
/// The dither realization is never stored; decoding is codebook lookup only.
struct StreamHeader {
  static constexpr std::array<char, 4> kMagic = {'P', 'D', 'Q', 'C'};
  static constexpr std::uint8_t kVersion = 1;
  static constexpr std::uint64_t kMaxSamples = (std::uint64_t{1} << 48) - 1;
  static constexpr std::size_t kFixedSize = 28;

  int bits = 1;
  QuantizerMode mode = QuantizerMode::kMidRise;
  int family = 1;
  std::uint16_t alpha_fixed = 0;
  double delta = 1.0;
  std::uint32_t sample_rate = 0;
  std::uint64_t sample_count = 0;
  std::vector<std::uint8_t> code_lengths;

  double alpha() const { return alpha_fixed / 65535.0; }
  QuantizerConfig quantizer() const;
  std::size_t size_bytes() const { return kFixedSize + code_lengths.size(); }
};

struct EncodedStream {
  StreamHeader header;
  BitBuffer payload;

  std::vector<std::uint8_t> to_bytes() const;
  /// Throws FormatError on bad magic, unknown version, inconsistent fields or
  /// a payload shorter than its declared content.
  static EncodedStream parse(std::span<const std::uint8_t> bytes);
};

std::uint16_t alpha_to_fixed(double alpha);

/// Dither, quantize and Huffman-code one buffer. The code is built from the
/// stream's own symbol histogram. Requires spec.delta == cfg.delta.
EncodedStream encode(const AudioBuffer& x, const DitherSpec& spec, const QuantizerConfig& cfg);

/// Symbols carried by a stream, decoded from the payload.
SymbolBuffer decode_symbols(const EncodedStream& s);

/// Codebook amplitudes at the recorded sample rate.
AudioBuffer decode(const EncodedStream& s);
AudioBuffer decode(std::span<const std::uint8_t> bytes);

}  // namespace dcodec
