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

#include "dcodec/codec.hpp"

#include "dcodec/error.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace dcodec {
namespace {

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(std::span<const std::uint8_t> b, std::size_t off, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(b[off + static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

}  // namespace

std::uint16_t alpha_to_fixed(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("alpha must lie in [0, 1]");
  return static_cast<std::uint16_t>(std::lround(alpha * 65535.0));
}

QuantizerConfig StreamHeader::quantizer() const {
  QuantizerConfig cfg;
  cfg.bits = bits;
  cfg.mode = mode;
  cfg.delta = delta;
  cfg.full_scale = delta * static_cast<double>(1u << bits) / 2.0;
  validate(cfg);
  return cfg;
}

std::vector<std::uint8_t> EncodedStream::to_bytes() const {
  std::vector<std::uint8_t> out;
  out.reserve(header.size_bytes() + payload.bytes.size());
  out.insert(out.end(), StreamHeader::kMagic.begin(), StreamHeader::kMagic.end());
  out.push_back(StreamHeader::kVersion);
  out.push_back(static_cast<std::uint8_t>(header.bits));
  out.push_back(static_cast<std::uint8_t>(header.mode));
  out.push_back(static_cast<std::uint8_t>(header.family));
  put_le(out, header.alpha_fixed, 2);
  put_le(out, std::bit_cast<std::uint64_t>(header.delta), 8);
  put_le(out, header.sample_rate, 4);
  put_le(out, header.sample_count, 6);
  out.insert(out.end(), header.code_lengths.begin(), header.code_lengths.end());
  out.insert(out.end(), payload.bytes.begin(), payload.bytes.end());
  return out;
}

EncodedStream EncodedStream::parse(std::span<const std::uint8_t> b) {
  if (b.size() < StreamHeader::kFixedSize) {
    throw FormatError("stream: " + std::to_string(b.size()) + " bytes is shorter than the header");
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (b[i] != static_cast<std::uint8_t>(StreamHeader::kMagic[i])) {
      throw FormatError("stream: bad magic");
    }
  }
  if (b[4] != StreamHeader::kVersion) {
    throw FormatError("stream: unsupported version " + std::to_string(b[4]));
  }
  EncodedStream s;
  StreamHeader& h = s.header;
  h.bits = b[5];
  if (h.bits < 1 || h.bits > 16) throw FormatError("stream: bits " + std::to_string(h.bits) + " out of range");
  if (b[6] > 1) throw FormatError("stream: unknown quantizer mode " + std::to_string(b[6]));
  h.mode = static_cast<QuantizerMode>(b[6]);
  h.family = b[7];
  if (h.family != 1 && h.family != 2) throw FormatError("stream: unknown dither family " + std::to_string(h.family));
  h.alpha_fixed = static_cast<std::uint16_t>(get_le(b, 8, 2));
  h.delta = std::bit_cast<double>(get_le(b, 10, 8));
  if (!(h.delta > 0.0) || !std::isfinite(h.delta)) throw FormatError("stream: invalid delta");
  h.sample_rate = static_cast<std::uint32_t>(get_le(b, 18, 4));
  if (h.sample_rate == 0 || h.sample_rate > 0x7FFFFFFFu) throw FormatError("stream: invalid sample rate");
  h.sample_count = get_le(b, 22, 6);
  const std::size_t levels = std::size_t{1} << h.bits;
  if (b.size() < StreamHeader::kFixedSize + levels) throw FormatError("stream: truncated code table");
  h.code_lengths.assign(b.begin() + StreamHeader::kFixedSize,
                        b.begin() + static_cast<std::ptrdiff_t>(StreamHeader::kFixedSize + levels));
  s.payload.bytes.assign(b.begin() + static_cast<std::ptrdiff_t>(StreamHeader::kFixedSize + levels), b.end());
  s.payload.bit_count = static_cast<std::uint64_t>(s.payload.bytes.size()) * 8;
  return s;
}

EncodedStream encode(const AudioBuffer& x, const DitherSpec& spec, const QuantizerConfig& cfg) {
  validate(x);
  validate(spec);
  validate(cfg);
  if (std::abs(spec.delta - cfg.delta) > 1e-12 * cfg.delta) {
    throw InputError("encode: dither delta does not match quantizer delta");
  }
  const auto n = static_cast<std::uint64_t>(x.size());
  if (n > StreamHeader::kMaxSamples) throw InputError("encode: sample count exceeds 2^48 - 1");

  const Signal y = x.samples + sample_dither(spec, x.size());
  const SymbolBuffer sym = quantize(y, cfg);
  const HuffmanCode code = huffman_build(empirical_bin_probs(sym));

  EncodedStream s;
  StreamHeader& h = s.header;
  h.bits = cfg.bits;
  h.mode = cfg.mode;
  h.family = spec.family;
  h.alpha_fixed = alpha_to_fixed(spec.alpha);
  h.delta = cfg.delta;
  h.sample_rate = static_cast<std::uint32_t>(x.sample_rate);
  h.sample_count = n;
  h.code_lengths = code.lengths();
  s.payload = huffman_encode(sym, code);
  return s;
}

SymbolBuffer decode_symbols(const EncodedStream& s) {
  const StreamHeader& h = s.header;
  const QuantizerConfig cfg = h.quantizer();
  if (h.code_lengths.size() != cfg.levels()) throw FormatError("stream: code table size mismatch");
  if (h.sample_count > StreamHeader::kMaxSamples) throw FormatError("stream: sample count too large");
  HuffmanCode code;
  try {
    code = HuffmanCode::from_lengths(h.code_lengths);
  } catch (const FormatError& e) {
    throw FormatError(std::string("stream: invalid code table: ") + e.what());
  }
  // Every codeword is at least one bit, so a valid payload holds >= N bits.
  if (h.sample_count > s.payload.bit_count) {
    throw FormatError("stream: payload truncated (" + std::to_string(s.payload.bit_count) +
                      " bits for " + std::to_string(h.sample_count) + " symbols)");
  }
  const auto symbols = huffman_decode(s.payload.bytes, s.payload.bit_count, code,
                                      static_cast<std::size_t>(h.sample_count));
  std::uint64_t used = 0;
  for (std::uint32_t sym : symbols) used += code.lengths()[sym];
  const std::uint64_t expected_bytes = (used + 7) / 8;
  if (s.payload.bytes.size() != expected_bytes) {
    throw FormatError("stream: symbol count mismatch, " +
                      std::to_string(s.payload.bytes.size() - expected_bytes) +
                      " trailing payload bytes");
  }
  if (used % 8 != 0) {
    const std::uint8_t pad_mask = static_cast<std::uint8_t>((1u << (8 - used % 8)) - 1u);
    if ((s.payload.bytes.back() & pad_mask) != 0) throw FormatError("stream: nonzero padding bits");
  }
  return SymbolBuffer::from_alphabet(symbols, cfg);
}

AudioBuffer decode(const EncodedStream& s) {
  if (s.header.sample_count == 0) throw FormatError("stream: zero samples");
  AudioBuffer out;
  out.sample_rate = static_cast<int>(s.header.sample_rate);
  out.samples = reconstruct(decode_symbols(s));
  return out;
}

AudioBuffer decode(std::span<const std::uint8_t> bytes) { return decode(EncodedStream::parse(bytes)); }

}  // namespace dcodec
