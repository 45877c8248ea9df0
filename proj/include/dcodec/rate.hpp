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
#include "dcodec/signal.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dcodec {

enum class DistributionSource : std::uint8_t { kAnalytic, kEmpirical };

/// Probabilities of the 2^b quantizer bins, indexed by alphabet symbol.
struct SymbolDistribution {
  Signal probs;
  DistributionSource source = DistributionSource::kEmpirical;
};

/// Throws InputError unless probabilities are nonnegative and sum to 1
/// within 1e-9.
void validate(const SymbolDistribution& dist);

/// Laplace(mu, c) cumulative distribution.
double laplace_cdf(double x, double mu, double c);

/// P(T_j <= X + V < T_{j+1}) for X ~ Laplace(0, c) and V from `spec`; the
/// outer bins absorb the saturated tails. The atom is closed form; the
/// triangular part is integrated adaptively to an absolute tolerance of 1e-9
/// per bin with panel breaks at the density's kinks.
SymbolDistribution analytic_bin_probs(double laplace_c, const DitherSpec& spec,
                                      const QuantizerConfig& cfg);

/// Relative symbol frequencies.
SymbolDistribution empirical_bin_probs(const SymbolBuffer& sym);

/// -sum p log2 p with 0 log 0 = 0.
double shannon_entropy(const SymbolDistribution& dist);

/// Gaussian maximum-entropy expression evaluated as printed:
///   1/2 log2(2 pi e (2 c^2 + sigma_m^2 - delta^2 / 12))
/// with sigma_m^2 from dither_variance(). Throws NumericError when the log
/// argument is not positive.
double gaussian_entropy_bound(double laplace_c, const DitherSpec& spec,
                              const QuantizerConfig& cfg);

/// Canonical prefix code over a dense alphabet [0, size).
class HuffmanCode {
 public:
  static constexpr int kMaxLength = 63;

  HuffmanCode() = default;

  /// Rebuilds the canonical code from lengths alone. Lengths must lie in
  /// [1, kMaxLength] and satisfy Kraft's inequality.
  static HuffmanCode from_lengths(std::vector<std::uint8_t> lengths);

  std::size_t size() const { return lengths_.size(); }
  const std::vector<std::uint8_t>& lengths() const { return lengths_; }
  const std::vector<std::uint64_t>& codes() const { return codes_; }

  double kraft_sum() const;
  /// Expected codeword length under `probs`.
  double average_length(const Signal& probs) const;

  /// Decoding tables, by code length.
  struct LengthRow {
    std::uint64_t first_code = 0;
    std::uint32_t count = 0;
    std::uint32_t offset = 0;  ///< into sorted_symbols
  };
  const std::vector<LengthRow>& rows() const { return rows_; }
  const std::vector<std::uint32_t>& sorted_symbols() const { return sorted_; }

 private:
  std::vector<std::uint8_t> lengths_;
  std::vector<std::uint64_t> codes_;
  std::vector<LengthRow> rows_;
  std::vector<std::uint32_t> sorted_;
};

/// Huffman code for `dist`: repeatedly merges the two lightest nodes, ties
/// going to the node holding the smallest symbol index. Zero-probability
/// symbols still receive codewords (they merge first, as if weighted by an
/// infinitesimal). Throws InputError when no symbol has positive mass.
HuffmanCode huffman_build(const SymbolDistribution& dist);

/// MSB-first bit sequence; `bit_count` excludes the zero padding of the last
/// byte.
struct BitBuffer {
  std::vector<std::uint8_t> bytes;
  std::uint64_t bit_count = 0;
};

BitBuffer huffman_encode(std::span<const std::uint32_t> symbols, const HuffmanCode& code);
BitBuffer huffman_encode(const SymbolBuffer& sym, const HuffmanCode& code);

/// Decodes exactly n symbols from the first `bit_limit` bits of `bytes`.
/// Throws FormatError when the stream ends mid-codeword.
std::vector<std::uint32_t> huffman_decode(std::span<const std::uint8_t> bytes,
                                          std::uint64_t bit_limit, const HuffmanCode& code,
                                          std::size_t n);
SymbolBuffer huffman_decode(const BitBuffer& bits, const HuffmanCode& code, std::size_t n,
                            const QuantizerConfig& cfg);

struct RateReport {
  double shannon_entropy = 0.0;       ///< bits/symbol
  double huffman_avg_length = 0.0;    ///< bits/symbol
  std::optional<double> gaussian_bound;
  bool empirical = true;
};

/// Empirical entropy and Huffman mean length of one symbol stream. When a
/// Laplace scale is given, the Gaussian expression is attached if defined.
RateReport rate_report(const SymbolBuffer& sym, const DitherSpec& spec,
                       std::optional<double> laplace_c = std::nullopt);

}  // namespace dcodec
