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

#include "dcodec/quantizer.hpp"

#include "dcodec/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dcodec {

QuantizerConfig QuantizerConfig::from_full_scale(int bits, double full_scale,
                                                 QuantizerMode mode) {
  QuantizerConfig cfg;
  cfg.bits = bits;
  cfg.full_scale = full_scale;
  cfg.mode = mode;
  if (bits >= 1 && bits <= 16) cfg.delta = 2.0 * full_scale / static_cast<double>(1u << bits);
  validate(cfg);
  return cfg;
}

double QuantizerConfig::level(std::int32_t j) const {
  return mode == QuantizerMode::kMidRise ? j * delta + 0.5 * delta : j * delta;
}

double QuantizerConfig::lower_threshold(std::int32_t j) const {
  return mode == QuantizerMode::kMidRise ? j * delta : j * delta - 0.5 * delta;
}

void validate(const QuantizerConfig& cfg) {
  if (cfg.bits < 1 || cfg.bits > 16) {
    throw InputError("quantizer bits must lie in [1, 16], got " + std::to_string(cfg.bits));
  }
  if (!(cfg.delta > 0.0) || !std::isfinite(cfg.delta)) {
    throw InputError("quantizer delta must be positive and finite");
  }
  if (!(cfg.full_scale > 0.0) || !std::isfinite(cfg.full_scale)) {
    throw InputError("quantizer full_scale must be positive and finite");
  }
  if (cfg.mode != QuantizerMode::kMidRise && cfg.mode != QuantizerMode::kMidTread) {
    throw InputError("unknown quantizer mode");
  }
}

Signal codebook(const QuantizerConfig& cfg) {
  validate(cfg);
  Signal c(cfg.levels());
  for (std::int32_t j = cfg.min_index(); j <= cfg.max_index(); ++j) {
    c[j - cfg.min_index()] = cfg.level(j);
  }
  return c;
}

Signal thresholds(const QuantizerConfig& cfg) {
  validate(cfg);
  Signal t(cfg.levels() - 1);
  for (std::int32_t j = cfg.min_index() + 1; j <= cfg.max_index(); ++j) {
    t[j - cfg.min_index() - 1] = cfg.lower_threshold(j);
  }
  return t;
}

std::int32_t quantize_sample(double y, const QuantizerConfig& cfg) {
  const double u = cfg.mode == QuantizerMode::kMidRise ? y / cfg.delta : y / cfg.delta + 0.5;
  const double j = std::floor(u);
  return static_cast<std::int32_t>(
      std::clamp(j, static_cast<double>(cfg.min_index()), static_cast<double>(cfg.max_index())));
}

SymbolBuffer quantize(const Signal& y, const QuantizerConfig& cfg) {
  validate(cfg);
  SymbolBuffer out;
  out.config = cfg;
  out.indices.resize(static_cast<std::size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i])) {
      throw InputError("quantize: non-finite sample at index " + std::to_string(i));
    }
    out.indices[static_cast<std::size_t>(i)] = quantize_sample(y[i], cfg);
  }
  return out;
}

Signal reconstruct(const SymbolBuffer& sym) {
  const QuantizerConfig& cfg = sym.config;
  validate(cfg);
  Signal out(static_cast<Eigen::Index>(sym.indices.size()));
  for (std::size_t i = 0; i < sym.indices.size(); ++i) {
    const std::int32_t j = sym.indices[i];
    if (j < cfg.min_index() || j > cfg.max_index()) {
      throw CorruptionError("reconstruct: bin index " + std::to_string(j) + " at position " +
                            std::to_string(i) + " outside [" + std::to_string(cfg.min_index()) +
                            ", " + std::to_string(cfg.max_index()) + "]");
    }
    out[static_cast<Eigen::Index>(i)] = cfg.level(j);
  }
  return out;
}

std::vector<std::uint32_t> SymbolBuffer::alphabet_symbols() const {
  std::vector<std::uint32_t> s(indices.size());
  const std::int32_t lo = config.min_index();
  const std::int32_t hi = config.max_index();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < lo || indices[i] > hi) {
      throw CorruptionError("bin index " + std::to_string(indices[i]) + " at position " +
                            std::to_string(i) + " outside the alphabet");
    }
    s[i] = static_cast<std::uint32_t>(indices[i] - lo);
  }
  return s;
}

SymbolBuffer SymbolBuffer::from_alphabet(const std::vector<std::uint32_t>& symbols,
                                         const QuantizerConfig& cfg) {
  SymbolBuffer out;
  out.config = cfg;
  out.indices.resize(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i] >= cfg.levels()) {
      throw CorruptionError("symbol " + std::to_string(symbols[i]) + " at position " +
                            std::to_string(i) + " outside the alphabet");
    }
    out.indices[i] = static_cast<std::int32_t>(symbols[i]) + cfg.min_index();
  }
  return out;
}

Signal error_signal(const Signal& x, const Signal& x_hat) {
  if (x.size() != x_hat.size()) {
    throw InputError("error_signal: length mismatch (" + std::to_string(x.size()) + " vs " +
                     std::to_string(x_hat.size()) + ")");
  }
  return x_hat - x;
}

}  // namespace dcodec
