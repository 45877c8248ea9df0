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

#include "dcodec/rate.hpp"

#include "dcodec/detail/quadrature.hpp"
#include "dcodec/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

namespace dcodec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBinTolerance = 1e-9;

// Laplace(0, c) mass of [lo, hi), computed on the side that avoids
// cancellation.
double laplace_mass(double lo, double hi, double c) {
  if (!(hi > lo)) return 0.0;
  if (hi <= 0.0) {
    const double upper = hi == kInf ? 0.5 : 0.5 * std::exp(hi / c);
    const double lower = lo == -kInf ? 0.0 : 0.5 * std::exp(lo / c);
    return upper - lower;
  }
  if (lo >= 0.0) {
    const double lower_tail = lo == -kInf ? 0.5 : 0.5 * std::exp(-lo / c);
    const double upper_tail = hi == kInf ? 0.0 : 0.5 * std::exp(-hi / c);
    return lower_tail - upper_tail;
  }
  const double left = lo == -kInf ? 0.5 : 0.5 - 0.5 * std::exp(lo / c);
  const double right = hi == kInf ? 0.5 : 0.5 - 0.5 * std::exp(-hi / c);
  return left + right;
}

}  // namespace

void validate(const SymbolDistribution& dist) {
  if (dist.probs.size() == 0) throw InputError("distribution is empty");
  if ((dist.probs < 0.0).any() || !dist.probs.isFinite().all()) {
    throw InputError("distribution has negative or non-finite entries");
  }
  if (std::abs(dist.probs.sum() - 1.0) > 1e-9) {
    throw InputError("distribution does not sum to 1 (sum=" + std::to_string(dist.probs.sum()) +
                     ")");
  }
}

double laplace_cdf(double x, double mu, double c) {
  const double z = (x - mu) / c;
  return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
}

SymbolDistribution analytic_bin_probs(double laplace_c, const DitherSpec& spec,
                                      const QuantizerConfig& cfg) {
  validate(spec);
  validate(cfg);
  if (!(laplace_c > 0.0)) throw InputError("laplace scale c must be positive");
  if (std::abs(spec.delta - cfg.delta) > 1e-12 * cfg.delta) {
    throw InputError("dither delta does not match quantizer delta");
  }
  const double a = support_half_width(spec);
  const double c = laplace_c;

  SymbolDistribution dist;
  dist.source = DistributionSource::kAnalytic;
  dist.probs.resize(cfg.levels());
  for (std::int32_t j = cfg.min_index(); j <= cfg.max_index(); ++j) {
    const double lo = j == cfg.min_index() ? -kInf : cfg.lower_threshold(j);
    const double hi = j == cfg.max_index() ? kInf : cfg.lower_threshold(j + 1);
    double p = (1.0 - spec.alpha) * laplace_mass(lo, hi, c);
    if (spec.alpha > 0.0) {
      auto integrand = [&](double v) {
        return (a - std::abs(v)) / (a * a) * laplace_mass(lo - v, hi - v, c);
      };
      // The integrand has kinks at v = 0 (triangle apex) and wherever a
      // shifted threshold crosses the Laplace cusp (v = lo, v = hi).
      std::vector<double> breaks = {-a, 0.0, a};
      for (double t : {lo, hi}) {
        if (std::isfinite(t) && t > -a && t < a) breaks.push_back(t);
      }
      std::sort(breaks.begin(), breaks.end());
      breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
      const double panel_tol = kBinTolerance / static_cast<double>(breaks.size());
      double tri = 0.0;
      for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        tri += detail::integrate_adaptive(integrand, breaks[k], breaks[k + 1], panel_tol).value;
      }
      p += spec.alpha * tri;
    }
    dist.probs[j - cfg.min_index()] = std::max(p, 0.0);
  }
  const double total = dist.probs.sum();
  if (std::abs(total - 1.0) > 1e-9) {
    throw NumericError("analytic_bin_probs: bin masses sum to " + std::to_string(total));
  }
  return dist;
}

SymbolDistribution empirical_bin_probs(const SymbolBuffer& sym) {
  if (sym.indices.empty()) throw InputError("empirical_bin_probs: empty symbol buffer");
  validate(sym.config);
  Eigen::ArrayXd counts = Eigen::ArrayXd::Zero(sym.config.levels());
  for (std::uint32_t s : sym.alphabet_symbols()) counts[s] += 1.0;
  return {counts / static_cast<double>(sym.indices.size()), DistributionSource::kEmpirical};
}

double shannon_entropy(const SymbolDistribution& dist) {
  validate(dist);
  double h = 0.0;
  for (Eigen::Index k = 0; k < dist.probs.size(); ++k) {
    const double p = dist.probs[k];
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double gaussian_entropy_bound(double laplace_c, const DitherSpec& spec,
                              const QuantizerConfig& cfg) {
  validate(cfg);
  const double arg = 2.0 * laplace_c * laplace_c + dither_variance(spec) -
                     cfg.delta * cfg.delta / 12.0;
  if (!(arg > 0.0)) {
    throw NumericError("gaussian_entropy_bound: log argument " + std::to_string(arg) +
                       " is not positive");
  }
  return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * arg);
}

HuffmanCode HuffmanCode::from_lengths(std::vector<std::uint8_t> lengths) {
  if (lengths.empty()) throw InputError("huffman: empty alphabet");
  long double kraft = 0.0L;
  for (std::size_t s = 0; s < lengths.size(); ++s) {
    if (lengths[s] < 1 || lengths[s] > kMaxLength) {
      throw FormatError("huffman: codeword length " + std::to_string(lengths[s]) +
                        " for symbol " + std::to_string(s) + " out of range");
    }
    kraft += std::ldexp(1.0L, -lengths[s]);
  }
  if (kraft > 1.0L + 1e-15L) throw FormatError("huffman: lengths violate Kraft inequality");

  HuffmanCode code;
  code.lengths_ = std::move(lengths);
  const std::size_t n = code.lengths_.size();
  code.sorted_.resize(n);
  for (std::size_t s = 0; s < n; ++s) code.sorted_[s] = static_cast<std::uint32_t>(s);
  std::stable_sort(code.sorted_.begin(), code.sorted_.end(), [&](std::uint32_t x, std::uint32_t y) {
    return code.lengths_[x] < code.lengths_[y];
  });

  code.codes_.assign(n, 0);
  code.rows_.assign(kMaxLength + 1, {});
  std::uint64_t next = 0;
  int prev_len = code.lengths_[code.sorted_.front()];
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t s = code.sorted_[i];
    const int len = code.lengths_[s];
    next <<= (len - prev_len);
    prev_len = len;
    LengthRow& row = code.rows_[static_cast<std::size_t>(len)];
    if (row.count == 0) {
      row.first_code = next;
      row.offset = static_cast<std::uint32_t>(i);
    }
    ++row.count;
    code.codes_[s] = next++;
  }
  return code;
}

double HuffmanCode::kraft_sum() const {
  double k = 0.0;
  for (auto l : lengths_) k += std::ldexp(1.0, -l);
  return k;
}

double HuffmanCode::average_length(const Signal& probs) const {
  if (static_cast<std::size_t>(probs.size()) != lengths_.size()) {
    throw InputError("average_length: alphabet size mismatch");
  }
  double avg = 0.0;
  for (std::size_t s = 0; s < lengths_.size(); ++s) {
    avg += probs[static_cast<Eigen::Index>(s)] * lengths_[s];
  }
  return avg;
}

HuffmanCode huffman_build(const SymbolDistribution& dist) {
  const Eigen::Index n = dist.probs.size();
  if (n == 0) throw InputError("huffman_build: empty alphabet");
  if (!(dist.probs > 0.0).any()) {
    throw InputError("huffman_build: no symbol has positive probability");
  }
  if (n == 1) return HuffmanCode::from_lengths({1});

  struct Node {
    double weight;
    std::uint32_t min_symbol;
    std::int32_t id;
  };
  auto heavier = [](const Node& x, const Node& y) {
    if (x.weight != y.weight) return x.weight > y.weight;
    return x.min_symbol > y.min_symbol;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(heavier)> heap(heavier);
  std::vector<std::int32_t> parent(static_cast<std::size_t>(2 * n - 1), -1);
  for (Eigen::Index s = 0; s < n; ++s) {
    heap.push({dist.probs[s], static_cast<std::uint32_t>(s), static_cast<std::int32_t>(s)});
  }
  std::int32_t next_id = static_cast<std::int32_t>(n);
  while (heap.size() > 1) {
    const Node a = heap.top();
    heap.pop();
    const Node b = heap.top();
    heap.pop();
    parent[static_cast<std::size_t>(a.id)] = next_id;
    parent[static_cast<std::size_t>(b.id)] = next_id;
    heap.push({a.weight + b.weight, std::min(a.min_symbol, b.min_symbol), next_id});
    ++next_id;
  }
  // Parents always have larger ids, so depths resolve in one backward sweep.
  std::vector<int> depth(parent.size(), 0);
  for (std::int32_t id = next_id - 2; id >= 0; --id) {
    depth[static_cast<std::size_t>(id)] = depth[static_cast<std::size_t>(parent[static_cast<std::size_t>(id)])] + 1;
  }
  std::vector<std::uint8_t> lengths(static_cast<std::size_t>(n));
  for (Eigen::Index s = 0; s < n; ++s) {
    const int d = depth[static_cast<std::size_t>(s)];
    if (d > HuffmanCode::kMaxLength) {
      throw NumericError("huffman_build: codeword length " + std::to_string(d) +
                         " exceeds the supported maximum");
    }
    lengths[static_cast<std::size_t>(s)] = static_cast<std::uint8_t>(d);
  }
  return HuffmanCode::from_lengths(std::move(lengths));
}

BitBuffer huffman_encode(std::span<const std::uint32_t> symbols, const HuffmanCode& code) {
  BitBuffer out;
  std::uint64_t acc = 0;  // pending bits, right-aligned
  int pending = 0;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const std::uint32_t s = symbols[i];
    if (s >= code.size()) {
      throw CorruptionError("huffman_encode: symbol " + std::to_string(s) + " at position " +
                            std::to_string(i) + " outside the alphabet");
    }
    const int len = code.lengths()[s];
    const std::uint64_t word = code.codes()[s];
    for (int b = len - 1; b >= 0; --b) {
      acc = (acc << 1) | ((word >> b) & 1u);
      if (++pending == 8) {
        out.bytes.push_back(static_cast<std::uint8_t>(acc));
        acc = 0;
        pending = 0;
      }
    }
    out.bit_count += static_cast<std::uint64_t>(len);
  }
  if (pending > 0) out.bytes.push_back(static_cast<std::uint8_t>(acc << (8 - pending)));
  return out;
}

BitBuffer huffman_encode(const SymbolBuffer& sym, const HuffmanCode& code) {
  if (code.size() != sym.config.levels()) {
    throw InputError("huffman_encode: code alphabet does not match quantizer levels");
  }
  const auto symbols = sym.alphabet_symbols();
  return huffman_encode(std::span<const std::uint32_t>(symbols), code);
}

std::vector<std::uint32_t> huffman_decode(std::span<const std::uint8_t> bytes,
                                          std::uint64_t bit_limit, const HuffmanCode& code,
                                          std::size_t n) {
  bit_limit = std::min<std::uint64_t>(bit_limit, static_cast<std::uint64_t>(bytes.size()) * 8);
  std::vector<std::uint32_t> out;
  out.reserve(n);
  const auto& rows = code.rows();
  std::uint64_t pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t word = 0;
    int len = 0;
    for (;;) {
      if (pos >= bit_limit) {
        throw FormatError("huffman_decode: stream truncated inside symbol " + std::to_string(i) +
                          " of " + std::to_string(n));
      }
      const unsigned bit = (bytes[static_cast<std::size_t>(pos >> 3)] >> (7 - (pos & 7))) & 1u;
      ++pos;
      word = (word << 1) | bit;
      ++len;
      if (len > HuffmanCode::kMaxLength) throw FormatError("huffman_decode: invalid codeword");
      const auto& row = rows[static_cast<std::size_t>(len)];
      if (row.count > 0 && word >= row.first_code && word - row.first_code < row.count) {
        out.push_back(code.sorted_symbols()[row.offset + (word - row.first_code)]);
        break;
      }
    }
  }
  return out;
}

SymbolBuffer huffman_decode(const BitBuffer& bits, const HuffmanCode& code, std::size_t n,
                            const QuantizerConfig& cfg) {
  if (code.size() != cfg.levels()) {
    throw InputError("huffman_decode: code alphabet does not match quantizer levels");
  }
  return SymbolBuffer::from_alphabet(huffman_decode(bits.bytes, bits.bit_count, code, n), cfg);
}

RateReport rate_report(const SymbolBuffer& sym, const DitherSpec& spec,
                       std::optional<double> laplace_c) {
  const SymbolDistribution dist = empirical_bin_probs(sym);
  RateReport r;
  r.empirical = true;
  r.shannon_entropy = shannon_entropy(dist);
  r.huffman_avg_length = huffman_build(dist).average_length(dist.probs);
  if (laplace_c) {
    try {
      r.gaussian_bound = gaussian_entropy_bound(*laplace_c, spec, sym.config);
    } catch (const NumericError&) {
      // Undefined for this (c, delta); leave unset.
    }
  }
  return r;
}

}  // namespace dcodec
