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

#include "dcodec/error.hpp"
#include "dcodec/random.hpp"
#include "oracles.hpp"

#include "gtest/gtest.h"

#include <cmath>
#include <numbers>
#include <vector>

using namespace dcodec;

namespace {

SymbolDistribution dist(std::vector<double> p) {
  return {Eigen::Map<Eigen::ArrayXd>(p.data(), static_cast<Eigen::Index>(p.size())),
          DistributionSource::kEmpirical};
}

const std::vector<double> kGrid = {0.0, 0.25, 0.5, 0.75, 1.0};

double analytic_entropy(int m, double alpha, int b, double c = 0.1) {
  const QuantizerConfig cfg = QuantizerConfig::from_full_scale(b);
  return shannon_entropy(analytic_bin_probs(c, {m, alpha, cfg.delta, 0}, cfg));
}

}  // namespace

TEST(laplace_cdf, matches_density_integral) {
  for (double x : {-0.3, -0.05, 0.0, 0.02, 0.4}) {
    const double f = 0.5 + oracle::simpson([](double t) { return std::exp(-std::abs(t) / 0.1) / 0.2; },
                                           0.0, x);
    EXPECT_NEAR(laplace_cdf(x, 0.0, 0.1), f, 1e-10);
  }
}

TEST(analytic_bin_probs, one_bit_is_always_even) {
  for (int m : {1, 2}) {
    for (double alpha : kGrid) {
      const QuantizerConfig cfg = QuantizerConfig::from_full_scale(1);
      const SymbolDistribution d = analytic_bin_probs(0.1, {m, alpha, cfg.delta, 0}, cfg);
      EXPECT_NEAR(d.probs[0], 0.5, 1e-9);
      EXPECT_NEAR(d.probs[1], 0.5, 1e-9);
      EXPECT_EQ(d.source, DistributionSource::kAnalytic);
      EXPECT_NEAR(shannon_entropy(d), 1.0, 1e-9);
    }
  }
}

TEST(analytic_bin_probs, no_dither_is_closed_form) {
  const QuantizerConfig cfg = QuantizerConfig::from_full_scale(2);
  const SymbolDistribution d = analytic_bin_probs(0.1, {1, 0.0, cfg.delta, 0}, cfg);
  const double inner = laplace_cdf(0.0, 0, 0.1) - laplace_cdf(-0.5, 0, 0.1);
  EXPECT_NEAR(d.probs[0], laplace_cdf(-0.5, 0, 0.1), 1e-15);
  EXPECT_NEAR(d.probs[1], inner, 1e-15);
  EXPECT_NEAR(d.probs[2], inner, 1e-15);
}

TEST(analytic_bin_probs, agrees_with_independent_simulation) {
  struct Case {
    int m;
    double alpha;
    int b;
  };
  const std::size_t n = 10'000'000;
  for (const Case& k : {Case{1, 1.0, 2}, Case{2, 0.5, 3}}) {
    const QuantizerConfig cfg = QuantizerConfig::from_full_scale(k.b);
    const DitherSpec spec{k.m, k.alpha, cfg.delta, 0};
    const SymbolDistribution d = analytic_bin_probs(0.1, spec, cfg);
    const auto f = oracle::simulate_bin_frequencies(0.1, spec, cfg, n, 4242);
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double p = d.probs[static_cast<Eigen::Index>(j)];
      const double se = std::sqrt(std::max(p * (1.0 - p), 1e-300) / n);
      EXPECT_LE(std::abs(f[j] - p), 3.0 * se + 1e-12) << k.m << " " << k.alpha << " bin " << j;
    }
  }
}

TEST(analytic_bin_probs, rejects_mismatched_delta_and_bad_scale) {
  const QuantizerConfig cfg = QuantizerConfig::from_full_scale(2);
  EXPECT_THROW(analytic_bin_probs(0.1, {1, 0.5, 0.3, 0}, cfg), InputError);
  EXPECT_THROW(analytic_bin_probs(0.0, {1, 0.5, cfg.delta, 0}, cfg), InputError);
}

TEST(empirical_bin_probs, examples) {
  const QuantizerConfig b1 = QuantizerConfig::from_full_scale(1);
  // indices 0,0,1,1 in alphabet terms: bins -1,-1,0,0
  SymbolDistribution d = empirical_bin_probs({{-1, -1, 0, 0}, b1});
  EXPECT_EQ(d.probs[0], 0.5);
  EXPECT_EQ(d.probs[1], 0.5);

  const QuantizerConfig b3 = QuantizerConfig::from_full_scale(3);
  d = empirical_bin_probs({{2, 2, 2}, b3});
  EXPECT_EQ(d.probs[6], 1.0);
  EXPECT_EQ(d.probs.sum(), 1.0);
  EXPECT_EQ(shannon_entropy(d), 0.0);
  EXPECT_THROW(empirical_bin_probs({{}, b3}), InputError);
}

TEST(shannon_entropy, examples) {
  EXPECT_EQ(shannon_entropy(dist({0.5, 0.5})), 1.0);
  EXPECT_EQ(shannon_entropy(dist({1.0, 0.0})), 0.0);
  EXPECT_DOUBLE_EQ(shannon_entropy(dist(std::vector<double>(8, 0.125))), 3.0);
  EXPECT_THROW(shannon_entropy(dist({0.5, 0.4})), InputError);
  EXPECT_THROW(shannon_entropy(dist({1.5, -0.5})), InputError);
}

TEST(gaussian_entropy_bound, verbatim_formula) {
  const QuantizerConfig cfg = QuantizerConfig::from_full_scale(3);
  const double want =
      0.5 * std::log2(2.0 * std::numbers::pi * std::exp(1.0) * (0.02 - 0.0625 / 12.0));
  EXPECT_NEAR(gaussian_entropy_bound(0.1, {1, 0.0, 0.25, 0}, cfg), want, 1e-14);
  // sigma^2 enters additively
  const double s2 = dither_variance({1, 1.0, 0.25, 0});
  const double full =
      0.5 * std::log2(2.0 * std::numbers::pi * std::exp(1.0) * (0.02 + s2 - 0.0625 / 12.0));
  EXPECT_NEAR(gaussian_entropy_bound(0.1, {1, 1.0, 0.25, 0}, cfg), full, 1e-14);
}

TEST(gaussian_entropy_bound, domain_error_when_step_dominates) {
  const QuantizerConfig cfg = QuantizerConfig::from_full_scale(1);
  EXPECT_THROW(gaussian_entropy_bound(0.1, {1, 0.0, cfg.delta, 0}, cfg), NumericError);
  EXPECT_THROW(gaussian_entropy_bound(1e-3, {1, 0.0, 0.25, 0}, QuantizerConfig::from_full_scale(3)),
               NumericError);
}

TEST(gaussian_entropy_bound, nondecreasing_in_alpha) {
  const QuantizerConfig cfg = QuantizerConfig::from_full_scale(3);
  for (int m : {1, 2}) {
    double prev = -1e9;
    for (double alpha : kGrid) {
      const double g = gaussian_entropy_bound(0.1, {m, alpha, cfg.delta, 0}, cfg);
      EXPECT_GE(g, prev);
      prev = g;
    }
  }
}

TEST(entropy, nondecreasing_in_alpha_and_family_one_on_top) {
  for (int b : {2, 3}) {
    for (int m : {1, 2}) {
      double prev = 0.0;
      for (double alpha : kGrid) {
        const double h = analytic_entropy(m, alpha, b);
        EXPECT_GE(h, prev - 1e-9) << b << " " << m << " " << alpha;
        prev = h;
      }
    }
    for (double alpha : {0.25, 0.5, 0.75}) EXPECT_GT(analytic_entropy(1, alpha, b), analytic_entropy(2, alpha, b));
    for (double alpha : {0.0, 1.0}) EXPECT_NEAR(analytic_entropy(1, alpha, b), analytic_entropy(2, alpha, b), 1e-9);
  }
}

TEST(entropy, curvature_signature) {
  for (int b : {2, 3}) {
    std::vector<double> h1, h2;
    for (double alpha : kGrid) {
      h1.push_back(analytic_entropy(1, alpha, b));
      h2.push_back(analytic_entropy(2, alpha, b));
    }
    for (std::size_t i = 1; i + 1 < kGrid.size(); ++i) {
      EXPECT_LE(h1[i + 1] - 2 * h1[i] + h1[i - 1], 1e-9) << b << " " << i;
      EXPECT_GE(h2[i + 1] - 2 * h2[i] + h2[i - 1], -1e-9) << b << " " << i;
    }
  }
}

TEST(huffman_build, examples) {
  HuffmanCode c = huffman_build(dist({0.5, 0.25, 0.125, 0.125}));
  EXPECT_EQ(c.lengths(), (std::vector<std::uint8_t>{1, 2, 3, 3}));
  EXPECT_DOUBLE_EQ(c.average_length(dist({0.5, 0.25, 0.125, 0.125}).probs), 1.75);
  EXPECT_EQ(c.codes(), (std::vector<std::uint64_t>{0b0, 0b10, 0b110, 0b111}));

  for (double p : {0.5, 0.9, 0.999}) {
    EXPECT_EQ(huffman_build(dist({p, 1.0 - p})).lengths(), (std::vector<std::uint8_t>{1, 1}));
  }

  const auto p3 = dist({0.4, 0.3, 0.3});
  c = huffman_build(p3);
  EXPECT_NEAR(c.average_length(p3.probs), 1.6, 1e-12);
  EXPECT_NEAR(c.average_length(p3.probs), oracle::best_prefix_code_length({0.4, 0.3, 0.3}), 1e-12);
}

TEST(huffman_build, optimal_on_random_small_alphabets) {
  Rng rng(55);
  for (int t = 0; t < 300; ++t) {
    const int n = 2 + t % 4;
    std::vector<double> p(n);
    double s = 0.0;
    for (double& v : p) s += (v = rng.uniform() + 1e-3);
    for (double& v : p) v /= s;
    const auto d = dist(p);
    const HuffmanCode c = huffman_build(d);
    EXPECT_NEAR(c.average_length(d.probs), oracle::best_prefix_code_length(p), 1e-12);
    EXPECT_NEAR(c.kraft_sum(), 1.0, 1e-15);
  }
}

TEST(huffman_build, zero_probability_symbols_keep_codewords) {
  const auto d = dist({0.0, 0.7, 0.3, 0.0});
  const HuffmanCode c = huffman_build(d);
  for (auto l : c.lengths()) EXPECT_GE(l, 1);
  EXPECT_NEAR(c.kraft_sum(), 1.0, 1e-15);
  const std::vector<std::uint32_t> s = {0, 3, 1, 2};
  const BitBuffer bits = huffman_encode(s, c);
  EXPECT_EQ(huffman_decode(bits.bytes, bits.bit_count, c, s.size()), s);
  EXPECT_THROW(huffman_build(dist({0.0, 0.0})), InputError);
  EXPECT_THROW(huffman_build(dist({})), InputError);
}

TEST(huffman_build, deterministic_ties) {
  const HuffmanCode c = huffman_build(dist({0.25, 0.25, 0.25, 0.25}));
  EXPECT_EQ(c.lengths(), (std::vector<std::uint8_t>{2, 2, 2, 2}));
  const HuffmanCode d = huffman_build(dist({0.2, 0.2, 0.2, 0.2, 0.2}));
  EXPECT_EQ(d.lengths(), huffman_build(dist({0.2, 0.2, 0.2, 0.2, 0.2})).lengths());
  EXPECT_EQ(HuffmanCode::from_lengths(d.lengths()).codes(), d.codes());
}

TEST(huffman, bounds_on_empirical_distributions) {
  Rng rng(56);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 << (1 + t % 3);
    std::vector<double> p(n);
    double s = 0.0;
    for (double& v : p) s += (v = std::pow(rng.uniform(), 3.0));
    for (double& v : p) v /= s;
    const auto d = dist(p);
    const double h = shannon_entropy(d);
    const double l = huffman_build(d).average_length(d.probs);
    EXPECT_LE(h, l + 1e-12);
    EXPECT_LT(l, h + 1.0);
  }
}

TEST(huffman, round_trip_random_streams) {
  Rng rng(57);
  const QuantizerConfig cfg = QuantizerConfig::from_full_scale(3);
  for (int t = 0; t < 10000; ++t) {
    std::vector<double> p(8);
    double s = 0.0;
    for (double& v : p) s += (v = rng.uniform() * (rng.uniform() < 0.3 ? 0.0 : 1.0) + 1e-9);
    for (double& v : p) v /= s;
    const HuffmanCode c = huffman_build(dist(p));
    SymbolBuffer sym;
    sym.config = cfg;
    const std::size_t n = rng.next_u64() % 64;
    for (std::size_t i = 0; i < n; ++i) sym.indices.push_back(static_cast<std::int32_t>(rng.next_u64() % 8) - 4);
    const BitBuffer bits = huffman_encode(sym, c);
    ASSERT_EQ(huffman_decode(bits, c, n, cfg).indices, sym.indices);
  }
}

TEST(huffman, empty_stream_is_empty) {
  const HuffmanCode c = huffman_build(dist({0.5, 0.5}));
  const BitBuffer bits = huffman_encode(std::span<const std::uint32_t>(), c);
  EXPECT_TRUE(bits.bytes.empty());
  EXPECT_EQ(bits.bit_count, 0u);
  EXPECT_TRUE(huffman_decode(bits.bytes, 0, c, 0).empty());
}

TEST(huffman, measured_rate_on_dyadic_source) {
  const HuffmanCode c = huffman_build(dist({0.5, 0.25, 0.125, 0.125}));
  Rng rng(58);
  std::vector<std::uint32_t> s(1'000'000);
  for (auto& v : s) {
    const double u = rng.uniform();
    v = u < 0.5 ? 0 : u < 0.75 ? 1 : u < 0.875 ? 2 : 3;
  }
  const BitBuffer bits = huffman_encode(s, c);
  EXPECT_NEAR(static_cast<double>(bits.bit_count) / s.size(), 1.75, 0.01);
  EXPECT_EQ(bits.bytes.size(), (bits.bit_count + 7) / 8);
}

TEST(huffman_decode, truncation_is_a_format_error) {
  const HuffmanCode c = huffman_build(dist({0.5, 0.25, 0.125, 0.125}));
  const std::vector<std::uint32_t> s = {3, 3, 3};
  const BitBuffer bits = huffman_encode(s, c);
  EXPECT_THROW(huffman_decode(bits.bytes, bits.bit_count - 1, c, 3), FormatError);
  EXPECT_THROW(huffman_decode(bits.bytes, bits.bit_count, c, 4), FormatError);
}

TEST(HuffmanCode, from_lengths_validation) {
  EXPECT_THROW(HuffmanCode::from_lengths({1, 1, 1}), FormatError);
  EXPECT_THROW(HuffmanCode::from_lengths({0, 1}), FormatError);
  EXPECT_THROW(HuffmanCode::from_lengths({64, 1}), FormatError);
  EXPECT_THROW(HuffmanCode::from_lengths({}), InputError);
}

TEST(rate_report, empirical_fields) {
  const QuantizerConfig cfg = QuantizerConfig::from_full_scale(2);
  const SymbolBuffer sym{{-2, -1, -1, 0, 0, 0, 0, 1}, cfg};
  const RateReport r = rate_report(sym, {1, 0.0, cfg.delta, 0}, 0.1);
  EXPECT_TRUE(r.empirical);
  EXPECT_NEAR(r.shannon_entropy, 1.75, 1e-12);
  EXPECT_NEAR(r.huffman_avg_length, 1.75, 1e-12);
  EXPECT_FALSE(r.gaussian_bound.has_value());  // log argument negative at b=2
  EXPECT_FALSE(rate_report(sym, {1, 0.0, cfg.delta, 0}).gaussian_bound.has_value());
}
