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

// Reference computations used only by tests. Each one takes a different route
// from the library code it checks (inverse-CDF instead of sum-of-uniforms,
// linear scans instead of floor(), direct sums instead of FFT, ...).

#include "dcodec/dither.hpp"
#include "dcodec/quantizer.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace oracle {

/// CDF of the triangular density (a - |v|) / a^2 on [-a, a].
inline double tri_cdf(double v, double a) {
  if (v <= -a) return 0.0;
  if (v >= a) return 1.0;
  if (v < 0.0) return (a + v) * (a + v) / (2.0 * a * a);
  return 1.0 - (a - v) * (a - v) / (2.0 * a * a);
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int n = 20000) {
  const double h = (hi - lo) / n;
  double s = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Bin index by exhaustive nearest-codebook search (saturating by
/// construction). Agrees with threshold quantization away from ties.
inline std::int32_t nearest_codebook_index(double y, const dcodec::QuantizerConfig& cfg) {
  std::int32_t best = cfg.min_index();
  double best_d = std::abs(y - cfg.level(best));
  for (std::int32_t j = cfg.min_index() + 1; j <= cfg.max_index(); ++j) {
    const double d = std::abs(y - cfg.level(j));
    if (d < best_d) {
      best = j;
      best_d = d;
    }
  }
  return best;
}

/// |DFT_k|^2 by direct summation.
inline double dft_power(const Eigen::ArrayXd& x, Eigen::Index k) {
  std::complex<double> acc = 0.0;
  const double n = static_cast<double>(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double ph = -2.0 * std::numbers::pi * static_cast<double>(k) * static_cast<double>(i) / n;
    acc += x[i] * std::complex<double>(std::cos(ph), std::sin(ph));
  }
  return std::norm(acc);
}

/// Full (m+1) x (n+1) edit matrix.
inline std::size_t levenshtein_matrix(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u)});
    }
  }
  return d[a.size()][b.size()];
}

/// Minimum expected length over every prefix code on the alphabet. By Kraft's
/// theorem a prefix code with lengths l exists iff sum 2^-l <= 1, so the
/// search enumerates all length vectors with entries in [1, n].
inline double best_prefix_code_length(const std::vector<double>& p) {
  const std::size_t n = p.size();
  if (n == 1) return 1.0 * p[0];
  std::vector<int> l(n, 1);
  double best = 1e300;
  for (;;) {
    double kraft = 0.0, avg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      kraft += std::ldexp(1.0, -l[i]);
      avg += p[i] * l[i];
    }
    if (kraft <= 1.0 + 1e-12) best = std::min(best, avg);
    std::size_t k = 0;
    while (k < n && ++l[k] > static_cast<int>(n)) l[k++] = 1;
    if (k == n) break;
  }
  return best;
}

/// Monte Carlo frequencies of the quantizer bins of Y = X + V with
/// X ~ Laplace(0, c) (exponential magnitude, random sign) and V drawn by
/// inverting the triangular CDF. Bins found by a linear threshold scan.
inline std::vector<double> simulate_bin_frequencies(double c, const dcodec::DitherSpec& spec,
                                                    const dcodec::QuantizerConfig& cfg,
                                                    std::size_t n, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::exponential_distribution<double> expo(1.0 / c);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double a = spec.delta * ((spec.alpha - 1.0) * spec.family + 2.0 - spec.alpha);
  std::vector<double> lower;
  for (std::int32_t j = cfg.min_index() + 1; j <= cfg.max_index(); ++j) lower.push_back(cfg.lower_threshold(j));
  std::vector<double> counts(cfg.levels(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (unif(gen) < 0.5 ? -1.0 : 1.0) * expo(gen);
    double v = 0.0;
    if (unif(gen) < spec.alpha) {
      const double u = unif(gen);
      v = u < 0.5 ? -a + a * std::sqrt(2.0 * u) : a - a * std::sqrt(2.0 * (1.0 - u));
    }
    const double y = x + v;
    std::size_t bin = 0;
    while (bin < lower.size() && y >= lower[bin]) ++bin;
    counts[bin] += 1.0;
  }
  for (double& k : counts) k /= static_cast<double>(n);
  return counts;
}

}  // namespace oracle
