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
#include "dcodec/error.hpp"
#include "dcodec/quantizer.hpp"
#include "dcodec/signal.hpp"

#include <Eigen/Core>

#include <map>
#include <string>
#include <vector>

namespace dcodec {

/// Mean squared value (1/N) sum eps_n^2.
template <typename Derived>
typename Derived::Scalar mse(const Eigen::ArrayBase<Derived>& eps) {
  if (eps.size() == 0) throw InputError("mse: empty input");
  return eps.square().mean();
}

/// Biased lag-tau autocorrelation normalized by the zero-lag energy:
///   sum_{n < N - tau} eps_n eps_{n+tau} / sum_n eps_n^2
template <typename Derived>
typename Derived::Scalar acf_tau(const Eigen::ArrayBase<Derived>& eps, Eigen::Index tau) {
  const Eigen::Index n = eps.size();
  if (tau < 0 || tau >= n) {
    throw InputError("acf_tau: need 0 <= tau < N (tau=" + std::to_string(tau) +
                     ", N=" + std::to_string(n) + ")");
  }
  const auto energy = eps.square().sum();
  if (!(energy > 0)) throw NumericError("acf_tau: zero-energy signal, normalization undefined");
  if (tau == 0) return typename Derived::Scalar(1);
  const auto lagged = (eps.head(n - tau) * eps.tail(n - tau)).sum();
  return lagged / energy;
}

/// Raw lag-tau autocovariance estimate r(tau) = ACF_tau * MSE.
template <typename Derived>
typename Derived::Scalar autocovariance(const Eigen::ArrayBase<Derived>& eps, Eigen::Index tau) {
  return acf_tau(eps, tau) * mse(eps);
}

/// One-sided smoothed periodogram: bins 0..floor(N/2) of |DFT(eps)|^2, then a
/// centered moving average over `smooth_window` bins (truncated at the edges).
struct PowerSpectrum {
  Signal power;
  Eigen::Index n = 0;  ///< length of the transformed signal
  Eigen::Index smooth_window = 1;

  double frequency_hz(Eigen::Index bin, double sample_rate) const {
    return static_cast<double>(bin) * sample_rate / static_cast<double>(n);
  }
};

/// Unsmoothed one-sided periodogram |sum_n eps_n e^{-j 2 pi f n / N}|^2.
Signal periodogram(const Signal& eps);

/// Centered moving average; each output averages the bins that exist in
/// [k - (w-1)/2, k + w/2].
Signal moving_average(const Signal& x, Eigen::Index window);

PowerSpectrum psd(const Signal& eps, Eigen::Index smooth_window);

struct ErrorReport {
  double mse = 0.0;
  std::map<int, double> acf;  ///< lag -> normalized autocorrelation
  PowerSpectrum psd;
  Eigen::Index n = 0;
};

/// x + v -> quantize -> reconstruct, returning x_hat - x.
Signal dithered_error(const Signal& x, const DitherSpec& spec, const QuantizerConfig& cfg);

/// Full metric set for one (signal, dither, quantizer) run. Lag 0 is always
/// included in `acf`. Pass smooth_window = 0 to skip the spectrum.
ErrorReport error_report(const Signal& x, const DitherSpec& spec, const QuantizerConfig& cfg,
                         const std::vector<int>& taus = {5}, Eigen::Index smooth_window = 480);

/// Same metrics on an already computed error signal.
ErrorReport error_report(const Signal& eps, const std::vector<int>& taus,
                         Eigen::Index smooth_window);

}  // namespace dcodec
