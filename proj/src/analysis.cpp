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

#include "dcodec/analysis.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>

namespace dcodec {

Signal periodogram(const Signal& eps) {
  if (eps.size() == 0) throw InputError("periodogram: empty input");
  const Eigen::Index n = eps.size();
  std::vector<double> in(eps.data(), eps.data() + n);
  std::vector<std::complex<double>> out;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  fft.fwd(out, in);
  const Eigen::Index half = n / 2 + 1;
  Signal p(half);
  for (Eigen::Index k = 0; k < half; ++k) p[k] = std::norm(out[static_cast<std::size_t>(k)]);
  return p;
}

Signal moving_average(const Signal& x, Eigen::Index window) {
  const Eigen::Index n = x.size();
  if (window < 1) throw InputError("moving_average: window must be at least 1");
  if (window == 1) return x;
  // Prefix sums in long double; the spectrum spans many orders of magnitude.
  std::vector<long double> prefix(static_cast<std::size_t>(n) + 1, 0.0L);
  for (Eigen::Index i = 0; i < n; ++i) {
    prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + x[i];
  }
  const Eigen::Index before = (window - 1) / 2;
  const Eigen::Index after = window / 2;
  Signal out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, k - before);
    const Eigen::Index hi = std::min<Eigen::Index>(n - 1, k + after);
    const long double sum = prefix[static_cast<std::size_t>(hi) + 1] - prefix[static_cast<std::size_t>(lo)];
    out[k] = static_cast<double>(sum / static_cast<long double>(hi - lo + 1));
  }
  return out;
}

PowerSpectrum psd(const Signal& eps, Eigen::Index smooth_window) {
  if (eps.size() == 0) throw InputError("psd: empty input");
  if (smooth_window < 1 || smooth_window > eps.size()) {
    throw InputError("psd: smoothing window must lie in [1, N]");
  }
  PowerSpectrum s;
  s.n = eps.size();
  s.smooth_window = smooth_window;
  s.power = moving_average(periodogram(eps), smooth_window);
  return s;
}

Signal dithered_error(const Signal& x, const DitherSpec& spec, const QuantizerConfig& cfg) {
  validate(spec);
  validate(cfg);
  if (std::abs(spec.delta - cfg.delta) > 1e-12 * cfg.delta) {
    throw InputError("dither delta does not match quantizer delta");
  }
  if (x.size() == 0) throw InputError("dithered_error: empty input");
  const Signal y = x + sample_dither(spec, x.size());
  return error_signal(x, reconstruct(quantize(y, cfg)));
}

ErrorReport error_report(const Signal& eps, const std::vector<int>& taus,
                         Eigen::Index smooth_window) {
  ErrorReport r;
  r.n = eps.size();
  r.mse = mse(eps);
  r.acf[0] = acf_tau(eps, 0);
  for (int tau : taus) r.acf[tau] = acf_tau(eps, tau);
  if (smooth_window > 0) r.psd = psd(eps, smooth_window);
  return r;
}

ErrorReport error_report(const Signal& x, const DitherSpec& spec, const QuantizerConfig& cfg,
                         const std::vector<int>& taus, Eigen::Index smooth_window) {
  return error_report(dithered_error(x, spec, cfg), taus, smooth_window);
}

}  // namespace dcodec
