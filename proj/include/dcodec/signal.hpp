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

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <string>

namespace dcodec {

using Signal = Eigen::ArrayXd;

/// Mono audio with its sampling rate. Samples are nominally in [-1, 1].
struct AudioBuffer {
  Signal samples;
  int sample_rate = 0;
  std::string label;

  Eigen::Index size() const { return samples.size(); }
};

/// Throws InputError unless the buffer has at least one sample and a
/// positive rate.
void validate(const AudioBuffer& buf);

/// Reads a 16-bit linear PCM RIFF/WAVE file. Multi-channel frames are mixed
/// down by arithmetic mean; samples are scaled by 2^-15.
AudioBuffer load_pcm(const std::filesystem::path& path);
AudioBuffer parse_pcm(const std::string& bytes, std::string label = {});

/// Writes mono 16-bit PCM. Samples are scaled by 2^15, rounded to nearest
/// with ties away from zero and clipped to the int16 range.
void write_pcm(const std::filesystem::path& path, const AudioBuffer& buf);
std::string serialize_pcm(const AudioBuffer& buf);

/// Keeps the first min(N, duration_s * rate) samples and rescales so the peak
/// magnitude is exactly 1. Throws NumericError on an all-zero result.
AudioBuffer normalize_trim(const AudioBuffer& buf, double duration_s);

/// Laplace(mu, c): f(x) = exp(-|x - mu| / c) / 2c.
struct LaplacianSource {
  double mu = 0.0;
  double c = 0.1;
  std::uint64_t seed = 0;
};

/// n iid draws by inverse-CDF sampling.
AudioBuffer sample_laplacian(const LaplacianSource& src, Eigen::Index n,
                             int sample_rate = 48000);

/// Inverse Laplace CDF at probability u in (0, 1).
double laplace_quantile(double u, double mu, double c);

/// Temporally correlated source with exact Laplace(mu, c) marginals: a
/// resonant AR(2) Gaussian process pushed through Phi and the Laplace
/// quantile function. Stands in for voiced speech when no corpus is at hand.
struct SpeechLikeSource {
  double mu = 0.0;
  double c = 0.1;
  double resonance_hz = 1000.0;
  double pole_radius = 0.995;
  std::uint64_t seed = 0;
};

AudioBuffer sample_speech_like(const SpeechLikeSource& src, Eigen::Index n,
                               int sample_rate = 48000);

/// Maximum-likelihood Laplace scale for a zero-location model: mean |x|.
double estimate_laplace_scale(const Signal& x);

}  // namespace dcodec
