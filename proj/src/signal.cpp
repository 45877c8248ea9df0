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

#include "dcodec/signal.hpp"

#include "dcodec/error.hpp"
#include "dcodec/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

namespace dcodec {
namespace {

constexpr double kPcmScale = 32768.0;
constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(const std::string& b, std::size_t off) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[off])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 3])) << 24;
}

std::uint16_t read_u16(const std::string& b, std::size_t off) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[off]) |
                                    static_cast<unsigned char>(b[off + 1]) << 8);
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

std::int16_t to_pcm16(double s) {
  const double scaled = std::round(s * kPcmScale);  // ties away from zero
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

}  // namespace

void validate(const AudioBuffer& buf) {
  if (buf.samples.size() < 1) throw InputError("audio buffer is empty");
  if (buf.sample_rate <= 0) throw InputError("audio sample_rate must be positive");
}

AudioBuffer parse_pcm(const std::string& b, std::string label) {
  if (b.size() < 12) throw DecodeError("RIFF header: file shorter than 12 bytes");
  if (b.compare(0, 4, "RIFF") != 0) throw DecodeError("RIFF header: chunk id is not 'RIFF'");
  if (b.compare(8, 4, "WAVE") != 0) throw DecodeError("RIFF header: form type is not 'WAVE'");

  bool have_fmt = false;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t block_align = 0;
  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const std::string id = b.substr(pos, 4);
    const std::uint32_t size = read_u32(b, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > b.size()) {
      // Some writers leave a stale size on the final data chunk; accept what
      // is present for 'data', reject anything else.
      if (id != "data") throw DecodeError("chunk '" + id + "': size exceeds file length");
    }
    if (id == "fmt ") {
      if (size < 16) throw DecodeError("fmt chunk: size " + std::to_string(size) + " < 16");
      std::uint16_t format = read_u16(b, body);
      channels = read_u16(b, body + 2);
      rate = read_u32(b, body + 4);
      block_align = read_u16(b, body + 12);
      const std::uint16_t bits = read_u16(b, body + 14);
      if (format == kFormatExtensible) {
        if (size < 40) throw DecodeError("fmt chunk: extensible format with size < 40");
        format = read_u16(b, body + 24);  // first two bytes of the subformat GUID
      }
      if (format != kFormatPcm) {
        throw DecodeError("fmt chunk: audio_format " + std::to_string(format) +
                          " is not linear PCM");
      }
      if (bits != 16) {
        throw DecodeError("fmt chunk: bits_per_sample " + std::to_string(bits) +
                          " unsupported (need 16)");
      }
      if (channels == 0) throw DecodeError("fmt chunk: num_channels is 0");
      if (rate == 0 || rate > 0x7FFFFFFFu) {
        throw DecodeError("fmt chunk: sample_rate " + std::to_string(rate) + " invalid");
      }
      if (block_align != channels * 2) {
        throw DecodeError("fmt chunk: block_align " + std::to_string(block_align) +
                          " inconsistent with " + std::to_string(channels) + " channels");
      }
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw DecodeError("data chunk: appears before fmt chunk");
      const std::size_t avail = std::min<std::size_t>(size, b.size() - body);
      const std::size_t frames = avail / block_align;
      if (frames == 0) throw DecodeError("data chunk: contains no complete frames");
      AudioBuffer out;
      out.sample_rate = static_cast<int>(rate);
      out.label = std::move(label);
      out.samples.resize(static_cast<Eigen::Index>(frames));
      for (std::size_t f = 0; f < frames; ++f) {
        double acc = 0.0;
        for (std::uint16_t ch = 0; ch < channels; ++ch) {
          const auto raw = static_cast<std::int16_t>(read_u16(b, body + f * block_align + 2 * ch));
          acc += raw;
        }
        out.samples[static_cast<Eigen::Index>(f)] = acc / channels / kPcmScale;
      }
      return out;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw DecodeError("fmt chunk: missing");
  throw DecodeError("data chunk: missing");
}

AudioBuffer load_pcm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DecodeError("cannot open '" + path.string() + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_pcm(bytes, path.stem().string());
}

std::string serialize_pcm(const AudioBuffer& buf) {
  validate(buf);
  const auto n = static_cast<std::uint64_t>(buf.samples.size());
  if (n * 2 > 0xFFFFFFFFull - 36) throw InputError("audio too long for a RIFF file");
  const auto data_bytes = static_cast<std::uint32_t>(n * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(buf.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(buf.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_bytes);
  for (Eigen::Index i = 0; i < buf.samples.size(); ++i) {
    put_u16(out, static_cast<std::uint16_t>(to_pcm16(buf.samples[i])));
  }
  return out;
}

void write_pcm(const std::filesystem::path& path, const AudioBuffer& buf) {
  const std::string bytes = serialize_pcm(buf);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("write to '" + path.string() + "' failed");
}

AudioBuffer normalize_trim(const AudioBuffer& buf, double duration_s) {
  validate(buf);
  if (!(duration_s > 0.0)) throw InputError("normalize_trim: duration must be positive");
  const double wanted = std::floor(duration_s * buf.sample_rate);
  const Eigen::Index n =
      wanted >= static_cast<double>(buf.size()) ? buf.size() : static_cast<Eigen::Index>(wanted);
  if (n < 1) throw InputError("normalize_trim: duration shorter than one sample");
  AudioBuffer out{buf.samples.head(n), buf.sample_rate, buf.label};
  const double peak = out.samples.abs().maxCoeff();
  if (peak == 0.0) throw NumericError("normalize_trim: cannot normalize an all-zero buffer");
  out.samples /= peak;
  // Division can land a hair off 1.0; pin the peak exactly.
  Eigen::Index arg = 0;
  out.samples.abs().maxCoeff(&arg);
  out.samples[arg] = std::copysign(1.0, out.samples[arg]);
  return out;
}

double laplace_quantile(double u, double mu, double c) {
  return u < 0.5 ? mu + c * std::log(2.0 * u) : mu - c * std::log(2.0 * (1.0 - u));
}

AudioBuffer sample_laplacian(const LaplacianSource& src, Eigen::Index n, int sample_rate) {
  if (!(src.c > 0.0)) throw InputError("laplacian scale c must be positive");
  if (n < 1) throw InputError("sample count must be at least 1");
  Rng rng(src.seed);
  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.label = "laplace";
  out.samples.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.samples[i] = laplace_quantile(rng.uniform_open(), src.mu, src.c);
  }
  return out;
}

AudioBuffer sample_speech_like(const SpeechLikeSource& src, Eigen::Index n, int sample_rate) {
  if (!(src.c > 0.0)) throw InputError("laplacian scale c must be positive");
  if (n < 1) throw InputError("sample count must be at least 1");
  if (!(src.pole_radius > 0.0 && src.pole_radius < 1.0)) {
    throw InputError("pole_radius must lie in (0, 1)");
  }
  if (!(src.resonance_hz > 0.0 && 2.0 * src.resonance_hz < sample_rate)) {
    throw InputError("resonance must lie strictly inside (0, Nyquist)");
  }
  Rng rng(src.seed);
  const double r = src.pole_radius;
  const double theta = 2.0 * std::numbers::pi * src.resonance_hz / sample_rate;
  const double a1 = 2.0 * r * std::cos(theta);
  const double a2 = -r * r;
  // Stationary variance of y[n] = a1 y[n-1] + a2 y[n-2] + w[n], Var(w) = 1.
  const double var = (1.0 - a2) / ((1.0 + a2) * ((1.0 - a2) * (1.0 - a2) - a1 * a1));
  const double scale = 1.0 / std::sqrt(var);

  auto gaussian = [&rng] {
    // Box-Muller, one output per call to keep the stream layout simple.
    const double u1 = rng.uniform_open();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  };

  double y1 = 0.0;
  double y2 = 0.0;
  const Eigen::Index warmup = static_cast<Eigen::Index>(20.0 / (1.0 - r)) + 16;
  for (Eigen::Index i = 0; i < warmup; ++i) {
    const double y = a1 * y1 + a2 * y2 + gaussian();
    y2 = y1;
    y1 = y;
  }
  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.label = "speech-like";
  out.samples.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y = a1 * y1 + a2 * y2 + gaussian();
    y2 = y1;
    y1 = y;
    const double z = y * scale;
    // Phi(z) via erfc keeps precision in both tails; z >= 0 maps through the
    // upper branch so the quantile argument never rounds to 1.
    if (z < 0.0) {
      const double u = 0.5 * std::erfc(-z / std::numbers::sqrt2);
      out.samples[i] = src.mu + src.c * std::log(2.0 * std::max(u, 1e-300));
    } else {
      const double q = 0.5 * std::erfc(z / std::numbers::sqrt2);  // 1 - Phi(z)
      out.samples[i] = src.mu - src.c * std::log(2.0 * std::max(q, 1e-300));
    }
  }
  return out;
}

double estimate_laplace_scale(const Signal& x) {
  if (x.size() == 0) throw InputError("estimate_laplace_scale: empty signal");
  return x.abs().mean();
}

}  // namespace dcodec
