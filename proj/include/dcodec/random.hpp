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

#include <cstdint>
#include <random>
#include <string_view>

namespace dcodec {

/// SplitMix64 finalizer. Used to decorrelate user seeds before they reach the
/// engine and to derive per-job seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seeded generator with platform-independent real conversion.
/// std::uniform_real_distribution is implementation-defined, so the
/// conversion from 64 random bits is done here to keep streams identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1); never returns an endpoint.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

/// Incremental seed derivation: mixes each component into the running state.
class SeedHasher {
 public:
  explicit SeedHasher(std::uint64_t seed) : state_(splitmix64(seed)) {}

  SeedHasher& add(std::uint64_t v) {
    state_ = splitmix64(state_ ^ splitmix64(v + 0x632BE59BD9B4E019ull));
    return *this;
  }

  SeedHasher& add(std::string_view s) {
    // FNV-1a over the bytes, then mix.
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001B3ull;
    }
    return add(h);
  }

  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace dcodec
