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

#include "dcodec/signal.hpp"

#include <cstdint>

namespace dcodec {

/// Parametric non-subtractive dither: a point mass at zero with weight
/// (1 - alpha) mixed with a triangular density on [-a, a] with weight alpha.
///
///   family 1: a = delta            (only the mixing weight moves)
///   family 2: a = alpha * delta    (support shrinks with alpha)
///
/// alpha = 0 is no dither; alpha = 1 is full TPDF dither on [-delta, delta]
/// for both families.
struct DitherSpec {
  int family = 1;
  double alpha = 0.0;
  double delta = 1.0;
  std::uint64_t seed = 0;
};

void validate(const DitherSpec& spec);

/// Half-width a of the triangular component: delta * ((alpha - 1) m + 2 - alpha).
double support_half_width(const DitherSpec& spec);

/// n iid dither draws. The atom at zero is an exact Bernoulli(alpha) gate;
/// triangular draws are the sum of two uniforms on [-a/2, a/2].
Signal sample_dither(const DitherSpec& spec, Eigen::Index n);

struct DitherDensity {
  double density = 0.0;  ///< continuous part, alpha * (a - |v|) / a^2 on |v| <= a
  double atom = 0.0;     ///< point mass (1 - alpha) at v = 0, never folded in
};

DitherDensity dither_pdf(const DitherSpec& spec, double v);

/// Exact mixture variance alpha * a^2 / 6; scales as alpha^(2m-1) delta^2 / 6.
double dither_variance(const DitherSpec& spec);

}  // namespace dcodec
