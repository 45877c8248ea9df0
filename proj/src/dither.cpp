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

#include "dcodec/dither.hpp"

#include "dcodec/error.hpp"
#include "dcodec/random.hpp"

#include <cmath>
#include <string>

namespace dcodec {

void validate(const DitherSpec& spec) {
  if (spec.family != 1 && spec.family != 2) {
    throw InputError("dither family must be 1 or 2, got " + std::to_string(spec.family));
  }
  if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0)) {
    throw InputError("dither alpha must lie in [0, 1]");
  }
  if (!(spec.delta > 0.0) || !std::isfinite(spec.delta)) {
    throw InputError("dither delta must be positive and finite");
  }
}

double support_half_width(const DitherSpec& spec) {
  validate(spec);
  return spec.delta * ((spec.alpha - 1.0) * spec.family + 2.0 - spec.alpha);
}

Signal sample_dither(const DitherSpec& spec, Eigen::Index n) {
  const double a = support_half_width(spec);
  if (n < 1) throw InputError("sample count must be at least 1");
  Signal v(n);
  if (spec.alpha == 0.0) {
    v.setZero();
    return v;
  }
  Rng rng(spec.seed);
  for (Eigen::Index i = 0; i < n; ++i) {
    // Three draws per sample regardless of the gate: the stream layout is
    // fixed, so both families consume identical randomness for one seed.
    const double gate = rng.uniform();
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    v[i] = gate < spec.alpha ? (u1 - 0.5) * a + (u2 - 0.5) * a : 0.0;
  }
  return v;
}

DitherDensity dither_pdf(const DitherSpec& spec, double v) {
  const double a = support_half_width(spec);
  DitherDensity out;
  out.atom = 1.0 - spec.alpha;
  if (spec.alpha > 0.0 && std::abs(v) <= a) {
    out.density = spec.alpha * (a - std::abs(v)) / (a * a);
  }
  return out;
}

double dither_variance(const DitherSpec& spec) {
  const double a = support_half_width(spec);
  return spec.alpha * a * a / 6.0;
}

}  // namespace dcodec
