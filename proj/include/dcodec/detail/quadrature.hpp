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

#include "dcodec/error.hpp"

#include <array>
#include <cmath>
#include <string>

namespace dcodec::detail {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Single 15-point Gauss-Kronrod panel with embedded 7-point Gauss estimate.
template <typename F>
QuadratureResult gauss_kronrod15(F&& f, double a, double b) {
  static constexpr std::array<double, 8> kXk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> kWk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> kWg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWk[7];
  double gauss = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXk[static_cast<std::size_t>(i)];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWk[static_cast<std::size_t>(i)] * sum;
    if (i % 2 == 1) gauss += kWg[static_cast<std::size_t>(i / 2)] * sum;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

/// Recursive bisection until each panel's Kronrod-Gauss gap falls under its
/// share of `abs_tol`. Throws NumericError past `max_depth` with the achieved
/// error bound in the message.
template <typename F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double abs_tol,
                                    int max_depth = 40) {
  struct Rec {
    F& f;
    int max_depth;
    double worst = 0.0;
    bool failed = false;

    QuadratureResult run(double lo, double hi, double tol, int depth) {
      const QuadratureResult whole = gauss_kronrod15(f, lo, hi);
      if (whole.error <= tol || hi - lo <= 1e-15 * (std::abs(lo) + std::abs(hi))) {
        return whole;
      }
      if (depth >= max_depth) {
        failed = true;
        worst = std::max(worst, whole.error);
        return whole;
      }
      const double mid = 0.5 * (lo + hi);
      const QuadratureResult left = run(lo, mid, 0.5 * tol, depth + 1);
      const QuadratureResult right = run(mid, hi, 0.5 * tol, depth + 1);
      return {left.value + right.value, left.error + right.error};
    }
  };
  if (!(b > a)) return {};
  Rec rec{f, max_depth};
  const QuadratureResult r = rec.run(a, b, abs_tol, 0);
  if (rec.failed) {
    throw NumericError("adaptive quadrature did not converge: achieved error " +
                       std::to_string(r.error) + " > tolerance " + std::to_string(abs_tol));
  }
  return r;
}

}  // namespace dcodec::detail
