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

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dcodec {

/// Sample Pearson correlation. Throws NumericError when either input has
/// zero variance.
template <typename DerivedX, typename DerivedY>
double pearson(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y) {
  if (x.size() != y.size()) throw InputError("pearson: length mismatch");
  if (x.size() < 2) throw InputError("pearson: need at least two points");
  const Eigen::ArrayXd xa = x.derived().array().template cast<double>();
  const Eigen::ArrayXd ya = y.derived().array().template cast<double>();
  const Eigen::ArrayXd xc = xa - xa.mean();
  const Eigen::ArrayXd yc = ya - ya.mean();
  const double sxx = xc.square().sum();
  const double syy = yc.square().sum();
  // A series counts as constant when its spread is rounding noise relative
  // to its magnitude.
  auto degenerate = [](double ss, const Eigen::ArrayXd& v) {
    const double tol = 1e-13 * v.abs().maxCoeff() * std::sqrt(static_cast<double>(v.size()));
    return !(ss > 0.0) || std::sqrt(ss) <= tol;
  };
  if (degenerate(sxx, xa) || degenerate(syy, ya)) {
    throw NumericError("pearson: zero variance, correlation undefined");
  }
  return std::clamp((xc * yc).sum() / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Standard error of the mean: sample sd (n - 1 denominator) / sqrt(n).
template <typename Derived>
double sem(const Eigen::DenseBase<Derived>& v) {
  const Eigen::Index n = v.size();
  if (n < 2) throw InputError("sem: need at least two values");
  const Eigen::ArrayXd a = v.derived().array().template cast<double>();
  const double var = (a - a.mean()).square().sum() / static_cast<double>(n - 1);
  return std::sqrt(var / static_cast<double>(n));
}

/// Performance model (beta - 1) * mse + beta * acf_raw, where acf_raw is the
/// unnormalized lag-tau autocovariance (ACF_tau * MSE).
inline double model_m(double mse, double acf_raw, double beta) {
  return (beta - 1.0) * mse + beta * acf_raw;
}

/// One aggregated condition of a sweep. Metric fields are means over files;
/// *_sem are NaN when fewer than two files survive.
struct SweepRow {
  int family = 1;
  double alpha = 0.0;
  int bits = 1;
  int n_files = 0;
  double mse = 0.0;
  double mse_sem = 0.0;
  double acf5 = 0.0;
  double acf5_sem = 0.0;
  double entropy_bits = 0.0;
  double entropy_sem = 0.0;
  double huffman_rate_bits = 0.0;
  double huffman_rate_sem = 0.0;
  std::optional<double> cer_mean;
  std::optional<double> cer_sem;
  int cer_files = 0;
};

struct SweepTable {
  std::vector<SweepRow> rows;

  bool has_cer() const;
  /// Rows for one (family, bits), ordered by alpha. Throws InputError if the
  /// slice is empty or its alpha grid is not strictly increasing.
  std::vector<SweepRow> slice(int family, int bits) const;
  /// Distinct (family, bits) pairs in first-seen order.
  std::vector<std::pair<int, int>> slice_keys() const;
};

/// Checks the table-wide invariants: strictly increasing alpha per slice,
/// identical grids across slices, nonnegative SEMs.
void validate(const SweepTable& table);

struct BetaFit {
  double beta_star = 0.0;
  double pearson_r = 0.0;
  double grid_step = 1.0 / 99.0;
};

/// Exhaustive search over beta in {0, step, 2 step, ..., 1} for the beta whose
/// model curve correlates best (Pearson) with `cer`. Ties go to the smaller
/// beta; candidates whose model curve is constant are skipped.
BetaFit fit_beta(std::span<const double> cer, std::span<const double> mse,
                 std::span<const double> acf_raw, double grid_step = 1.0 / 99.0);
BetaFit fit_beta(std::span<const SweepRow> slice, double grid_step = 1.0 / 99.0);

struct AlphaChoice {
  double alpha_star = 0.0;
  bool improved = false;       ///< false: no alpha beats alpha = 0 on CER
  bool constant_rate = false;  ///< selected by CER alone
  std::optional<double> ratio; ///< (P(0) - P(a)) / (R(0) - R(a)) at the optimum
};

/// Rate-aware dither choice over a slice containing alpha = 0.
///
/// Candidates are alphas with P(alpha) < P(0). If every candidate's rate is
/// within `rate_tolerance` of R(0), the argmin of P wins. Otherwise the
/// argmax of (P(0) - P(alpha)) / (R(0) - R(alpha)) over candidates whose rate
/// differs by at least `rate_tolerance`. Ties go to the smaller alpha.
AlphaChoice optimal_alpha(std::span<const double> alphas, std::span<const double> cer,
                          std::span<const double> rate, double rate_tolerance = 1e-3);
AlphaChoice optimal_alpha(std::span<const SweepRow> slice, double rate_tolerance = 1e-3);

/// Model curve at beta, affinely mapped onto [min P, max P] for plotting
/// against the measured CER.
std::vector<double> scaled_model_curve(std::span<const SweepRow> slice, double beta);

}  // namespace dcodec
