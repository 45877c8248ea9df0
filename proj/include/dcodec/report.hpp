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

#include "dcodec/analysis.hpp"
#include "dcodec/model_fit.hpp"
#include "dcodec/sweep.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dcodec {

/// Shortest round-trip decimal form; NaN and infinities print as empty cells.
std::string format_number(double v);

/// One row per condition. CER columns appear only when the table carries CER.
void write_sweep_csv(std::ostream& os, const SweepTable& table);
/// Inverse of write_sweep_csv; extra columns are ignored.
SweepTable read_sweep_csv(std::istream& is);

void write_records_csv(std::ostream& os, const std::vector<ConditionRecord>& records);

/// beta* and alpha* per (m, b) slice. Slices without CER data carry an
/// "error" entry instead of values.
nlohmann::json fits_json(const SweepTable& table, double beta_step = 1.0 / 99.0,
                         double rate_tolerance = 1e-3);

/// m, b, alpha, cer, scaled model curve at the slice's beta*.
void write_model_curve_csv(std::ostream& os, const SweepTable& table,
                           double beta_step = 1.0 / 99.0);

struct PsdCurve {
  int family = 1;
  double alpha = 0.0;
  int bits = 1;
  PowerSpectrum spectrum;
};

/// freq_hz, power for every `stride`-th bin.
void write_psd_csv(std::ostream& os, const std::vector<PsdCurve>& curves, double sample_rate,
                   Eigen::Index stride = 1);

struct EntropyPoint {
  int family = 1;
  int bits = 1;
  double alpha = 0.0;
  double analytic_entropy = 0.0;
  std::optional<double> gaussian_bound;
  std::optional<double> huffman_rate;
};

/// Analytic entropy for X ~ Laplace(0, c) over the grid, with the Gaussian
/// expression where it is defined.
std::vector<EntropyPoint> entropy_curves(double laplace_c, const std::vector<int>& families,
                                         const std::vector<int>& bits,
                                         const std::vector<double>& alphas,
                                         double full_scale = 1.0,
                                         QuantizerMode mode = QuantizerMode::kMidRise);

void write_entropy_csv(std::ostream& os, const std::vector<EntropyPoint>& points);

}  // namespace dcodec
