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

#include "dcodec/model_fit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace dcodec {
namespace {

Eigen::Map<const Eigen::ArrayXd> as_array(std::span<const double> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

void require_cer(std::span<const SweepRow> slice) {
  for (const SweepRow& r : slice) {
    if (!r.cer_mean) throw InputError("slice has no CER values");
  }
}

}  // namespace

bool SweepTable::has_cer() const {
  return !rows.empty() &&
         std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.cer_mean.has_value(); });
}

std::vector<std::pair<int, int>> SweepTable::slice_keys() const {
  std::vector<std::pair<int, int>> keys;
  for (const SweepRow& r : rows) {
    const std::pair<int, int> k{r.family, r.bits};
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  return keys;
}

std::vector<SweepRow> SweepTable::slice(int family, int bits) const {
  std::vector<SweepRow> out;
  for (const SweepRow& r : rows) {
    if (r.family == family && r.bits == bits) out.push_back(r);
  }
  if (out.empty()) {
    throw InputError("no rows for m=" + std::to_string(family) + ", b=" + std::to_string(bits));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.alpha < b.alpha; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(out[i].alpha > out[i - 1].alpha)) {
      throw InputError("alpha grid is not strictly increasing for m=" + std::to_string(family) +
                       ", b=" + std::to_string(bits));
    }
  }
  return out;
}

void validate(const SweepTable& table) {
  std::vector<double> grid;
  for (auto [m, b] : table.slice_keys()) {
    const auto s = table.slice(m, b);
    std::vector<double> g;
    for (const SweepRow& r : s) {
      g.push_back(r.alpha);
      if (r.cer_sem && *r.cer_sem < 0.0) throw InputError("negative cer_sem");
    }
    if (grid.empty()) {
      grid = g;
    } else if (g != grid) {
      throw InputError("alpha grid differs between slices");
    }
  }
}

BetaFit fit_beta(std::span<const double> cer, std::span<const double> mse,
                 std::span<const double> acf_raw, double grid_step) {
  if (cer.size() != mse.size() || cer.size() != acf_raw.size()) {
    throw InputError("fit_beta: length mismatch");
  }
  if (cer.size() < 3) throw InputError("fit_beta: need at least 3 alpha points");
  if (!(grid_step > 0.0 && grid_step <= 1.0)) throw InputError("fit_beta: grid step must lie in (0, 1]");
  const auto p = as_array(cer);
  const auto e2 = as_array(mse);
  const auto r = as_array(acf_raw);
  if ((p == p[0]).all()) throw NumericError("fit_beta: CER is constant across alpha");

  const auto steps = static_cast<long>(std::floor(1.0 / grid_step + 1e-9));
  BetaFit best;
  best.grid_step = grid_step;
  bool found = false;
  for (long i = 0; i <= steps; ++i) {
    const double beta = std::min(1.0, static_cast<double>(i) * grid_step);
    const Eigen::ArrayXd m = (beta - 1.0) * e2 + beta * r;
    double corr = 0.0;
    try {
      corr = pearson(m, p);
    } catch (const NumericError&) {
      continue;
    }
    if (!found || corr > best.pearson_r) {
      best.beta_star = beta;
      best.pearson_r = corr;
      found = true;
    }
  }
  if (!found) throw NumericError("fit_beta: model is constant for every candidate beta");
  return best;
}

BetaFit fit_beta(std::span<const SweepRow> slice, double grid_step) {
  require_cer(slice);
  std::vector<double> p, e2, r;
  for (const SweepRow& row : slice) {
    p.push_back(*row.cer_mean);
    e2.push_back(row.mse);
    r.push_back(row.acf5 * row.mse);
  }
  return fit_beta(p, e2, r, grid_step);
}

AlphaChoice optimal_alpha(std::span<const double> alphas, std::span<const double> cer,
                          std::span<const double> rate, double rate_tolerance) {
  if (alphas.size() != cer.size() || alphas.size() != rate.size()) {
    throw InputError("optimal_alpha: length mismatch");
  }
  const auto zero = std::find(alphas.begin(), alphas.end(), 0.0);
  if (zero == alphas.end()) throw InputError("optimal_alpha: grid must include alpha = 0");
  const auto z = static_cast<std::size_t>(zero - alphas.begin());
  const double p0 = cer[z];
  const double r0 = rate[z];

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (cer[i] < p0) candidates.push_back(i);
  }
  // Smaller alpha first so strict comparisons keep the smaller one on ties.
  std::sort(candidates.begin(), candidates.end(),
            [&](std::size_t a, std::size_t b) { return alphas[a] < alphas[b]; });

  AlphaChoice out;
  if (candidates.empty()) return out;

  double max_rate_gap = 0.0;
  for (std::size_t i : candidates) max_rate_gap = std::max(max_rate_gap, std::abs(r0 - rate[i]));

  std::optional<std::size_t> pick;
  if (max_rate_gap < rate_tolerance) {
    out.constant_rate = true;
    for (std::size_t i : candidates) {
      if (!pick || cer[i] < cer[*pick]) pick = i;
    }
  } else {
    for (std::size_t i : candidates) {
      if (std::abs(r0 - rate[i]) < rate_tolerance) continue;
      const double ratio = (p0 - cer[i]) / (r0 - rate[i]);
      if (!pick || ratio > *out.ratio) {
        pick = i;
        out.ratio = ratio;
      }
    }
  }
  out.alpha_star = alphas[*pick];
  out.improved = true;
  return out;
}

AlphaChoice optimal_alpha(std::span<const SweepRow> slice, double rate_tolerance) {
  require_cer(slice);
  std::vector<double> a, p, r;
  for (const SweepRow& row : slice) {
    a.push_back(row.alpha);
    p.push_back(*row.cer_mean);
    r.push_back(row.huffman_rate_bits);
  }
  return optimal_alpha(a, p, r, rate_tolerance);
}

std::vector<double> scaled_model_curve(std::span<const SweepRow> slice, double beta) {
  require_cer(slice);
  std::vector<double> m, p;
  for (const SweepRow& row : slice) {
    m.push_back(model_m(row.mse, row.acf5 * row.mse, beta));
    p.push_back(*row.cer_mean);
  }
  const auto [mlo, mhi] = std::minmax_element(m.begin(), m.end());
  const auto [plo, phi] = std::minmax_element(p.begin(), p.end());
  const double mspan = *mhi - *mlo;
  std::vector<double> out(m.size(), 0.5 * (*plo + *phi));
  if (mspan > 0.0) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      out[i] = *plo + (m[i] - *mlo) / mspan * (*phi - *plo);
    }
  }
  return out;
}

}  // namespace dcodec
