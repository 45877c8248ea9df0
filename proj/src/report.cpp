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

#include "dcodec/report.hpp"

#include "dcodec/error.hpp"
#include "dcodec/rate.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace dcodec {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s, const std::string& column) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError("sweep csv: cannot parse '" + s + "' in column " + column);
  }
  return v;
}

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) return {};
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  bool any_cer = false;
  for (const SweepRow& r : table.rows) any_cer |= r.cer_mean.has_value() || r.cer_files > 0;
  os << "m,alpha,bits,n_files,mse,mse_sem,acf5,acf5_sem,entropy_bits,entropy_sem,"
        "huffman_rate_bits,huffman_rate_sem";
  if (any_cer) os << ",cer_files,cer_mean,cer_sem";
  os << '\n';
  for (const SweepRow& r : table.rows) {
    os << r.family << ',' << format_number(r.alpha) << ',' << r.bits << ',' << r.n_files << ','
       << format_number(r.mse) << ',' << format_number(r.mse_sem) << ','
       << format_number(r.acf5) << ',' << format_number(r.acf5_sem) << ','
       << format_number(r.entropy_bits) << ',' << format_number(r.entropy_sem) << ','
       << format_number(r.huffman_rate_bits) << ',' << format_number(r.huffman_rate_sem);
    if (any_cer) os << ',' << r.cer_files << ',' << opt(r.cer_mean) << ',' << opt(r.cer_sem);
    os << '\n';
  }
}

SweepTable read_sweep_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InputError("sweep csv: missing header");
  const std::vector<std::string> header = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* required : {"m", "alpha", "bits", "mse", "acf5", "huffman_rate_bits"}) {
    if (!col.count(required)) throw InputError(std::string("sweep csv: missing column ") + required);
  }
  SweepTable table;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) throw InputError("sweep csv: ragged row '" + line + "'");
    auto get = [&](const char* name) {
      const auto it = col.find(name);
      return it == col.end() ? std::numeric_limits<double>::quiet_NaN()
                             : parse_number(cells[it->second], name);
    };
    SweepRow r;
    r.family = static_cast<int>(get("m"));
    r.alpha = get("alpha");
    r.bits = static_cast<int>(get("bits"));
    const double nf = get("n_files");
    r.n_files = std::isnan(nf) ? 0 : static_cast<int>(nf);
    r.mse = get("mse");
    r.mse_sem = get("mse_sem");
    r.acf5 = get("acf5");
    r.acf5_sem = get("acf5_sem");
    r.entropy_bits = get("entropy_bits");
    r.entropy_sem = get("entropy_sem");
    r.huffman_rate_bits = get("huffman_rate_bits");
    r.huffman_rate_sem = get("huffman_rate_sem");
    const double cf = get("cer_files");
    r.cer_files = std::isnan(cf) ? 0 : static_cast<int>(cf);
    const double cm = get("cer_mean");
    if (!std::isnan(cm)) r.cer_mean = cm;
    const double cs = get("cer_sem");
    if (!std::isnan(cs)) r.cer_sem = cs;
    table.rows.push_back(r);
  }
  validate(table);
  return table;
}

void write_records_csv(std::ostream& os, const std::vector<ConditionRecord>& records) {
  os << "file,m,alpha,bits,dither_seed,ok,mse,acf5,entropy_bits,huffman_rate_bits,payload_bits,"
        "cer,failure\n";
  for (const ConditionRecord& r : records) {
    std::string why = r.ok ? r.cer_failure : r.failure;
    for (char& c : why) {
      if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    os << r.file << ',' << r.family << ',' << format_number(r.alpha) << ',' << r.bits << ','
       << r.dither_seed << ',' << (r.ok ? 1 : 0) << ',';
    if (r.ok) {
      os << format_number(r.mse) << ',' << format_number(r.acf5) << ','
         << format_number(r.entropy_bits) << ',' << format_number(r.huffman_rate_bits) << ','
         << r.payload_bits;
    } else {
      os << ",,,,";
    }
    os << ',' << opt(r.cer) << ',' << why << '\n';
  }
}

nlohmann::json fits_json(const SweepTable& table, double beta_step, double rate_tolerance) {
  nlohmann::json fits = nlohmann::json::array();
  for (auto [m, b] : table.slice_keys()) {
    const std::vector<SweepRow> slice = table.slice(m, b);
    nlohmann::json entry;
    entry["m"] = m;
    entry["bits"] = b;
    const bool has_cer = std::all_of(slice.begin(), slice.end(),
                                     [](const SweepRow& r) { return r.cer_mean.has_value(); });
    if (!has_cer) {
      entry["error"] = "no CER data";
      fits.push_back(entry);
      continue;
    }
    try {
      const BetaFit f = fit_beta(slice, beta_step);
      entry["beta_star"] = f.beta_star;
      entry["pearson_r"] = f.pearson_r;
      entry["beta_grid_step"] = f.grid_step;
    } catch (const Error& e) {
      entry["beta_error"] = e.what();
    }
    try {
      const AlphaChoice a = optimal_alpha(slice, rate_tolerance);
      entry["alpha_star"] = a.alpha_star;
      entry["improved"] = a.improved;
      entry["constant_rate"] = a.constant_rate;
      entry["ratio"] = a.ratio ? nlohmann::json(*a.ratio) : nlohmann::json(nullptr);
      entry["rate_tolerance"] = rate_tolerance;
    } catch (const Error& e) {
      entry["alpha_error"] = e.what();
    }
    fits.push_back(entry);
  }
  nlohmann::json out;
  out["fits"] = fits;
  return out;
}

void write_model_curve_csv(std::ostream& os, const SweepTable& table, double beta_step) {
  os << "m,bits,alpha,cer,beta_star,scaled_model\n";
  for (auto [m, b] : table.slice_keys()) {
    const std::vector<SweepRow> slice = table.slice(m, b);
    BetaFit f;
    try {
      f = fit_beta(slice, beta_step);
    } catch (const Error&) {
      continue;
    }
    const std::vector<double> curve = scaled_model_curve(slice, f.beta_star);
    for (std::size_t i = 0; i < slice.size(); ++i) {
      os << m << ',' << b << ',' << format_number(slice[i].alpha) << ','
         << format_number(*slice[i].cer_mean) << ',' << format_number(f.beta_star) << ','
         << format_number(curve[i]) << '\n';
    }
  }
}

void write_psd_csv(std::ostream& os, const std::vector<PsdCurve>& curves, double sample_rate,
                   Eigen::Index stride) {
  if (stride < 1) throw InputError("write_psd_csv: stride must be at least 1");
  os << "m,alpha,bits,freq_hz,power\n";
  for (const PsdCurve& c : curves) {
    for (Eigen::Index k = 0; k < c.spectrum.power.size(); k += stride) {
      os << c.family << ',' << format_number(c.alpha) << ',' << c.bits << ','
         << format_number(c.spectrum.frequency_hz(k, sample_rate)) << ','
         << format_number(c.spectrum.power[k]) << '\n';
    }
  }
}

std::vector<EntropyPoint> entropy_curves(double laplace_c, const std::vector<int>& families,
                                         const std::vector<int>& bits,
                                         const std::vector<double>& alphas, double full_scale,
                                         QuantizerMode mode) {
  std::vector<EntropyPoint> out;
  for (int m : families) {
    for (int b : bits) {
      const QuantizerConfig cfg = QuantizerConfig::from_full_scale(b, full_scale, mode);
      for (double a : alphas) {
        const DitherSpec spec{m, a, cfg.delta, 0};
        EntropyPoint p;
        p.family = m;
        p.bits = b;
        p.alpha = a;
        p.analytic_entropy = shannon_entropy(analytic_bin_probs(laplace_c, spec, cfg));
        try {
          p.gaussian_bound = gaussian_entropy_bound(laplace_c, spec, cfg);
        } catch (const NumericError&) {
        }
        out.push_back(p);
      }
    }
  }
  return out;
}

void write_entropy_csv(std::ostream& os, const std::vector<EntropyPoint>& points) {
  os << "m,bits,alpha,analytic_entropy,gaussian_bound,huffman_rate\n";
  for (const EntropyPoint& p : points) {
    os << p.family << ',' << p.bits << ',' << format_number(p.alpha) << ','
       << format_number(p.analytic_entropy) << ',' << opt(p.gaussian_bound) << ','
       << opt(p.huffman_rate) << '\n';
  }
}

}  // namespace dcodec
