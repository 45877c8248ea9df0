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

// dither-codec: parametric-dither speech codec and its evaluation harness.

#include "dcodec/analysis.hpp"
#include "dcodec/codec.hpp"
#include "dcodec/error.hpp"
#include "dcodec/random.hpp"
#include "dcodec/rate.hpp"
#include "dcodec/report.hpp"
#include "dcodec/signal.hpp"
#include "dcodec/sweep.hpp"
#include "dcodec/text.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kUntrimmed = std::numeric_limits<double>::infinity();

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw CLI::ValidationError("list", "bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("list", "empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_double_list(s)) out.push_back(static_cast<int>(v));
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw dcodec::InputError("cannot write '" + path.string() + "'");
  out << text;
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dcodec::InputError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

dcodec::AudioBuffer load_normalized(const fs::path& path, double duration) {
  const dcodec::AudioBuffer raw = dcodec::load_pcm(path);
  return dcodec::normalize_trim(raw, std::isfinite(duration) ? duration
                                                              : static_cast<double>(raw.size()) / raw.sample_rate + 1.0);
}

std::vector<dcodec::AudioBuffer> load_corpus(const fs::path& dir, double duration) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (entry.is_regular_file() && ext == ".wav") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw dcodec::InputError("no .wav files in '" + dir.string() + "'");
  std::vector<dcodec::AudioBuffer> corpus;
  for (const fs::path& f : files) corpus.push_back(load_normalized(f, duration));
  return corpus;
}

std::vector<dcodec::AudioBuffer> synth_corpus(int speakers, double seconds, int rate, double c,
                                              std::uint64_t seed, const std::string& kind) {
  std::vector<dcodec::AudioBuffer> corpus;
  const auto n = static_cast<Eigen::Index>(seconds * rate);
  for (int k = 0; k < speakers; ++k) {
    const std::uint64_t s = dcodec::SeedHasher(seed).add(std::uint64_t{0x5EED}).add(static_cast<std::uint64_t>(k)).value();
    dcodec::AudioBuffer buf;
    if (kind == "laplace") {
      buf = dcodec::sample_laplacian({0.0, c, s}, n, rate);
    } else {
      // Spread resonances across speakers, 600 Hz .. 1.4 kHz.
      const double f0 = 600.0 + 800.0 * (speakers > 1 ? static_cast<double>(k) / (speakers - 1) : 0.5);
      buf = dcodec::sample_speech_like({0.0, c, f0, 0.995, s}, n, rate);
    }
    char name[32];
    std::snprintf(name, sizeof(name), "speaker_%02d", k);
    buf.label = name;
    corpus.push_back(dcodec::normalize_trim(buf, seconds));
  }
  return corpus;
}

struct CodecFlags {
  int bits = 1;
  int family = 1;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  bool mid_tread = false;
};

void add_codec_flags(CLI::App* app, CodecFlags& f) {
  app->add_option("--bits", f.bits, "Quantizer bit depth")->envname("DITHER_CODEC_BITS")->check(CLI::Range(1, 16));
  app->add_option("--m", f.family, "Dither family (1 or 2)")->envname("DITHER_CODEC_M")->check(CLI::IsMember({1, 2}));
  app->add_option("--alpha", f.alpha, "Dither amount in [0, 1]")->envname("DITHER_CODEC_ALPHA")->check(CLI::Range(0.0, 1.0));
  app->add_option("--seed", f.seed, "Dither seed")->envname("DITHER_CODEC_SEED");
  app->add_flag("--mid-tread", f.mid_tread, "Use the mid-tread quantizer instead of mid-rise");
}

dcodec::QuantizerConfig make_cfg(const CodecFlags& f) {
  return dcodec::QuantizerConfig::from_full_scale(
      f.bits, 1.0, f.mid_tread ? dcodec::QuantizerMode::kMidTread : dcodec::QuantizerMode::kMidRise);
}

json rate_json(const dcodec::RateReport& r) {
  json j;
  j["shannon_entropy"] = r.shannon_entropy;
  j["huffman_avg_length"] = r.huffman_avg_length;
  j["gaussian_bound"] = r.gaussian_bound ? json(*r.gaussian_bound) : json(nullptr);
  j["empirical"] = r.empirical;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametric-dither low-bit speech codec and evaluation harness"};
  app.require_subcommand(1);

  // encode
  CodecFlags enc_flags;
  std::string enc_in, enc_out;
  double enc_duration = kUntrimmed;
  auto* enc = app.add_subcommand("encode", "Dither, quantize and Huffman-code a WAV file");
  enc->add_option("--in", enc_in, "Input 16-bit PCM WAV")->required()->check(CLI::ExistingFile);
  enc->add_option("--out", enc_out, "Output stream file")->required();
  enc->add_option("--duration", enc_duration, "Trim to this many seconds before normalizing");
  add_codec_flags(enc, enc_flags);

  // decode
  std::string dec_in, dec_out;
  auto* dec = app.add_subcommand("decode", "Decode a stream to 16-bit PCM WAV");
  dec->add_option("--in", dec_in, "Encoded stream")->required()->check(CLI::ExistingFile);
  dec->add_option("--out", dec_out, "Output WAV")->required();

  // analyze
  CodecFlags an_flags;
  std::string an_in, an_out_dir;
  std::vector<int> an_taus = {5};
  Eigen::Index an_smooth = 480;
  double an_duration = kUntrimmed;
  auto* an = app.add_subcommand("analyze", "Error and rate report for one file and condition");
  an->add_option("--in", an_in, "Input 16-bit PCM WAV")->required()->check(CLI::ExistingFile);
  an->add_option("--tau", an_taus, "Autocorrelation lags")->delimiter(',');
  an->add_option("--smooth", an_smooth, "PSD smoothing window in bins");
  an->add_option("--duration", an_duration, "Trim to this many seconds before normalizing");
  an->add_option("--out-dir", an_out_dir, "Write report.json and psd.csv here")->envname("DITHER_CODEC_OUT_DIR");
  add_codec_flags(an, an_flags);

  // sweep
  std::string sw_corpus, sw_out_dir, sw_alpha_grid = "0,0.125,0.25,0.375,0.5,0.625,0.75,0.875,1";
  std::string sw_ms = "1,2", sw_bits = "1,2,3", sw_asr_cmd;
  std::uint64_t sw_seed = 0;
  int sw_jobs = 1, sw_asr_parallel = 1, sw_synth = 0;
  double sw_asr_timeout = 600.0, sw_duration = 20.0, sw_synth_seconds = 20.0, sw_c = 0.1;
  Eigen::Index sw_psd_stride = 240, sw_smooth = 480;
  auto* sw = app.add_subcommand("sweep", "Full alpha x m x b grid over a corpus");
  sw->add_option("--corpus", sw_corpus, "Directory of WAV files")->check(CLI::ExistingDirectory);
  sw->add_option("--synth", sw_synth, "Use N synthetic speech-like speakers instead of a corpus");
  sw->add_option("--synth-seconds", sw_synth_seconds, "Length of each synthetic speaker");
  sw->add_option("--synth-c", sw_c, "Laplace scale of the synthetic speakers");
  sw->add_option("--alpha-grid", sw_alpha_grid, "Comma-separated alpha grid")->envname("DITHER_CODEC_ALPHA_GRID");
  sw->add_option("--m", sw_ms, "Comma-separated dither families")->envname("DITHER_CODEC_M");
  sw->add_option("--bits", sw_bits, "Comma-separated bit depths")->envname("DITHER_CODEC_BITS");
  sw->add_option("--seed", sw_seed, "Base seed")->envname("DITHER_CODEC_SEED");
  sw->add_option("--asr-cmd", sw_asr_cmd, "ASR command template with {in} and {out}")->envname("DITHER_CODEC_ASR_CMD");
  sw->add_option("--asr-timeout", sw_asr_timeout, "ASR timeout in seconds")->envname("DITHER_CODEC_ASR_TIMEOUT");
  sw->add_option("--asr-parallel", sw_asr_parallel, "Maximum concurrent ASR processes")->envname("DITHER_CODEC_ASR_PARALLEL");
  sw->add_option("--jobs", sw_jobs, "Worker threads")->envname("DITHER_CODEC_JOBS")->check(CLI::PositiveNumber);
  sw->add_option("--out-dir", sw_out_dir, "Output directory")->required()->envname("DITHER_CODEC_OUT_DIR");
  sw->add_option("--duration", sw_duration, "Trim corpus files to this many seconds");
  sw->add_option("--psd-stride", sw_psd_stride, "Emit every k-th PSD bin");
  sw->add_option("--smooth", sw_smooth, "PSD smoothing window in bins");

  // fit-beta / optimal-alpha
  std::string fb_sweep, fb_out, fb_curve;
  double fb_step = 1.0 / 99.0;
  auto* fb = app.add_subcommand("fit-beta", "Fit beta* per (m, b) from a sweep CSV with CER");
  fb->add_option("--sweep", fb_sweep, "sweep.csv")->required()->check(CLI::ExistingFile);
  fb->add_option("--step", fb_step, "Beta grid step");
  fb->add_option("--out", fb_out, "Write JSON here instead of stdout");
  fb->add_option("--curve-out", fb_curve, "Write the scaled model curve CSV here");

  std::string oa_sweep, oa_out;
  double oa_tol = 1e-3;
  auto* oa = app.add_subcommand("optimal-alpha", "Rate-aware alpha* per (m, b) from a sweep CSV");
  oa->add_option("--sweep", oa_sweep, "sweep.csv")->required()->check(CLI::ExistingFile);
  oa->add_option("--rate-tol", oa_tol, "Constant-rate tolerance in bits/symbol");
  oa->add_option("--out", oa_out, "Write JSON here instead of stdout");

  // synth
  std::string sy_out_dir, sy_kind = "speech-like";
  int sy_speakers = 2, sy_rate = 48000;
  double sy_seconds = 20.0, sy_c = 0.1;
  std::uint64_t sy_seed = 0;
  auto* sy = app.add_subcommand("synth", "Generate a synthetic Laplacian corpus");
  sy->add_option("--out-dir", sy_out_dir, "Output directory")->required()->envname("DITHER_CODEC_OUT_DIR");
  sy->add_option("--speakers", sy_speakers, "Number of files")->check(CLI::PositiveNumber);
  sy->add_option("--seconds", sy_seconds, "Length of each file");
  sy->add_option("--rate", sy_rate, "Sample rate in Hz")->check(CLI::PositiveNumber);
  sy->add_option("--c", sy_c, "Laplace scale before peak normalization");
  sy->add_option("--kind", sy_kind, "speech-like (correlated) or laplace (iid)")
      ->check(CLI::IsMember({"speech-like", "laplace"}));
  sy->add_option("--seed", sy_seed, "Seed")->envname("DITHER_CODEC_SEED");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enc) {
      const dcodec::AudioBuffer x = load_normalized(enc_in, enc_duration);
      const dcodec::QuantizerConfig cfg = make_cfg(enc_flags);
      const dcodec::DitherSpec spec{enc_flags.family, enc_flags.alpha, cfg.delta, enc_flags.seed};
      const auto bytes = dcodec::encode(x, spec, cfg).to_bytes();
      write_text(enc_out, std::string(bytes.begin(), bytes.end()));
      std::cerr << "encoded " << x.size() << " samples into " << bytes.size() << " bytes\n";
    } else if (*dec) {
      const auto bytes = read_bytes(dec_in);
      dcodec::write_pcm(dec_out, dcodec::decode(std::span<const std::uint8_t>(bytes)));
    } else if (*an) {
      const dcodec::AudioBuffer x = load_normalized(an_in, an_duration);
      const dcodec::QuantizerConfig cfg = make_cfg(an_flags);
      const dcodec::DitherSpec spec{an_flags.family, an_flags.alpha, cfg.delta, an_flags.seed};
      const dcodec::Signal eps = dcodec::dithered_error(x.samples, spec, cfg);
      const dcodec::ErrorReport er = dcodec::error_report(eps, an_taus, std::min<Eigen::Index>(an_smooth, eps.size()));
      const dcodec::Signal y = x.samples + dcodec::sample_dither(spec, x.size());
      const dcodec::SymbolBuffer sym = dcodec::quantize(y, cfg);
      const double c = dcodec::estimate_laplace_scale(x.samples);
      json report;
      report["file"] = x.label;
      report["n"] = er.n;
      report["sample_rate"] = x.sample_rate;
      report["m"] = spec.family;
      report["alpha"] = spec.alpha;
      report["bits"] = cfg.bits;
      report["delta"] = cfg.delta;
      report["seed"] = spec.seed;
      report["mse"] = er.mse;
      for (const auto& [tau, v] : er.acf) report["acf"][std::to_string(tau)] = v;
      report["psd_smooth_window"] = er.psd.smooth_window;
      report["laplace_c_mle"] = c;
      report["rate"] = rate_json(dcodec::rate_report(sym, spec, c));
      report["rate"]["analytic_entropy"] =
          dcodec::shannon_entropy(dcodec::analytic_bin_probs(c, spec, cfg));
      const std::string text = report.dump(2) + "\n";
      std::cout << text;
      if (!an_out_dir.empty()) {
        fs::create_directories(an_out_dir);
        write_text(fs::path(an_out_dir) / "report.json", text);
        std::ofstream psd(fs::path(an_out_dir) / "psd.csv", std::ios::trunc);
        dcodec::write_psd_csv(psd, {{spec.family, spec.alpha, cfg.bits, er.psd}}, x.sample_rate);
      }
    } else if (*sw) {
      if (sw_corpus.empty() == (sw_synth == 0)) {
        std::cerr << "sweep: give exactly one of --corpus or --synth\n";
        return 2;
      }
      dcodec::SweepOptions opts;
      opts.alphas = parse_double_list(sw_alpha_grid);
      opts.families = parse_int_list(sw_ms);
      opts.bits = parse_int_list(sw_bits);
      opts.seed = sw_seed;
      opts.jobs = sw_jobs;
      opts.out_dir = sw_out_dir;
      if (!sw_asr_cmd.empty()) {
        opts.asr = dcodec::AsrClient{sw_asr_cmd, sw_asr_timeout, {}, sw_asr_parallel};
      }
      const std::vector<dcodec::AudioBuffer> corpus =
          sw_synth > 0 ? synth_corpus(sw_synth, sw_synth_seconds, 48000, sw_c, sw_seed, "speech-like")
                       : load_corpus(sw_corpus, sw_duration);
      fs::create_directories(opts.out_dir);
      const dcodec::SweepResult res = dcodec::run_sweep(corpus, opts);
      for (const std::string& f : res.failures) std::cerr << "failure: " << f << '\n';

      const fs::path out(opts.out_dir);
      {
        std::ofstream os(out / "sweep.csv", std::ios::trunc);
        dcodec::write_sweep_csv(os, res.table);
      }
      {
        std::ofstream os(out / "sweep_files.csv", std::ios::trunc);
        dcodec::write_records_csv(os, res.records);
      }
      write_text(out / "fits.json", dcodec::fits_json(res.table).dump(2) + "\n");
      if (res.table.has_cer()) {
        std::ofstream os(out / "model_curve.csv", std::ios::trunc);
        dcodec::write_model_curve_csv(os, res.table);
      }

      // Analytic entropy at the corpus-mean Laplace scale, next to the
      // measured Huffman rate.
      double c_sum = 0.0;
      for (const auto& buf : corpus) c_sum += dcodec::estimate_laplace_scale(buf.samples);
      const double c_hat = c_sum / static_cast<double>(corpus.size());
      auto points = dcodec::entropy_curves(c_hat, opts.families, opts.bits, opts.alphas);
      for (auto& p : points) {
        for (const auto& row : res.table.rows) {
          if (row.family == p.family && row.bits == p.bits && row.alpha == p.alpha && row.n_files > 0) {
            p.huffman_rate = row.huffman_rate_bits;
          }
        }
      }
      {
        std::ofstream os(out / "entropy_curves.csv", std::ios::trunc);
        dcodec::write_entropy_csv(os, points);
      }

      // Error spectra of the first file at the lowest bit depth.
      const int psd_bits = *std::min_element(opts.bits.begin(), opts.bits.end());
      const dcodec::QuantizerConfig psd_cfg = dcodec::QuantizerConfig::from_full_scale(psd_bits);
      std::vector<dcodec::PsdCurve> curves;
      for (int m : opts.families) {
        for (double a : opts.alphas) {
          const dcodec::DitherSpec spec{m, a, psd_cfg.delta,
                                        dcodec::derive_dither_seed(opts.seed, corpus[0].label, m, a, psd_bits)};
          const dcodec::Signal eps = dcodec::dithered_error(corpus[0].samples, spec, psd_cfg);
          curves.push_back({m, a, psd_bits, dcodec::psd(eps, std::min<Eigen::Index>(sw_smooth, eps.size()))});
        }
      }
      {
        std::ofstream os(out / "psd_curves.csv", std::ios::trunc);
        dcodec::write_psd_csv(os, curves, corpus[0].sample_rate, std::max<Eigen::Index>(1, sw_psd_stride));
      }

      json meta;
      meta["seed"] = opts.seed;
      meta["alpha_grid"] = opts.alphas;
      meta["m"] = opts.families;
      meta["bits"] = opts.bits;
      meta["tau"] = opts.tau;
      meta["quantizer"] = "mid-rise";
      meta["full_scale"] = opts.full_scale;
      meta["files"] = json::array();
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        meta["files"].push_back({{"label", corpus[i].label},
                                 {"samples", corpus[i].size()},
                                 {"sample_rate", corpus[i].sample_rate},
                                 {"reference", res.references[i]}});
      }
      meta["asr"] = opts.asr ? json(sw_asr_cmd) : json(nullptr);
      meta["text_normalization"] = std::string(dcodec::kNormalizationPolicy);
      meta["laplace_c_mean"] = c_hat;
      meta["failures"] = res.failures;
      write_text(out / "meta.json", meta.dump(2) + "\n");
      std::cerr << "sweep: " << res.table.rows.size() << " conditions, " << res.failures.size()
                << " failures, outputs in " << out << '\n';
    } else if (*fb) {
      std::ifstream in(fb_sweep);
      const dcodec::SweepTable table = dcodec::read_sweep_csv(in);
      json out = json::array();
      for (auto [m, b] : table.slice_keys()) {
        json e{{"m", m}, {"bits", b}};
        try {
          const dcodec::BetaFit f = dcodec::fit_beta(table.slice(m, b), fb_step);
          e["beta_star"] = f.beta_star;
          e["pearson_r"] = f.pearson_r;
          e["beta_grid_step"] = f.grid_step;
        } catch (const dcodec::Error& err) {
          e["error"] = err.what();
        }
        out.push_back(e);
      }
      const std::string text = out.dump(2) + "\n";
      if (fb_out.empty()) std::cout << text; else write_text(fb_out, text);
      if (!fb_curve.empty()) {
        std::ofstream os(fb_curve, std::ios::trunc);
        dcodec::write_model_curve_csv(os, table, fb_step);
      }
    } else if (*oa) {
      std::ifstream in(oa_sweep);
      const dcodec::SweepTable table = dcodec::read_sweep_csv(in);
      json out = json::array();
      for (auto [m, b] : table.slice_keys()) {
        json e{{"m", m}, {"bits", b}};
        try {
          const dcodec::AlphaChoice a = dcodec::optimal_alpha(table.slice(m, b), oa_tol);
          e["alpha_star"] = a.alpha_star;
          e["improved"] = a.improved;
          e["constant_rate"] = a.constant_rate;
          e["ratio"] = a.ratio ? json(*a.ratio) : json(nullptr);
        } catch (const dcodec::Error& err) {
          e["error"] = err.what();
        }
        out.push_back(e);
      }
      const std::string text = out.dump(2) + "\n";
      if (oa_out.empty()) std::cout << text; else write_text(oa_out, text);
    } else if (*sy) {
      fs::create_directories(sy_out_dir);
      for (const auto& buf : synth_corpus(sy_speakers, sy_seconds, sy_rate, sy_c, sy_seed, sy_kind)) {
        dcodec::write_pcm(fs::path(sy_out_dir) / (buf.label + ".wav"), buf);
      }
    }
  } catch (const dcodec::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
