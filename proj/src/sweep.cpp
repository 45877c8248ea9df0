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

#include "dcodec/sweep.hpp"

#include "dcodec/analysis.hpp"
#include "dcodec/codec.hpp"
#include "dcodec/error.hpp"
#include "dcodec/random.hpp"
#include "dcodec/rate.hpp"
#include "dcodec/text.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <semaphore>
#include <set>
#include <sstream>
#include <thread>

namespace dcodec {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Job {
  std::size_t file;
  int family;
  int bits;
  double alpha;
};

std::string alpha_tag(double alpha) {
  std::ostringstream os;
  os.precision(6);
  os << alpha;
  return os.str();
}

std::string wav_name(const std::string& label, const Job& j) {
  return label + "_m" + std::to_string(j.family) + "_b" + std::to_string(j.bits) + "_a" +
         alpha_tag(j.alpha) + ".wav";
}

// Mean and SEM of the values; SEM is NaN below two values.
std::pair<double, double> mean_sem(const std::vector<double>& v) {
  if (v.empty()) return {kNaN, kNaN};
  const Eigen::Map<const Eigen::ArrayXd> a(v.data(), static_cast<Eigen::Index>(v.size()));
  return {a.mean(), v.size() >= 2 ? sem(a) : kNaN};
}

void check_options(const std::vector<AudioBuffer>& corpus, const SweepOptions& opts) {
  if (corpus.empty()) throw InputError("sweep: empty corpus");
  if (opts.alphas.empty() || opts.families.empty() || opts.bits.empty()) {
    throw InputError("sweep: empty parameter grid");
  }
  for (std::size_t i = 1; i < opts.alphas.size(); ++i) {
    if (!(opts.alphas[i] > opts.alphas[i - 1])) {
      throw InputError("sweep: alpha grid must be strictly increasing");
    }
  }
  for (double a : opts.alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw InputError("sweep: alpha outside [0, 1]");
  }
  for (int m : opts.families) {
    if (m != 1 && m != 2) throw InputError("sweep: dither family must be 1 or 2");
  }
  for (int b : opts.bits) {
    if (b < 1 || b > 16) throw InputError("sweep: bits outside [1, 16]");
  }
  std::set<std::string> labels;
  for (const AudioBuffer& buf : corpus) {
    validate(buf);
    if (!labels.insert(buf.label).second) {
      throw InputError("sweep: duplicate corpus label '" + buf.label + "'");
    }
  }
  if (opts.jobs < 1) throw InputError("sweep: jobs must be at least 1");
  if (opts.asr && opts.out_dir.empty()) throw InputError("sweep: ASR mode needs an output directory");
}

}  // namespace

std::vector<double> default_alpha_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 8; ++i) g.push_back(i / 8.0);
  return g;
}

std::uint64_t derive_dither_seed(std::uint64_t seed, const std::string& file, int family,
                                 double alpha, int bits) {
  return SeedHasher(seed)
      .add(std::string_view(file))
      .add(static_cast<std::uint64_t>(family))
      .add(std::bit_cast<std::uint64_t>(alpha))
      .add(static_cast<std::uint64_t>(bits))
      .value();
}

SweepResult run_sweep(const std::vector<AudioBuffer>& corpus, const SweepOptions& opts) {
  check_options(corpus, opts);
  SweepResult result;
  const std::size_t nfiles = corpus.size();

  std::vector<Job> jobs;
  for (std::size_t f = 0; f < nfiles; ++f) {
    for (int m : opts.families) {
      for (int b : opts.bits) {
        for (double a : opts.alphas) jobs.push_back({f, m, b, a});
      }
    }
  }

  const bool use_asr = opts.asr.has_value();
  std::filesystem::path ref_dir, dec_dir;
  if (use_asr) {
    ref_dir = opts.out_dir / "reference";
    dec_dir = opts.out_dir / "decoded";
    std::filesystem::create_directories(ref_dir);
    std::filesystem::create_directories(dec_dir);
  }

  // Recognizer processes are memory-heavy; cap how many run at once.
  std::counting_semaphore<> asr_slots(use_asr ? std::max(1, opts.asr->max_parallel) : 1);
  auto run_asr = [&](const std::filesystem::path& wav) {
    asr_slots.acquire();
    Transcript t;
    try {
      t = transcribe(*opts.asr, wav);
    } catch (const std::exception& e) {
      t.ok = false;
      t.failure = e.what();
    }
    asr_slots.release();
    return t;
  };

  auto parallel_for = [&](std::size_t count, auto&& body) {
    std::atomic<std::size_t> next{0};
    const auto workers = static_cast<std::size_t>(std::min<std::size_t>(
        static_cast<std::size_t>(opts.jobs), std::max<std::size_t>(count, 1)));
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) body(i);
      });
    }
  };

  // Reference transcripts come from the unprocessed input through the same
  // recognizer.
  std::vector<std::optional<std::string>> reference(nfiles);
  std::vector<std::string> reference_failure(nfiles);
  if (use_asr) {
    parallel_for(nfiles, [&](std::size_t f) {
      const std::filesystem::path wav = ref_dir / (corpus[f].label + ".wav");
      try {
        write_pcm(wav, corpus[f]);
      } catch (const std::exception& e) {
        reference_failure[f] = e.what();
        return;
      }
      const Transcript t = run_asr(wav);
      if (!t.ok) {
        reference_failure[f] = t.failure;
      } else if (t.text.empty()) {
        reference_failure[f] = "reference transcript is empty after normalization";
      } else {
        reference[f] = t.text;
      }
    });
  }

  std::vector<ConditionRecord> records(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const Job& j = jobs[i];
    const AudioBuffer& x = corpus[j.file];
    ConditionRecord& r = records[i];
    r.file = x.label;
    r.family = j.family;
    r.alpha = j.alpha;
    r.bits = j.bits;
    r.dither_seed = derive_dither_seed(opts.seed, x.label, j.family, j.alpha, j.bits);
    try {
      const QuantizerConfig cfg = QuantizerConfig::from_full_scale(j.bits, opts.full_scale, opts.mode);
      const DitherSpec spec{j.family, j.alpha, cfg.delta, r.dither_seed};
      const EncodedStream stream = encode(x, spec, cfg);
      const std::vector<std::uint8_t> bytes = stream.to_bytes();
      const EncodedStream parsed = EncodedStream::parse(bytes);
      const SymbolBuffer sym = decode_symbols(parsed);
      AudioBuffer decoded{reconstruct(sym), x.sample_rate, x.label};
      const Signal eps = error_signal(x.samples, decoded.samples);
      r.mse = mse(eps);
      r.acf5 = acf_tau(eps, opts.tau);
      r.entropy_bits = shannon_entropy(empirical_bin_probs(sym));
      r.payload_bits = stream.payload.bit_count;
      r.huffman_rate_bits = static_cast<double>(stream.payload.bit_count) / static_cast<double>(x.size());
      r.ok = true;

      if (use_asr) {
        if (!reference[j.file]) {
          r.cer_failure = "no reference transcript: " + reference_failure[j.file];
        } else {
          const std::filesystem::path wav = dec_dir / wav_name(x.label, j);
          write_pcm(wav, decoded);
          const Transcript t = run_asr(wav);
          if (!t.ok) {
            r.cer_failure = t.failure;
          } else {
            r.cer = cer(*reference[j.file], t.text).cer;
          }
        }
      }
    } catch (const std::exception& e) {
      r.ok = false;
      r.failure = e.what();
    }
  });

  for (std::size_t f = 0; f < nfiles; ++f) {
    if (use_asr && !reference[f]) {
      result.failures.push_back(corpus[f].label + " reference: " + reference_failure[f]);
    }
    result.references.push_back(reference[f].value_or(""));
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ConditionRecord& r = records[i];
    if (!r.ok) {
      result.failures.push_back(r.file + " m=" + std::to_string(r.family) + " b=" +
                                std::to_string(r.bits) + " alpha=" + alpha_tag(r.alpha) + ": " +
                                r.failure);
    } else if (!r.cer_failure.empty() && reference[jobs[i].file]) {
      result.failures.push_back(r.file + " m=" + std::to_string(r.family) + " b=" +
                                std::to_string(r.bits) + " alpha=" + alpha_tag(r.alpha) +
                                " ASR: " + r.cer_failure);
    }
  }

  // Aggregate in (m, b, alpha) order.
  for (int m : opts.families) {
    for (int b : opts.bits) {
      for (double a : opts.alphas) {
        std::vector<double> e2, acf, h, rate, p;
        for (const ConditionRecord& r : records) {
          if (r.family != m || r.bits != b || r.alpha != a || !r.ok) continue;
          e2.push_back(r.mse);
          acf.push_back(r.acf5);
          h.push_back(r.entropy_bits);
          rate.push_back(r.huffman_rate_bits);
          if (r.cer) p.push_back(*r.cer);
        }
        SweepRow row;
        row.family = m;
        row.alpha = a;
        row.bits = b;
        row.n_files = static_cast<int>(e2.size());
        std::tie(row.mse, row.mse_sem) = mean_sem(e2);
        std::tie(row.acf5, row.acf5_sem) = mean_sem(acf);
        std::tie(row.entropy_bits, row.entropy_sem) = mean_sem(h);
        std::tie(row.huffman_rate_bits, row.huffman_rate_sem) = mean_sem(rate);
        if (use_asr) {
          row.cer_files = static_cast<int>(p.size());
          if (!p.empty()) {
            const auto [mean, s] = mean_sem(p);
            row.cer_mean = mean;
            if (p.size() >= 2) row.cer_sem = s;
          }
        }
        result.table.rows.push_back(row);
      }
    }
  }
  result.records = std::move(records);
  return result;
}

}  // namespace dcodec
