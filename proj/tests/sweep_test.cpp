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

#include "dcodec/model_fit.hpp"
#include "dcodec/report.hpp"

#include "gtest/gtest.h"

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

using namespace dcodec;
namespace fs = std::filesystem;

namespace {

std::vector<AudioBuffer> corpus(int n = 2, Eigen::Index len = 20000) {
  std::vector<AudioBuffer> out;
  for (int i = 0; i < n; ++i) {
    AudioBuffer b = sample_speech_like({0.0, 0.1, 800.0 + 200.0 * i, 0.995, 100u + i}, len);
    b.label = "spk" + std::to_string(i);
    out.push_back(normalize_trim(b, 1e9));
  }
  return out;
}

SweepOptions small_grid() {
  SweepOptions o;
  o.alphas = {0.0, 0.5, 1.0};
  o.seed = 7;
  return o;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dcodec_sweep_" + name);
  fs::remove_all(p);
  return p;
}

std::string sweep_csv(const SweepTable& t) {
  std::ostringstream os;
  write_sweep_csv(os, t);
  return os.str();
}

}  // namespace

TEST(default_alpha_grid, nine_points) {
  const auto g = default_alpha_grid();
  ASSERT_EQ(g.size(), 9u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g[1], 0.125);
  EXPECT_EQ(g.back(), 1.0);
}

TEST(derive_dither_seed, distinct_per_condition) {
  std::set<std::uint64_t> seen;
  for (const char* f : {"a", "b"}) {
    for (int m : {1, 2}) {
      for (double a : {0.0, 0.5, 1.0}) {
        for (int b : {1, 2, 3}) seen.insert(derive_dither_seed(1, f, m, a, b));
      }
    }
  }
  EXPECT_EQ(seen.size(), 36u);
  EXPECT_EQ(derive_dither_seed(1, "a", 1, 0.5, 2), derive_dither_seed(1, "a", 1, 0.5, 2));
  EXPECT_NE(derive_dither_seed(1, "a", 1, 0.5, 2), derive_dither_seed(2, "a", 1, 0.5, 2));
}

TEST(run_sweep, metrics_only_mode) {
  const fs::path dir = scratch("metrics");
  SweepOptions o = small_grid();
  o.out_dir = dir;
  o.jobs = 3;
  const SweepResult r = run_sweep(corpus(), o);
  ASSERT_EQ(r.table.rows.size(), 2u * 3u * 3u);
  EXPECT_FALSE(r.table.has_cer());
  EXPECT_TRUE(r.failures.empty());
  EXPECT_EQ(r.records.size(), 36u);
  EXPECT_FALSE(fs::exists(dir));  // nothing written, nothing spawned
  for (const SweepRow& row : r.table.rows) {
    EXPECT_EQ(row.n_files, 2);
    EXPECT_GT(row.mse, 0.0);
    EXPECT_GE(row.mse_sem, 0.0);
    EXPECT_GT(row.entropy_bits, 0.0);
    EXPECT_GE(row.huffman_rate_bits, row.entropy_bits);
    EXPECT_LT(row.huffman_rate_bits, row.entropy_bits + 1.0);
    EXPECT_FALSE(row.cer_mean.has_value());
  }
  const std::string csv = sweep_csv(r.table);
  EXPECT_EQ(csv.find("cer"), std::string::npos);
  EXPECT_NO_THROW(validate(r.table));
}

TEST(run_sweep, aggregation_is_mean_and_sem_of_records) {
  const SweepResult r = run_sweep(corpus(3), small_grid());
  for (const SweepRow& row : r.table.rows) {
    std::vector<double> v;
    for (const ConditionRecord& c : r.records) {
      if (c.family == row.family && c.bits == row.bits && c.alpha == row.alpha) v.push_back(c.mse);
    }
    ASSERT_EQ(v.size(), 3u);
    const Eigen::Map<Eigen::ArrayXd> a(v.data(), 3);
    EXPECT_NEAR(row.mse, a.mean(), 1e-15);
    EXPECT_NEAR(row.mse_sem, sem(a), 1e-15);
  }
  // seeds distinct across files at a fixed condition
  EXPECT_NE(r.records[0].dither_seed, r.records[r.records.size() / 3].dither_seed);
}

TEST(run_sweep, deterministic_across_runs_and_thread_counts) {
  SweepOptions o = small_grid();
  const SweepResult a = run_sweep(corpus(), o);
  o.jobs = 4;
  const SweepResult b = run_sweep(corpus(), o);
  EXPECT_EQ(sweep_csv(a.table), sweep_csv(b.table));
  std::ostringstream ra, rb;
  write_records_csv(ra, a.records);
  write_records_csv(rb, b.records);
  EXPECT_EQ(ra.str(), rb.str());
  o.seed = 8;
  EXPECT_NE(sweep_csv(run_sweep(corpus(), o).table), sweep_csv(a.table));
}

TEST(run_sweep, single_file_reports_undefined_sem) {
  const SweepResult r = run_sweep(corpus(1), small_grid());
  for (const SweepRow& row : r.table.rows) EXPECT_TRUE(std::isnan(row.mse_sem));
  EXPECT_NE(sweep_csv(r.table).find(",,"), std::string::npos);
}

TEST(run_sweep, echo_asr_gives_zero_cer) {
  const fs::path dir = scratch("echo");
  SweepOptions o = small_grid();
  o.bits = {1, 2};
  o.out_dir = dir;
  o.jobs = 2;
  o.asr = AsrClient{"echo 'The quick brown fox.'", 30.0, {}, 2};
  const SweepResult r = run_sweep(corpus(), o);
  EXPECT_TRUE(r.failures.empty());
  ASSERT_EQ(r.references.size(), 2u);
  EXPECT_EQ(r.references[0], "the quick brown fox");
  EXPECT_TRUE(r.table.has_cer());
  for (const SweepRow& row : r.table.rows) {
    EXPECT_EQ(*row.cer_mean, 0.0);
    EXPECT_EQ(*row.cer_sem, 0.0);
    EXPECT_EQ(row.cer_files, 2);
  }
  EXPECT_TRUE(fs::exists(dir / "reference" / "spk0.wav"));
  std::size_t decoded = 0;
  for (const auto& e : fs::directory_iterator(dir / "decoded")) decoded += e.path().extension() == ".wav";
  EXPECT_EQ(decoded, 2u * 2u * 2u * 3u);
  fs::remove_all(dir);
}

TEST(run_sweep, asr_failures_are_isolated) {
  const fs::path dir = scratch("fail");
  SweepOptions o = small_grid();
  o.bits = {1};
  o.out_dir = dir;
  // Fails on every decoded file of speaker 1 only.
  o.asr = AsrClient{"case {in} in *decoded*spk1*) exit 2;; *) echo hello;; esac", 30.0, {}, 1};
  const SweepResult r = run_sweep(corpus(), o);
  EXPECT_EQ(r.failures.size(), 2u * 3u);
  for (const SweepRow& row : r.table.rows) {
    EXPECT_EQ(row.cer_files, 1);
    EXPECT_EQ(*row.cer_mean, 0.0);
    EXPECT_FALSE(row.cer_sem.has_value());
    EXPECT_EQ(row.n_files, 2);  // signal metrics still count both files
  }
  const std::string csv = sweep_csv(r.table);
  EXPECT_NE(csv.find("cer_mean"), std::string::npos);
  fs::remove_all(dir);
}

TEST(run_sweep, rejects_bad_options) {
  SweepOptions o = small_grid();
  EXPECT_THROW(run_sweep({}, o), InputError);
  auto c = corpus();
  c[1].label = c[0].label;
  EXPECT_THROW(run_sweep(c, o), InputError);
  o.alphas = {0.5, 0.0};
  EXPECT_THROW(run_sweep(corpus(), o), InputError);
  o = small_grid();
  o.asr = AsrClient{"echo x", 1.0, {}, 1};
  EXPECT_THROW(run_sweep(corpus(), o), InputError);  // no out_dir
}

TEST(report, sweep_csv_round_trip) {
  SweepTable t;
  for (double a : {0.0, 0.5, 1.0}) {
    SweepRow r;
    r.family = 2;
    r.alpha = a;
    r.bits = 3;
    r.n_files = 2;
    r.mse = 0.001 + a * 1e-3;
    r.mse_sem = 1e-5;
    r.acf5 = 0.3 - 0.2 * a;
    r.huffman_rate_bits = 2.1 + 0.1 * a;
    r.cer_mean = 0.2 - 0.05 * a;
    r.cer_files = 2;
    t.rows.push_back(r);
  }
  t.rows[0].cer_sem = 0.01;
  const std::string csv = sweep_csv(t);
  std::istringstream is(csv);
  const SweepTable back = read_sweep_csv(is);
  ASSERT_EQ(back.rows.size(), 3u);
  EXPECT_EQ(back.rows[1].mse, t.rows[1].mse);
  EXPECT_EQ(*back.rows[2].cer_mean, *t.rows[2].cer_mean);
  EXPECT_EQ(*back.rows[0].cer_sem, 0.01);
  EXPECT_FALSE(back.rows[1].cer_sem.has_value());
  EXPECT_EQ(sweep_csv(back), csv);

  const auto j = fits_json(back);
  ASSERT_EQ(j["fits"].size(), 1u);
  EXPECT_EQ(j["fits"][0]["m"], 2);
  EXPECT_TRUE(j["fits"][0].contains("beta_star"));
  EXPECT_EQ(j["fits"][0]["improved"], true);

  std::istringstream bad("m,alpha\n1,0\n");
  EXPECT_THROW(read_sweep_csv(bad), InputError);
}

TEST(report, format_number_round_trips_and_blanks_nan) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(std::nan("")), "");
  const double v = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(report, entropy_curves_cover_the_grid) {
  const auto pts = entropy_curves(0.1, {1, 2}, {1, 3}, {0.0, 1.0});
  ASSERT_EQ(pts.size(), 8u);
  EXPECT_NEAR(pts[0].analytic_entropy, 1.0, 1e-9);
  EXPECT_FALSE(pts[0].gaussian_bound.has_value());
  EXPECT_TRUE(pts[2].gaussian_bound.has_value());
  std::ostringstream os;
  write_entropy_csv(os, pts);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "m,bits,alpha,analytic_entropy,gaussian_bound,huffman_rate");
}
