// Copyright 2026 The SJPC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <malloc.h>
#include <omp.h>
#include <sys/stat.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <new>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracle/oracle.hpp"
#include "sjpc/baselines.hpp"
#include "sjpc/combinatorics.hpp"
#include "sjpc/commands.hpp"
#include "sjpc/estimator.hpp"
#include "sjpc/ingest.hpp"
#include "sjpc/montecarlo.hpp"
#include "sjpc/record_io.hpp"
#include "sjpc/synthetic.hpp"

// Heap tracking for the memory criterion.
namespace heap {
std::atomic<bool> enabled{false};
std::atomic<long long> live{0};
std::atomic<long long> peak{0};

inline void on_alloc(void* p) {
  if (p == nullptr || !enabled.load(std::memory_order_relaxed)) return;
  const long long now = live.fetch_add(static_cast<long long>(malloc_usable_size(p))) +
                        static_cast<long long>(malloc_usable_size(p));
  long long prev = peak.load();
  while (now > prev && !peak.compare_exchange_weak(prev, now)) {
  }
}

inline void on_free(void* p) {
  if (p == nullptr || !enabled.load(std::memory_order_relaxed)) return;
  live.fetch_sub(static_cast<long long>(malloc_usable_size(p)));
}

void start() {
  live = 0;
  peak = 0;
  enabled = true;
}

long long stop() {
  enabled = false;
  return peak.load();
}
}  // namespace heap

void* operator new(std::size_t n) {
  void* p = std::malloc(n == 0 ? 1 : n);
  if (p == nullptr) throw std::bad_alloc();
  heap::on_alloc(p);
  return p;
}
void* operator new[](std::size_t n) { return operator new(n); }
void* operator new(std::size_t n, std::align_val_t a) {
  void* p = std::aligned_alloc(static_cast<std::size_t>(a), (n + static_cast<std::size_t>(a) - 1) /
                                                                 static_cast<std::size_t>(a) *
                                                                 static_cast<std::size_t>(a));
  if (p == nullptr) throw std::bad_alloc();
  heap::on_alloc(p);
  return p;
}
void* operator new[](std::size_t n, std::align_val_t a) { return operator new(n, a); }
void operator delete(void* p) noexcept {
  heap::on_free(p);
  std::free(p);
}
void operator delete[](void* p) noexcept { operator delete(p); }
void operator delete(void* p, std::size_t) noexcept { operator delete(p); }
void operator delete[](void* p, std::size_t) noexcept { operator delete(p); }
void operator delete(void* p, std::align_val_t) noexcept { operator delete(p); }
void operator delete[](void* p, std::align_val_t) noexcept { operator delete(p); }
void operator delete(void* p, std::size_t, std::align_val_t) noexcept { operator delete(p); }
void operator delete[](void* p, std::size_t, std::align_val_t) noexcept { operator delete(p); }

using namespace sjpc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int threads() { return std::max(1, omp_get_max_threads()); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "    failed: " << what << '\n';
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_seconds, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = Clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed = seconds_since(t0);
  out.require(elapsed < limit_seconds, "runtime " + std::to_string(elapsed) + " s over the " +
                                           std::to_string(limit_seconds) + " s budget");
  if (!out.pass) ++failures;
  std::cout << "AC" << id << ' ' << (out.pass ? "PASS" : "FAIL") << "  " << title << "  (" << std::fixed
            << std::setprecision(2) << elapsed << " s)\n"
            << std::defaultfloat << out.detail.str() << std::flush;
}

SjpcConfig make_config(int d, int s, double r, EstimationMode mode) {
  SjpcConfig c;
  c.d = d;
  c.s = s;
  c.r = r;
  c.mode = mode;
  return c;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("sjpc_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// Runs a shell command, returns its exit status.
int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- AC1 ---------------------------------------------------------------------

void ac1(Outcome& o) {
  SjpcState s2(make_config(3, 2, 1.0, EstimationMode::offline_exact));
  SjpcState s3(make_config(3, 3, 1.0, EstimationMode::offline_exact));
  for (const auto& rec : oracle::table1()) {
    s2.process_record(rec);
    s3.process_record(rec);
  }
  const auto r2 = s2.finalize();
  const auto r3 = s3.finalize();
  o.detail << "    y3=" << r2.y.at(3) << " y2=" << r2.y.at(2) << " x3=" << r2.x.at(3) << " x2=" << r2.x.at(2)
           << " g2=" << r2.g_s << " g3=" << r3.g_s << '\n';
  o.require(r2.y.at(3) == 4, "y_3 = 4");
  o.require(r2.y.at(2) == 16, "y_2 = 16");
  o.require(r2.x.at(3) == 0, "x_3 = 0");
  o.require(r2.x.at(2) == 4, "x_2 = 4");
  o.require(r2.g_s == 8, "g_2 = 8");
  o.require(r3.g_s == 4, "g_3 = 4");
}

// --- AC2 ---------------------------------------------------------------------

void ac2(Outcome& o) {
  std::mt19937_64 gen(20260101);
  int mismatches = 0;
  for (int t = 0; t < 500; ++t) {
    const int n = 1 + static_cast<int>(gen() % 200);
    const int d = 2 + static_cast<int>(gen() % 5);
    const int alphabet = 2 + static_cast<int>(gen() % 9);
    const auto data = oracle::fuzz_dataset(gen, n, d, alphabet);
    const auto exact = exact_pair_counts(data);
    SjpcState st(make_config(d, 1, 1.0, EstimationMode::offline_exact));
    ingest_serial(st, data, 0);
    const auto rep = st.finalize();
    bool same = true;
    for (int k = 1; k <= d; ++k) {
      same = same && rep.x.at(k) == static_cast<double>(exact.x[k]);
      same = same && rep.y.at(k) == static_cast<double>(exact.y[k]);
    }
    same = same && rep.g_s == static_cast<double>(exact.g[1]);
    mismatches += same ? 0 : 1;
  }
  o.detail << "    datasets=500 mismatches=" << mismatches << '\n';
  o.require(mismatches == 0, "offline pair counts equal the oracle on every dataset");
}

// --- AC3 ---------------------------------------------------------------------

void ac3(Outcome& o) {
  std::mt19937_64 gen(33);
  std::uniform_real_distribution<double> val(0.0, 1e7);
  std::uniform_real_distribution<double> ratio(0.01, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int d = 1 + static_cast<int>(gen() % 8);
    const int s = 1 + static_cast<int>(gen() % d);
    const double r = ratio(gen);
    const double n = std::floor(val(gen) / 1000.0);
    LevelMap y;
    for (int k = s; k <= d; ++k) y[k] = val(gen);
    const auto rec = solve_pair_counts(y, d, s, n, r, false);
    const auto cf = solve_pair_counts_closed_form(y, d, s, n, r);
    for (int k = s; k <= d; ++k) {
      // Relative to the magnitude of the terms being combined at level k.
      double mag = std::abs(rec.at(k));
      double terms = n / r * static_cast<double>(choose(d, k));
      for (int j = k; j <= d; ++j) terms += static_cast<double>(choose(j, k)) * std::abs(y.at(j)) / (r * r);
      mag = std::max(mag, terms);
      worst = std::max(worst, std::abs(rec.at(k) - cf.at(k)) / mag);
    }
  }
  o.detail << "    max relative discrepancy=" << worst << '\n';
  o.require(worst <= 1e-9, "closed form within 1e-9 of the recursion");
}

// --- AC4 ---------------------------------------------------------------------

void ac4(Outcome& o) {
  int checked = 0, wrong = 0;
  for (int i = 0; i <= 12; ++i) {
    for (int k = 0; k <= i; ++k) {
      ++checked;
      if (alternating_binomial_sum(i, k) != ((i - k) % 2 == 0 ? 1 : -1)) ++wrong;
    }
  }
  o.detail << "    pairs checked=" << checked << " wrong=" << wrong << '\n';
  o.require(wrong == 0, "identity holds for all k <= i <= 12");
}

// --- AC5 / AC6 ---------------------------------------------------------------

struct FixedDataset {
  std::vector<Record> data;
  double g4 = 0.0;
};

const FixedDataset& ac56_dataset() {
  static const FixedDataset ds = [] {
    FixedDataset f;
    const SyntheticDataset gen(SyntheticKind::skewed_20_80, 5000, 5, 2026);
    f.data = gen.materialize();
    const auto exact = exact_pair_counts(f.data, 10000);
    if (exact.g != gen.truth().g) throw std::runtime_error("generator truth disagrees with the oracle");
    f.g4 = static_cast<double>(exact.g[4]);
    return f;
  }();
  return ds;
}

void unbiased_and_bounded(Outcome& o, const SjpcConfig& cfg, double bound, const char* label) {
  const auto& ds = ac56_dataset();
  const auto runs = sjpc_trials(ds.data, cfg, 2000, threads());
  std::vector<double> g4;
  for (const auto& r : runs) g4.push_back(r[0]);
  const auto st = summarize(g4, ds.g4);
  const double z = (st.mean_estimate - ds.g4) / st.mean_se;
  o.detail << "    " << label << " r=" << cfg.r << ": g4=" << ds.g4 << " mean=" << st.mean_estimate << " z=" << z
           << " var(G/g)=" << st.var_ratio << " (se " << st.var_ratio_se << ") bound=" << bound << '\n';
  o.require(std::abs(z) <= 4.0, std::string(label) + " mean within 4 standard errors at r=" + std::to_string(cfg.r));
  o.require(st.var_ratio - 3.0 * st.var_ratio_se <= bound,
            std::string(label) + " variance within the bound at r=" + std::to_string(cfg.r));
}

void ac5(Outcome& o) {
  const auto& ds = ac56_dataset();
  for (double r : {0.25, 0.5}) {
    SjpcConfig cfg = make_config(5, 4, r, EstimationMode::offline_exact);
    cfg.clamp_negative = false;
    unbiased_and_bounded(o, cfg, variance_bound_offline(5, 4, r, ds.g4), "offline");
  }
  // Not part of the criterion: the alternative self-pair correction.
  for (double r : {0.25, 0.5}) {
    SjpcConfig cfg = make_config(5, 4, r, EstimationMode::offline_exact);
    cfg.clamp_negative = false;
    cfg.self_pairs = SelfPairTerm::expected;
    const auto runs = sjpc_trials(ds.data, cfg, 2000, threads());
    std::vector<double> g4;
    for (const auto& x : runs) g4.push_back(x[0]);
    const auto st = summarize(g4, ds.g4);
    o.detail << "    info: expected self-pair term r=" << r << " var(G/g)=" << st.var_ratio << " (se "
             << st.var_ratio_se << ") bound=" << variance_bound_offline(5, 4, r, ds.g4) << '\n';
  }
}

void ac6(Outcome& o) {
  const auto& ds = ac56_dataset();
  for (double r : {0.25, 0.5}) {
    SjpcConfig cfg = make_config(5, 4, r, EstimationMode::online_sketch);
    cfg.width = 1000;
    cfg.depth = 1;
    cfg.aggregation = DepthAggregation::mean;
    cfg.clamp_negative = false;
    const double bound = variance_bound_online(5, 4, r, 1000, static_cast<double>(ds.data.size()), ds.g4);
    unbiased_and_bounded(o, cfg, bound, "online");
  }
}

// --- AC7 ---------------------------------------------------------------------

void ac7(Outcome& o) {
  const auto a = oracle::rows({{"a", "b", "c", "d"}});
  const auto b2 = oracle::rows({{"a", "b", "cx", "dx"}, {"ax", "bx", "c", "d"}});
  const auto b3 = oracle::rows({{"ax", "b", "c", "d"}, {"a", "bx", "c", "d"}, {"a", "b", "cx", "d"}});
  auto join = [](const std::vector<Record>& x, const std::vector<Record>& y, int s) {
    SjpcConfig ca = make_config(4, s, 1.0, EstimationMode::offline_exact);
    SjpcConfig cb = ca;
    cb.stream_id = 1;
    SjpcState sa(ca), sb(cb);
    ingest_serial(sa, x, 0);
    ingest_serial(sb, y, 0);
    return sjpc_join_finalize(sa, sb).g_s;
  };
  auto self = [](const std::vector<Record>& x, int s) {
    SjpcState st(make_config(4, s, 1.0, EstimationMode::offline_exact));
    ingest_serial(st, x, 0);
    return st.finalize().g_s;
  };
  const double j2 = join(a, b2, 2);
  const double j3 = join(a, b3, 3);
  const double half2 = (self(a, 2) + self(b2, 2)) / 2;
  const double half3 = (self(a, 3) + self(b3, 3)) / 2;
  o.detail << "    s=2: join=" << j2 << " (SJ(A)+SJ(B))/2=" << half2 << "; s=3: join=" << j3
           << " (SJ(A)+SJ(B))/2=" << half3 << '\n';
  o.require(j2 == 2, "first instance joins to 2");
  o.require(j3 == 3, "second instance joins to 3");
  o.require(j2 > half2 && j3 > half3, "both exceed the self-join average");
}

// --- AC8 ---------------------------------------------------------------------

void ac8(Outcome& o) {
  const SyntheticDataset gen(SyntheticKind::skewed_20_80, 100000, 5, 8);
  const auto data = gen.materialize();
  const double truth = static_cast<double>(gen.truth().g[4]);
  SjpcConfig cfg = make_config(5, 4, 0.5, EstimationMode::online_sketch);
  cfg.width = 1000;
  cfg.depth = 3;
  const std::size_t budget = equal_memory_sample_size(cfg, mean_record_bytes(data));

  std::vector<double> sjpc, sampling;
  for (const auto& r : sjpc_trials(data, cfg, 30, threads())) sjpc.push_back(r[0]);
  for (const auto& r : sampling_trials(data, budget, 4, 8, 30, threads())) sampling.push_back(r[0]);
  const auto a = summarize(sjpc, truth);
  const auto b = summarize(sampling, truth);
  o.detail << "    g4=" << truth << " counters=" << cfg.levels() * cfg.width * cfg.depth << " sample records=" << budget
           << '\n'
           << "    sjpc std rel err=" << a.std_rel_err << " mean rel err=" << a.mean_rel_err
           << "; sampling std rel err=" << b.std_rel_err << " mean rel err=" << b.mean_rel_err
           << "; ratio=" << a.std_rel_err / b.std_rel_err << '\n';
  o.require(a.std_rel_err <= 0.5 * b.std_rel_err, "SJPC std of relative error at most half of sampling's");
}

// --- AC9 ---------------------------------------------------------------------

// Base records repeated `copies` times each, streamed without materializing.
struct ExpandedStream {
  const SyntheticDataset& base;
  std::uint64_t copies;
  std::uint64_t size() const { return base.size() * copies; }
  void at(std::uint64_t pos, Record& out) const { base.record_at(pos / copies, out); }
};

constexpr int kScalingTrials = 300;

void ac9(Outcome& o, const fs::path& dir) {
  const SyntheticDataset base(SyntheticKind::skewed_20_80, 400000, 5, 9);
  const double base_g = static_cast<double>(base.truth().g[4]);
  SjpcConfig cfg = make_config(5, 4, 0.5, EstimationMode::online_sketch);
  cfg.width = 1000;
  cfg.depth = 3;

  std::vector<double> stds, times;
  for (std::uint64_t copies : {1, 2, 4}) {
    const ExpandedStream stream{base, copies};
    const double truth = base_g * static_cast<double>(copies * copies);
    std::vector<double> est(kScalingTrials);
#pragma omp parallel num_threads(threads())
    {
      Record rec;
      std::vector<std::string_view> views;
#pragma omp for schedule(dynamic, 1)
      for (int t = 0; t < kScalingTrials; ++t) {
        SjpcConfig c = cfg;
        c.master_seed = trial_seed(900 + copies, static_cast<std::size_t>(t));
        SjpcState st(c);
        for (std::uint64_t p = 0; p < stream.size(); ++p) {
          stream.at(p, rec);
          views.assign(rec.fields.begin(), rec.fields.end());
          st.process_record_at(views, p);
        }
        est[static_cast<std::size_t>(t)] = st.finalize().g_s;
      }
    }
    const auto s = summarize(est, truth);
    stds.push_back(s.std_rel_err);

    const fs::path file = dir / ("scale_" + std::to_string(copies) + ".tsv");
    {
      std::ofstream out(file, std::ios::binary);
      Record rec;
      for (std::uint64_t p = 0; p < stream.size(); ++p) {
        stream.at(p, rec);
        write_record(out, rec);
      }
    }
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = Clock::now();
      const int code = run(std::string(SJPC_CLI_PATH) + " estimate " + file.string() +
                           " --s 4 --r 0.5 --width 1000 --depth 3 > " + (dir / "scale.json").string());
      best = std::min(best, seconds_since(t0));
      o.require(code == 0, "cmd_estimate exits 0 on the scaling file");
    }
    times.push_back(best);
    fs::remove(file);
    o.detail << "    n=" << stream.size() << " g4=" << truth << " std rel err=" << s.std_rel_err
             << " mean rel err=" << s.mean_rel_err << " estimate wall time=" << best << " s\n";
  }
  for (std::size_t i = 1; i < stds.size(); ++i) {
    o.require(stds[i] <= 1.2 * stds[i - 1], "relative-error std does not grow from n to 2n (20% slack)");
  }
  const double growth = times.back() / times.front();
  o.detail << "    wall time growth for 4x records=" << growth << " (limit " << 1.3 * 4 << ")\n";
  o.require(growth <= 1.3 * 4.0, "wall time grows at most 1.3x linearly");
  o.require(times[1] / times[0] <= 1.3 * 2.0, "wall time from n to 2n at most 1.3x linear");
}

// --- AC10 --------------------------------------------------------------------

long long estimate_peak_heap(const fs::path& file) {
  EstimateOptions opts;
  opts.input = file.string();
  opts.config.s = 2;
  opts.config.r = 0.5;
  std::ostringstream out, err;
  heap::start();
  const int code = cmd_estimate(opts, out, err);
  const long long peak = heap::stop();
  if (code != 0) throw std::runtime_error("cmd_estimate failed: " + err.str());
  return peak;
}

void ac10(Outcome& o, const fs::path& dir) {
  const fs::path file = dir / "fifo_src.tsv";
  {
    std::ofstream out(file, std::ios::binary);
    const SyntheticDataset ds(SyntheticKind::skewed_20_80, 20000, 5, 10);
    Record rec;
    for (std::uint64_t i = 0; i < ds.size(); ++i) {
      ds.record_at(i, rec);
      write_record(out, rec);
    }
  }
  const fs::path fifo = dir / "input.fifo";
  o.require(::mkfifo(fifo.c_str(), 0600) == 0, "mkfifo");
  const std::string cli = SJPC_CLI_PATH;
  const std::string flags = " --s 2 --r 0.5 --width 1000 --depth 3";
  const int fifo_code = run("cat " + file.string() + " > " + fifo.string() + " & " + cli + " estimate " +
                            fifo.string() + flags + " > " + (dir / "fifo.json").string() + "; wait");
  const int file_code = run(cli + " estimate " + file.string() + flags + " > " + (dir / "file.json").string());
  const int pipe_code = run("cat " + file.string() + " | " + cli + " estimate -" + flags + " > " +
                            (dir / "pipe.json").string());
  o.require(fifo_code == 0 && file_code == 0 && pipe_code == 0, "estimate succeeds on FIFO, pipe and file input");
  const std::string from_file = slurp(dir / "file.json");
  o.require(!from_file.empty() && slurp(dir / "fifo.json") == from_file, "FIFO report identical to file report");
  o.require(slurp(dir / "pipe.json") == from_file, "pipe report identical to file report");

  // Counter memory and heap peak at 10^4 versus 10^6 records.
  std::vector<long long> peaks;
  std::vector<std::size_t> counters;
  for (std::uint64_t n : {10000ULL, 1000000ULL}) {
    const SyntheticDataset ds(SyntheticKind::skewed_20_80, n, 5, 11);
    const fs::path f = dir / ("mem_" + std::to_string(n) + ".tsv");
    {
      std::ofstream out(f, std::ios::binary);
      Record rec;
      for (std::uint64_t i = 0; i < n; ++i) {
        ds.record_at(i, rec);
        write_record(out, rec);
      }
    }
    SjpcConfig cfg = make_config(5, 2, 0.5, EstimationMode::online_sketch);
    SjpcState st(cfg);
    Record rec;
    for (std::uint64_t i = 0; i < n; ++i) {
      ds.record_at(i, rec);
      st.process_record(rec);
    }
    counters.push_back(st.summary_bytes());
    peaks.push_back(estimate_peak_heap(f));
    fs::remove(f);
  }
  o.detail << "    counter bytes: " << counters[0] << " vs " << counters[1] << "; estimate heap peak: " << peaks[0]
           << " vs " << peaks[1] << " bytes\n";
  o.require(counters[0] == counters[1], "counter memory identical for 10^4 and 10^6 records");
  o.require(std::llabs(peaks[1] - peaks[0]) <= 4096, "heap peak of estimate within O(1) of each other");
}

}  // namespace

int main() {
  std::cout << "sjpc acceptance run (" << threads() << " OpenMP thread(s))\n";
  TempDir tmp;
  criterion(1, "running example exactness", 1.0, ac1);
  criterion(2, "oracle equivalence on 500 fuzzed datasets", 120.0, ac2);
  criterion(3, "recursive and closed-form solvers agree", 5.0, ac3);
  criterion(4, "alternating binomial identity", 1.0, ac4);
  criterion(5, "offline unbiasedness and variance bound", 600.0, ac5);
  criterion(6, "online unbiasedness and variance bound", 900.0, ac6);
  criterion(7, "join counter-examples", 1.0, ac7);
  criterion(8, "SJPC versus random sampling at equal memory", 1200.0, ac8);
  criterion(9, "error and wall-time scaling", 1800.0, [&](Outcome& o) { ac9(o, tmp.path); });
  criterion(10, "one pass and memory independent of n", 300.0, [&](Outcome& o) { ac10(o, tmp.path); });
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " criterion(s) FAILED") << '\n';
  return failures == 0 ? 0 : 1;
}
