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

#include "sjpc/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "sjpc/ingest.hpp"
#include "sjpc/montecarlo.hpp"
#include "sjpc/record_io.hpp"
#include "sjpc/synthetic.hpp"

namespace sjpc {

namespace {

using json = nlohmann::ordered_json;

constexpr std::size_t kBatchRecords = 16384;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OpenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Input {
 public:
  explicit Input(const std::string& path) {
    if (path == "-") {
      stream_ = &std::cin;
      return;
    }
    file_.open(path, std::ios::binary);
    if (!file_) throw OpenError("cannot open '" + path + "'");
    stream_ = &file_;
  }
  std::istream& stream() { return *stream_; }

 private:
  std::ifstream file_;
  std::istream* stream_ = nullptr;
};

// Integral values print without a fractional part.
json number(double v) {
  if (v == static_cast<double>(static_cast<std::int64_t>(v)) && std::abs(v) < 9.0e15) {
    return static_cast<std::int64_t>(v);
  }
  return v;
}

void emit(const json& doc, const std::optional<std::string>& path, std::ostream& out) {
  if (path && *path != "-") {
    std::ofstream file(*path, std::ios::binary);
    if (!file) throw OpenError("cannot write '" + *path + "'");
    file << doc.dump(2) << '\n';
    return;
  }
  out << doc.dump(2) << '\n';
}

std::string_view aggregation_name(DepthAggregation a) { return a == DepthAggregation::mean ? "mean" : "median"; }

void put_config(json& doc, const SjpcConfig& c) {
  doc["d"] = c.d;
  doc["s"] = c.s;
  doc["r"] = c.r;
  doc["w"] = c.width;
  doc["t"] = c.depth;
  doc["seed"] = c.master_seed;
  doc["mode"] = to_string(c.mode);
  doc["clamp"] = c.clamp_negative ? "on" : "off";
  doc["aggregation"] = aggregation_name(c.aggregation);
  doc["self_pairs"] = to_string(c.self_pairs);
}

void put_levels(json& doc, const char* prefix, const LevelMap& m) {
  for (const auto& [k, v] : m) doc[std::string(prefix) + "." + std::to_string(k)] = number(v);
}

void put_levels(json& doc, const char* prefix, const std::vector<std::uint64_t>& v) {
  for (std::size_t k = 0; k < v.size(); ++k) doc[std::string(prefix) + "." + std::to_string(k)] = v[k];
}

void put_estimate(json& doc, const EstimateReport& rep) {
  put_levels(doc, "y", rep.y);
  put_levels(doc, "x", rep.x);
  doc["pair_count"] = number(rep.pair_count);
  doc["g_s"] = number(rep.g_s);
  if (rep.bounds) {
    doc["bound.offline"] = rep.bounds->offline;
    doc["bound.online"] = rep.bounds->online;
  } else {
    doc["bound.offline"] = nullptr;
    doc["bound.online"] = nullptr;
  }
}

// Fixes d from the flag or the first line and checks the threshold.
int resolve_arity(RecordReader& reader, bool has_first, const std::optional<int>& d_flag, int s) {
  int d = has_first ? reader.arity() : d_flag.value_or(s);
  if (d < 1) throw UsageError("d must be at least 1");
  if (s > d) throw UsageError("s = " + std::to_string(s) + " exceeds d = " + std::to_string(d));
  return d;
}

// Streams the rest of `reader` into a state; the current record (if any)
// has not been processed yet.
SjpcState stream_into(RecordReader& reader, bool has_first, SjpcConfig cfg, int threads) {
  cfg.validate();
  SjpcState state(cfg);
  if (!has_first) return state;
  if (threads <= 1) {
    do {
      state.process_record(reader.fields());
    } while (reader.next());
    return state;
  }
  std::vector<Record> batch;
  batch.reserve(kBatchRecords);
  std::uint64_t position = 0;
  auto flush = [&] {
    ingest_parallel(state, batch, position, threads);
    position += batch.size();
    batch.clear();
  };
  do {
    batch.push_back(reader.record());
    if (batch.size() == kBatchRecords) flush();
  } while (reader.next());
  if (!batch.empty()) flush();
  return state;
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return exit_code::input;
  } catch (const ArityError& e) {
    err << "input error: " << e.what() << '\n';
    return exit_code::input;
  } catch (const OpenError& e) {
    err << "input error: " << e.what() << '\n';
    return exit_code::input;
  } catch (const ResourceCapError& e) {
    err << "resource cap: " << e.what() << '\n';
    return exit_code::resource_cap;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::input;
  }
}

std::vector<Record> read_capped(RecordReader& reader, std::size_t cap) {
  std::vector<Record> data;
  while (reader.next()) {
    if (data.size() == cap) {
      throw ResourceCapError("input exceeds the oracle cap of " + std::to_string(cap) + " records");
    }
    data.push_back(reader.record());
  }
  return data;
}

}  // namespace

int cmd_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Input input(opts.input);
    RecordReader reader(input.stream(), opts.delimiter, opts.d);
    const bool has_first = reader.next();
    SjpcConfig cfg = opts.config;
    cfg.d = resolve_arity(reader, has_first, opts.d, cfg.s);
    const SjpcState state = stream_into(reader, has_first, cfg, opts.threads);
    const EstimateReport rep = state.finalize();

    json doc;
    doc["command"] = "estimate";
    doc["version"] = kVersion;
    doc["input_digest"] = reader.digest();
    doc["n"] = rep.n;
    put_config(doc, cfg);
    doc["stream_id"] = cfg.stream_id;
    put_estimate(doc, rep);
    emit(doc, opts.out, out);
    return exit_code::ok;
  });
}

int cmd_exact(const ExactOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Input input(opts.input);
    RecordReader reader(input.stream(), opts.delimiter, opts.d);
    const std::vector<Record> data = read_capped(reader, opts.cap);
    ExactCounts counts = opts.threads > 1 ? exact_pair_counts_parallel(data, opts.threads, opts.cap)
                                          : exact_pair_counts(data, opts.cap);
    if (data.empty() && opts.d) {
      counts.d = *opts.d;
      counts.x.assign(static_cast<std::size_t>(*opts.d) + 1, 0);
      counts.y.assign(counts.x.size(), 0);
      counts.g.assign(counts.x.size(), 0);
    }

    json doc;
    doc["command"] = "exact";
    doc["version"] = kVersion;
    doc["input_digest"] = reader.digest();
    doc["n"] = counts.n;
    doc["d"] = counts.d;
    put_levels(doc, "x", counts.x);
    put_levels(doc, "y", counts.y);
    put_levels(doc, "g", counts.g);
    emit(doc, opts.out, out);
    return exit_code::ok;
  });
}

int cmd_sample(const SampleOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.sample_size < 2) throw UsageError("--sample-size must be at least 2");
    Input input(opts.input);
    RecordReader reader(input.stream(), opts.delimiter, opts.d);
    ReservoirSampler reservoir(opts.sample_size, opts.seed);
    const bool has_first = reader.next();
    const int d = resolve_arity(reader, has_first, opts.d, opts.s);
    if (has_first) {
      do {
        reservoir.offer(reader.fields());
      } while (reader.next());
    }
    SamplingEstimate est = estimate_from_sample(reservoir.sample(), reservoir.seen(), opts.s);
    est.undersized = reservoir.seen() < opts.sample_size;
    if (!has_first) {
      est.d = d;
      est.x.assign(static_cast<std::size_t>(d) + 1, 0.0);
    }

    json doc;
    doc["command"] = "sample";
    doc["version"] = kVersion;
    doc["input_digest"] = reader.digest();
    doc["n"] = est.n;
    doc["d"] = est.d;
    doc["s"] = est.s;
    doc["seed"] = opts.seed;
    doc["sample_size"] = est.sample_size;
    doc["undersized"] = est.undersized;
    for (std::size_t k = 0; k < est.x.size(); ++k) doc["x." + std::to_string(k)] = number(est.x[k]);
    doc["g_s"] = number(est.g_s);
    emit(doc, opts.out, out);
    return exit_code::ok;
  });
}

int cmd_join(const JoinOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Input input_a(opts.input_a);
    Input input_b(opts.input_b);
    RecordReader reader_a(input_a.stream(), opts.delimiter, opts.d);
    RecordReader reader_b(input_b.stream(), opts.delimiter, opts.d);
    const bool first_a = reader_a.next();
    const bool first_b = reader_b.next();
    const int s = opts.config.s;
    const int da = resolve_arity(reader_a, first_a, opts.d, s);
    const int db = resolve_arity(reader_b, first_b, opts.d, s);
    int d = da;
    if (first_a && first_b && da != db) {
      throw UsageError("dimension mismatch: " + std::to_string(da) + " vs " + std::to_string(db) + " fields");
    }
    if (!first_a) d = db;

    SjpcConfig cfg_a = opts.config;
    cfg_a.d = d;
    SjpcConfig cfg_b = cfg_a;
    cfg_b.stream_id = cfg_a.stream_id + 1;
    const SjpcState a = stream_into(reader_a, first_a, cfg_a, opts.threads);
    const SjpcState b = stream_into(reader_b, first_b, cfg_b, opts.threads);
    const EstimateReport rep = sjpc_join_finalize(a, b);

    json doc;
    doc["command"] = "join";
    doc["version"] = kVersion;
    doc["input_digest.a"] = reader_a.digest();
    doc["input_digest.b"] = reader_b.digest();
    doc["n.a"] = rep.n;
    doc["n.b"] = rep.n_other;
    put_config(doc, cfg_a);
    doc["stream_id.a"] = cfg_a.stream_id;
    doc["stream_id.b"] = cfg_b.stream_id;
    put_estimate(doc, rep);
    emit(doc, opts.out, out);
    return exit_code::ok;
  });
}

int cmd_gen(const GenOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.out.empty() || opts.out == "-") throw UsageError("gen needs an output path (--out)");
    const SyntheticKind kind = parse_synthetic_kind(opts.kind);
    const SyntheticDataset ds(kind, opts.n, opts.d, opts.seed);

    std::ofstream file(opts.out, std::ios::binary);
    if (!file) throw OpenError("cannot write '" + opts.out + "'");
    Record rec;
    for (std::uint64_t i = 0; i < ds.size(); ++i) {
      ds.record_at(i, rec);
      write_record(file, rec, opts.delimiter);
    }
    file.close();
    if (!file) throw OpenError("write to '" + opts.out + "' failed");

    const SyntheticTruth& t = ds.truth();
    json truth;
    truth["kind"] = to_string(t.kind);
    truth["n"] = t.n;
    truth["d"] = t.d;
    truth["seed"] = t.seed;
    truth["group_size"] = t.group_size;
    truth["groups"] = t.groups;
    truth["grouped_records"] = t.grouped_records;
    truth["similar_fields_in_group"] = t.d - 1;
    put_levels(truth, "x", t.x);
    put_levels(truth, "g", t.g);
    const std::string truth_path = opts.out + ".truth.json";
    emit(truth, truth_path, out);

    json doc;
    doc["command"] = "gen";
    doc["version"] = kVersion;
    doc["records"] = opts.out;
    doc["truth"] = truth_path;
    doc["n"] = t.n;
    doc["d"] = t.d;
    out << doc.dump(2) << '\n';
    return exit_code::ok;
  });
}

int cmd_montecarlo(const MonteCarloCommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.input.has_value() == opts.kind.has_value()) {
      throw UsageError("montecarlo needs exactly one of an input file or --kind");
    }
    if (opts.trials < 2) throw UsageError("--trials must be at least 2");

    std::vector<Record> data;
    std::vector<std::uint64_t> true_g;
    if (opts.input) {
      Input input(*opts.input);
      RecordReader reader(input.stream(), opts.delimiter, opts.d);
      data = read_capped(reader, opts.cap);
      true_g = exact_pair_counts(data, opts.cap).g;
    } else {
      const SyntheticDataset ds(parse_synthetic_kind(*opts.kind), opts.n, opts.d.value_or(5), opts.data_seed);
      data = ds.materialize();
      true_g = ds.truth().g;
    }
    if (data.empty()) throw UsageError("montecarlo needs a non-empty dataset");

    MonteCarloOptions mc;
    mc.config = opts.config;
    mc.config.d = static_cast<int>(data.front().arity());
    if (mc.config.s > mc.config.d) {
      throw UsageError("s = " + std::to_string(mc.config.s) + " exceeds d = " + std::to_string(mc.config.d));
    }
    mc.config.validate();
    mc.trials = opts.trials;
    mc.threads = opts.threads;
    const std::size_t budget =
        opts.sample_size.value_or(equal_memory_sample_size(mc.config, mean_record_bytes(data)));
    if (budget >= 2) mc.sample_size = budget;

    const auto rows = run_montecarlo(data, true_g, mc);
    if (opts.out && *opts.out != "-") {
      std::ofstream file(*opts.out, std::ios::binary);
      if (!file) throw OpenError("cannot write '" + *opts.out + "'");
      write_montecarlo_csv(file, rows);
    } else {
      write_montecarlo_csv(out, rows);
    }
    return exit_code::ok;
  });
}

}  // namespace sjpc
