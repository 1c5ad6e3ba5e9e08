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

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "sjpc/commands.hpp"

namespace {

struct SharedFlags {
  int s = 1;
  std::optional<int> d;
  double r = 1.0;
  std::size_t width = 1000;
  std::size_t depth = 3;
  std::uint64_t seed = 1;
  std::string mode = "online";
  std::string clamp = "on";
  std::string aggregation = "median";
  std::string self_pairs = "realized";
  std::string delimiter = "\t";
  int threads = 1;
  std::optional<std::string> out;
};

void add_config_flags(CLI::App* cmd, SharedFlags& f) {
  cmd->add_option("--s", f.s, "similarity threshold (fields that must agree)")->capture_default_str();
  cmd->add_option("--d", f.d, "number of fields (default: from the first line)");
  cmd->add_option("--r", f.r, "sampling ratio in (0, 1]")->capture_default_str();
  cmd->add_option("--width", f.width, "sketch width w")->capture_default_str();
  cmd->add_option("--depth", f.depth, "sketch depth t")->capture_default_str();
  cmd->add_option("--seed", f.seed, "master seed")->capture_default_str();
  cmd->add_option("--mode", f.mode, "online (sketch) or offline (exact counts)")
      ->check(CLI::IsMember({"online", "offline"}))
      ->capture_default_str();
  cmd->add_option("--clamp", f.clamp, "floor negative level counts at 0")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  cmd->add_option("--aggregation", f.aggregation, "combine depth rows by median or mean")
      ->check(CLI::IsMember({"median", "mean"}))
      ->capture_default_str();
  cmd->add_option("--self-pairs", f.self_pairs, "self-pair correction: realized or expected")
      ->check(CLI::IsMember({"realized", "expected"}))
      ->capture_default_str();
}

void add_io_flags(CLI::App* cmd, SharedFlags& f) {
  cmd->add_option("--delimiter", f.delimiter, "single-byte field separator (default: tab)");
  cmd->add_option("--threads", f.threads, "worker threads")->capture_default_str();
  cmd->add_option("--out", f.out, "write the report here instead of stdout");
}

sjpc::SjpcConfig to_config(const SharedFlags& f) {
  sjpc::SjpcConfig c;
  c.s = f.s;
  c.r = f.r;
  c.width = f.width;
  c.depth = f.depth;
  c.master_seed = f.seed;
  c.mode = f.mode == "offline" ? sjpc::EstimationMode::offline_exact : sjpc::EstimationMode::online_sketch;
  c.clamp_negative = f.clamp == "on";
  c.aggregation = f.aggregation == "mean" ? sjpc::DepthAggregation::mean : sjpc::DepthAggregation::median;
  c.self_pairs = f.self_pairs == "expected" ? sjpc::SelfPairTerm::expected : sjpc::SelfPairTerm::realized;
  return c;
}

char delimiter_of(const std::string& text) {
  if (text == "\\t") return '\t';
  if (text.size() != 1 || text == "\n") throw CLI::ValidationError("--delimiter", "must be a single byte");
  return text[0];
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-pass similarity self-join and join size estimation"};
  app.set_version_flag("--version", std::string(sjpc::kVersion));
  app.require_subcommand(1);

  SharedFlags f;
  std::string input = "-";
  std::string input_b;
  std::size_t cap = sjpc::kDefaultOracleCap;
  std::size_t sample_size = 1000;
  std::optional<std::size_t> mc_sample_size;
  std::size_t trials = 30;
  std::string kind;
  std::uint64_t n = 0;

  auto* estimate = app.add_subcommand("estimate", "estimate g_s in one pass over a record file");
  estimate->add_option("input", input, "record file, or - for stdin")->capture_default_str();
  add_config_flags(estimate, f);
  add_io_flags(estimate, f);

  auto* exact = app.add_subcommand("exact", "brute-force pair counts (quadratic)");
  exact->add_option("input", input, "record file, or - for stdin")->capture_default_str();
  exact->add_option("--d", f.d, "number of fields");
  exact->add_option("--cap", cap, "refuse inputs with more records")->capture_default_str();
  add_io_flags(exact, f);

  auto* sample = app.add_subcommand("sample", "random-sampling baseline estimate");
  sample->add_option("input", input, "record file, or - for stdin")->capture_default_str();
  sample->add_option("--s", f.s, "similarity threshold")->capture_default_str();
  sample->add_option("--d", f.d, "number of fields");
  sample->add_option("--sample-size", sample_size, "reservoir size R")->capture_default_str();
  sample->add_option("--seed", f.seed, "sampling seed")->capture_default_str();
  sample->add_option("--delimiter", f.delimiter, "single-byte field separator (default: tab)");
  sample->add_option("--out", f.out, "write the report here instead of stdout");

  auto* join = app.add_subcommand("join", "estimate the similarity join size of two record files");
  join->add_option("input-a", input, "first record file")->required();
  join->add_option("input-b", input_b, "second record file")->required();
  add_config_flags(join, f);
  add_io_flags(join, f);

  auto* gen = app.add_subcommand("gen", "write a synthetic dataset and its truth sidecar");
  gen->add_option("--kind", kind, "near_uniform_40_60, skewed_20_80, skewed_10_90 or planted_lemma1")->required();
  gen->add_option("--n", n, "number of records")->required();
  gen->add_option("--d", f.d, "number of fields (default 5)");
  gen->add_option("--seed", f.seed, "generator seed")->capture_default_str();
  gen->add_option("--delimiter", f.delimiter, "single-byte field separator (default: tab)");
  gen->add_option("--out", f.out, "record file; truth goes to <out>.truth.json")->required();

  auto* montecarlo = app.add_subcommand("montecarlo", "repeat estimation and report error statistics as CSV");
  montecarlo->add_option("input", input, "record file (omit when using --kind)");
  montecarlo->add_option("--kind", kind, "generate the dataset instead of reading a file");
  montecarlo->add_option("--n", n, "records to generate with --kind");
  montecarlo->add_option("--data-seed", f.seed, "generator seed with --kind");
  montecarlo->add_option("--trials", trials, "number of repetitions")->capture_default_str();
  montecarlo->add_option("--sample-size", mc_sample_size,
                         "random-sampling budget (default: equal memory; 0 disables)");
  montecarlo->add_option("--cap", cap, "oracle cap for file inputs")->capture_default_str();
  std::uint64_t estimator_seed = 1;
  add_config_flags(montecarlo, f);
  montecarlo->remove_option(montecarlo->get_option("--seed"));
  montecarlo->add_option("--seed", estimator_seed, "master seed for the trials")->capture_default_str();
  add_io_flags(montecarlo, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sjpc::exit_code::usage;
  }

  char delimiter = '\t';
  try {
    delimiter = delimiter_of(f.delimiter);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return sjpc::exit_code::usage;
  }

  if (estimate->parsed()) {
    sjpc::EstimateOptions o;
    o.input = input;
    o.config = to_config(f);
    o.d = f.d;
    o.delimiter = delimiter;
    o.threads = f.threads;
    o.out = f.out;
    return sjpc::cmd_estimate(o, std::cout, std::cerr);
  }
  if (exact->parsed()) {
    sjpc::ExactOptions o;
    o.input = input;
    o.d = f.d;
    o.delimiter = delimiter;
    o.threads = f.threads;
    o.cap = cap;
    o.out = f.out;
    return sjpc::cmd_exact(o, std::cout, std::cerr);
  }
  if (sample->parsed()) {
    sjpc::SampleOptions o;
    o.input = input;
    o.d = f.d;
    o.s = f.s;
    o.sample_size = sample_size;
    o.seed = f.seed;
    o.delimiter = delimiter;
    o.out = f.out;
    return sjpc::cmd_sample(o, std::cout, std::cerr);
  }
  if (join->parsed()) {
    sjpc::JoinOptions o;
    o.input_a = input;
    o.input_b = input_b;
    o.config = to_config(f);
    o.d = f.d;
    o.delimiter = delimiter;
    o.threads = f.threads;
    o.out = f.out;
    return sjpc::cmd_join(o, std::cout, std::cerr);
  }
  if (gen->parsed()) {
    sjpc::GenOptions o;
    o.kind = kind;
    o.n = n;
    o.d = f.d.value_or(5);
    o.seed = f.seed;
    o.out = f.out.value_or("");
    o.delimiter = delimiter;
    return sjpc::cmd_gen(o, std::cout, std::cerr);
  }
  sjpc::MonteCarloCommandOptions o;
  if (montecarlo->count("input") > 0) o.input = input;
  if (!kind.empty()) o.kind = kind;
  o.n = n;
  o.d = f.d;
  o.data_seed = f.seed;
  o.config = to_config(f);
  o.config.master_seed = estimator_seed;
  o.trials = trials;
  o.sample_size = mc_sample_size;
  o.delimiter = delimiter;
  o.threads = f.threads;
  o.cap = cap;
  o.out = f.out;
  return sjpc::cmd_montecarlo(o, std::cout, std::cerr);
}
