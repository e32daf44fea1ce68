/**
 * Copyright 2026 The prefixcons Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end. Exit codes: 0 success, 2 bad input (schema or
// resilience), 3 invariant violation.

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "prefixcons/codec.h"
#include "prefixcons/scenario.h"
#include "prefixcons/suites.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace prefixcons;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitViolation = 3;

struct Common {
  std::string scenario;
  std::optional<uint64_t> seed;
  std::string codec;
  std::string out;
  bool quiet = false;
};

std::string out_dir(const Common &c) {
  if (!c.out.empty()) return c.out;
  if (const char *env = std::getenv("PREFIXCONS_OUT")) return env;
  return "prefixcons-out";
}

Scenario load(const Common &c) {
  std::ifstream in(c.scenario);
  if (!in) throw ScenarioError("$: cannot read " + c.scenario);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error &e) {
    throw ScenarioError(std::string("$: not valid JSON (") + e.what() + ")");
  }
  if (c.seed) j["seed"] = *c.seed;
  if (!c.codec.empty()) j["codec"] = c.codec;
  return scenario_from_json(j);
}

void write_file(const fs::path &p, const std::string &text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

int cmd_run(const Common &c, bool no_transcript) {
  Scenario s = load(c);
  s.keep_transcript = !no_transcript;
  auto report = run_scenario(s);
  fs::path dir = out_dir(c);
  fs::path metrics = dir / (s.name + ".metrics.json");
  fs::path transcript = dir / (s.name + ".transcript.jsonl");
  write_file(metrics, report.summary.dump(2) + "\n");
  if (!no_transcript) {
    std::string text;
    for (const auto &line : report.transcript) text += line + "\n";
    write_file(transcript, text);
  }
  if (!c.quiet) std::cout << report.summary.dump(2) << "\n";
  if (!report.violations.empty()) {
    std::cerr << "invariant violated: " << report.violations.first_property() << "\n  "
              << report.violations.items.front() << "\n  transcript: " << transcript.string() << "\n";
    return kExitViolation;
  }
  if (!report.completed) {
    std::cerr << "run did not complete before max_time\n  transcript: " << transcript.string() << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

/** Least-squares slope of log(y) against log(x). */
double fit_exponent(const std::vector<double> &x, const std::vector<double> &y) {
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); i++) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= x.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < x.size(); i++) {
    num += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    den += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return num / den;
}

int cmd_sweep(const Common &c, const std::vector<uint32_t> &ns, bool l_equals_n) {
  Scenario tmpl = load(c);
  if (ns.size() < 2) throw ScenarioError("--n: need at least two sizes");
  std::vector<double> xs, msgs, bytes;
  json rows = json::array();
  if (!c.quiet) std::cout << "n\tf\tL\tmessages\tbytes\tend_time\n";
  for (uint32_t n : ns) {
    Scenario s = tmpl;
    s.n = n;
    s.f = s.protocol == Protocol::kPc5f1 ? (n - 1) / 5 : (n - 1) / 3;
    if (l_equals_n) s.capacity = n;
    s.inputs.clear();
    s.rank.clear();
    s.adversaries.clear();
    s.keep_transcript = false;
    auto r = run_scenario(s);
    if (!r.violations.empty()) {
      std::cerr << "invariant violated at n=" << n << ": " << r.violations.items.front() << "\n";
      return kExitViolation;
    }
    xs.push_back(n);
    msgs.push_back(static_cast<double>(r.metrics.messages));
    bytes.push_back(static_cast<double>(r.metrics.bytes));
    rows.push_back({{"n", n},
                    {"f", s.f},
                    {"L", s.capacity},
                    {"messages", r.metrics.messages},
                    {"bytes", r.metrics.bytes},
                    {"end_time", time_to_string(r.metrics.end_time)}});
    if (!c.quiet)
      std::cout << n << "\t" << s.f << "\t" << s.capacity << "\t" << r.metrics.messages << "\t" << r.metrics.bytes
                << "\t" << time_to_string(r.metrics.end_time) << "\n";
  }
  json result{{"scenario", tmpl.name},
              {"codec", codec_name(tmpl.codec)},
              {"rows", rows},
              {"message_exponent", fit_exponent(xs, msgs)},
              {"byte_exponent", fit_exponent(xs, bytes)}};
  write_file(fs::path(out_dir(c)) / (tmpl.name + ".sweep.json"), result.dump(2) + "\n");
  if (!c.quiet)
    std::cout << "message exponent " << result["message_exponent"].get<double>() << "\nbyte exponent "
              << result["byte_exponent"].get<double>() << "\n";
  return kExitOk;
}

/** Invariant names each suite reports on. */
const std::map<std::string, std::vector<std::string>> kSuites = {
    {"upperbound", {"upper-bound"}},
    {"validity", {"validity"}},
    {"consistency", {"consistency"}},
    {"availability", {"availability"}},
    {"agreement", {"agreement", "slot-agreement", "binary-agreement", "validated-agreement", "graded-agreement"}},
    {"verifiability", {"verifiability"}},
    {"censorship", {"censorship"}},
    {"termination", {"termination"}},
    {"all", {}},
};

int cmd_check(const Common &c, const std::string &suite, const std::string &protocol, uint32_t n,
              std::optional<uint32_t> f, uint64_t runs, uint64_t slots, const std::string &strategy) {
  auto it = kSuites.find(suite);
  if (it == kSuites.end()) throw ScenarioError("suite: unknown suite \"" + suite + "\"");
  SuiteOptions opt;
  auto proto = parse_protocol(protocol);
  if (!proto) throw ScenarioError("--protocol: unknown protocol \"" + protocol + "\"");
  opt.protocol = *proto;
  if (suite == "censorship") opt.protocol = Protocol::kMsc;
  opt.f = f.value_or(opt.protocol == Protocol::kPc5f1 ? (n - 1) / 5 : (n - 1) / 3);
  opt.n = n;
  if (suite == "censorship" && f && n < 3 * *f + 1) opt.n = 3 * *f + 1;
  opt.runs = runs;
  opt.slots = slots;
  opt.seed = c.seed.value_or(1);
  if (!c.codec.empty()) opt.codec = c.codec == "compact" ? Codec::kCompact : Codec::kPlain;
  if (!strategy.empty()) opt.strategies = {strategy};
  if (suite == "censorship") {
    opt.fuzz = false;
    if (strategy.empty()) opt.strategies = {"censor", "equivocate_proposals", "equivocate_votes"};
  }
  Scenario probe = suite_scenario(opt, 0);
  probe.validate();

  auto result = run_suite(opt, false);
  const auto &names = it->second;
  bool failed = false;
  std::string failing;
  auto report = [&](const std::string &name, uint64_t count) {
    if (!c.quiet) std::cout << (count ? "FAIL " : "pass ") << name << " (" << count << " violations)\n";
    if (count && !failed) {
      failed = true;
      failing = name;
    }
  };
  if (names.empty()) {
    for (const auto &[name, count] : result.violations) report(name, count);
  } else {
    for (const auto &name : names) {
      auto v = result.violations.find(name);
      report(name, v == result.violations.end() ? 0 : v->second);
    }
  }
  if (!c.quiet) {
    std::cout << result.runs << " runs of " << protocol_name(opt.protocol) << " n=" << opt.n << " f=" << opt.f << " (";
    bool first = true;
    for (const auto &[s, k] : result.by_strategy) {
      std::cout << (first ? "" : ", ") << s << " " << k;
      first = false;
    }
    std::cout << ")\n";
  }
  if (failed) {
    std::cerr << "invariant violated: " << failing << "\n  " << result.first_violation
              << "\n  reproducer seed: " << result.first_failure->seed
              << "\n  scenario: " << scenario_to_json(*result.first_failure).dump() << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

std::string unhex(std::string hex) {
  std::string clean;
  for (char ch : hex)
    if (!std::isspace(static_cast<unsigned char>(ch))) clean.push_back(ch);
  if (clean.size() % 2) throw ScenarioError("hex: odd number of digits");
  std::string out;
  for (size_t i = 0; i < clean.size(); i += 2) {
    int hi = std::stoi(clean.substr(i, 1), nullptr, 16);
    int lo = std::stoi(clean.substr(i + 1, 1), nullptr, 16);
    out.push_back(static_cast<char>(hi * 16 + lo));
  }
  return out;
}

int cmd_decode(const std::string &hex, const std::string &file) {
  std::string bytes;
  if (!file.empty()) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ScenarioError("--file: cannot read " + file);
    std::stringstream ss;
    ss << in.rdbuf();
    bytes = ss.str();
  } else {
    bytes = unhex(hex);
  }
  try {
    auto m = decode_message(bytes);
    std::cout << describe_message(*m);
  } catch (const DecodeError &e) {
    std::cerr << "decode error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"prefixcons: Prefix Consensus protocols on a deterministic network simulator"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App *sub, bool needs_scenario) {
    auto *opt = sub->add_option("--scenario", common.scenario, "Scenario file (JSON)");
    if (needs_scenario) opt->required();
    sub->add_option("--seed", common.seed, "Override the scenario seed");
    sub->add_option("--codec", common.codec, "Override the codec")->check(CLI::IsMember({"plain", "compact"}));
    sub->add_option("--out", common.out, "Output directory (default $PREFIXCONS_OUT or ./prefixcons-out)");
    sub->add_flag("--quiet", common.quiet, "Only report failures");
  };

  auto *run = app.add_subcommand("run", "Run one scenario and write metrics and transcript");
  add_common(run, true);
  bool no_transcript = false;
  run->add_flag("--no-transcript", no_transcript, "Skip the transcript file");

  auto *sweep = app.add_subcommand("sweep", "Run a scenario template over several n and fit growth exponents");
  add_common(sweep, true);
  std::vector<uint32_t> ns{4, 7, 10};
  bool l_equals_n = false;
  sweep->add_option("--n", ns, "Party counts")->delimiter(',');
  sweep->add_flag("--L-equals-n", l_equals_n, "Set L = n for every run");

  auto *check = app.add_subcommand("check", "Run a seeded property suite");
  add_common(check, false);
  std::string suite, protocol = "pc3", strategy;
  uint32_t n = 4;
  std::optional<uint32_t> f;
  uint64_t runs = 200, slots = 3;
  check
      ->add_option("suite", suite,
                   "upperbound | validity | consistency | availability | agreement | "
                   "verifiability | censorship | termination | all")
      ->required();
  check->add_option("--protocol", protocol, "Protocol under test");
  check->add_option("--n", n, "Number of parties");
  check->add_option("--f", f, "Byzantine bound (default: largest allowed)");
  check->add_option("--runs", runs, "Number of seeded runs");
  check->add_option("--slots", slots, "Slots per msc run");
  check->add_option("--strategy", strategy, "Restrict to one adversary strategy");

  auto *decode = app.add_subcommand("decode", "Describe an encoded message");
  std::string hex, file;
  decode->add_option("hex", hex, "Message bytes as hex");
  decode->add_option("--file", file, "Read raw message bytes from a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  try {
    if (*run) return cmd_run(common, no_transcript);
    if (*sweep) return cmd_sweep(common, ns, l_equals_n);
    if (*check) {
      if (suite == "censorship" && !check->count("--slots")) slots = 100;
      if (suite == "censorship" && !check->count("--runs")) runs = 3;
      return cmd_check(common, suite, protocol, n, f, runs, slots, strategy);
    }
    if (*decode) return cmd_decode(hex, file);
  } catch (const ScenarioError &e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument &e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
