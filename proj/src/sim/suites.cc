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

#include "prefixcons/suites.h"

#include <algorithm>
#include <numeric>
#include <random>

namespace prefixcons {

std::vector<std::string> catalogue(Protocol p) {
  std::vector<std::string> out = {"none", "silent", "equivocate", "doctored_proof", "delayer", "suspender"};
  if (p == Protocol::kSpc || p == Protocol::kBinary || p == Protocol::kMsc || p == Protocol::kValidated)
    out.push_back("withhold_body");
  if (p == Protocol::kMsc || p == Protocol::kValidated) {
    out.push_back("censor");
    out.push_back("equivocate_proposals");
    out.push_back("equivocate_votes");
  }
  return out;
}

Scenario suite_scenario(const SuiteOptions &opt, uint64_t i) {
  std::mt19937_64 rng(opt.seed * 0x2545F4914F6CDD1DULL + i * 0x9E3779B97F4A7C15ULL + 3);
  Scenario s;
  s.name = std::string("suite-") + protocol_name(opt.protocol) + "-" + std::to_string(i);
  s.protocol = opt.protocol;
  s.n = opt.n;
  s.f = opt.f;
  s.capacity = opt.protocol == Protocol::kBinary ? 1 : opt.capacity;
  s.codec = opt.codec;
  s.slots = opt.slots;
  s.seed = opt.seed + i;
  s.generator = "random";
  s.alphabet = 2 + rng() % 2;
  s.count_bytes = false;
  s.max_time = 20000;
  if (opt.fuzz) {
    s.delay.fuzz = true;
    s.delay.gst = Time(static_cast<int64_t>(rng() % 17));
    s.delay.pre_gst_max = 8;
    s.delay.jitter = rng() % 2;
  }

  auto strategies = opt.strategies.empty() ? catalogue(opt.protocol) : opt.strategies;
  const std::string &strategy = strategies[i % strategies.size()];
  std::vector<uint32_t> order(opt.n);
  std::iota(order.begin(), order.end(), 0u);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<uint32_t> byz(order.begin(), order.begin() + opt.f);
  std::sort(byz.begin(), byz.end());
  uint32_t some_honest = order[opt.f];

  AdversarySpec a;
  a.type = strategy;
  a.parties = byz;
  if (strategy.rfind("equivocate_", 0) == 0) {
    a.type = "equivocate";
    a.split = strategy.substr(11);
  }
  if (strategy == "none") {
    return s;
  } else if (strategy == "censor") {
    a.reveal_to = {some_honest};
  } else if (strategy == "withhold_body") {
    a.reveal_to = {some_honest};
  } else if (strategy == "delayer") {
    a.parties.clear();
    a.link_fraction = 0.25 + 0.25 * static_cast<double>(rng() % 4);
  } else if (strategy == "suspender") {
    // One suspension per round plus f-1 silent parties.
    a.parties.clear();
    if (opt.f > 1) {
      AdversarySpec silent;
      silent.type = "silent";
      silent.parties.assign(byz.begin(), byz.end() - 1);
      s.adversaries.push_back(silent);
    }
  }
  s.adversaries.push_back(a);
  return s;
}

SuiteResult run_suite(const SuiteOptions &opt, bool stop_on_failure) {
  SuiteResult out;
  auto strategies = opt.strategies.empty() ? catalogue(opt.protocol) : opt.strategies;
  for (uint64_t i = 0; i < opt.runs; i++) {
    Scenario s = suite_scenario(opt, i);
    auto report = run_scenario(s);
    out.runs++;
    out.by_strategy[strategies[i % strategies.size()]]++;
    if (!report.completed) out.incomplete++;
    if (report.violations.empty()) continue;
    for (const auto &v : report.violations.items) out.violations[v.substr(0, v.find(':'))]++;
    if (!out.first_failure) {
      out.first_failure = s;
      out.first_violation = report.violations.items.front();
    }
    if (stop_on_failure) break;
  }
  return out;
}

}  // namespace prefixcons
