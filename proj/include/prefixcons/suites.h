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

// Seeded property suites: many fuzzed runs across the adversary catalogue,
// tallied per invariant.

#ifndef PREFIXCONS_SUITES_H
#define PREFIXCONS_SUITES_H

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prefixcons/scenario.h"

namespace prefixcons {

struct SuiteOptions {
  Protocol protocol = Protocol::kPc3;
  uint32_t n = 4;
  uint32_t f = 1;
  uint32_t capacity = 4;
  uint64_t slots = 3;  // msc
  Codec codec = Codec::kPlain;
  uint64_t runs = 100;
  uint64_t seed = 1;
  /** Adversary strategies cycled across runs; the full catalogue for the protocol when empty. */
  std::vector<std::string> strategies;
  bool fuzz = true;  // random pre-GST delays and a random GST
};

/** Strategy names applicable to a protocol ("none", "silent", "equivocate", ...). */
std::vector<std::string> catalogue(Protocol p);

/** The i-th scenario of a suite; deterministic in (options, i). */
Scenario suite_scenario(const SuiteOptions &opt, uint64_t i);

struct SuiteResult {
  uint64_t runs = 0;
  uint64_t incomplete = 0;
  std::map<std::string, uint64_t> violations;   // by property
  std::map<std::string, uint64_t> by_strategy;  // runs per strategy
  std::optional<Scenario> first_failure;
  std::string first_violation;

  bool ok() const { return violations.empty(); }
};

/** Runs the suite; stops at the first violating run when stop_on_failure. */
SuiteResult run_suite(const SuiteOptions &opt, bool stop_on_failure = false);

}  // namespace prefixcons

#endif
