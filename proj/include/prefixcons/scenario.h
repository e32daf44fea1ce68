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

#ifndef PREFIXCONS_SCENARIO_H
#define PREFIXCONS_SCENARIO_H

#include <functional>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "prefixcons/checks.h"
#include "prefixcons/sim.h"

namespace prefixcons {

enum class Protocol : uint8_t { kPc3, kPcOpt, kPc5f1, kSpc, kMsc, kGraded, kBinary, kValidated };

const char *protocol_name(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view name);

/** Schema or resilience violation; what() starts with the offending field path. */
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AdversarySpec {
  std::string type;  // silent | equivocate | censor | delayer | suspender | withhold_body | doctored_proof
  std::vector<uint32_t> parties;
  std::vector<uint32_t> reveal_to;  // censor, withhold_body (first entry)
  double link_fraction = 1.0;       // delayer
  std::vector<std::string> kinds;   // delayer
  std::optional<uint64_t> view;     // delayer
  std::vector<uint32_t> targets;    // suspender; every honest party when empty
  uint64_t start_round = 0;         // suspender
  std::string split = "both";       // equivocate: proposals | votes | both
};

struct Scenario {
  static constexpr int kVersion = 1;

  std::string name = "unnamed";
  Protocol protocol = Protocol::kPc3;
  uint32_t n = 4;
  uint32_t f = 1;
  uint32_t capacity = 4;  // L; lane count for graded
  Codec codec = Codec::kPlain;
  std::string crypto = "mac";
  DelayPolicy delay;
  uint64_t seed = 1;
  Time max_time = 100000;
  uint64_t slots = 1;  // msc

  /** Per-party inputs; generated from `generator` and the seed when empty. */
  std::vector<PrefixVector> inputs;
  std::string generator = "same";  // same | random
  uint32_t alphabet = 3;
  std::vector<std::string> payloads;  // validated: per-party payloads
  std::string validity;               // validated: required payload prefix
  Rank rank;
  std::vector<AdversarySpec> adversaries;

  bool checks = true;
  bool keep_transcript = false;
  bool count_bytes = true;

  /** Throws ScenarioError on resilience or shape violations. */
  void validate() const;
  /** Fills in generated inputs; idempotent. */
  void materialize();
  /** Slot payload of party p (msc); validated payload of p for slot 1. */
  std::string payload_of(PartyId p, uint64_t slot) const;
  PcConfig pc_config() const;
};

/** Parses the versioned JSON schema; throws ScenarioError naming the field path. */
Scenario scenario_from_json(const nlohmann::json &j);
nlohmann::json scenario_to_json(const Scenario &s);

struct RunReport {
  bool completed = false;
  Metrics metrics;
  Violations violations;
  std::optional<CensorshipAudit> audit;
  std::string transcript_hash;
  std::vector<std::string> transcript;
  std::set<PartyId> byzantine;
  nlohmann::json summary;
};

/** Builds the adversaries, runs the simulation and evaluates the enabled checks. */
RunReport run_scenario(Scenario s, const std::function<void(const Simulation &)> &inspect = {});

}  // namespace prefixcons

#endif
