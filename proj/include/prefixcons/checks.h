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

// Invariant checkers over simulator ground truth. Each check appends
// "<property>: <detail>" strings; an empty list means the run is clean.

#ifndef PREFIXCONS_CHECKS_H
#define PREFIXCONS_CHECKS_H

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prefixcons/adversary.h"
#include "prefixcons/derived.h"
#include "prefixcons/msc.h"
#include "prefixcons/spc.h"

namespace prefixcons {

struct Violations {
  std::vector<std::string> items;

  void add(const std::string &property, const std::string &detail) { items.push_back(property + ": " + detail); }
  bool empty() const { return items.empty(); }
  /** Property name of the first violation, or "" when clean. */
  std::string first_property() const;
};

/** What one honest party of a PC-family run ended with. */
struct PcObservation {
  PartyId party;
  PrefixVector input;
  std::optional<PrefixVector> opt, low, high;
  std::optional<PrefixVector> qc1_x;  // value certified by the party's own QC1
};

PcObservation observe(PartyId p, const PrefixVector &input, const PcEngine &e);

/** Every index of `out` agrees with some honest input at that index. */
bool available(const PrefixVector &out, std::span<const PrefixVector> honest_inputs);

/**
 * Upper Bound, Validity, Consistency (not for the optimistic variant), Availability, Termination, and for the
 * optimistic and fast variants their extra properties. `byzantine_free`
 * enables the optimistic validity check.
 */
void check_pc(const PcConfig &cfg, std::span<const PcObservation> honest, bool byzantine_free, bool completed,
              Violations &out);

/** Doctored (value, proof) pairs accepted by a predicate must still satisfy Upper Bound and Validity. */
void check_candidates(const SignatureScheme &scheme, std::span<const DoctoredCandidate> candidates,
                      const std::map<InstanceId, std::vector<PcObservation>> &honest, Violations &out);

struct SpcObservation {
  PartyId party;
  PrefixVector input;
  const SpcEngine *engine = nullptr;
};

/** Agreement, Upper Bound, Validity, Availability, skip conservatism, termination. */
void check_spc(std::span<const SpcObservation> honest, bool completed, Violations &out);

struct MscObservation {
  PartyId party;
  const MscReactor *reactor = nullptr;
};

struct CensorshipAudit {
  uint64_t post_gst_slots = 0;
  std::vector<uint64_t> censored;
  struct Demotion {
    uint64_t slot = 0;
    PartyId party;
    bool byzantine = false;
    bool post_gst = false;
  };
  std::vector<Demotion> demotions;
  /** Post-GST slots after the last demotion that missed an honest payload. */
  std::vector<uint64_t> censored_after_last_demotion;
};

/**
 * Audits committed slots at a reference honest party. A slot counts as
 * post-GST when every honest party started it at or after GST.
 */
CensorshipAudit audit_censorship(std::span<const MscObservation> honest, const Metrics &metrics,
                                 const std::function<std::string(PartyId, uint64_t)> &payload,
                                 const std::set<PartyId> &byzantine, const Time &gst, uint64_t slots);

/** Per-slot Agreement, ranking agreement, commit-before-advance, termination, censorship bound. */
void check_msc(std::span<const MscObservation> honest, const CensorshipAudit &audit, uint32_t f, uint64_t slots,
               bool completed, Violations &out);

/** Graded Agreement and Validity over single-lane outputs; honest_inputs may hold empty vectors. */
void check_graded(std::span<const GradedOutput> outputs, std::span<const PrefixVector> honest_inputs, Violations &out);

}  // namespace prefixcons

#endif
