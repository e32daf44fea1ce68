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

// Adversary catalogue for the simulator. Byzantine behaviour is expressed as
// filters on the honest code's outgoing traffic; nothing here can sign for an
// honest party.

#ifndef PREFIXCONS_ADVERSARY_H
#define PREFIXCONS_ADVERSARY_H

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "prefixcons/sim.h"

namespace prefixcons {

/** PC parameters of the instance a vote belongs to, when known. */
using PcConfigFn = std::function<std::optional<PcConfig>(const InstanceId &)>;

/** Crash from the start: no reactor, no messages. */
class SilentAdversary : public Adversary {
 public:
  explicit SilentAdversary(std::set<PartyId> parties) : parties_(std::move(parties)) {}
  std::string name() const override { return "silent"; }
  std::set<PartyId> silent() const override { return parties_; }

 private:
  std::set<PartyId> parties_;
};

/**
 * Sends a conflicting vote-1 (and slot payload) to odd-indexed receivers.
 * A trailing "0"/"1" element is flipped; otherwise the last element is
 * altered, and an empty vector becomes ["eq"].
 */
class EquivocateAdversary : public Adversary {
 public:
  EquivocateAdversary(std::set<PartyId> parties, PcConfigFn pc_config, bool proposals = true, bool votes = true)
      : parties_(std::move(parties)), pc_config_(std::move(pc_config)), proposals_(proposals), votes_(votes) {}
  std::string name() const override { return "equivocate"; }
  std::set<PartyId> byzantine() const override { return parties_; }
  void on_send(Simulation &sim, PartyId from, PartyId to, MessagePtr &m, bool &drop) override;

  static PrefixVector alter(const PrefixVector &v, uint32_t capacity);

 private:
  std::set<PartyId> parties_;
  PcConfigFn pc_config_;
  bool proposals_, votes_;
  std::map<const void *, std::pair<MessagePtr, MessagePtr>> cache_;  // original kept alive
};

/**
 * Slot proposals of the Byzantine parties reach only `reveal_to`. Each
 * Byzantine vote-1 matches what its receiver saw: parties outside
 * `reveal_to` get H(BOT) in place of the withheld proposal's digest.
 */
class CensorAdversary : public Adversary {
 public:
  CensorAdversary(std::set<PartyId> parties, std::set<PartyId> reveal_to, PcConfigFn pc_config)
      : parties_(std::move(parties)), reveal_to_(std::move(reveal_to)), pc_config_(std::move(pc_config)) {}
  std::string name() const override { return "censor"; }
  std::set<PartyId> byzantine() const override { return parties_; }
  void on_send(Simulation &sim, PartyId from, PartyId to, MessagePtr &m, bool &drop) override;

 private:
  std::set<PartyId> parties_, reveal_to_;
  PcConfigFn pc_config_;
  std::map<std::pair<PartyId, uint64_t>, Value> withheld_;  // (party, slot) -> payload digest
  std::map<const void *, std::pair<MessagePtr, MessagePtr>> cache_;
};

/**
 * Network adversary before GST: messages on chosen links (and, if `kinds` is
 * non-empty, of those kinds only; if `view` is set, of that view only) are
 * held back as long as the model allows.
 */
class DelayerAdversary : public Adversary {
 public:
  struct Options {
    double link_fraction = 1.0;
    std::set<std::string> kinds;
    std::optional<uint64_t> view;
    uint64_t seed = 7;
  };
  explicit DelayerAdversary(Options opt) : opt_(std::move(opt)) {}
  std::string name() const override { return "delayer"; }
  std::optional<Time> on_schedule(Simulation &sim, const Envelope &e) override;

 private:
  bool chosen(PartyId from, PartyId to) const;
  Options opt_;
};

/** Suspends one party per round, cycling through `targets` from round `start` on. */
class SuspenderAdversary : public Adversary {
 public:
  SuspenderAdversary(std::vector<PartyId> targets, uint64_t start = 0) : targets_(std::move(targets)), start_(start) {}
  std::string name() const override { return "suspender"; }
  std::optional<PartyId> on_round(uint64_t k) override;

 private:
  std::vector<PartyId> targets_;
  uint64_t start_;
};

/**
 * Reveals Byzantine proposal bodies (new-view objects, slot payloads) to a
 * single party and never answers fetch requests.
 */
class WithholdBodyAdversary : public Adversary {
 public:
  WithholdBodyAdversary(std::set<PartyId> parties, PartyId reveal_to)
      : parties_(std::move(parties)), reveal_to_(reveal_to) {}
  std::string name() const override { return "withhold_body"; }
  std::set<PartyId> byzantine() const override { return parties_; }
  void on_send(Simulation &sim, PartyId from, PartyId to, MessagePtr &m, bool &drop) override;

 private:
  std::set<PartyId> parties_;
  PartyId reveal_to_;
};

/** A (value, proof) pair offered against a verification predicate. */
struct DoctoredCandidate {
  PcConfig cfg;
  PrefixVector value;
  QcRef proof;
  std::string origin;
};

/**
 * Forwards doctored proofs: later-round votes re-signed over altered values
 * with the original justification, and new-commit / empty-view messages
 * whose values no longer match their proofs. After the run it also offers
 * altered (value, proof) pairs built from the Byzantine parties' own PC
 * outputs; see candidates().
 */
class DoctoredProofAdversary : public Adversary {
 public:
  DoctoredProofAdversary(std::set<PartyId> parties, PcConfigFn pc_config)
      : parties_(std::move(parties)), pc_config_(std::move(pc_config)) {}
  std::string name() const override { return "doctored_proof"; }
  std::set<PartyId> byzantine() const override { return parties_; }
  void on_send(Simulation &sim, PartyId from, PartyId to, MessagePtr &m, bool &drop) override;
  void on_finish(Simulation &sim) override;

  const std::vector<DoctoredCandidate> &candidates() const { return candidates_; }
  uint64_t doctored_sent() const { return sent_; }

 private:
  std::set<PartyId> parties_;
  PcConfigFn pc_config_;
  std::map<const void *, std::pair<MessagePtr, MessagePtr>> cache_;  // original kept alive
  std::vector<DoctoredCandidate> candidates_;
  uint64_t sent_ = 0;
};

/** Copy of a plain QC with one signature byte flipped; nullptr for other QC kinds. */
QcRef corrupt_signature(const QcRef &qc);

}  // namespace prefixcons

#endif
