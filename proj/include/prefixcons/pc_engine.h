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

#ifndef PREFIXCONS_PC_ENGINE_H
#define PREFIXCONS_PC_ENGINE_H

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prefixcons/pc_types.h"
#include "prefixcons/pc_verify.h"

namespace prefixcons {

/** Where a PC engine sends its votes and outputs. Calls must not re-enter the engine. */
class PcSink {
 public:
  virtual ~PcSink() = default;
  virtual void pc_broadcast(const PcConfig &cfg, const VotePtr &vote) = 0;
  virtual void pc_output(const PcConfig &cfg, PcOutputKind kind, const VerifiableValue &out) = 0;
};

/**
 * One party's state machine for a single Prefix Consensus instance. Each
 * round, the first n-f verified votes from distinct senders form the QC; the
 * engine then broadcasts its next vote or emits outputs.
 */
class PcEngine {
 public:
  PcEngine(PcConfig cfg, Signer signer, QcVerifier &verifier, PcSink &sink);

  const PcConfig &config() const { return cfg_; }

  /** Starts the instance with the local input. Throws PreconditionError on a second call or bad input. */
  void input(PrefixVector v);
  bool has_input() const { return has_input_; }

  /** Verifies and processes a vote; returns false when it was dropped. */
  bool receive(PartyId from, const VotePtr &vote);

  const PcOutputs &outputs() const { return outputs_; }
  bool done() const;

  bool faulted() const { return !fault_.empty(); }
  const std::string &fault() const { return fault_; }

  /** Value(s) certified by this party's own round-r QC, once formed. */
  const std::optional<Certified> &certified(uint8_t round) const { return certified_.at(round); }
  const std::optional<QcRef> &qc(uint8_t round) const { return qcs_.at(round); }

  size_t dropped() const { return dropped_; }
  size_t broadcasts() const { return broadcasts_; }

 private:
  static constexpr size_t kRounds = 5;

  void broadcast(uint8_t round, PrefixVector value, std::vector<QcRef> justify);
  void form_quorum(uint8_t round);
  void act_on_quorum(uint8_t round);
  QcRef build_qc(uint8_t round) const;
  void emit(PcOutputKind kind, const PrefixVector &value, const QcRef &proof);

  PcConfig cfg_;
  Signer signer_;
  QcVerifier &verifier_;
  PcSink &sink_;

  bool has_input_ = false;
  std::array<std::vector<VotePtr>, kRounds> votes_;
  std::array<std::set<PartyId>, kRounds> voters_;
  std::array<std::optional<QcRef>, kRounds> qcs_;
  std::array<std::optional<Certified>, kRounds> certified_;
  bool qc2_deferred_ = false;
  PcOutputs outputs_;
  std::string fault_;
  size_t dropped_ = 0;
  size_t broadcasts_ = 0;
};

}  // namespace prefixcons

#endif
