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

#ifndef PREFIXCONS_MSC_H
#define PREFIXCONS_MSC_H

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prefixcons/spc.h"

namespace prefixcons {

/**
 * Next slot's ranking: unchanged when the previous high covered all n
 * positions, otherwise the first excluded party (position |v_high|+1) moves
 * to the end. Throws PreconditionError when |v_high| > n.
 */
Rank update_rank(const Rank &r, const PrefixVector &v_high);

struct MscConfig {
  uint32_t n = 4;
  uint32_t f = 1;
  Codec codec = Codec::kPlain;
  uint8_t protocol = static_cast<uint8_t>(ProtocolId::kMsc);
  Time delta = 2;
  Rank rank;               // slot-1 ranking; identity when empty
  uint64_t max_slots = 1;  // this party stops proposing after this slot
  /** External validity of payloads; invalid proposals are discarded at receipt. */
  std::function<bool(const std::string &)> valid;

  void validate() const;
};

/** One committed payload as exported in the commit log. */
struct CommitEntry {
  uint64_t slot = 0;
  uint64_t index = 0;  // position in the slot's decided vector
  PartyId origin;      // party ranked at that position
  Digest digest;
  std::string payload;
};

std::string commit_entry_json(const CommitEntry &e);

/** Multi-slot Consensus party: one Strong PC instance per slot, strictly sequential. */
class MscReactor : public Reactor {
 public:
  using PayloadFn = std::function<std::string(uint64_t slot)>;

  MscReactor(MscConfig cfg, Signer signer, const SignatureScheme &scheme, Context &ctx, PayloadFn payload);

  void start() override;
  void on_message(PartyId from, const MessagePtr &m) override;
  void on_timer(const TimerKey &key) override;
  bool done() const override { return commit_slot_ > cfg_.max_slots; }

  uint64_t current_slot() const { return current_; }
  /** Ranking used for slot s, once this party started it. */
  const Rank *rank(uint64_t s) const;
  const std::optional<PrefixVector> *high(uint64_t s) const;
  const std::vector<CommitEntry> &log() const { return log_; }
  const SpcEngine *spc(uint64_t s) const;
  std::vector<std::string> faults() const;

 private:
  struct Slot {
    Rank rank;
    std::vector<std::optional<std::string>> buffer;
    bool started = false;
    bool ran = false;
    std::unique_ptr<SpcEngine> spc;
    std::optional<PrefixVector> low, high;
    size_t cursor = 0;
  };

  Slot &slot(uint64_t s);
  MessagePtr wrap(uint64_t s, Body body) const;
  void new_slot(uint64_t s);
  void on_proposal(PartyId from, uint64_t s, const std::string &payload);
  void run_spc(uint64_t s);
  void on_spc_output(uint64_t s, OutputKind kind, const PrefixVector &v);
  void drain_commits();

  MscConfig cfg_;
  Signer signer_;
  QcVerifier verifier_;
  Context &ctx_;
  PayloadFn payload_;

  uint64_t current_ = 0;
  uint64_t commit_slot_ = 1;
  std::map<uint64_t, Slot> slots_;
  std::map<uint64_t, std::vector<std::pair<PartyId, MessagePtr>>> early_;
  std::map<Digest, std::string> payloads_;
  std::set<Digest> committed_, requested_;
  std::vector<CommitEntry> log_;
};

}  // namespace prefixcons

#endif
