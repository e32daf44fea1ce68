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

#ifndef PREFIXCONS_SPC_H
#define PREFIXCONS_SPC_H

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "prefixcons/pc_engine.h"
#include "prefixcons/reactor.h"

namespace prefixcons {

using Rank = std::vector<PartyId>;

/** Left rotation by one: (p1, ..., pn) -> (p2, ..., pn, p1). */
Rank shift(std::span<const PartyId> r);
Rank identity_rank(uint32_t n);
/** Ranking used in view w >= 2: the initial ranking for view 2, one more shift per later view. */
Rank view_rank(const Rank &initial, uint64_t view);

struct SpcConfig {
  uint32_t n = 4;
  uint32_t f = 1;
  uint32_t capacity = 4;  // bound on view-1 input length
  Codec codec = Codec::kPlain;
  InstanceId instance;  // protocol and slot; view and lane are set per VPC
  Time delta = 2;       // view timers run for 2*delta
  Rank rank;            // initial ranking; identity when empty

  void validate() const;
  /** Configuration of the Verifiable PC instance of view w. */
  PcConfig vpc(uint64_t view) const;
};

/** Ground-truth record of one Commit(w, v) whose parent was resolved. */
struct CommitRecord {
  uint64_t view = 0;
  PrefixVector value;
  bool parentful = false;
};

/**
 * Leaderless Strong Prefix Consensus for one party. Views run Verifiable PC
 * on ranked digest vectors of proposal objects; certificates chain each
 * committed non-empty vector back to a view-1 high value, which becomes the
 * agreed high output.
 */
class SpcEngine : private PcSink {
 public:
  using OutputFn = std::function<void(OutputKind, const PrefixVector &)>;

  SpcEngine(SpcConfig cfg, Signer signer, QcVerifier &verifier, Context &ctx, OutputFn out);

  const SpcConfig &config() const { return cfg_; }

  /** Runs view-1 VPC with the local input. */
  void input(PrefixVector v);

  /** Accepts any message of this instance (votes of any view, SPC messages, proposal fetches). */
  void on_message(PartyId from, const MessagePtr &m);
  void on_timer(const TimerKey &key);

  bool done() const { return high_.has_value(); }
  const std::optional<PrefixVector> &low() const { return low_; }
  const std::optional<PrefixVector> &high() const { return high_; }
  uint64_t view() const { return view_; }

  /** Tri-state certificate check; kPending means a preimage is being fetched. */
  enum class Check { kValid, kInvalid, kPending };
  Check valid_cert(uint64_t view, const Certificate &cert, Digest *missing = nullptr);

  struct ParentLookup {
    bool ready = true;
    uint64_t view = 0;
    PrefixVector value;
    Digest missing;
  };
  /** Parent of a digest vector; not ready when the first real entry has no known preimage. */
  ParentLookup parent(const PrefixVector &v) const;

  /** Adds a proposal object to the preimage store and resumes waiting work. */
  void learn(const ProposalPtr &p);

  const std::vector<CommitRecord> &commits() const { return commits_; }
  /** (prev_view, parent_view) of every indirect certificate this party accepted or built. */
  const std::vector<std::pair<uint64_t, uint64_t>> &indirect_certs() const { return indirect_; }
  /** Verifiable lows this party's VPC instances produced, by view. */
  const std::map<uint64_t, PrefixVector> &vpc_lows() const { return vpc_lows_; }
  std::vector<std::string> faults() const;
  const PcEngine *vpc_engine(uint64_t view) const;

 private:
  void pc_broadcast(const PcConfig &cfg, const VotePtr &vote) override;
  void pc_output(const PcConfig &cfg, PcOutputKind kind, const VerifiableValue &out) override;

  PcEngine &vpc(uint64_t view);
  bool f_high(uint64_t view, const PrefixVector &v, const QcRef &proof);
  bool f_low(uint64_t view, const PrefixVector &v, const QcRef &proof);
  MessagePtr wrap(Body body) const;
  void defer(const Digest &d, std::function<void()> retry);

  void on_new_view(PartyId from, const MessagePtr &m);
  void on_empty_view(PartyId from, const EmptyView &e);
  void on_new_commit(const MessagePtr &m);
  void on_vpc_high(uint64_t view, PrefixVector v, QcRef proof);
  void broadcast_new_view(uint64_t view, CertPtr cert);
  void run_vpc(uint64_t view);
  void commit(uint64_t view, const PrefixVector &v);
  void emit(OutputKind kind, const PrefixVector &v);

  SpcConfig cfg_;
  Signer signer_;
  QcVerifier &verifier_;
  Context &ctx_;
  OutputFn out_;

  uint64_t view_ = 1;
  std::map<uint64_t, std::unique_ptr<PcEngine>> vpcs_;
  std::map<uint64_t, std::vector<ProposalPtr>> buffers_;
  std::map<uint64_t, std::map<PartyId, EmptyView>> skips_;
  struct Triple {
    uint64_t view = 0;
    PrefixVector value;
    QcRef proof;
  } best_;

  std::set<uint64_t> ran_vpc_, new_view_sent_, empty_view_sent_;
  std::set<std::pair<uint64_t, PrefixVector>> commit_relayed_;
  std::map<Digest, ProposalPtr> store_;
  std::map<Digest, std::vector<std::function<void()>>> waiting_;
  std::set<Digest> requested_;

  std::optional<PrefixVector> low_, high_;
  std::vector<CommitRecord> commits_;
  std::vector<std::pair<uint64_t, uint64_t>> indirect_;
  std::map<uint64_t, PrefixVector> vpc_lows_;
};

/** Standalone Strong PC party. */
class SpcReactor : public Reactor {
 public:
  SpcReactor(SpcConfig cfg, Signer signer, const SignatureScheme &scheme, Context &ctx,
             std::optional<PrefixVector> input);

  void start() override;
  void on_message(PartyId from, const MessagePtr &m) override;
  void on_timer(const TimerKey &key) override { engine_.on_timer(key); }
  bool done() const override { return engine_.done(); }

  SpcEngine &engine() { return engine_; }
  const SpcEngine &engine() const { return engine_; }

 private:
  QcVerifier verifier_;
  std::optional<PrefixVector> input_;
  SpcEngine engine_;
};

}  // namespace prefixcons

#endif
