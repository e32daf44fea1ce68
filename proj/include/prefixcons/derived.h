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

#ifndef PREFIXCONS_DERIVED_H
#define PREFIXCONS_DERIVED_H

#include <optional>
#include <span>
#include <utility>

#include "prefixcons/msc.h"
#include "prefixcons/pc_engine.h"
#include "prefixcons/reactor.h"
#include "prefixcons/spc.h"

namespace prefixcons {

/** Graded consensus result; value is absent exactly when grade is 0. */
struct GradedOutput {
  std::optional<Value> value;
  int grade = 0;

  friend bool operator==(const GradedOutput &, const GradedOutput &) = default;
};

/** Maps a length-at-most-1 Consistent PC output to a graded output. */
GradedOutput graded_from_pc(const PrefixVector &low, const PrefixVector &high);

/** low: longest prefix graded 2 everywhere; high: longest prefix graded at least 1. */
std::pair<PrefixVector, PrefixVector> pc_from_graded(std::span<const GradedOutput> grades);

/**
 * `lanes` parallel single-element three-round PC instances, one per input
 * index, read back as graded outputs. With one lane this is graded
 * consensus; with L lanes the graded results reassemble a PC output.
 */
class GradedReactor : public Reactor, private PcSink {
 public:
  GradedReactor(uint32_t n, uint32_t f, uint32_t lanes, Signer signer, const SignatureScheme &scheme, Context &ctx,
                PrefixVector input, uint8_t protocol = static_cast<uint8_t>(ProtocolId::kGraded));

  void start() override;
  void on_message(PartyId from, const MessagePtr &m) override;
  void on_timer(const TimerKey &) override {}
  bool done() const override;

  const std::vector<std::optional<GradedOutput>> &graded() const { return graded_; }
  /** Reassembled (low, high), once every lane finished. */
  const std::optional<std::pair<PrefixVector, PrefixVector>> &result() const { return result_; }
  const PcEngine &lane(size_t k) const { return *lanes_.at(k); }

 private:
  void pc_broadcast(const PcConfig &cfg, const VotePtr &vote) override;
  void pc_output(const PcConfig &cfg, PcOutputKind kind, const VerifiableValue &out) override;

  QcVerifier verifier_;
  Context &ctx_;
  uint8_t protocol_;
  PrefixVector input_;
  std::vector<std::unique_ptr<PcEngine>> lanes_;
  std::vector<std::optional<GradedOutput>> graded_;
  std::optional<std::pair<PrefixVector, PrefixVector>> result_;
};

/** Binary consensus: Strong PC on the one-element vector [bit]. An empty high decides 0. */
class BinaryReactor : public Reactor {
 public:
  BinaryReactor(SpcConfig cfg, Signer signer, const SignatureScheme &scheme, Context &ctx, bool bit);

  void start() override { engine_.input(PrefixVector{Value(bit_ ? "1" : "0")}); }
  void on_message(PartyId from, const MessagePtr &m) override;
  void on_timer(const TimerKey &key) override { engine_.on_timer(key); }
  bool done() const override { return decision_.has_value(); }

  const std::optional<bool> &decision() const { return decision_; }
  const SpcEngine &engine() const { return engine_; }

 private:
  QcVerifier verifier_;
  Context &ctx_;
  bool bit_;
  std::optional<bool> decision_;
  SpcEngine engine_;
};

/**
 * Validated consensus: one Multi-slot round with the validity predicate
 * applied at receipt; decides the first validated entry of the decided
 * high, or reports undecided when there is none.
 */
class ValidatedReactor : public Reactor {
 public:
  ValidatedReactor(MscConfig cfg, Signer signer, const SignatureScheme &scheme, Context &ctx, std::string input);

  void start() override { msc_->start(); }
  void on_message(PartyId from, const MessagePtr &m) override;
  void on_timer(const TimerKey &key) override;
  bool done() const override { return finished_; }

  /** Decided payload; nullopt while running or when undecided. */
  const std::optional<std::string> &decision() const { return decision_; }
  bool undecided() const { return finished_ && !decision_; }
  const MscReactor &msc() const { return *msc_; }

 private:
  void settle();

  Context &ctx_;
  std::unique_ptr<MscReactor> msc_;
  bool finished_ = false;
  std::optional<std::string> decision_;
};

}  // namespace prefixcons

#endif
