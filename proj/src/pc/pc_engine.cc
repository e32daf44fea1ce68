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

#include "prefixcons/pc_engine.h"

#include <cassert>

#include "prefixcons/compact.h"

namespace prefixcons {

PcEngine::PcEngine(PcConfig cfg, Signer signer, QcVerifier &verifier, PcSink &sink)
    : cfg_(std::move(cfg)), signer_(signer), verifier_(verifier), sink_(sink) {
  cfg_.validate();
}

void PcEngine::input(PrefixVector v) {
  if (has_input_) throw PreconditionError("PC instance already has an input");
  if (v.size() > cfg_.capacity || v.contains_bot()) throw PreconditionError("PC input violates capacity or uses BOT");
  has_input_ = true;
  broadcast(1, std::move(v), {});
}

bool PcEngine::done() const {
  if (faulted()) return true;
  bool base = outputs_.low && outputs_.high;
  return cfg_.variant == PcVariant::kOptimistic ? base && outputs_.opt : base;
}

bool PcEngine::receive(PartyId from, const VotePtr &vote) {
  if (!vote || vote->voter != from || vote->round < 1 || vote->round > cfg_.last_round() || faulted()) {
    dropped_++;
    return false;
  }
  uint8_t r = vote->round;
  // Votes arriving after the round's quorum formed, or repeated senders, are discarded.
  if (qcs_[r] || voters_[r].count(from)) return false;
  if (!verifier_.verify_vote(cfg_, vote)) {
    dropped_++;
    return false;
  }
  voters_[r].insert(from);
  votes_[r].push_back(vote);
  if (votes_[r].size() == cfg_.quorum()) form_quorum(r);
  return true;
}

void PcEngine::broadcast(uint8_t round, PrefixVector value, std::vector<QcRef> justify) {
  broadcasts_++;
  sink_.pc_broadcast(cfg_, make_vote(cfg_, signer_, round, std::move(value), std::move(justify)));
}

QcRef PcEngine::build_qc(uint8_t round) const {
  const auto &votes = votes_[round];
  if (cfg_.codec == Codec::kPlain) {
    auto qc = std::make_shared<PlainQc>();
    qc->votes = votes;
    return qc;
  }
  switch (round) {
    case 1: return build_compact_qc1(cfg_, votes);
    case 2: return build_compact_qc2(cfg_, votes);
    default: return build_compact_qc3(cfg_, votes);
  }
}

void PcEngine::form_quorum(uint8_t round) {
  try {
    QcRef qc = build_qc(round);
    auto c = verifier_.certify(cfg_, round, qc);
    if (!c) throw ProtocolViolation("own round-" + std::to_string(round) + " QC does not certify");
    qcs_[round] = qc;
    certified_[round] = *c;
  } catch (const std::exception &e) {
    fault_ = e.what();
    return;
  }
  act_on_quorum(round);
}

void PcEngine::act_on_quorum(uint8_t round) {
  const QcRef &qc = *qcs_[round];
  const Certified &c = *certified_[round];
  switch (cfg_.variant) {
    case PcVariant::kThreeRound:
      if (round < 3) {
        broadcast(round + 1, c.first, {qc});
      } else {
        emit(PcOutputKind::kLow, c.first, qc);
        emit(PcOutputKind::kHigh, *c.second, qc);
      }
      break;

    case PcVariant::kFast:
      if (round == 1) {
        broadcast(2, c.first, {qc});
      } else {
        emit(PcOutputKind::kLow, c.first, qc);
        emit(PcOutputKind::kHigh, *c.second, qc);
      }
      break;

    case PcVariant::kOptimistic:
      if (round == 1) {
        broadcast(2, *c.second, {qc});
        if (qc2_deferred_) {
          qc2_deferred_ = false;
          act_on_quorum(2);
        }
      } else if (round == 2) {
        // z depends on this party's own x, so wait for its QC1.
        if (!qcs_[1]) {
          qc2_deferred_ = true;
          return;
        }
        emit(PcOutputKind::kOpt, c.first, qc);
        if (c.first.size() == cfg_.capacity) {
          emit(PcOutputKind::kLow, c.first, qc);
          emit(PcOutputKind::kHigh, c.first, qc);
        }
        broadcast(3, optimistic_z(certified_[1]->first, *c.second), {*qcs_[1], qc});
      } else if (round == 3) {
        if (c.second) emit(PcOutputKind::kHigh, *c.second, qc);
        broadcast(4, c.first, {qc});
      } else {
        emit(PcOutputKind::kLow, c.first, qc);
        emit(PcOutputKind::kHigh, *c.second, qc);
      }
      break;
  }
}

void PcEngine::emit(PcOutputKind kind, const PrefixVector &value, const QcRef &proof) {
  std::optional<VerifiableValue> *slot = nullptr;
  switch (kind) {
    case PcOutputKind::kOpt: slot = &outputs_.opt; break;
    case PcOutputKind::kLow: slot = &outputs_.low; break;
    case PcOutputKind::kHigh: slot = &outputs_.high; break;
  }
  // Later rules are suppressed once a stage has produced the output.
  if (slot->has_value()) return;
  *slot = VerifiableValue{value, proof};
  sink_.pc_output(cfg_, kind, **slot);
}

}  // namespace prefixcons
