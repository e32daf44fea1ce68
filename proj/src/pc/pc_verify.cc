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

#include "prefixcons/pc_verify.h"

#include <set>

#include "prefixcons/compact.h"

namespace prefixcons {

namespace {

PrefixVector mce_or_fault(std::span<const PrefixVector> values, uint8_t round) {
  auto e = mce(values);
  if (!e) throw ProtocolViolation("round-" + std::to_string(round) + " quorum holds conflicting values");
  return *e;
}

bool value_ok(const PcConfig &cfg, const PrefixVector &v) { return v.size() <= cfg.capacity && !v.contains_bot(); }

}  // namespace

Certified certify_values(const PcConfig &cfg, uint8_t round, std::span<const PrefixVector> values) {
  if (values.empty()) throw PreconditionError("certification over an empty vote set");
  Certified c;
  switch (round) {
    case 1:
      c.first = longest_supported_prefix(values, cfg.qc1_support());
      if (cfg.variant == PcVariant::kOptimistic) c.second = mcp(values);
      return c;
    case 2:
      c.first = mcp(values);
      if (cfg.variant != PcVariant::kThreeRound) c.second = mce_or_fault(values, round);
      return c;
    case 3:
      c.first = mcp(values);
      if (cfg.variant == PcVariant::kOptimistic)
        c.second = mce(values);
      else
        c.second = mce_or_fault(values, round);
      return c;
    case 4:
      c.first = mcp(values);
      c.second = mce_or_fault(values, round);
      return c;
    default: throw PreconditionError("no certification rule for round " + std::to_string(round));
  }
}

PrefixVector optimistic_z(const PrefixVector &x, const PrefixVector &y_e) { return is_prefix(y_e, x) ? x : y_e; }

VotePtr make_vote(const PcConfig &cfg, const Signer &signer, uint8_t round, PrefixVector value,
                  std::vector<QcRef> justify) {
  auto v = std::make_shared<Vote>();
  v->round = round;
  v->voter = signer.id();
  if (cfg.codec == Codec::kCompact && round <= 2)
    v->sigs = sign_prefixes(cfg, signer, round, value);
  else
    v->sigs.push_back(signer.sign(cfg.tag(round), vector_message(value)).bytes);
  v->value = std::move(value);
  v->justify = std::move(justify);
  return v;
}

bool QcVerifier::verify_vote(const PcConfig &cfg, const VotePtr &vote) {
  if (!vote) return false;
  auto k = key(cfg, vote.get(), vote->round);
  if (auto it = votes_.find(k); it != votes_.end()) return it->second.first;
  bool ok = verify_vote_uncached(cfg, *vote);
  votes_.emplace(k, std::make_pair(ok, vote));
  return ok;
}

bool QcVerifier::verify_vote_uncached(const PcConfig &cfg, const Vote &vote) {
  if (vote.voter.index >= cfg.n || vote.round < 1 || vote.round > cfg.last_round()) return false;
  if (!value_ok(cfg, vote.value)) return false;

  if (cfg.codec == Codec::kCompact && vote.round <= 2) {
    if (vote.sigs.size() != cfg.capacity + 1) return false;
    PrefixVector padded = vote.value.padded(cfg.capacity);
    for (size_t k = 0; k <= cfg.capacity; k++)
      if (!scheme_->verify(vote.voter, cfg.tag(vote.round), vector_message(padded.prefix(k)),
                           Signature{vote.voter, vote.sigs[k]}))
        return false;
  } else {
    if (vote.sigs.size() != 1) return false;
    if (!scheme_->verify(vote.voter, cfg.tag(vote.round), vector_message(vote.value),
                         Signature{vote.voter, vote.sigs[0]}))
      return false;
  }

  const auto &j = vote.justify;
  if (vote.round == 1) return j.empty();
  if (cfg.variant == PcVariant::kOptimistic && vote.round == 3) {
    if (j.size() != 2) return false;
    auto c1 = certify(cfg, 1, j[0]);
    auto c2 = certify(cfg, 2, j[1]);
    if (!c1 || !c2 || !c2->second) return false;
    return optimistic_z(c1->first, *c2->second) == vote.value;
  }
  if (j.size() != 1) return false;
  auto c = certify(cfg, vote.round - 1, j[0]);
  if (!c) return false;
  if (cfg.variant == PcVariant::kOptimistic && vote.round == 2) return c->second == vote.value;
  return c->first == vote.value;
}

std::optional<Certified> QcVerifier::certify(const PcConfig &cfg, uint8_t round, const QcRef &qc) {
  const void *addr = qc_address(qc);
  if (!addr) return std::nullopt;
  auto k = key(cfg, addr, round);
  if (auto it = qcs_.find(k); it != qcs_.end()) return it->second.first;
  auto c = certify_uncached(cfg, round, qc);
  qcs_.emplace(k, std::make_pair(c, qc));
  return c;
}

std::optional<Certified> QcVerifier::certify_uncached(const PcConfig &cfg, uint8_t round, const QcRef &qc) {
  if (auto *plain = std::get_if<PlainQcPtr>(&qc)) {
    if (cfg.codec != Codec::kPlain) return std::nullopt;
    return certify_plain(cfg, round, **plain);
  }
  if (cfg.codec != Codec::kCompact) return std::nullopt;
  auto qc1 = [&](const CompactQc1Ptr &p) -> std::optional<PrefixVector> {
    auto c = certify(cfg, 1, QcRef(p));
    return c ? std::optional(c->first) : std::nullopt;
  };
  auto qc2 = [&](const CompactQc2Ptr &p) -> std::optional<PrefixVector> {
    auto c = certify(cfg, 2, QcRef(p));
    return c ? std::optional(c->first) : std::nullopt;
  };
  if (auto *c1 = std::get_if<CompactQc1Ptr>(&qc); c1 && round == 1) {
    auto r = verify_compact_qc1(cfg, *scheme_, **c1);
    if (!r) return std::nullopt;
    return Certified{*r.value, std::nullopt};
  }
  if (auto *c2 = std::get_if<CompactQc2Ptr>(&qc); c2 && round == 2) {
    auto r = verify_compact_qc2(cfg, *scheme_, **c2, qc1);
    if (!r) return std::nullopt;
    return Certified{*r.value, std::nullopt};
  }
  if (auto *c3 = std::get_if<CompactQc3Ptr>(&qc); c3 && round == 3) {
    auto r = verify_compact_qc3(cfg, *scheme_, **c3, qc2);
    if (!r) return std::nullopt;
    return Certified{r.value->first, r.value->second};
  }
  return std::nullopt;
}

std::optional<Certified> QcVerifier::certify_plain(const PcConfig &cfg, uint8_t round, const PlainQc &qc) {
  if (qc.votes.size() != cfg.quorum()) return std::nullopt;
  std::set<PartyId> voters;
  std::vector<PrefixVector> values;
  for (const auto &v : qc.votes) {
    if (!v || v->round != round || !voters.insert(v->voter).second) return std::nullopt;
    if (!verify_vote(cfg, v)) return std::nullopt;
    values.push_back(v->value);
  }
  try {
    return certify_values(cfg, round, values);
  } catch (const ProtocolViolation &) {
    return std::nullopt;
  }
}

uint8_t QcVerifier::proof_stage(const PcConfig &cfg, const QcRef &proof) const {
  if (auto *plain = std::get_if<PlainQcPtr>(&proof); plain && *plain && cfg.codec == Codec::kPlain)
    return (*plain)->round();
  if (auto *c3 = std::get_if<CompactQc3Ptr>(&proof); c3 && *c3 && cfg.codec == Codec::kCompact) return 3;
  return 0;
}

bool QcVerifier::predicate_low(const PcConfig &cfg, const PrefixVector &v, const QcRef &proof) {
  uint8_t stage = proof_stage(cfg, proof);
  if (stage == 0) return false;
  switch (cfg.variant) {
    case PcVariant::kThreeRound:
    case PcVariant::kFast: {
      if (stage != cfg.last_round()) return false;
      auto c = certify(cfg, stage, proof);
      return c && c->first == v;
    }
    case PcVariant::kOptimistic: {
      if (stage != 2 && stage != 4) return false;
      auto c = certify(cfg, stage, proof);
      if (!c || c->first != v) return false;
      return stage == 4 || c->first.size() == cfg.capacity;
    }
  }
  return false;
}

bool QcVerifier::predicate_high(const PcConfig &cfg, const PrefixVector &v, const QcRef &proof) {
  uint8_t stage = proof_stage(cfg, proof);
  if (stage == 0) return false;
  switch (cfg.variant) {
    case PcVariant::kThreeRound:
    case PcVariant::kFast: {
      if (stage != cfg.last_round()) return false;
      auto c = certify(cfg, stage, proof);
      return c && c->second == v;
    }
    case PcVariant::kOptimistic: {
      if (stage < 2 || stage > 4) return false;
      auto c = certify(cfg, stage, proof);
      if (!c) return false;
      if (stage == 2) return c->first.size() == cfg.capacity && c->first == v;
      return c->second == v;
    }
  }
  return false;
}

bool predicate_low(const PcConfig &cfg, const SignatureScheme &scheme, const PrefixVector &v, const QcRef &proof) {
  QcVerifier verifier(scheme);
  return verifier.predicate_low(cfg, v, proof);
}

bool predicate_high(const PcConfig &cfg, const SignatureScheme &scheme, const PrefixVector &v, const QcRef &proof) {
  QcVerifier verifier(scheme);
  return verifier.predicate_high(cfg, v, proof);
}

}  // namespace prefixcons
