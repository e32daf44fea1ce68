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

#include "prefixcons/compact.h"

#include <algorithm>

namespace prefixcons {

namespace {

std::vector<VotePtr> sorted_by_voter(const PcConfig &cfg, std::span<const VotePtr> votes, uint8_t round) {
  if (votes.size() != cfg.quorum())
    throw PreconditionError("compact QC needs " + std::to_string(cfg.quorum()) + " votes, got " +
                            std::to_string(votes.size()));
  std::vector<VotePtr> out(votes.begin(), votes.end());
  std::sort(out.begin(), out.end(), [](const VotePtr &a, const VotePtr &b) { return a->voter < b->voter; });
  for (size_t i = 0; i < out.size(); i++) {
    if (out[i]->round != round) throw PreconditionError("compact QC built from a vote of the wrong round");
    if (i && out[i]->voter == out[i - 1]->voter) throw PreconditionError("compact QC built from duplicate voters");
  }
  return out;
}

const std::string &prefix_sig(const PcConfig &cfg, const Vote &v, size_t len) {
  if (v.sigs.size() != cfg.capacity + 1) throw PreconditionError("vote lacks prefix signatures");
  return v.sigs.at(len);
}

size_t first_mismatch(const PrefixVector &a, const PrefixVector &b) {
  size_t i = 0;
  while (i < a.size() && i < b.size() && a[i] == b[i]) i++;
  return i;
}

bool signers_ok(const PcConfig &cfg, const std::vector<PartyId> &signers) {
  if (signers.size() != cfg.quorum()) return false;
  for (size_t i = 0; i < signers.size(); i++) {
    if (signers[i].index >= cfg.n) return false;
    if (i && !(signers[i - 1] < signers[i])) return false;
  }
  return true;
}

bool plain_vector_ok(const PcConfig &cfg, const PrefixVector &v) {
  return v.size() <= cfg.capacity && !v.contains_bot();
}

// A padded vector never has an application value after a BOT.
bool well_padded(const PrefixVector &v) {
  bool seen_bot = false;
  for (const auto &e : v) {
    if (seen_bot && !e.is_bot()) return false;
    seen_bot = seen_bot || e.is_bot();
  }
  return true;
}

PrefixVector extended(const PrefixVector &v, const Value &next) {
  PrefixVector out = v;
  out.push_back(next);
  return out;
}

}  // namespace

std::vector<std::string> sign_prefixes(const PcConfig &cfg, const Signer &signer, uint8_t round,
                                       const PrefixVector &value) {
  PrefixVector padded = value.padded(cfg.capacity);
  std::vector<std::string> sigs;
  sigs.reserve(cfg.capacity + 1);
  for (size_t k = 0; k <= cfg.capacity; k++)
    sigs.push_back(signer.sign(cfg.tag(round), vector_message(padded.prefix(k))).bytes);
  return sigs;
}

std::optional<PrefixVector> reconstruct_truncated(const PcConfig &cfg, const PrefixVector &x,
                                                  const TruncatedVote &rep) {
  PrefixVector px = x.padded(cfg.capacity);
  if (rep.length == cfg.capacity) {
    if (!rep.next.is_bot()) return std::nullopt;
    return px;
  }
  if (rep.length > cfg.capacity) return std::nullopt;
  // The stored element must be the first point of divergence from x.
  if (rep.next == px[rep.length]) return std::nullopt;
  PrefixVector v = extended(px.prefix(rep.length), rep.next);
  if (!well_padded(v)) return std::nullopt;
  return v;
}

CompactQc1Ptr build_compact_qc1(const PcConfig &cfg, std::span<const VotePtr> votes) {
  auto sorted = sorted_by_voter(cfg, votes, 1);
  std::vector<PrefixVector> values;
  for (const auto &v : sorted) values.push_back(v->value);
  auto qc = std::make_shared<CompactQc1>();
  qc->x = longest_supported_prefix(values, cfg.qc1_support());
  PrefixVector px = qc->x.padded(cfg.capacity);
  for (const auto &v : sorted) {
    qc->signers.push_back(v->voter);
    if (v->value == qc->x) {
      qc->reps.push_back({cfg.capacity, Value::bot()});
      qc->blob += prefix_sig(cfg, *v, cfg.capacity);
      continue;
    }
    PrefixVector pv = v->value.padded(cfg.capacity);
    auto l = static_cast<uint32_t>(first_mismatch(pv, px));
    qc->reps.push_back({l, pv[l]});
    qc->blob += prefix_sig(cfg, *v, l + 1);
  }
  return qc;
}

CompactQc2Ptr build_compact_qc2(const PcConfig &cfg, std::span<const VotePtr> votes) {
  auto sorted = sorted_by_voter(cfg, votes, 2);
  std::vector<PrefixVector> values;
  for (const auto &v : sorted) values.push_back(v->value);
  auto qc = std::make_shared<CompactQc2>();
  qc->x_p = mcp(values);
  size_t len = qc->x_p.size();
  bool identical = std::all_of(values.begin(), values.end(), [&](const PrefixVector &v) { return v == qc->x_p; });
  // Identical short values sign through the BOT that ends them.
  size_t signed_len = identical ? std::min<size_t>(len + 1, cfg.capacity) : len;
  for (const auto &v : sorted) {
    qc->signers.push_back(v->voter);
    qc->blob += prefix_sig(cfg, *v, signed_len);
  }
  auto qc1_of = [](const Vote &v) {
    if (v.justify.size() != 1 || !std::holds_alternative<CompactQc1Ptr>(v.justify[0]))
      throw PreconditionError("compact vote-2 without a compact QC1");
    return std::get<CompactQc1Ptr>(v.justify[0]);
  };
  if (identical) {
    qc->full = qc1_of(*sorted.front());
    return qc;
  }
  const Vote *first = nullptr;
  Value first_next;
  for (const auto &v : sorted) {
    Value next = v->value.padded(cfg.capacity)[len];
    if (!first) {
      first = v.get();
      first_next = next;
    } else if (next != first_next) {
      qc->witnesses.push_back({first->voter, first_next, prefix_sig(cfg, *first, len + 1), qc1_of(*first)});
      qc->witnesses.push_back({v->voter, next, prefix_sig(cfg, *v, len + 1), qc1_of(*v)});
      return qc;
    }
  }
  throw PreconditionError("vote-2 values do not diverge after their common prefix");
}

CompactQc3Ptr build_compact_qc3(const PcConfig &cfg, std::span<const VotePtr> votes) {
  auto sorted = sorted_by_voter(cfg, votes, 3);
  std::vector<PrefixVector> values;
  for (const auto &v : sorted) values.push_back(v->value);
  if (!pairwise_consistent(values)) throw ProtocolViolation("vote-3 values conflict; quorum intersection broken");
  auto qc2_of = [](const Vote &v) {
    if (v.justify.size() != 1 || !std::holds_alternative<CompactQc2Ptr>(v.justify[0]))
      throw PreconditionError("compact vote-3 without a compact QC2");
    return std::get<CompactQc2Ptr>(v.justify[0]);
  };
  auto qc = std::make_shared<CompactQc3>();
  const Vote *shortest = sorted.front().get();
  const Vote *longest = sorted.front().get();
  for (const auto &v : sorted) {
    if (v->value.size() < shortest->value.size()) shortest = v.get();
    if (v->value.size() > longest->value.size()) longest = v.get();
    qc->signers.push_back(v->voter);
    qc->lengths.push_back(static_cast<uint32_t>(v->value.size()));
    if (v->sigs.size() != 1) throw PreconditionError("compact vote-3 must carry one signature");
    qc->blob += v->sigs.front();
  }
  qc->shortest = shortest->value;
  qc->shortest_proof = qc2_of(*shortest);
  qc->longest = longest->value;
  qc->longest_proof = qc2_of(*longest);
  return qc;
}

Checked<PrefixVector> verify_compact_qc1(const PcConfig &cfg, const SignatureScheme &scheme, const CompactQc1 &qc) {
  using R = Checked<PrefixVector>;
  if (!plain_vector_ok(cfg, qc.x)) return R::fail("qc1: malformed x");
  if (!signers_ok(cfg, qc.signers)) return R::fail("qc1: signer set is not a quorum");
  if (qc.reps.size() != qc.signers.size()) return R::fail("qc1: representation count mismatch");
  std::vector<PrefixVector> truncated;
  std::vector<std::string> messages;
  for (const auto &rep : qc.reps) {
    auto v = reconstruct_truncated(cfg, qc.x, rep);
    if (!v) return R::fail("qc1: truncated vote does not reconstruct");
    messages.push_back(vector_message(*v));
    truncated.push_back(std::move(*v));
  }
  if (!verify_multi(scheme, cfg.tag(1), qc.signers, messages, qc.blob)) return R::fail("qc1: aggregate signature");
  if (longest_supported_prefix(truncated, cfg.qc1_support()).unpadded() != qc.x)
    return R::fail("qc1: x is not the longest supported prefix");
  return R::ok(qc.x);
}

Checked<PrefixVector> verify_compact_qc2(const PcConfig &cfg, const SignatureScheme &scheme, const CompactQc2 &qc,
                                         const CompactQc1Oracle &qc1) {
  using R = Checked<PrefixVector>;
  auto certify1 = [&](const CompactQc1Ptr &p) -> std::optional<PrefixVector> {
    if (!p) return std::nullopt;
    if (qc1) return qc1(p);
    return verify_compact_qc1(cfg, scheme, *p).value;
  };
  if (!plain_vector_ok(cfg, qc.x_p)) return R::fail("qc2: malformed x_p");
  if (!signers_ok(cfg, qc.signers)) return R::fail("qc2: signer set is not a quorum");
  size_t len = qc.x_p.size();
  size_t signed_len = qc.full ? std::min<size_t>(len + 1, cfg.capacity) : len;
  std::vector<std::string> messages(qc.signers.size(), vector_message(qc.x_p.padded(cfg.capacity).prefix(signed_len)));
  if (!verify_multi(scheme, cfg.tag(2), qc.signers, messages, qc.blob)) return R::fail("qc2: multi-signature");
  if (qc.full) {
    if (!qc.witnesses.empty()) return R::fail("qc2: both proof forms present");
    if (certify1(qc.full) != qc.x_p) return R::fail("qc2: QC1 does not certify x_p");
    return R::ok(qc.x_p);
  }
  if (qc.witnesses.size() != 2) return R::fail("qc2: expected two divergence witnesses");
  if (len >= cfg.capacity) return R::fail("qc2: divergence proof for a full-length x_p");
  const auto &a = qc.witnesses[0];
  const auto &b = qc.witnesses[1];
  if (a.party == b.party) return R::fail("qc2: witnesses from the same party");
  if (a.next == b.next) return R::fail("qc2: witnesses do not diverge");
  for (const auto &w : qc.witnesses) {
    if (!std::binary_search(qc.signers.begin(), qc.signers.end(), w.party)) return R::fail("qc2: witness not a signer");
    PrefixVector ext = extended(qc.x_p, w.next);
    if (!scheme.verify(w.party, cfg.tag(2), vector_message(ext), Signature{w.party, w.sig}))
      return R::fail("qc2: witness signature");
    auto xj = certify1(w.qc1);
    if (!xj) return R::fail("qc2: witness QC1 invalid");
    if (xj->padded(cfg.capacity).prefix(len + 1) != ext) return R::fail("qc2: witness QC1 does not certify its prefix");
  }
  return R::ok(qc.x_p);
}

Checked<std::pair<PrefixVector, PrefixVector>> verify_compact_qc3(const PcConfig &cfg, const SignatureScheme &scheme,
                                                                  const CompactQc3 &qc, const CompactQc2Oracle &qc2) {
  using R = Checked<std::pair<PrefixVector, PrefixVector>>;
  auto certify2 = [&](const CompactQc2Ptr &p) -> std::optional<PrefixVector> {
    if (!p) return std::nullopt;
    if (qc2) return qc2(p);
    return verify_compact_qc2(cfg, scheme, *p).value;
  };
  if (!plain_vector_ok(cfg, qc.longest)) return R::fail("qc3: malformed longest");
  if (!signers_ok(cfg, qc.signers)) return R::fail("qc3: signer set is not a quorum");
  if (qc.lengths.size() != qc.signers.size()) return R::fail("qc3: length count mismatch");
  std::vector<std::string> messages;
  for (uint32_t len : qc.lengths) {
    if (len > qc.longest.size()) return R::fail("qc3: encoded length exceeds longest");
    messages.push_back(vector_message(qc.longest.prefix(len)));
  }
  if (!verify_multi(scheme, cfg.tag(3), qc.signers, messages, qc.blob)) return R::fail("qc3: aggregate signature");
  auto [lo, hi] = std::minmax_element(qc.lengths.begin(), qc.lengths.end());
  if (*lo != qc.shortest.size() || qc.longest.prefix(*lo) != qc.shortest)
    return R::fail("qc3: claimed shortest is not minimal");
  if (*hi != qc.longest.size()) return R::fail("qc3: claimed longest is not maximal");
  if (certify2(qc.shortest_proof) != qc.shortest) return R::fail("qc3: shortest not certified");
  if (certify2(qc.longest_proof) != qc.longest) return R::fail("qc3: longest not certified");
  return R::ok({qc.shortest, qc.longest});
}

}  // namespace prefixcons
