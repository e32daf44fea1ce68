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

#include "prefixcons/codec.h"

#include <gtest/gtest.h>

#include <random>

#include "oracles.h"
#include "prefixcons/compact.h"
#include "prefixcons/pc_verify.h"

namespace prefixcons {
namespace {

PrefixVector V(std::string_view s) { return PrefixVector::of_symbols(s); }

PcConfig config(uint32_t n, uint32_t f, uint32_t L, Codec codec) {
  PcConfig c;
  c.n = n;
  c.f = f;
  c.capacity = L;
  c.codec = codec;
  c.instance = InstanceId{1, 0, 1, 0};
  return c;
}

PrefixVector digests(size_t len, char seed) {
  PrefixVector v;
  for (size_t i = 0; i < len; i++) v.push_back(Value(std::string(32, static_cast<char>(seed + i))));
  return v;
}

TEST(CodecTest, VoteRoundTripIsByteExact) {
  auto scheme = make_mac_scheme(4, 1);
  for (Codec codec : {Codec::kPlain, Codec::kCompact}) {
    auto cfg = config(4, 1, 4, codec);
    auto vote = make_vote(cfg, scheme->signer(PartyId(2)), 1, V("abc"), {});
    auto bytes = encode_vote(*vote);
    auto back = decode_vote(bytes);
    EXPECT_EQ(back->value, vote->value);
    EXPECT_EQ(back->sigs, vote->sigs);
    EXPECT_EQ(back->voter, vote->voter);
    EXPECT_EQ(encode_vote(*back), bytes);
  }
}

TEST(CodecTest, MessagesRoundTrip) {
  std::vector<Body> bodies = {
      SlotProposal{3, "payload"},
      FetchRequest{FetchKind::kPayload, hash_object("x")},
      FetchResponse{FetchKind::kPayload, nullptr, "body"},
      NewCommit{2, V("ab"), QcRef(PlainQcPtr(std::make_shared<PlainQc>()))},
  };
  for (const auto &b : bodies) {
    Message m{InstanceId{5, 3, 2, 0}, b};
    auto bytes = encode_message(m);
    auto back = decode_message(bytes);
    EXPECT_EQ(back->instance, m.instance);
    EXPECT_EQ(message_kind(*back), message_kind(m));
    EXPECT_EQ(encode_message(*back), bytes);
  }
}

TEST(CodecTest, TruncatedInputNamesField) {
  auto scheme = make_mac_scheme(4, 1);
  auto vote = make_vote(config(4, 1, 4, Codec::kPlain), scheme->signer(PartyId(0)), 1, V("ab"), {});
  auto bytes = encode_vote(*vote);
  for (size_t cut = 0; cut < bytes.size(); cut++)
    EXPECT_THROW(decode_vote(std::string_view(bytes).substr(0, cut)), DecodeError) << cut;
  EXPECT_THROW(decode_vote(bytes + "x"), DecodeError);
}

TEST(CodecTest, CompactVoteSizeMatchesLayout) {
  auto scheme = make_mac_scheme(4, 1);
  const size_t kappa = scheme->signature_size();
  for (uint32_t L : {4u, 8u, 16u}) {
    auto cfg = config(4, 1, L, Codec::kCompact);
    auto vote = make_vote(cfg, scheme->signer(PartyId(1)), 1, digests(L, 'a'), {});
    size_t size = encode_message(Message{cfg.instance, vote}).size();
    size_t payload = 32 * L + kappa * (L + 1);
    EXPECT_GE(size, payload);
    EXPECT_LE(size, payload + 16 + 2 * (L + 1)) << "L=" << L;
  }
}

// Signed round-1/2/3 votes for both codecs over the same values.
struct Ladder {
  PcConfig plain, compact;
  std::vector<VotePtr> p1, c1;
};

Ladder ladder(const SignatureScheme &scheme, uint32_t n, uint32_t f, uint32_t L, const VectorSet &values) {
  Ladder l{config(n, f, L, Codec::kPlain), config(n, f, L, Codec::kCompact), {}, {}};
  for (uint32_t i = 0; i < values.size(); i++) {
    l.p1.push_back(make_vote(l.plain, scheme.signer(PartyId(i)), 1, values[i], {}));
    l.c1.push_back(make_vote(l.compact, scheme.signer(PartyId(i)), 1, values[i], {}));
  }
  return l;
}

std::vector<uint32_t> pick(std::mt19937_64 &rng, uint32_t n, uint32_t k) {
  std::vector<uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0u);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(k);
  return idx;
}

// Claim: a compact certificate certifies exactly what the plain certificate
// over the same signed votes certifies, at every round.
TEST(CompactProperty, CertifiesSameValuesAsPlain) {
  std::mt19937_64 rng(7);
  int qc3_checked = 0;
  for (int trial = 0; trial < 500; trial++) {
    uint32_t f = 1 + trial % 2, n = 3 * f + 1, L = 3 + trial % 3;
    auto scheme = make_mac_scheme(n, trial);
    auto values = trial % 2 ? oracle::stemmed_set(rng, n, L, 2) : oracle::random_set(rng, n, L, 2);
    auto l = ladder(*scheme, n, f, L, values);
    QcVerifier pv(*scheme), cv(*scheme);

    std::vector<VotePtr> p2, c2;
    for (uint32_t voter = 0; voter < n; voter++) {
      std::vector<VotePtr> ps, cs;
      for (auto i : pick(rng, n, n - f)) {
        ps.push_back(l.p1[i]);
        cs.push_back(l.c1[i]);
      }
      auto pq = std::make_shared<PlainQc>(PlainQc{ps});
      auto cq = build_compact_qc1(l.compact, cs);
      auto pc = pv.certify(l.plain, 1, pq);
      auto cc = cv.certify(l.compact, 1, cq);
      ASSERT_TRUE(pc && cc) << "trial " << trial;
      ASSERT_EQ(pc->first, cc->first) << "trial " << trial;
      auto x = pc->first;
      p2.push_back(make_vote(l.plain, scheme->signer(PartyId(voter)), 2, x, {QcRef(PlainQcPtr(pq))}));
      c2.push_back(make_vote(l.compact, scheme->signer(PartyId(voter)), 2, x, {QcRef(cq)}));
    }

    std::vector<VotePtr> p3, c3;
    for (uint32_t voter = 0; voter < n; voter++) {
      std::vector<VotePtr> ps, cs;
      for (auto i : pick(rng, n, n - f)) {
        ps.push_back(p2[i]);
        cs.push_back(c2[i]);
      }
      auto pq = std::make_shared<PlainQc>(PlainQc{ps});
      auto cq = build_compact_qc2(l.compact, cs);
      auto pc = pv.certify(l.plain, 2, pq);
      auto cc = cv.certify(l.compact, 2, cq);
      ASSERT_TRUE(pc && cc) << "trial " << trial;
      ASSERT_EQ(pc->first, cc->first) << "trial " << trial;
      p3.push_back(make_vote(l.plain, scheme->signer(PartyId(voter)), 3, pc->first, {QcRef(PlainQcPtr(pq))}));
      c3.push_back(make_vote(l.compact, scheme->signer(PartyId(voter)), 3, pc->first, {QcRef(cq)}));
    }

    std::vector<VotePtr> ps, cs;
    for (auto i : pick(rng, n, n - f)) {
      ps.push_back(p3[i]);
      cs.push_back(c3[i]);
    }
    auto pc = pv.certify(l.plain, 3, PlainQcPtr(std::make_shared<PlainQc>(PlainQc{ps})));
    auto cc = cv.certify(l.compact, 3, build_compact_qc3(l.compact, cs));
    ASSERT_TRUE(pc && cc) << "trial " << trial;
    EXPECT_EQ(*pc, *cc) << "trial " << trial;
    qc3_checked++;
  }
  EXPECT_EQ(qc3_checked, 500);
}

// Adversarial multisets: equivocating voters, empty and full-length votes.
TEST(CompactProperty, AdversarialQc1MultisetsMatchPlain) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; trial++) {
    uint32_t f = 1 + trial % 2, n = 3 * f + 1, L = 4;
    auto scheme = make_mac_scheme(n, 100 + trial);
    auto cfgp = config(n, f, L, Codec::kPlain), cfgc = config(n, f, L, Codec::kCompact);
    QcVerifier pv(*scheme), cv(*scheme);
    std::vector<VotePtr> ps, cs;
    for (auto i : pick(rng, n, n - f)) {
      PrefixVector v;
      switch (rng() % 4) {
        case 0: break;  // empty vote
        case 1: v = V("abab"); break;
        default: v = oracle::random_set(rng, 1, L, 2)[0];
      }
      ps.push_back(make_vote(cfgp, scheme->signer(PartyId(i)), 1, v, {}));
      cs.push_back(make_vote(cfgc, scheme->signer(PartyId(i)), 1, v, {}));
    }
    auto pc = pv.certify(cfgp, 1, PlainQcPtr(std::make_shared<PlainQc>(PlainQc{ps})));
    auto cc = cv.certify(cfgc, 1, build_compact_qc1(cfgc, cs));
    ASSERT_TRUE(pc && cc);
    EXPECT_EQ(pc->first, cc->first) << "trial " << trial;
  }
}

class CompactNegative : public ::testing::Test {
 protected:
  void SetUp() override {
    scheme_ = make_mac_scheme(4, 3);
    cfg_ = config(4, 1, 4, Codec::kCompact);
    VectorSet values{V("abc"), V("abd"), V("ab"), V("a")};
    for (uint32_t i = 0; i < 3; i++) votes_.push_back(make_vote(cfg_, scheme_->signer(PartyId(i)), 1, values[i], {}));
    qc_ = build_compact_qc1(cfg_, votes_);
  }

  bool ok(const CompactQc1 &qc) { return static_cast<bool>(verify_compact_qc1(cfg_, *scheme_, qc)); }

  std::unique_ptr<SignatureScheme> scheme_;
  PcConfig cfg_;
  std::vector<VotePtr> votes_;
  CompactQc1Ptr qc_;
};

TEST_F(CompactNegative, ValidQcCertifiesCommonPrefix) {
  auto r = verify_compact_qc1(cfg_, *scheme_, *qc_);
  ASSERT_TRUE(r) << r.reason;
  EXPECT_EQ(*r.value, V("ab"));
}

TEST_F(CompactNegative, FlippedBlobByteRejected) {
  for (size_t i = 0; i < qc_->blob.size(); i += 7) {
    auto bad = *qc_;
    bad.blob[i] = static_cast<char>(bad.blob[i] ^ 0x40);
    EXPECT_FALSE(ok(bad)) << "byte " << i;
  }
}

TEST_F(CompactNegative, AlteredValueOrSignersRejected) {
  auto longer = *qc_;
  longer.x = V("abc");
  EXPECT_FALSE(ok(longer));
  auto swapped = *qc_;
  std::swap(swapped.signers[0], swapped.signers[1]);
  EXPECT_FALSE(ok(swapped));
  auto dup = *qc_;
  dup.signers[1] = dup.signers[0];
  EXPECT_FALSE(ok(dup));
  auto short_quorum = *qc_;
  short_quorum.signers.pop_back();
  short_quorum.reps.pop_back();
  EXPECT_FALSE(ok(short_quorum));
}

TEST_F(CompactNegative, FakeDivergenceRejected) {
  // Claiming a truncated vote diverges where it actually agrees with x.
  auto bad = *qc_;
  bad.reps[0] = TruncatedVote{1, Value("b")};
  EXPECT_FALSE(ok(bad));
  auto other = *qc_;
  other.reps[0].next = Value("z");
  EXPECT_FALSE(ok(other));
}

TEST(CompactQc2Test, IdenticalShortValuesCannotBeTruncated) {
  auto scheme = make_mac_scheme(4, 9);
  auto cfg = config(4, 1, 4, Codec::kCompact);
  auto qc1_for = [&](const PrefixVector &v) {
    std::vector<VotePtr> votes;
    for (uint32_t i = 0; i < 3; i++) votes.push_back(make_vote(cfg, scheme->signer(PartyId(i)), 1, v, {}));
    return build_compact_qc1(cfg, votes);
  };
  auto qc1 = qc1_for(V("abc"));
  std::vector<VotePtr> votes2;
  for (uint32_t i = 0; i < 3; i++)
    votes2.push_back(make_vote(cfg, scheme->signer(PartyId(i)), 2, V("abc"), {QcRef(qc1)}));
  auto qc2 = build_compact_qc2(cfg, votes2);
  ASSERT_TRUE(qc2->full);
  EXPECT_EQ(verify_compact_qc2(cfg, *scheme, *qc2).value, V("abc"));

  // Same signers, a QC1 for the shorter value, and their length-3 prefix signatures.
  auto forged = *qc2;
  forged.x_p = V("ab");
  forged.full = qc1_for(V("ab"));
  EXPECT_FALSE(verify_compact_qc2(cfg, *scheme, forged));
}

TEST(CompactCodecTest, QcRoundTrip) {
  auto scheme = make_mac_scheme(4, 5);
  auto cfg = config(4, 1, 4, Codec::kCompact);
  std::vector<VotePtr> votes;
  for (uint32_t i = 0; i < 3; i++) votes.push_back(make_vote(cfg, scheme->signer(PartyId(i)), 1, V("ab"), {}));
  QcRef qc = build_compact_qc1(cfg, votes);
  auto bytes = encode_qc(qc);
  auto back = decode_qc(bytes);
  EXPECT_EQ(encode_qc(back), bytes);
  QcVerifier v(*scheme);
  EXPECT_EQ(v.certify(cfg, 1, back)->first, V("ab"));
}

}  // namespace
}  // namespace prefixcons
