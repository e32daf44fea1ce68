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

#include "prefixcons/crypto.h"

#include <gtest/gtest.h>

#include <set>

#include "prefixcons/bytes.h"

namespace prefixcons {
namespace {

class SchemeConformance : public ::testing::TestWithParam<std::string> {
 protected:
  void SetUp() override { scheme_ = make_scheme(GetParam(), 4, 99); }

  DomainTag tag(MsgKind k, uint64_t view = 1) const { return DomainTag{k, InstanceId{1, 0, view, 0}}; }

  std::unique_ptr<SignatureScheme> scheme_;
};

TEST_P(SchemeConformance, SignVerifyRoundTrip) {
  auto sig = scheme_->sign(PartyId(0), tag(MsgKind::kVote1), "m");
  EXPECT_EQ(sig.signer, PartyId(0));
  EXPECT_EQ(sig.bytes.size(), scheme_->signature_size());
  EXPECT_TRUE(scheme_->verify(PartyId(0), tag(MsgKind::kVote1), "m", sig));
}

TEST_P(SchemeConformance, DomainSeparation) {
  auto sig = scheme_->sign(PartyId(0), tag(MsgKind::kVote1), "m");
  EXPECT_FALSE(scheme_->verify(PartyId(0), tag(MsgKind::kVote2), "m", sig));
  EXPECT_FALSE(scheme_->verify(PartyId(0), tag(MsgKind::kVote1, 2), "m", sig));
}

TEST_P(SchemeConformance, AlteredMessageOrSignerRejected) {
  auto sig = scheme_->sign(PartyId(1), tag(MsgKind::kVote1), "m");
  EXPECT_FALSE(scheme_->verify(PartyId(1), tag(MsgKind::kVote1), "n", sig));
  EXPECT_FALSE(scheme_->verify(PartyId(2), tag(MsgKind::kVote1), "m", sig));
  sig.bytes[0] ^= 1;
  EXPECT_FALSE(scheme_->verify(PartyId(1), tag(MsgKind::kVote1), "m", sig));
}

TEST_P(SchemeConformance, UnknownPartyIsKeyError) {
  EXPECT_THROW(scheme_->sign(PartyId(4), tag(MsgKind::kVote1), "m"), KeyError);
  EXPECT_THROW(scheme_->signer(PartyId(9)), KeyError);
}

TEST_P(SchemeConformance, AggregateIdenticalMessages) {
  std::vector<AggregateEntry> entries;
  for (uint32_t i : {2u, 0u, 1u})
    entries.push_back({PartyId(i), "same", scheme_->sign(PartyId(i), tag(MsgKind::kVote2), "same")});
  auto agg = aggregate(*scheme_, tag(MsgKind::kVote2), entries);
  EXPECT_EQ(agg.signers, (std::vector<PartyId>{PartyId(0), PartyId(1), PartyId(2)}));
  EXPECT_EQ(agg.messages.common, "same");
  EXPECT_TRUE(agg.messages.suffixes.empty());
  EXPECT_EQ(agg.blob.size(), 3 * scheme_->signature_size());
  EXPECT_TRUE(verify_aggregate(*scheme_, tag(MsgKind::kVote2), agg));
}

TEST_P(SchemeConformance, AggregateSharedPrefixCompression) {
  std::vector<AggregateEntry> entries;
  std::vector<std::string> msgs{"xyz1", "xyz2", "xyz3"};
  for (uint32_t i = 0; i < 3; i++)
    entries.push_back({PartyId(i), msgs[i], scheme_->sign(PartyId(i), tag(MsgKind::kEmptyView), msgs[i])});
  auto agg = aggregate(*scheme_, tag(MsgKind::kEmptyView), entries);
  EXPECT_EQ(agg.messages.common, "xyz");
  EXPECT_EQ(agg.messages.suffixes, (std::vector<std::string>{"1", "2", "3"}));
  EXPECT_TRUE(verify_aggregate(*scheme_, tag(MsgKind::kEmptyView), agg));

  auto tampered = agg;
  tampered.messages.suffixes[1] = "9";
  EXPECT_FALSE(verify_aggregate(*scheme_, tag(MsgKind::kEmptyView), tampered));
  auto swapped = agg;
  swapped.signers[2] = PartyId(3);
  EXPECT_FALSE(verify_aggregate(*scheme_, tag(MsgKind::kEmptyView), swapped));
  EXPECT_FALSE(verify_aggregate(*scheme_, tag(MsgKind::kEmptyView, 2), agg));
}

TEST_P(SchemeConformance, AggregateRejectsInvalidInput) {
  std::vector<AggregateEntry> entries{{PartyId(0), "a", scheme_->sign(PartyId(0), tag(MsgKind::kVote1), "a")},
                                      {PartyId(1), "b", scheme_->sign(PartyId(1), tag(MsgKind::kVote1), "a")}};
  EXPECT_THROW(aggregate(*scheme_, tag(MsgKind::kVote1), entries), AggregationError);
  entries[1] = entries[0];
  EXPECT_THROW(aggregate(*scheme_, tag(MsgKind::kVote1), entries), AggregationError);
}

INSTANTIATE_TEST_SUITE_P(Backends, SchemeConformance, ::testing::Values("mac", "ed25519"));

TEST(HashTest, HbotIsDistinguishedAndDeterministic) {
  EXPECT_EQ(hbot(), hbot());
  EXPECT_EQ(hash_object("p"), hash_object("p"));
  std::set<Digest> seen{hbot()};
  for (int i = 0; i < 200; i++) EXPECT_TRUE(seen.insert(hash_object("proposal-" + std::to_string(i))).second);
  EXPECT_NE(hash_object(""), hbot());
}

TEST(HashTest, KeysDependOnSeed) {
  auto a = make_mac_scheme(2, 1);
  auto b = make_mac_scheme(2, 2);
  DomainTag t{MsgKind::kVote1, {}};
  EXPECT_NE(a->sign(PartyId(0), t, "m").bytes, b->sign(PartyId(0), t, "m").bytes);
  EXPECT_EQ(a->sign(PartyId(0), t, "m").bytes, make_mac_scheme(2, 1)->sign(PartyId(0), t, "m").bytes);
}

TEST(BytesTest, VarintAndHexRoundTrip) {
  ByteWriter w;
  for (uint64_t v : {0ull, 1ull, 127ull, 128ull, 300ull, 1ull << 40}) w.varint(v);
  ByteReader r(w.str());
  for (uint64_t v : {0ull, 1ull, 127ull, 128ull, 300ull, 1ull << 40}) EXPECT_EQ(r.varint("v"), v);
  EXPECT_TRUE(r.done());
  EXPECT_THROW(r.u8("tail"), DecodeError);
  EXPECT_EQ(from_hex(to_hex("\x01\xfe")), "\x01\xfe");
  EXPECT_THROW(from_hex("zz"), std::invalid_argument);
}

}  // namespace
}  // namespace prefixcons
