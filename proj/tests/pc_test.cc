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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.h"
#include "prefixcons/pc_engine.h"

namespace prefixcons {
namespace {

PrefixVector V(std::string_view s) { return PrefixVector::of_symbols(s); }

PcConfig config(uint32_t n, uint32_t f, uint32_t L, PcVariant variant, Codec codec = Codec::kPlain) {
  PcConfig c;
  c.n = n;
  c.f = f;
  c.capacity = L;
  c.variant = variant;
  c.codec = codec;
  c.instance = InstanceId{1, 0, 1, 0};
  return c;
}

TEST(CertifyTest, Qc1Rules) {
  VectorSet votes{V("ab"), V("ab"), V("ac")};
  EXPECT_EQ(qc1_certify(config(4, 1, 4, PcVariant::kThreeRound), votes), (Certified{V("ab"), std::nullopt}));
  EXPECT_EQ(qc1_certify(config(4, 1, 4, PcVariant::kOptimistic), votes), (Certified{V("ab"), V("a")}));
  VectorSet fast{V("ab"), V("ab"), V("ab"), V("ab"), V("ac")};
  EXPECT_EQ(qc1_certify(config(6, 1, 4, PcVariant::kFast), fast).first, V("ab"));
  // With support 4, three [a,c] votes would not be enough to lengthen x.
  VectorSet fast2{V("ac"), V("ac"), V("ac"), V("ab"), V("ab")};
  EXPECT_EQ(qc1_certify(config(6, 1, 4, PcVariant::kFast), fast2).first, V("a"));
}

TEST(CertifyTest, LaterRounds) {
  VectorSet xs{V("a"), V("ab"), V("ab")};
  EXPECT_EQ(qc2_certify(config(6, 1, 4, PcVariant::kFast), VectorSet{V("a"), V("ab"), V("ab"), V("a"), V("ab")}),
            (Certified{V("a"), V("ab")}));
  EXPECT_EQ(qc2_certify(config(4, 1, 4, PcVariant::kThreeRound), VectorSet{V("ab"), V("ab"), V("ab")}).first, V("ab"));
  EXPECT_EQ(qc3_certify(config(4, 1, 4, PcVariant::kThreeRound), xs), (Certified{V("a"), V("ab")}));
  auto opt = config(4, 1, 4, PcVariant::kOptimistic);
  EXPECT_EQ(qc3_certify(opt, VectorSet{V("ab"), V("abc"), V("ab")}), (Certified{V("ab"), V("abc")}));
  EXPECT_EQ(qc3_certify(opt, VectorSet{V("ab"), V("ac"), V("a")}), (Certified{V("a"), std::nullopt}));
  EXPECT_THROW(qc3_certify(config(4, 1, 4, PcVariant::kThreeRound), VectorSet{V("ab"), V("ac"), V("a")}),
               ProtocolViolation);
  EXPECT_EQ(optimistic_z(V("abc"), V("ab")), V("abc"));
  EXPECT_EQ(optimistic_z(V("a"), V("ab")), V("ab"));
}

// Lock-step network: every round, all queued votes are delivered to everyone.
class LockstepNet : public PcSink {
 public:
  LockstepNet(PcConfig cfg, const SignatureScheme &scheme) : cfg_(cfg) {
    for (uint32_t i = 0; i < cfg.n; i++) verifiers_.push_back(std::make_unique<QcVerifier>(scheme));
    for (uint32_t i = 0; i < cfg.n; i++)
      engines_.push_back(std::make_unique<PcEngine>(cfg, scheme.signer(PartyId(i)), *verifiers_[i], *this));
  }

  void pc_broadcast(const PcConfig &, const VotePtr &vote) override { pending_.push_back(vote); }
  void pc_output(const PcConfig &, PcOutputKind kind, const VerifiableValue &) override {
    output_rounds_[static_cast<int>(kind)].push_back(round_);
  }

  /** orders[i] lists senders in the order receiver i processes them within a round. */
  void set_orders(std::vector<std::vector<uint32_t>> orders) { orders_ = std::move(orders); }

  void run(const VectorSet &inputs, std::set<uint32_t> silent = {}) {
    silent_ = silent;
    for (uint32_t i = 0; i < cfg_.n; i++)
      if (!silent.count(i)) engines_[i]->input(inputs[i]);
    while (!pending_.empty()) {
      round_++;
      auto batch = std::move(pending_);
      pending_.clear();
      for (const auto &vote : batch)
        if (!silent_.count(vote->voter.index)) messages_ += cfg_.n - 1;
      for (uint32_t i = 0; i < cfg_.n; i++) {
        if (silent_.count(i)) continue;
        auto mine = batch;
        if (!orders_.empty()) {
          auto rank = [&](const VotePtr &v) {
            const auto &o = orders_[i];
            return std::find(o.begin(), o.end(), v->voter.index) - o.begin();
          };
          std::stable_sort(mine.begin(), mine.end(), [&](auto &a, auto &b) { return rank(a) < rank(b); });
        }
        for (const auto &vote : mine)
          if (!silent_.count(vote->voter.index)) engines_[i]->receive(vote->voter, vote);
      }
    }
  }

  PcEngine &engine(uint32_t i) { return *engines_[i]; }
  const std::vector<int> &rounds(PcOutputKind k) { return output_rounds_[static_cast<int>(k)]; }
  size_t messages() const { return messages_; }

 private:
  PcConfig cfg_;
  std::vector<std::unique_ptr<QcVerifier>> verifiers_;
  std::vector<std::unique_ptr<PcEngine>> engines_;
  std::vector<VotePtr> pending_;
  std::map<int, std::vector<int>> output_rounds_;
  std::set<uint32_t> silent_;
  std::vector<std::vector<uint32_t>> orders_;
  int round_ = 0;
  size_t messages_ = 0;
};

TEST(PcEngineTest, ThreeRoundFaultFree) {
  for (Codec codec : {Codec::kPlain, Codec::kCompact}) {
    auto scheme = make_mac_scheme(4, 1);
    auto cfg = config(4, 1, 4, PcVariant::kThreeRound, codec);
    LockstepNet net(cfg, *scheme);
    net.run({V("abcd"), V("abcd"), V("abce"), V("abxy")});
    for (uint32_t i = 0; i < 4; i++) {
      const auto &out = net.engine(i).outputs();
      ASSERT_TRUE(out.low && out.high) << codec_name(codec);
      EXPECT_TRUE(is_prefix(V("ab"), out.low->value));
      EXPECT_TRUE(is_prefix(out.low->value, out.high->value));
      EXPECT_EQ(net.engine(i).broadcasts(), 3u);
      EXPECT_TRUE(predicate_low(cfg, *scheme, out.low->value, out.low->proof));
      EXPECT_TRUE(predicate_high(cfg, *scheme, out.high->value, out.high->proof));
    }
    EXPECT_EQ(net.rounds(PcOutputKind::kLow), std::vector<int>(4, 3));
    EXPECT_EQ(net.messages(), 36u);
  }
}

TEST(PcEngineTest, OptimisticFaultFree) {
  auto scheme = make_mac_scheme(4, 1);
  auto cfg = config(4, 1, 3, PcVariant::kOptimistic);
  LockstepNet net(cfg, *scheme);
  net.run({V("abc"), V("abc"), V("abd"), V("abc")});
  EXPECT_EQ(net.rounds(PcOutputKind::kOpt), std::vector<int>(4, 2));
  for (uint32_t i = 0; i < 4; i++) {
    const auto &out = net.engine(i).outputs();
    ASSERT_TRUE(out.opt && out.low && out.high);
    EXPECT_EQ(out.opt->value, V("ab"));
    EXPECT_TRUE(is_prefix(out.opt->value, out.low->value));
    EXPECT_TRUE(predicate_low(cfg, *scheme, out.low->value, out.low->proof));
    EXPECT_TRUE(predicate_high(cfg, *scheme, out.high->value, out.high->proof));
  }
  for (int r : net.rounds(PcOutputKind::kLow)) EXPECT_LE(r, 4);
}

TEST(PcEngineTest, OptimisticFullLengthOutputsAtSecondQuorum) {
  auto scheme = make_mac_scheme(4, 1);
  auto cfg = config(4, 1, 3, PcVariant::kOptimistic);
  LockstepNet net(cfg, *scheme);
  net.run({V("abc"), V("abc"), V("abc"), V("abc")});
  EXPECT_EQ(net.rounds(PcOutputKind::kLow), std::vector<int>(4, 2));
  EXPECT_EQ(net.rounds(PcOutputKind::kHigh), std::vector<int>(4, 2));
  // Rounds 3 and 4 are still run.
  EXPECT_EQ(net.engine(0).broadcasts(), 4u);
}

TEST(PcEngineTest, FastOutputsAtSecondQuorum) {
  auto scheme = make_mac_scheme(6, 1);
  auto cfg = config(6, 1, 2, PcVariant::kFast);
  LockstepNet net(cfg, *scheme);
  net.run({V("ab"), V("ab"), V("ab"), V("ab"), V("ac"), V("ab")});
  EXPECT_EQ(net.rounds(PcOutputKind::kLow), std::vector<int>(6, 2));
  for (uint32_t i = 0; i < 6; i++) EXPECT_EQ(net.engine(i).outputs().low->value, V("ab"));
}

TEST(PcEngineTest, SilentPartyStillTerminates) {
  auto scheme = make_mac_scheme(4, 1);
  auto cfg = config(4, 1, 2, PcVariant::kThreeRound);
  LockstepNet net(cfg, *scheme);
  net.run({V("ab"), V("ab"), V("ab"), V("ab")}, {3});
  for (uint32_t i = 0; i < 3; i++) EXPECT_EQ(net.engine(i).outputs().low->value, V("ab"));
}

TEST(PredicateTest, SwapAndCorruptionRejected) {
  auto scheme = make_mac_scheme(4, 1);
  auto cfg = config(4, 1, 3, PcVariant::kThreeRound);
  LockstepNet net(cfg, *scheme);
  net.set_orders({{0, 1, 2, 3}, {0, 1, 3, 2}, {0, 1, 2, 3}, {2, 3, 0, 1}});
  net.run({V("abc"), V("abc"), V("abd"), V("abd")});
  const auto &out = net.engine(0).outputs();
  ASSERT_EQ(out.low->value, V("ab"));
  ASSERT_EQ(out.high->value, V("abc"));
  EXPECT_FALSE(predicate_low(cfg, *scheme, out.high->value, out.low->proof));
  EXPECT_FALSE(predicate_high(cfg, *scheme, out.low->value, out.high->proof));

  auto qc = std::get<PlainQcPtr>(out.low->proof);
  auto forged = std::make_shared<PlainQc>(*qc);
  auto vote = std::make_shared<Vote>(*forged->votes[0]);
  vote->sigs[0][0] ^= 1;
  forged->votes[0] = vote;
  EXPECT_FALSE(predicate_low(cfg, *scheme, out.low->value, QcRef(PlainQcPtr(forged))));

  auto other = cfg;
  other.instance.view = 2;
  EXPECT_FALSE(predicate_low(other, *scheme, out.low->value, out.low->proof));
}

TEST(PcEngineTest, DuplicateAndForeignVotesDropped) {
  auto scheme = make_mac_scheme(4, 1);
  auto cfg = config(4, 1, 2, PcVariant::kThreeRound);
  QcVerifier verifier(*scheme);
  struct Sink : PcSink {
    void pc_broadcast(const PcConfig &, const VotePtr &) override {}
    void pc_output(const PcConfig &, PcOutputKind, const VerifiableValue &) override {}
  } sink;
  PcEngine engine(cfg, scheme->signer(PartyId(0)), verifier, sink);
  auto v = make_vote(cfg, scheme->signer(PartyId(1)), 1, V("ab"), {});
  EXPECT_TRUE(engine.receive(PartyId(1), v));
  EXPECT_FALSE(engine.receive(PartyId(1), v));
  EXPECT_FALSE(engine.receive(PartyId(2), v));
  auto bad = make_vote(cfg, scheme->signer(PartyId(2)), 1, V("abc"), {});
  EXPECT_FALSE(engine.receive(PartyId(2), bad));
  EXPECT_EQ(engine.dropped(), 2u);
}

}  // namespace
}  // namespace prefixcons
