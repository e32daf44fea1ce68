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

#include "prefixcons/spc.h"

#include <gtest/gtest.h>

#include "prefixcons/scenario.h"

namespace prefixcons {
namespace {

Rank R(std::initializer_list<uint32_t> ids) {
  Rank r;
  for (auto i : ids) r.emplace_back(i);
  return r;
}

TEST(RankTest, ShiftAndViewRank) {
  EXPECT_EQ(shift(R({0, 1, 2, 3})), R({1, 2, 3, 0}));
  EXPECT_EQ(shift(Rank{}), Rank{});
  auto init = R({2, 0, 3, 1});
  EXPECT_EQ(view_rank(init, 2), init);
  EXPECT_EQ(view_rank(init, 3), R({0, 3, 1, 2}));
  EXPECT_EQ(view_rank(init, 6), init);  // n shifts later
}

class NullContext : public Context {
 public:
  PartyId self() const override { return PartyId(0); }
  void broadcast(MessagePtr m) override { sent.push_back(m); }
  void send(PartyId, MessagePtr m) override { sent.push_back(m); }
  void set_timer(const TimerKey &, const Time &) override {}
  void output(const OutputEvent &) override {}
  std::vector<MessagePtr> sent;
};

// Verifiable highs of views 1 and 2, taken from a fault-free run.
struct Recorded {
  VerifiableValue high1, high2;
};

const Recorded &recorded() {
  static Recorded r = [] {
    Scenario s;
    s.protocol = Protocol::kSpc;
    Recorded out;
    run_scenario(s, [&](const Simulation &sim) {
      const auto &e = dynamic_cast<const SpcReactor &>(*sim.reactor(PartyId(1))).engine();
      out.high1 = *e.vpc_engine(1)->outputs().high;
      out.high2 = *e.vpc_engine(2)->outputs().high;
    });
    return out;
  }();
  return r;
}

class CertTest : public ::testing::Test {
 protected:
  CertTest() : scheme_(make_mac_scheme(4, 1)), verifier_(*scheme_) {
    cfg_.instance = InstanceId{static_cast<uint8_t>(ProtocolId::kSpc), 0, 0, 0};
    engine_ = std::make_unique<SpcEngine>(cfg_, scheme_->signer(PartyId(0)), verifier_, ctx_, nullptr);
  }

  Certificate direct(uint64_t prev, uint64_t parent, const VerifiableValue &vv) {
    Certificate c;
    c.kind = CertKind::kDirect;
    c.prev_view = prev;
    c.parent_view = parent;
    c.value = vv.value;
    c.proof = vv.proof;
    return c;
  }

  Certificate indirect(uint64_t view, std::vector<std::pair<uint32_t, uint64_t>> skips) {
    Certificate c;
    c.kind = CertKind::kIndirect;
    c.prev_view = view;
    c.parent_view = 1;
    c.value = recorded().high1.value;
    c.proof = recorded().high1.proof;
    std::vector<AggregateEntry> entries;
    for (auto [party, high_view] : skips) {
      auto msg = skip_statement(view, high_view);
      entries.push_back({PartyId(party), msg, scheme_->sign(PartyId(party), skip_tag(cfg_.instance), msg)});
    }
    c.skips = aggregate(*scheme_, skip_tag(cfg_.instance), entries);
    return c;
  }

  SpcConfig cfg_;
  std::unique_ptr<SignatureScheme> scheme_;
  QcVerifier verifier_;
  NullContext ctx_;
  std::unique_ptr<SpcEngine> engine_;
};

TEST_F(CertTest, DirectCertificate) {
  const auto &h1 = recorded().high1;
  EXPECT_EQ(engine_->valid_cert(2, direct(1, 1, h1)), SpcEngine::Check::kValid);
  EXPECT_EQ(engine_->valid_cert(3, direct(1, 1, h1)), SpcEngine::Check::kInvalid);  // wrong previous view
  EXPECT_EQ(engine_->valid_cert(3, direct(2, 1, h1)), SpcEngine::Check::kInvalid);  // direct must name prev view
  auto altered = h1;
  altered.value.push_back(Value("zz"));
  EXPECT_EQ(engine_->valid_cert(2, direct(1, 1, altered)), SpcEngine::Check::kInvalid);
  EXPECT_EQ(engine_->valid_cert(1, direct(0, 0, h1)), SpcEngine::Check::kInvalid);
}

TEST_F(CertTest, DirectCertificateWaitsForParentPreimage) {
  const auto &h2 = recorded().high2;
  Digest missing;
  EXPECT_EQ(engine_->valid_cert(3, direct(2, 2, h2), &missing), SpcEngine::Check::kPending);
  EXPECT_EQ(missing, engine_->parent(h2.value).missing);
  EXPECT_FALSE(engine_->parent(h2.value).ready);
}

TEST_F(CertTest, IndirectCertificate) {
  EXPECT_EQ(engine_->valid_cert(3, indirect(2, {{0, 1}, {2, 1}})), SpcEngine::Check::kValid);
  EXPECT_EQ(engine_->valid_cert(3, indirect(2, {{0, 1}})), SpcEngine::Check::kInvalid);  // f skips only
  EXPECT_EQ(engine_->valid_cert(3, indirect(2, {{0, 1}, {1, 1}, {2, 1}})), SpcEngine::Check::kInvalid);
  // The carried parent must be the highest view reported by the skips.
  EXPECT_EQ(engine_->valid_cert(4, indirect(3, {{0, 1}, {2, 2}})), SpcEngine::Check::kInvalid);
  // Skips of the wrong view.
  EXPECT_EQ(engine_->valid_cert(4, indirect(2, {{0, 1}, {2, 1}})), SpcEngine::Check::kInvalid);
  auto forged = indirect(2, {{0, 1}, {2, 1}});
  forged.skips.signers[1] = PartyId(3);
  EXPECT_EQ(engine_->valid_cert(3, forged), SpcEngine::Check::kInvalid);
}

TEST_F(CertTest, ParentLookup) {
  PrefixVector empty_votes;
  for (int i = 0; i < 4; i++) empty_votes.push_back(hbot_value());
  auto p = engine_->parent(empty_votes);
  EXPECT_TRUE(p.ready);
  EXPECT_EQ(p.view, 0u);
  EXPECT_EQ(engine_->parent(PrefixVector{Value("not a digest")}).view, 0u);

  auto proposal = std::make_shared<ProposalObject>();
  proposal->view = 2;
  proposal->cert = std::make_shared<Certificate>(direct(1, 1, recorded().high1));
  PrefixVector v{hbot_value(), proposal->digest().to_value()};
  EXPECT_FALSE(engine_->parent(v).ready);
  engine_->learn(proposal);
  auto q = engine_->parent(v);
  ASSERT_TRUE(q.ready);
  EXPECT_EQ(q.view, 1u);
  EXPECT_EQ(q.value, recorded().high1.value);
}

Scenario spc(uint32_t n, uint32_t f) {
  Scenario s;
  s.protocol = Protocol::kSpc;
  s.n = n;
  s.f = f;
  return s;
}

TEST(SpcRunTest, FaultFreeCommitsInViewTwo) {
  auto s = spc(4, 1);
  run_scenario(s, [](const Simulation &sim) {
    for (auto p : sim.honest()) {
      const auto &e = dynamic_cast<const SpcReactor &>(*sim.reactor(p)).engine();
      ASSERT_FALSE(e.commits().empty());
      EXPECT_EQ(e.commits().front().view, 2u);
      EXPECT_TRUE(e.commits().front().parentful);
      EXPECT_EQ(*e.high(), *e.low());
    }
  });
}

// View-2 new-view messages are held until GST, so every view-2 input is all
// H(BOT), view 2 is empty, and view 3 is entered by an indirect certificate.
TEST(SpcRunTest, HeldNewViewsProduceIndirectCertificate) {
  auto s = spc(4, 1);
  s.delay.gst = 30;
  AdversarySpec hold;
  hold.type = "delayer";
  hold.kinds = {"new-view"};
  hold.view = 2;
  s.adversaries = {hold};
  auto r = run_scenario(s, [](const Simulation &sim) {
    for (auto p : sim.honest()) {
      const auto &e = dynamic_cast<const SpcReactor &>(*sim.reactor(p)).engine();
      bool saw = false;
      for (auto [prev, parent] : e.indirect_certs()) saw |= prev == 2 && parent == 1;
      EXPECT_TRUE(saw) << "party " << p.index;
      bool empty2 = false;
      for (const auto &c : e.commits()) empty2 |= c.view == 2 && !c.parentful;
      EXPECT_TRUE(empty2) << "party " << p.index;
      EXPECT_TRUE(e.high().has_value());
    }
  });
  EXPECT_TRUE(r.completed);
  for (const auto &v : r.violations.items) ADD_FAILURE() << v;
}

TEST(SpcRunTest, SilentFirstRankedPartyLatencyBound) {
  for (auto [n, f] : {std::pair{4u, 1u}, std::pair{7u, 2u}}) {
    auto s = spc(n, f);
    s.delay.delta_cap = 2;
    AdversarySpec silent;
    silent.type = "silent";
    silent.parties = {0};  // first in the view-2 ranking
    s.adversaries = {silent};
    auto r = run_scenario(s);
    EXPECT_TRUE(r.completed);
    for (const auto &v : r.violations.items) ADD_FAILURE() << v;
    Time bound = Time(2 * (f + 1)) * s.delay.delta_cap + Time(3 * (f + 2)) * s.delay.delta;
    for (auto p : r.metrics.outputs) {
      if (p.first == 0) continue;
      auto t = r.metrics.first(p.first, OutputKind::kHigh);
      ASSERT_TRUE(t.has_value());
      EXPECT_LE(*t, bound) << "n=" << n << " party " << p.first;
    }
  }
}

}  // namespace
}  // namespace prefixcons
