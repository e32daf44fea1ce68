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

#include "prefixcons/msc.h"

#include <gtest/gtest.h>

#include "prefixcons/scenario.h"
#include "prefixcons/suites.h"

namespace prefixcons {
namespace {

Rank R(std::initializer_list<uint32_t> ids) {
  Rank r;
  for (auto i : ids) r.emplace_back(i);
  return r;
}

PrefixVector of_length(size_t k) {
  PrefixVector v;
  for (size_t i = 0; i < k; i++) v.push_back(Value("d" + std::to_string(i)));
  return v;
}

TEST(UpdateRankTest, MovesFirstExcludedPartyToEnd) {
  auto r = R({3, 0, 2, 1});
  EXPECT_EQ(update_rank(r, of_length(4)), r);
  EXPECT_EQ(update_rank(r, of_length(2)), R({3, 0, 1, 2}));
  EXPECT_EQ(update_rank(r, of_length(0)), R({0, 2, 1, 3}));
  EXPECT_EQ(update_rank(r, of_length(3)), r);  // last party moved to the end is a no-op
  EXPECT_THROW(update_rank(r, of_length(5)), PreconditionError);
}

Scenario msc(uint32_t n, uint32_t f, uint64_t slots) {
  Scenario s;
  s.protocol = Protocol::kMsc;
  s.n = n;
  s.f = f;
  s.slots = slots;
  return s;
}

const MscReactor &reactor(const Simulation &sim, uint32_t p) {
  return dynamic_cast<const MscReactor &>(*sim.reactor(PartyId(p)));
}

// A censor at rank position 3 reveals its proposal to one honest party only.
TEST(MscTest, CensorIsDemotedAfterOneShortSlot) {
  auto s = msc(4, 1, 6);
  AdversarySpec censor;
  censor.type = "censor";
  censor.parties = {2};
  censor.reveal_to = {0};
  s.adversaries = {censor};
  auto r = run_scenario(s, [](const Simulation &sim) {
    for (auto p : sim.honest()) {
      const auto &m = reactor(sim, p.index);
      ASSERT_TRUE(m.high(1) && *m.high(1));
      EXPECT_EQ((*m.high(1))->size(), 2u);
      EXPECT_EQ(*m.rank(2), R({0, 1, 3, 2}));
      for (uint64_t slot = 2; slot <= 6; slot++) EXPECT_EQ(*m.rank(slot), R({0, 1, 3, 2}));
    }
  });
  ASSERT_TRUE(r.audit);
  EXPECT_EQ(r.audit->censored, std::vector<uint64_t>{1});
  for (const auto &d : r.audit->demotions) {
    EXPECT_EQ(d.party, PartyId(2));
    EXPECT_TRUE(d.byzantine);
  }
  EXPECT_TRUE(r.audit->censored_after_last_demotion.empty());
  for (const auto &v : r.violations.items) ADD_FAILURE() << v;
}

TEST(MscTest, TwoStaggeredCensorsCensorAtMostTwoSlots) {
  auto s = msc(7, 2, 12);
  AdversarySpec c1, c2;
  c1.type = c2.type = "censor";
  c1.parties = {1};
  c1.reveal_to = {0, 2};
  c2.parties = {4};
  c2.reveal_to = {0, 2};
  s.adversaries = {c1, c2};
  auto r = run_scenario(s);
  ASSERT_TRUE(r.audit);
  EXPECT_LE(r.audit->censored.size(), 2u);
  for (const auto &d : r.audit->demotions) EXPECT_TRUE(d.byzantine) << "slot " << d.slot;
  EXPECT_TRUE(r.audit->censored_after_last_demotion.empty());
  for (const auto &v : r.violations.items) ADD_FAILURE() << v;
}

TEST(MscTest, HonestRankingsAgreeUnderFuzz) {
  SuiteOptions opt;
  opt.protocol = Protocol::kMsc;
  opt.runs = 20;
  opt.slots = 4;
  opt.strategies = {"censor", "equivocate_proposals", "withhold_body", "delayer"};
  auto res = run_suite(opt);
  for (const auto &[prop, count] : res.violations) ADD_FAILURE() << prop << ": " << count << " " << res.first_violation;
  EXPECT_EQ(res.incomplete, 0u);
}

TEST(MscTest, SuspensionRoundRobinStillCommits) {
  for (auto [n, f] : {std::pair{4u, 1u}, std::pair{7u, 2u}}) {
    auto s = msc(n, f, 4);
    AdversarySpec sus;
    sus.type = "suspender";
    s.adversaries = {sus};
    if (f > 1) {
      AdversarySpec silent;
      silent.type = "silent";
      silent.parties = {n - 1};
      s.adversaries.push_back(silent);
    }
    auto r = run_scenario(s);
    EXPECT_TRUE(r.completed) << "n=" << n;
    EXPECT_GT(r.metrics.postponed, 0u);
    for (const auto &v : r.violations.items) ADD_FAILURE() << v;
  }
}

// The bound argument fails when a Byzantine party earlier in the ranking
// splits both its proposal and its vote-1: the high then ends just before an
// honest party, and the update rule demotes that honest party every slot.
TEST(MscTest, SplitProposalAndVoteEquivocatorCensorsHonestParty) {
  auto s = msc(4, 1, 10);
  AdversarySpec eq;
  eq.type = "equivocate";
  eq.parties = {2};
  s.adversaries = {eq};
  auto r = run_scenario(s);
  ASSERT_TRUE(r.audit);
  EXPECT_EQ(r.audit->censored.size(), 10u);
  for (const auto &d : r.audit->demotions) EXPECT_FALSE(d.byzantine);
  EXPECT_EQ(r.violations.first_property(), "censorship");
  // Safety is unaffected.
  for (const auto &v : r.violations.items) EXPECT_EQ(v.rfind("censorship", 0), 0u) << v;

  for (const char *split : {"proposals", "votes"}) {
    s.adversaries[0].split = split;
    auto half = run_scenario(s);
    EXPECT_LE(half.audit->censored.size(), 1u) << split;
    for (const auto &v : half.violations.items) ADD_FAILURE() << split << ": " << v;
  }
}

}  // namespace
}  // namespace prefixcons
