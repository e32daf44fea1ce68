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

#include "prefixcons/derived.h"

#include <gtest/gtest.h>

#include "prefixcons/scenario.h"
#include "prefixcons/suites.h"

namespace prefixcons {
namespace {

PrefixVector V(std::string_view s) { return PrefixVector::of_symbols(s); }
GradedOutput G(const char *v, int g) { return v ? GradedOutput{Value(v), g} : GradedOutput{std::nullopt, 0}; }

TEST(GradedMappingTest, FromPc) {
  EXPECT_EQ(graded_from_pc(V(""), V("")), G(nullptr, 0));
  EXPECT_EQ(graded_from_pc(V(""), V("x")), G("x", 1));
  EXPECT_EQ(graded_from_pc(V("x"), V("x")), G("x", 2));
  EXPECT_THROW(graded_from_pc(V("xy"), V("xy")), PreconditionError);
  EXPECT_THROW(graded_from_pc(V(""), V("xy")), PreconditionError);
}

TEST(GradedMappingTest, ToPc) {
  std::vector<GradedOutput> g{G("a", 2), G("b", 2), G("c", 1), G(nullptr, 0)};
  EXPECT_EQ(pc_from_graded(g), std::make_pair(V("ab"), V("abc")));
  std::vector<GradedOutput> all2{G("a", 2), G("b", 2)};
  EXPECT_EQ(pc_from_graded(all2), std::make_pair(V("ab"), V("ab")));
  std::vector<GradedOutput> first0{G(nullptr, 0), G("b", 2)};
  EXPECT_EQ(pc_from_graded(first0), std::make_pair(V(""), V("")));
  std::vector<GradedOutput> dip{G("a", 1), G("b", 2)};
  EXPECT_EQ(pc_from_graded(dip), std::make_pair(V(""), V("ab")));
}

// Straight-line restatement of the reassembly rule.
std::pair<PrefixVector, PrefixVector> reassemble_oracle(const std::vector<GradedOutput> &g) {
  PrefixVector low, high;
  bool low_open = true;
  for (const auto &o : g) {
    if (o.grade < 1) break;
    high.push_back(*o.value);
    if (low_open && o.grade == 2)
      low.push_back(*o.value);
    else
      low_open = false;
  }
  return {low, high};
}

TEST(GradedMappingTest, ToPcMatchesOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; trial++) {
    std::vector<GradedOutput> g;
    size_t len = rng() % 6;
    for (size_t i = 0; i < len; i++) {
      int grade = static_cast<int>(rng() % 3);
      g.push_back(grade ? GradedOutput{Value(std::string(1, static_cast<char>('a' + rng() % 3))), grade}
                        : GradedOutput{});
    }
    EXPECT_EQ(pc_from_graded(g), reassemble_oracle(g)) << "trial " << trial;
  }
}

// L parallel graded instances, reassembled, satisfy every Consistent PC property.
TEST(GradedReductionTest, ReassembledOutputsAreConsistentPc) {
  SuiteOptions opt;
  opt.protocol = Protocol::kGraded;
  opt.capacity = 4;
  for (uint64_t i = 0; i < 200; i++) {
    Scenario s = suite_scenario(opt, i);
    s.checks = false;
    s.materialize();
    run_scenario(s, [&](const Simulation &sim) {
      std::vector<PrefixVector> inputs, lows, highs;
      for (auto p : sim.honest()) {
        const auto &g = dynamic_cast<const GradedReactor &>(*sim.reactor(p));
        ASSERT_TRUE(g.result()) << "run " << i << " party " << p.index;
        lows.push_back(g.result()->first);
        highs.push_back(g.result()->second);
        inputs.push_back(s.inputs[p.index]);
      }
      auto base = mcp(inputs);
      for (size_t a = 0; a < lows.size(); a++) {
        EXPECT_TRUE(is_prefix(base, lows[a])) << "validity, run " << i;
        for (size_t b = 0; b < highs.size(); b++) EXPECT_TRUE(is_prefix(lows[a], highs[b])) << "upper bound, run " << i;
        for (size_t b = 0; b < highs.size(); b++)
          EXPECT_TRUE(consistent(highs[a], highs[b])) << "consistency, run " << i;
      }
    });
  }
}

TEST(GradedRunTest, OutputsAfterThreeDelays) {
  Scenario s;
  s.protocol = Protocol::kGraded;
  auto r = run_scenario(s);
  for (const auto &v : r.violations.items) ADD_FAILURE() << v;
  for (uint32_t p = 0; p < 4; p++) EXPECT_EQ(r.metrics.first(p, OutputKind::kHigh), Time(3));
}

TEST(BinaryTest, UnanimousOneDecidesOne) {
  Scenario s;
  s.protocol = Protocol::kBinary;
  s.capacity = 1;
  s.inputs.assign(4, V("1"));
  run_scenario(s, [](const Simulation &sim) {
    for (auto p : sim.honest()) EXPECT_EQ(dynamic_cast<const BinaryReactor &>(*sim.reactor(p)).decision(), true);
  });
}

TEST(BinaryTest, MixedBitsAgreeUnderAdversaries) {
  SuiteOptions opt;
  opt.protocol = Protocol::kBinary;
  opt.runs = 30;
  auto res = run_suite(opt);
  for (const auto &[prop, count] : res.violations) ADD_FAILURE() << prop << ": " << count << " " << res.first_violation;
}

TEST(ValidatedTest, FaultFreeDecidesFirstRankedInput) {
  Scenario s;
  s.protocol = Protocol::kValidated;
  s.validity = "ok:";
  s.rank = {PartyId(2), PartyId(0), PartyId(1), PartyId(3)};
  run_scenario(s, [&](const Simulation &sim) {
    for (auto p : sim.honest()) {
      const auto &v = dynamic_cast<const ValidatedReactor &>(*sim.reactor(p));
      ASSERT_TRUE(v.decision());
      EXPECT_EQ(*v.decision(), s.payload_of(PartyId(2), 1));
    }
  });
}

TEST(ValidatedTest, InvalidFirstRankedInputIsSkipped) {
  Scenario s;
  s.protocol = Protocol::kValidated;
  s.validity = "ok:";
  s.payloads = {"bad", "ok:1", "ok:2", "ok:3"};
  run_scenario(s, [&](const Simulation &sim) {
    for (auto p : sim.honest()) EXPECT_EQ(dynamic_cast<const ValidatedReactor &>(*sim.reactor(p)).decision(), "ok:1");
  });
}

}  // namespace
}  // namespace prefixcons
