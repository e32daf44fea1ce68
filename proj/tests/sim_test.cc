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

#include "prefixcons/scenario.h"

namespace prefixcons {
namespace {

Scenario base(Protocol p, uint32_t n, uint32_t f) {
  Scenario s;
  s.protocol = p;
  s.n = n;
  s.f = f;
  s.capacity = 4;
  return s;
}

void expect_clean(const RunReport &r) {
  EXPECT_TRUE(r.completed);
  for (const auto &v : r.violations.items) ADD_FAILURE() << v;
}

TEST(SimTest, ThreeRoundFaultFreeOutputsAtThree) {
  for (auto [n, f] : {std::pair{4u, 1u}, std::pair{7u, 2u}}) {
    auto r = run_scenario(base(Protocol::kPc3, n, f));
    expect_clean(r);
    for (uint32_t p = 0; p < n; p++) {
      EXPECT_EQ(r.metrics.first(p, OutputKind::kLow), Time(3));
      EXPECT_EQ(r.metrics.first(p, OutputKind::kHigh), Time(3));
    }
    EXPECT_EQ(r.metrics.messages, 3ull * n * (n - 1));
  }
}

TEST(SimTest, OptimisticOutputsOptAtTwo) {
  auto r = run_scenario(base(Protocol::kPcOpt, 4, 1));
  expect_clean(r);
  for (uint32_t p = 0; p < 4; p++) {
    EXPECT_EQ(r.metrics.first(p, OutputKind::kOpt), Time(2));
    EXPECT_LE(*r.metrics.first(p, OutputKind::kHigh), Time(4));
    EXPECT_LE(*r.metrics.first(p, OutputKind::kLow), Time(4));
  }
}

TEST(SimTest, FastOutputsAtTwo) {
  auto r = run_scenario(base(Protocol::kPc5f1, 6, 1));
  expect_clean(r);
  for (uint32_t p = 0; p < 6; p++) EXPECT_EQ(r.metrics.first(p, OutputKind::kHigh), Time(2));
}

TEST(SimTest, StrongPcHighAtSeven) {
  auto r = run_scenario(base(Protocol::kSpc, 4, 1));
  expect_clean(r);
  for (uint32_t p = 0; p < 4; p++) EXPECT_EQ(r.metrics.first(p, OutputKind::kHigh), Time(7));
}

TEST(SimTest, MultiSlotCommitAtFourSlotTwoAtEight) {
  auto s = base(Protocol::kMsc, 4, 1);
  s.slots = 3;
  auto r = run_scenario(s);
  expect_clean(r);
  for (uint32_t p = 0; p < 4; p++) {
    EXPECT_EQ(r.metrics.first(p, OutputKind::kSlotStart, 2), Time(8));
    size_t commits = 0;
    for (const auto &o : r.metrics.outputs.at(p))
      if (o.event.kind == OutputKind::kCommit && o.event.slot == 1) {
        EXPECT_EQ(o.at, Time(4));
        commits++;
      }
    EXPECT_EQ(commits, 4u);
  }
}

// No Byzantine parties, only pre-GST delays: two honest QC1s certify
// conflicting x values and the early-high rule extends each of them. Upper
// Bound still holds.
TEST(SimTest, OptimisticHighsMayConflict) {
  auto s = base(Protocol::kPcOpt, 7, 2);
  s.generator = "random";
  s.alphabet = 3;
  s.seed = 5959;
  s.delay.gst = 10;
  s.delay.fuzz = true;
  s.delay.jitter = true;
  AdversarySpec delayer;
  delayer.type = "delayer";
  s.adversaries = {delayer};
  auto r = run_scenario(s);
  expect_clean(r);
  std::vector<PrefixVector> highs, lows;
  for (const auto &[p, outs] : r.metrics.outputs)
    for (const auto &o : outs) {
      if (o.event.kind == OutputKind::kHigh) highs.push_back(o.event.value);
      if (o.event.kind == OutputKind::kLow) lows.push_back(o.event.value);
    }
  bool conflict = false;
  for (const auto &a : highs)
    for (const auto &b : highs) conflict |= !consistent(a, b);
  EXPECT_TRUE(conflict);
  for (const auto &l : lows)
    for (const auto &h : highs) EXPECT_TRUE(is_prefix(l, h));
}

TEST(SimTest, SameSeedSameTranscript) {
  auto s = base(Protocol::kSpc, 4, 1);
  s.delay.gst = 6;
  s.delay.fuzz = true;
  s.generator = "random";
  s.seed = 11;
  auto a = run_scenario(s);
  auto b = run_scenario(s);
  EXPECT_EQ(a.transcript_hash, b.transcript_hash);
  s.seed = 12;
  auto c = run_scenario(s);
  EXPECT_NE(a.transcript_hash, c.transcript_hash);
}

}  // namespace
}  // namespace prefixcons
